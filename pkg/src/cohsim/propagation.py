"""Free-space transport of second-order correlation spectra.

Phase-insensitive spectra propagate monochromatically (conjugate kernel at
omega0 + Omega on the first coordinate, kernel at omega0 + Omega on the
second); phase-sensitive spectra are bichromatic (omega0 -/+ Omega).  In the
far field both collapse to Fourier-transform dualities with distinct
validity conditions: omega0 a0 rho0 / 2cL << 1 (phase-insensitive) versus
the more stringent omega0 a0^2 / 2cL << 1 (phase-sensitive).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT
from .errors import DomainError, ShapeError, ValidityError, ValidityWarning
from .numerics import Grid2D, require_fresnel_sampling
from .source import GaussianCorrelation, SourceModel, mask_transform

__all__ = [
    "FarFieldCheck",
    "GriddedSpectrum",
    "huygens_kernel",
    "transfer_function",
    "propagate_spectrum",
    "vcz_phase_insensitive",
    "vcz_phase_sensitive",
]


# ---------------------------------------------------------------------------
# Kernels


def huygens_kernel(rho, L, omega):
    """Paraxial Green's function (omega / i 2 pi c L) e^{i omega (L + |rho|^2/2L)/c}."""
    if L <= 0:
        raise DomainError("propagation distance must be positive")
    if omega <= 0:
        raise DomainError("optical frequency must be positive")
    rho = np.asarray(rho, dtype=float)
    r2 = np.sum(rho * rho, axis=-1) if rho.shape[-1:] == (2,) else rho * rho
    amp = omega / (2.0 * np.pi * C_LIGHT * L)
    return amp * np.exp(1j * (omega * (L + r2 / (2.0 * L)) / C_LIGHT - np.pi / 2.0))


def huygens_kernel_1d(x, L, omega):
    """Per-axis factor of the paraxial kernel (sqrt of the 2-D prefactor)."""
    if L <= 0 or omega <= 0:
        raise DomainError("require L > 0 and omega > 0")
    x = np.asarray(x, dtype=float)
    amp = np.sqrt(omega / (2.0 * np.pi * C_LIGHT * L))
    return amp * np.exp(1j * (omega * (L + x * x / (2.0 * L)) / C_LIGHT - np.pi / 4.0))


def transfer_function(k2, L, omega):
    """Fresnel transfer function on the angular-frequency grid."""
    return np.exp(1j * (omega * L / C_LIGHT - C_LIGHT * L * k2 / (2.0 * omega)))


# ---------------------------------------------------------------------------
# Far-field validity


@dataclass(frozen=True)
class FarFieldCheck:
    """Dimensionless far-field ratios for both correlation kinds."""

    condition_n: float
    condition_p: float
    threshold: float = 0.1

    @classmethod
    def from_model(cls, model: SourceModel, L, threshold=0.1):
        a0 = model.mask.radius
        rho0 = model.spatial.rho0 if isinstance(model.spatial, GaussianCorrelation) else 0.0
        w0 = model.omega0
        return cls(
            condition_n=w0 * a0 * rho0 / (2.0 * C_LIGHT * L),
            condition_p=w0 * a0 ** 2 / (2.0 * C_LIGHT * L),
            threshold=threshold,
        )

    @property
    def ok_n(self):
        return self.condition_n <= self.threshold

    @property
    def ok_p(self):
        return self.condition_p <= self.threshold


def _enforce(value, threshold, strict, label):
    if value > threshold:
        msg = f"{label} far-field ratio {value:.3g} exceeds threshold {threshold:g}"
        if strict:
            raise ValidityError(msg)
        warnings.warn(msg, ValidityWarning, stacklevel=3)


# ---------------------------------------------------------------------------
# Gridded spectra and exact Fresnel propagation


@dataclass
class GriddedSpectrum:
    """Two-point correlation spectrum sampled on grid x grid per frequency.

    values has axes (Omega, x1, y1, x2, y2); keep n modest (the array is n^4
    per frequency slice).
    """

    kind: str  # "phase_insensitive" | "phase_sensitive"
    grid: Grid2D
    omega_samples: np.ndarray
    values: np.ndarray
    omega0: float
    plane_z: float = 0.0

    def __post_init__(self):
        if self.kind not in ("phase_insensitive", "phase_sensitive"):
            raise DomainError(f"unknown spectrum kind {self.kind!r}")
        self.omega_samples = np.atleast_1d(np.asarray(self.omega_samples, dtype=float))
        n = self.grid.n
        want = (len(self.omega_samples), n, n, n, n)
        if self.values.shape != want:
            raise ShapeError(f"values shape {self.values.shape} != {want}")

    def diagonal(self, i_omega):
        """S(rho, rho, Omega_i) on the spatial grid."""
        v = self.values[i_omega]
        idx = np.arange(self.grid.n)
        return v[idx[:, None], idx[None, :], idx[:, None], idx[None, :]]

    def validate(self, atol=1e-10):
        """Check the symmetry appropriate to the kind; returns max violation."""
        worst = 0.0
        for j in range(len(self.omega_samples)):
            v = self.values[j]
            swapped = np.transpose(v, (2, 3, 0, 1))
            if self.kind == "phase_insensitive":
                worst = max(worst, float(np.max(np.abs(v - np.conj(swapped)))))
                diag = self.diagonal(j)
                worst = max(worst, float(np.max(np.abs(diag.imag))))
                if np.any(diag.real < -atol * max(1.0, np.max(np.abs(diag)))):
                    raise DomainError("phase-insensitive diagonal must be >= 0")
            else:
                worst = max(worst, float(np.max(np.abs(v - swapped))))
        scale = float(np.max(np.abs(self.values))) or 1.0
        if worst > atol * scale:
            raise DomainError(
                f"{self.kind} symmetry violated: {worst:.3e} vs scale {scale:.3e}")
        return worst / scale


def _fft_pair(arr, axes, inverse=False):
    shifted = np.fft.ifftshift(arr, axes=axes)
    f = np.fft.ifftn if inverse else np.fft.fftn
    out = f(shifted, axes=axes, norm="ortho")
    return np.fft.fftshift(out, axes=axes)


def propagate_spectrum(spec: GriddedSpectrum, L, quasimono=False) -> GriddedSpectrum:
    """Exact FFT (transfer-function) Fresnel propagation of a gridded spectrum.

    With ``quasimono`` both kernels are evaluated at omega0 (Eq.-13 regime);
    otherwise the phase-insensitive pair is (omega0+Omega, omega0+Omega) and
    the phase-sensitive pair is (omega0-Omega, omega0+Omega).
    """
    if L <= 0:
        raise DomainError("propagation distance must be positive")
    grid = spec.grid
    k = grid.kcoords()
    K2 = k[:, None] ** 2 + k[None, :] ** 2
    out = np.empty_like(spec.values)
    for j, om in enumerate(spec.omega_samples):
        if spec.kind == "phase_insensitive":
            w1 = w2 = spec.omega0 + om
        else:
            w1, w2 = spec.omega0 - om, spec.omega0 + om
        if min(w1, w2) <= 0:
            raise DomainError("kernel frequency must stay positive")
        if quasimono:
            w1 = w2 = spec.omega0
        for w in {w1, w2}:
            require_fresnel_sampling(grid.extent, grid.dx, 2 * np.pi * C_LIGHT / w, L)
        tf1 = transfer_function(K2, L, w1)
        if spec.kind == "phase_insensitive":
            tf1 = np.conj(tf1)
        tf2 = transfer_function(K2, L, w2)
        slab = _fft_pair(spec.values[j], axes=(0, 1))
        slab *= tf1[:, :, None, None]
        slab = _fft_pair(slab, axes=(0, 1), inverse=True)
        slab = _fft_pair(slab, axes=(2, 3))
        slab *= tf2[None, None, :, :]
        out[j] = _fft_pair(slab, axes=(2, 3), inverse=True)
    return GriddedSpectrum(
        kind=spec.kind, grid=grid, omega_samples=spec.omega_samples.copy(),
        values=out, omega0=spec.omega0, plane_z=spec.plane_z + L)


# ---------------------------------------------------------------------------
# Far-field van Cittert-Zernike theorems


def _split_coords(model, rho1, rho2):
    rho1 = np.asarray(rho1, dtype=float)
    rho2 = np.asarray(rho2, dtype=float)
    rs = 0.5 * (rho1 + rho2)
    rd = rho2 - rho1
    if model.dim == 1:
        rs = float(np.atleast_1d(rs)[0])
        rd = float(np.atleast_1d(rd)[0])
        dot = rs * rd
        rs2 = rs * rs
        rd2 = rd * rd
    else:
        dot = float(np.dot(rs, rd))
        rs2 = float(np.dot(rs, rs))
        rd2 = float(np.dot(rd, rd))
    return rs, rd, dot, rs2, rd2


def vcz_phase_insensitive(model: SourceModel, L, rho1, rho2, Omega,
                          strict=False, threshold=0.1):
    """Far-field phase-insensitive spectrum: narrow in rho_d, broad in rho_s."""
    check = FarFieldCheck.from_model(model, L, threshold)
    _enforce(check.condition_n, threshold, strict, "phase-insensitive")
    rs, rd, dot, _, _ = _split_coords(model, rho1, rho2)
    w0 = model.omega0
    pref = (w0 / (2.0 * np.pi * C_LIGHT * L)) ** model.dim * model.S_n(Omega)
    phase = np.exp(1j * w0 * dot / (C_LIGHT * L))
    kd = w0 / (C_LIGHT * L) * np.asarray(rd)
    ks = w0 / (C_LIGHT * L) * np.asarray(rs)
    return pref * phase * complex(mask_transform(model.mask, "Tn", kd)) \
        * float(model.G_hat_n(ks))


def vcz_phase_sensitive(model: SourceModel, L, rho1, rho2, Omega,
                        strict=False, threshold=0.1):
    """Far-field phase-sensitive spectrum: narrow in rho_s, broad in rho_d."""
    check = FarFieldCheck.from_model(model, L, threshold)
    _enforce(check.condition_p, threshold, strict, "phase-sensitive")
    rs, rd, _, rs2, rd2 = _split_coords(model, rho1, rho2)
    w0 = model.omega0
    if model.dim == 2:
        pref = -((w0 / (2.0 * np.pi * C_LIGHT * L)) ** 2)
    else:
        pref = -1j * (w0 / (2.0 * np.pi * C_LIGHT * L))
    pref = pref * model.S_p(Omega)
    phase = np.exp(1j * w0 * (2.0 * L ** 2 + rs2 + rd2 / 4.0) / (C_LIGHT * L))
    ks = 2.0 * w0 / (C_LIGHT * L) * np.asarray(rs)
    kd = w0 / (2.0 * C_LIGHT * L) * np.asarray(rd)
    return pref * phase * complex(mask_transform(model.mask, "Tp", ks)) \
        * complex(model.G_hat_p(kd))
