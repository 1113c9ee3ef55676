"""Source-plane correlation spectra for Schell-model and incoherent sources.

A source is a transmission mask T(rho) times a homogeneous, stationary
field with phase-insensitive spectrum S_n(Omega) G_n(rho_d) and (regime
dependent) phase-sensitive spectrum S_p(Omega) G_p(rho_d).  Supported
cross-correlation regimes:

* ``classical_max``   |S_p G_p| = S_n G_n (strongest classical pair)
* ``quantum_max``     |S_p G_p| = sqrt(S_n G_n) at low brightness
* ``thermal_only``    S_p = 0
* ``coherent``        deterministic field sqrt(I0) T(rho), no fluctuations

Slit masks are uniform along y; every transform and prefactor for them is
per unit slit height (1-D), while Gaussian and sampled masks are 2-D.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ConfigurationError, DomainError, ValidityWarning
from .numerics import Grid2D, fft2_centered

__all__ = [
    "TwoSlitMask",
    "GaussianMask",
    "SampledMask",
    "GaussianSpectrum",
    "FlatSpectrum",
    "TabulatedSpectrum",
    "GaussianCorrelation",
    "DeltaIncoherent",
    "ClassicalMax",
    "QuantumMax",
    "ThermalOnly",
    "Coherent",
    "SourceModel",
    "SchellSpectra",
    "build_schell_spectra",
    "mask_transform",
    "incoherent_thinlens_spectra",
]


# ---------------------------------------------------------------------------
# Masks


@dataclass(frozen=True)
class TwoSlitMask:
    """Zero-one double slit along x (slits at +-separation/2, uniform in y)."""

    slit_width: float
    separation: float

    def __post_init__(self):
        if not (0 < self.slit_width < self.separation):
            raise ConfigurationError("two-slit mask requires 0 < slit_width < separation")

    dim = 1
    zero_one = True
    is_real = True

    @property
    def radius(self) -> float:
        # transverse radius of |T|^2
        return 0.5 * (self.separation + self.slit_width)

    def amplitude(self, x):
        x = np.asarray(x, dtype=float)
        w, d = self.slit_width, self.separation
        return ((np.abs(x - d / 2) <= w / 2) | (np.abs(x + d / 2) <= w / 2)).astype(float)


@dataclass(frozen=True)
class GaussianMask:
    """Soft Gaussian aperture T = exp(-|rho|^2 / 4 a0^2).

    a0 is the per-axis RMS radius of |T|^2 = exp(-|rho|^2 / 2 a0^2).
    """

    a0: float

    def __post_init__(self):
        if self.a0 <= 0:
            raise ConfigurationError("gaussian mask requires a0 > 0")

    dim = 2
    zero_one = False
    is_real = True

    @property
    def radius(self) -> float:
        return self.a0

    def amplitude(self, rho):
        rho = np.asarray(rho, dtype=float)
        r2 = np.sum(rho * rho, axis=-1) if rho.shape[-1:] == (2,) else rho * rho
        return np.exp(-r2 / (4.0 * self.a0 ** 2))


class SampledMask:
    """Mask sampled on a power-of-two grid; transforms are FFT-interpolated."""

    dim = 2

    def __init__(self, grid: Grid2D, values):
        values = np.asarray(values)
        if values.shape != (grid.n, grid.n):
            raise ConfigurationError("mask samples must match the grid")
        if np.max(np.abs(values)) > 1.0 + 1e-12:
            raise ConfigurationError("|T| <= 1 is required everywhere")
        self.grid = grid
        self.values = values
        self.zero_one = bool(
            np.isrealobj(values) and np.all((values == 0) | (values == 1)))
        self.is_real = bool(np.isrealobj(values) or np.allclose(values.imag, 0))
        self._tables = {}

    @property
    def radius(self) -> float:
        # RMS radius of |T|^2 about its centroid
        w = np.abs(self.values) ** 2
        tot = w.sum()
        if tot == 0:
            return 0.0
        x = self.grid.coords()
        X, Y = np.meshgrid(x, x, indexing="ij")
        cx = (w * X).sum() / tot
        cy = (w * Y).sum() / tot
        return float(np.sqrt((w * ((X - cx) ** 2 + (Y - cy) ** 2)).sum() / tot / 2.0))

    def amplitude(self, rho):
        from scipy.interpolate import RegularGridInterpolator

        x = self.grid.coords()
        interp = RegularGridInterpolator((x, x), self.values, bounds_error=False,
                                         fill_value=0.0)
        return interp(np.asarray(rho, dtype=float))

    def _table(self, variant):
        if variant not in self._tables:
            if variant == "Tn":
                f = np.abs(self.values) ** 2
            elif variant == "Tp":
                f = self.values ** 2
            else:
                f = self.values
            # continuous-transform normalization: F(k) = sum f e^{-ik rho} dx^2
            tab = fft2_centered(f.astype(complex)) * self.grid.n * self.grid.dx ** 2
            self._tables[variant] = tab
        return self._tables[variant]

    def transform(self, variant, k):
        from scipy.interpolate import RegularGridInterpolator

        tab = self._table(variant)
        kax = self.grid.kcoords()
        k = np.atleast_2d(np.asarray(k, dtype=float))
        re = RegularGridInterpolator((kax, kax), tab.real, bounds_error=False,
                                     fill_value=0.0)(k)
        im = RegularGridInterpolator((kax, kax), tab.imag, bounds_error=False,
                                     fill_value=0.0)(k)
        out = re + 1j * im
        return out if out.size > 1 else complex(out[0])


Mask = Union[TwoSlitMask, GaussianMask, SampledMask]


def _sinc(z):
    return np.sinc(np.asarray(z) / np.pi)


def mask_transform(mask: Mask, variant: str, k):
    """2-D (or per-unit-height 1-D) Fourier transform of |T|^2, T^2, or T.

    variant: "Tn" -> |T|^2, "Tp" -> T^2, "Tc" -> T.  For slit masks k may be
    a scalar k_x; for 2-D masks k is a 2-vector (or array of 2-vectors).
    """
    if variant not in ("Tn", "Tp", "Tc"):
        raise DomainError(f"unknown transform variant {variant!r}")
    if isinstance(mask, TwoSlitMask):
        kx = np.asarray(k, dtype=float)
        if kx.ndim and kx.shape[-1:] == (2,):
            kx = kx[..., 0]
        if not np.all(np.isfinite(kx)):
            raise DomainError("k must be finite")
        w, d = mask.slit_width, mask.separation
        # T = T^2 = |T|^2 for a zero-one mask
        out = 2.0 * w * _sinc(kx * w / 2.0) * np.cos(kx * d / 2.0)
        return out + 0.0j
    if isinstance(mask, GaussianMask):
        kv = np.asarray(k, dtype=float)
        k2 = np.sum(kv * kv, axis=-1) if kv.shape[-1:] == (2,) else kv * kv
        if not np.all(np.isfinite(k2)):
            raise DomainError("k must be finite")
        a0 = mask.a0
        if variant == "Tc":
            return 4.0 * np.pi * a0 ** 2 * np.exp(-(a0 ** 2) * k2) + 0.0j
        return 2.0 * np.pi * a0 ** 2 * np.exp(-(a0 ** 2) * k2 / 2.0) + 0.0j
    if isinstance(mask, SampledMask):
        kv = np.asarray(k, dtype=float)
        if kv.shape == (2,) or (kv.ndim == 2 and kv.shape[-1] == 2):
            return mask.transform(variant, kv)
        raise DomainError("sampled masks require 2-vector spatial frequencies")
    raise ConfigurationError(f"unsupported mask type {type(mask).__name__}")


# ---------------------------------------------------------------------------
# Temporal spectra (baseband, unit area: int S dOmega/2pi = 1)


@dataclass(frozen=True)
class GaussianSpectrum:
    """S(Omega) = e^{-T0^2 Omega^2 / 2} sqrt(2 pi T0^2); e^-2 bandwidth 2/T0."""

    T0: float

    def __post_init__(self):
        if self.T0 <= 0:
            raise ConfigurationError("gaussian spectrum requires T0 > 0")

    kind = "gaussian"

    def value(self, omega):
        return np.exp(-self.T0 ** 2 * np.asarray(omega, float) ** 2 / 2.0) * np.sqrt(
            2.0 * np.pi * self.T0 ** 2)

    @property
    def peak(self):
        return np.sqrt(2.0 * np.pi) * self.T0

    @property
    def coherence_time(self):
        return self.T0

    def band(self):
        return (-14.0 / self.T0, 14.0 / self.T0)


@dataclass(frozen=True)
class FlatSpectrum:
    """s(Omega) = pi/W on |Omega| < W, zero elsewhere (unit area)."""

    W: float

    def __post_init__(self):
        if self.W <= 0:
            raise ConfigurationError("flat spectrum requires W > 0")

    kind = "flat"

    def value(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.where(np.abs(omega) < self.W, np.pi / self.W, 0.0)

    @property
    def peak(self):
        return np.pi / self.W

    @property
    def coherence_time(self):
        return 2.0 * np.pi / self.W

    def band(self):
        return (-self.W, self.W)


class TabulatedSpectrum:
    """Nonnegative samples of S(Omega), linearly interpolated, renormalized."""

    kind = "tabulated"

    def __init__(self, omega, values):
        omega = np.asarray(omega, dtype=float)
        values = np.asarray(values, dtype=float)
        if omega.ndim != 1 or omega.shape != values.shape or omega.size < 2:
            raise ConfigurationError("need matching 1-D omega/value samples")
        if np.any(values < 0):
            raise ConfigurationError("phase-insensitive spectra must be >= 0")
        if np.any(np.diff(omega) <= 0):
            raise ConfigurationError("omega samples must be increasing")
        area = np.trapezoid(values, omega) / (2.0 * np.pi)
        if area <= 0:
            raise ConfigurationError("spectrum has zero area")
        self.omega = omega
        self.values = values / area
        self._peak = float(self.values.max())

    def value(self, omega):
        return np.interp(np.asarray(omega, dtype=float), self.omega, self.values,
                         left=0.0, right=0.0)

    @property
    def peak(self):
        return self._peak

    @property
    def coherence_time(self):
        # half the reciprocal RMS bandwidth; adequate for grid sizing
        mean = np.trapezoid(self.omega * self.values, self.omega) / np.trapezoid(
            self.values, self.omega)
        var = np.trapezoid((self.omega - mean) ** 2 * self.values, self.omega)
        var /= np.trapezoid(self.values, self.omega)
        return 1.0 / np.sqrt(var) if var > 0 else np.inf

    def band(self):
        return (float(self.omega[0]), float(self.omega[-1]))


TemporalSpectrum = Union[GaussianSpectrum, FlatSpectrum, TabulatedSpectrum]


# ---------------------------------------------------------------------------
# Spatial correlations


@dataclass(frozen=True)
class GaussianCorrelation:
    """G(rho_d) = exp(-|rho_d|^2 / 2 rho0^2), coherence radius rho0."""

    rho0: float

    def __post_init__(self):
        if self.rho0 <= 0:
            raise ConfigurationError("coherence radius must be positive")

    kind = "gaussian"

    def G(self, rho_d):
        rho_d = np.asarray(rho_d, dtype=float)
        r2 = np.sum(rho_d * rho_d, axis=-1) if rho_d.shape[-1:] == (2,) else rho_d ** 2
        return np.exp(-r2 / (2.0 * self.rho0 ** 2))

    def Ghat(self, k, dim=2):
        """Fourier transform of G; dim = 1 gives the per-axis transform."""
        k = np.asarray(k, dtype=float)
        k2 = np.sum(k * k, axis=-1) if k.shape[-1:] == (2,) else k * k
        shape = np.exp(-self.rho0 ** 2 * k2 / 2.0)
        if dim == 2:
            return 2.0 * np.pi * self.rho0 ** 2 * shape
        return np.sqrt(2.0 * np.pi) * self.rho0 * shape


@dataclass(frozen=True)
class DeltaIncoherent:
    """Spatially incoherent source, photon-flux density I0 (photons/m^2 s)."""

    I0: float

    def __post_init__(self):
        if self.I0 <= 0:
            raise ConfigurationError("flux density must be positive")

    kind = "delta_incoherent"


SpatialCorrelation = Union[GaussianCorrelation, DeltaIncoherent]


# ---------------------------------------------------------------------------
# Regimes


@dataclass(frozen=True)
class ClassicalMax:
    """|S_p(O) G_p(k)| = S_n(O) G_n(k): the strongest classical cross correlation."""

    name = "classical_max"


@dataclass(frozen=True)
class QuantumMax:
    """|S_p G_p| = sqrt(S_n G_n) with spectral occupancy ``brightness`` << 1.

    ``brightness`` is the dimensionless peak occupancy G_n(0) S_n(0); the
    effective spatial-spectrum peak is brightness / S_n(0) so that the
    occupancy product stays a clean configuration scalar.
    """

    brightness: float
    max_brightness: float = 1e-2

    def __post_init__(self):
        if self.brightness <= 0:
            raise ConfigurationError("brightness must be positive")
        if self.brightness > self.max_brightness:
            raise ConfigurationError(
                f"quantum_max requires brightness <= {self.max_brightness} "
                f"(got {self.brightness})")

    name = "quantum_max"


@dataclass(frozen=True)
class ThermalOnly:
    """No phase-sensitive correlation: S_p = 0."""

    name = "thermal_only"


@dataclass(frozen=True)
class Coherent:
    """Deterministic coherent-state field sqrt(I0) T(rho)."""

    I0: float

    def __post_init__(self):
        if self.I0 <= 0:
            raise ConfigurationError("I0 must be positive")

    name = "coherent"


Regime = Union[ClassicalMax, QuantumMax, ThermalOnly, Coherent]


# ---------------------------------------------------------------------------
# Source model


@dataclass(frozen=True)
class SourceModel:
    """Mask + spatial correlation + temporal spectrum + cross-correlation regime."""

    mask: Mask
    spatial: SpatialCorrelation
    temporal_n: TemporalSpectrum
    regime: Regime
    omega0: float
    phase_p: float = 0.0  # global phase of the phase-sensitive spectrum

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ConfigurationError("omega0 must be positive")

    @property
    def dim(self) -> int:
        return self.mask.dim

    # -- temporal spectra ---------------------------------------------------

    def S_n(self, omega):
        return self.temporal_n.value(omega)

    def S_p(self, omega):
        """Magnitude of the phase-sensitive temporal spectrum."""
        if isinstance(self.regime, ThermalOnly):
            return np.zeros_like(np.asarray(omega, dtype=float))
        if isinstance(self.regime, QuantumMax):
            return np.sqrt(self.temporal_n.value(omega))
        return self.temporal_n.value(omega)

    # -- spatial spectra ----------------------------------------------------

    def _require_gaussian_spatial(self):
        if not isinstance(self.spatial, GaussianCorrelation):
            raise ConfigurationError(
                "this operation requires a Gaussian Schell-model spatial correlation")

    def g_peak_n(self) -> float:
        """Peak of the phase-insensitive spatial spectrum G_n-hat(0)."""
        self._require_gaussian_spatial()
        if isinstance(self.regime, QuantumMax):
            return self.regime.brightness / float(self.temporal_n.peak)
        return float(self.spatial.Ghat(0.0, self.dim))

    def G_hat_n(self, k):
        self._require_gaussian_spatial()
        shape = self.spatial.Ghat(k, self.dim) / self.spatial.Ghat(0.0, self.dim)
        return self.g_peak_n() * shape

    def G_hat_p(self, k):
        """Phase-sensitive spatial spectrum (complex; carries phase_p)."""
        if isinstance(self.regime, ThermalOnly):
            return np.zeros_like(np.asarray(k, dtype=float) * 0.0) + 0.0j
        mag = self.G_hat_n(k)
        if isinstance(self.regime, QuantumMax):
            mag = np.sqrt(mag)
        return mag * np.exp(1j * self.phase_p)

    def G_n(self, rho_d):
        self._require_gaussian_spatial()
        return self.spatial.G(rho_d)

    def G_p(self, rho_d):
        if isinstance(self.regime, ThermalOnly):
            return np.zeros_like(np.asarray(rho_d, dtype=float))
        if isinstance(self.regime, QuantumMax):
            # sqrt in the k domain widens the position-domain correlation
            self._require_gaussian_spatial()
            return self.spatial.G(np.asarray(rho_d) / np.sqrt(2.0))
        return self.spatial.G(rho_d)


# ---------------------------------------------------------------------------
# Schell-model source spectra (sum/difference coordinates)


@dataclass(frozen=True)
class SchellSpectra:
    """Factored source spectra S0_n, S0_p in sum/difference coordinates."""

    model: SourceModel
    warnings: tuple = field(default_factory=tuple)

    def S0_n(self, rho_s, rho_d, omega):
        m = self.model
        t2 = np.abs(m.mask.amplitude(rho_s)) ** 2
        return t2 * m.G_n(rho_d) * m.S_n(omega)

    def S0_p(self, rho_s, rho_d, omega):
        m = self.model
        if isinstance(m.regime, ThermalOnly):
            return np.zeros_like(np.asarray(omega, dtype=float) * 1.0)
        tsq = m.mask.amplitude(rho_s) ** 2
        return tsq * m.G_p(rho_d) * m.S_p(omega) * np.exp(1j * m.phase_p)


def build_schell_spectra(model: SourceModel, validity_ratio=10.0) -> SchellSpectra:
    """Factored source spectra; warns when the mask varies within a coherence area."""
    if not isinstance(model.spatial, GaussianCorrelation):
        raise ConfigurationError("Schell spectra require a Gaussian spatial correlation")
    notes = []
    ratio = model.mask.radius / model.spatial.rho0
    if ratio < validity_ratio:
        msg = (f"Schell factorization marginal: a0/rho0 = {ratio:.2f} "
               f"< {validity_ratio:g}")
        notes.append(msg)
        warnings.warn(msg, ValidityWarning, stacklevel=2)
    return SchellSpectra(model=model, warnings=tuple(notes))


# ---------------------------------------------------------------------------
# Spatially incoherent (thin-lens) source spectra


@dataclass(frozen=True)
class IncoherentSpectra:
    """Delta-correlated source spectra with frequency-dependent prefactors.

    ``value_*`` return the coefficient multiplying delta(rho2 - rho1) on the
    diagonal and exactly zero off the diagonal.
    """

    model: SourceModel
    c_light: float = 299792458.0

    def prefactor_n(self, omega):
        w0 = self.model.omega0
        return (2.0 * np.pi * self.c_light / (w0 + np.asarray(omega, float))) ** 2

    def prefactor_p(self, omega):
        w0 = self.model.omega0
        return (2.0 * np.pi * self.c_light) ** 2 / (
            w0 ** 2 - np.asarray(omega, float) ** 2)

    def value_n(self, rho1, rho2, omega):
        rho1 = np.asarray(rho1, float)
        rho2 = np.asarray(rho2, float)
        if not np.allclose(rho1, rho2, rtol=0.0, atol=0.0):
            return 0.0
        m = self.model
        t2 = np.abs(m.mask.amplitude(rho1)) ** 2
        return t2 * self.prefactor_n(omega) * m.spatial.I0 * m.S_n(omega) / (
            2.0 * np.pi)

    def value_p(self, rho1, rho2, omega, d1=None):
        rho1 = np.asarray(rho1, float)
        rho2 = np.asarray(rho2, float)
        if not np.allclose(rho1, rho2, rtol=0.0, atol=0.0):
            return 0.0
        m = self.model
        tsq = m.mask.amplitude(rho1) ** 2
        phase = 1.0
        if d1 is not None:
            # source-plane focusing compensates the lens parabolic phase
            r2 = float(np.sum(rho1 * rho1))
            phase = np.exp(-1j * m.omega0 * r2 / (self.c_light * d1))
        return tsq * phase * self.prefactor_p(omega) * m.spatial.I0 * m.S_p(omega) / (
            2.0 * np.pi)


def incoherent_thinlens_spectra(model: SourceModel) -> IncoherentSpectra:
    """Delta-correlated spectra for the thin-lens imaging configuration."""
    if not isinstance(model.spatial, DeltaIncoherent):
        raise ConfigurationError(
            "incoherent thin-lens spectra require a delta_incoherent spatial kind")
    if isinstance(model.regime, Coherent):
        raise ConfigurationError("coherent regime has no incoherent-source spectra")
    return IncoherentSpectra(model=model)
