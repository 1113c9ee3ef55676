"""Far-field diffraction-pattern imaging via photocurrent cross correlation.

Two pinhole detectors in the far field of a transmission mask measure the
time-averaged product of their photocurrents.  For Gaussian-state light the
result decomposes as C(rho) = C0(rho) + C_image(rho): a broad featureless
background set by the phase-insensitive correlation, plus an image term
proportional to |T_p(2 omega0 rho / cL)|^2, the far-field diffraction
pattern of the squared mask.  A coherent-state scanning imager sees
|T_c(omega0 rho / cL)|^2 instead, so zero-one masks show the factor-of-two
fringe compression.

All quantities for slit masks are per unit slit height (1-D transforms and
kernel prefactors); 2-D masks use the full 2-D forms.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .constants import C_LIGHT, E_CHARGE
from .errors import (
    ConfigurationError,
    UnsupportedMaskError,
    UnsupportedRegimeError,
    ValidityError,
    ValidityWarning,
)
from .numerics import integrate_1d
from .propagation import FarFieldCheck
from .source import (
    ClassicalMax,
    Coherent,
    GaussianMask,
    QuantumMax,
    SourceModel,
    ThermalOnly,
    TwoSlitMask,
    mask_transform,
)

__all__ = [
    "DetectorModel",
    "DiffractionImage",
    "PhotocurrentSample",
    "ContrastResult",
    "photocurrent_correlation",
    "diffraction_image",
    "coherent_baseline",
    "mirrored_scan_image",
    "contrast",
    "fringe_minima",
]


# ---------------------------------------------------------------------------
# Detector


@dataclass(frozen=True)
class DetectorModel:
    """Pinhole photodetector: efficiency, area, Gaussian current filter.

    h_B(t) = e^{-8 t^2 / Td^2} sqrt(8 / pi Td^2) has unit area and
    e^{-2}-attenuation duration Td.
    """

    eta: float
    area: float
    Td: float
    q: float = E_CHARGE

    def __post_init__(self):
        if not (0.0 < self.eta <= 1.0):
            raise ConfigurationError("quantum efficiency must be in (0, 1]")
        if self.area <= 0 or self.Td <= 0 or self.q <= 0:
            raise ConfigurationError("detector area, Td and q must be positive")

    def h_B(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(-8.0 * t * t / self.Td ** 2) * np.sqrt(
            8.0 / (np.pi * self.Td ** 2))

    def h_B_autocorrelation(self, t):
        """R(t) = (h_B star reversed-h_B)(t); unit area, Gaussian."""
        t = np.asarray(t, dtype=float)
        return np.exp(-4.0 * t * t / self.Td ** 2) * np.sqrt(
            4.0 / (np.pi * self.Td ** 2))

    def H_B(self, omega):
        """Fourier transform of h_B (H_B(0) = 1)."""
        omega = np.asarray(omega, dtype=float)
        return np.exp(-(omega ** 2) * self.Td ** 2 / 32.0)


# ---------------------------------------------------------------------------
# Shared pieces


def _prefactor(model: SourceModel, det: DetectorModel, L):
    return det.q * det.eta * det.area * (
        model.omega0 / (2.0 * np.pi * C_LIGHT * L)) ** model.dim


def _spectral_mean(model: SourceModel):
    """int_{-omega0}^inf S_n(Omega) dOmega / 2 pi (unity for unit-area spectra)."""
    lo, hi = model.temporal_n.band()
    lo = max(lo, -model.omega0)
    res = integrate_1d(lambda o: model.S_n(o) / (2.0 * np.pi), lo, hi)
    return res.value


def temporal_convolution_at_zero(model: SourceModel, det: DetectorModel,
                                 which="p", n_time=4096, time_span=None,
                                 richardson=True):
    """[ |F^{-1}{S}|^2 star h_B star reversed-h_B ]_{t=0} on a uniform grid.

    ``which`` selects S_p ("p") or S_n ("n").  The inverse transform is a
    midpoint-rule Fourier sum with the frequency step chosen so no replica
    falls inside the evaluation window; the outer convolution is a
    trapezoid over the detector autocorrelation.
    """
    spectrum = model.S_p if which == "p" else model.S_n
    tau_c = model.temporal_n.coherence_time
    span = time_span if time_span is not None else 8.0 * max(tau_c, det.Td)
    t = np.linspace(-span, span, n_time)
    # K(t) decays on the coherence-time scale; evaluate it only there
    t_win = min(span, 20.0 * tau_c)
    lo, hi = model.temporal_n.band()
    lo = max(lo, -model.omega0)
    n_om = max(512, int(np.ceil((hi - lo) * t_win / np.pi)) + 64)
    edges = np.linspace(lo, hi, n_om + 1)
    om = 0.5 * (edges[:-1] + edges[1:])
    dom = edges[1] - edges[0]
    sv = spectrum(om)
    inside = np.abs(t) <= t_win
    K = np.zeros(n_time, dtype=complex)
    K[inside] = (np.exp(-1j * np.outer(t[inside], om)) @ sv) * dom / (2.0 * np.pi)
    integrand = np.abs(K) ** 2 * det.h_B_autocorrelation(t)
    value = float(np.trapezoid(integrand, t))
    if richardson:
        finer = temporal_convolution_at_zero(
            model, det, which=which, n_time=2 * n_time, time_span=span,
            richardson=False)
        if abs(finer - value) > 1e-8 * abs(finer):
            warnings.warn(
                f"temporal convolution grid marginal: Richardson deviation "
                f"{abs(finer - value) / abs(finer):.2e}", ValidityWarning,
                stacklevel=2)
        value = finer
    return value


def _check_far_field(model, L, strict, threshold=0.1):
    chk = FarFieldCheck.from_model(model, L, threshold)
    if chk.condition_p > threshold:
        msg = (f"far-field ratio omega0 a0^2/2cL = {chk.condition_p:.3g} "
               f"exceeds {threshold:g}")
        if strict:
            raise ValidityError(msg)
        warnings.warn(msg, ValidityWarning, stacklevel=3)
    return chk


def _k_image(model, L, rho):
    """Spatial frequency arguments for a detector coordinate rho."""
    rho = np.asarray(rho, dtype=float)
    if model.dim == 1:
        r = float(np.atleast_1d(rho)[0])
        return model.omega0 * r / (C_LIGHT * L), 2.0 * model.omega0 * r / (C_LIGHT * L)
    return (model.omega0 / (C_LIGHT * L)) * rho, (2.0 * model.omega0 / (C_LIGHT * L)) * rho


# ---------------------------------------------------------------------------
# Photocurrent correlation


@dataclass(frozen=True)
class PhotocurrentSample:
    total: float
    background: float
    image: float
    note: str = ""


def photocurrent_correlation(model: SourceModel, det: DetectorModel, L, rho,
                             strict=False, threshold=0.1) -> PhotocurrentSample:
    """C(rho) = C0(rho) + C_p |G_p(0) T_p(2 omega0 rho/cL)|^2 at one detector point."""
    if isinstance(model.regime, Coherent):
        raise UnsupportedRegimeError(
            "photocurrent correlation needs a stochastic pair; "
            "use coherent_baseline for the coherent imager")
    _check_far_field(model, L, strict, threshold)
    pref = _prefactor(model, det, L)
    sbar = _spectral_mean(model)
    kn, kp = _k_image(model, L, rho)
    background = (pref * abs(complex(mask_transform(model.mask, "Tn", 0.0 * np.asarray(kn))))
                  * float(model.G_hat_n(kn)) * sbar) ** 2
    if isinstance(model.regime, ThermalOnly):
        return PhotocurrentSample(total=background, background=background, image=0.0,
                                  note="thermal source: no phase-sensitive image term")
    ct = temporal_convolution_at_zero(model, det, which="p")
    gp0 = abs(complex(model.G_hat_p(np.zeros(2)[: model.dim] if model.dim == 2 else 0.0)))
    tp = complex(mask_transform(model.mask, "Tp", kp))
    image = pref ** 2 * ct * (gp0 * abs(tp)) ** 2
    return PhotocurrentSample(total=background + image, background=background,
                              image=image)


@dataclass
class DiffractionImage:
    """Sampled photocurrent-correlation image with its decomposition."""

    rho: np.ndarray          # (N, 2) detector coordinates, m
    total: np.ndarray        # A^2
    background: np.ndarray   # A^2
    image: np.ndarray        # A^2
    meta: dict = field(default_factory=dict)

    def validate(self):
        resid = np.max(np.abs(self.total - self.background - self.image))
        scale = max(float(np.max(self.total)), 1e-300)
        if resid > 1e-12 * scale:
            raise ConfigurationError(f"decomposition violated by {resid:.3e}")
        if np.any(self.total < 0) or np.any(self.background < 0) or np.any(
                self.image < -1e-300):
            raise ConfigurationError("correlation components must be nonnegative")
        return resid / scale

    def to_csv(self, path):
        header = "rho_x_m,rho_y_m,C_total_A2,C_background_A2,C_image_A2"
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for i in range(len(self.total)):
                fh.write(",".join(repr(float(v)) for v in (
                    self.rho[i, 0], self.rho[i, 1], self.total[i],
                    self.background[i], self.image[i])) + "\n")


def diffraction_image(model: SourceModel, det: DetectorModel, L, rho_points,
                      strict=False, threshold=0.1) -> DiffractionImage:
    """Vectorized photocurrent correlation over detector coordinates."""
    if isinstance(model.regime, Coherent):
        raise UnsupportedRegimeError("use coherent_baseline for coherent light")
    _check_far_field(model, L, strict, threshold)
    rho_points = np.atleast_2d(np.asarray(rho_points, dtype=float))
    pref = _prefactor(model, det, L)
    sbar = _spectral_mean(model)
    w0 = model.omega0
    if model.dim == 1:
        kn = w0 * rho_points[:, 0] / (C_LIGHT * L)
        kp = 2.0 * kn
        tn0 = abs(complex(mask_transform(model.mask, "Tn", 0.0)))
    else:
        kn = (w0 / (C_LIGHT * L)) * rho_points
        kp = 2.0 * kn
        tn0 = abs(complex(mask_transform(model.mask, "Tn", np.zeros(2))))
    background = (pref * tn0 * np.asarray(model.G_hat_n(kn), dtype=float) * sbar) ** 2
    if isinstance(model.regime, ThermalOnly):
        image = np.zeros_like(background)
        note = "thermal source: no phase-sensitive image term"
    else:
        ct = temporal_convolution_at_zero(model, det, which="p")
        gp0 = abs(complex(model.G_hat_p(np.zeros(model.dim) if model.dim == 2 else 0.0)))
        tp = np.abs(np.asarray(mask_transform(model.mask, "Tp", kp)))
        image = pref ** 2 * ct * (gp0 * tp) ** 2
        note = ""
    return DiffractionImage(
        rho=rho_points, total=background + image, background=background,
        image=image, meta={"L": L, "omega0": w0, "regime": model.regime.name,
                           "note": note})


# ---------------------------------------------------------------------------
# Coherent baseline and the mirrored phase-insensitive variant


def coherent_baseline(model: SourceModel, det: DetectorModel, L, rho,
                      strict=False, threshold=0.1):
    """Mean photocurrent of the coherent-state scanning imager."""
    if not isinstance(model.regime, Coherent):
        raise UnsupportedRegimeError("coherent_baseline requires the coherent regime")
    chk = FarFieldCheck.from_model(model, L, threshold)
    if chk.condition_p > threshold:
        msg = f"coherent diffraction far-field ratio {chk.condition_p:.3g} too large"
        if strict:
            raise ValidityError(msg)
        warnings.warn(msg, ValidityWarning, stacklevel=2)
    kn, _ = _k_image(model, L, rho)
    tc = mask_transform(model.mask, "Tc", kn)
    return _prefactor(model, det, L) * model.regime.I0 * np.abs(tc) ** 2


def mirrored_scan_image(model: SourceModel, det: DetectorModel, L, rho,
                        strict=False, threshold=0.1):
    """Image sample of the mirrored-detector phase-insensitive imager.

    With one detector at rho and the other at -rho the cross correlation
    carries an image term proportional to |T_n(2 omega0 rho / cL)|^2.
    """
    if isinstance(model.regime, Coherent):
        raise UnsupportedRegimeError("mirrored scan needs a stochastic source")
    _check_far_field(model, L, strict, threshold)
    _, kp = _k_image(model, L, rho)
    ct = temporal_convolution_at_zero(model, det, which="n")
    tn = mask_transform(model.mask, "Tn", kp)
    pref = _prefactor(model, det, L)
    return pref ** 2 * ct * (model.g_peak_n() * np.abs(tn)) ** 2


# ---------------------------------------------------------------------------
# Contrast


@dataclass(frozen=True)
class ContrastResult:
    C: float
    Cs: float
    Ct: float
    region_radius: float


def _default_region_radius(model, L):
    w0 = model.omega0
    if isinstance(model.mask, TwoSlitMask):
        # first three lobes of the compressed fringe pattern
        return 3.2 * np.pi * C_LIGHT * L / (w0 * model.mask.separation)
    if isinstance(model.mask, GaussianMask):
        return 3.0 * C_LIGHT * L / (w0 * model.mask.a0)
    # sampled masks: three lobes at the RMS-radius scale
    return 3.2 * np.pi * C_LIGHT * L / (w0 * 2.0 * model.mask.radius)


def _refine_extremum(f, lo, hi, sign):
    from scipy.optimize import minimize_scalar

    res = minimize_scalar(lambda x: sign * f(x), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12 * max(abs(lo), abs(hi), 1e-30)})
    return float(res.x), float(sign * res.fun)


def _scan_extrema(f, radius, n=4001):
    """Max and min of f over [-radius, radius] with local refinement."""
    xs = np.linspace(-radius, radius, n)
    vals = np.array([f(x) for x in xs])
    out = {}
    for label, sign in (("max", -1.0), ("min", 1.0)):
        idx = int(np.argmin(sign * vals))
        lo = xs[max(0, idx - 1)]
        hi = xs[min(n - 1, idx + 1)]
        _, v = _refine_extremum(f, lo, hi, sign)
        out[label] = v
    return out["max"], out["min"]


def contrast(model: SourceModel, det: DetectorModel, L, region_radius=None,
             strict=False, threshold=0.1, n_scan=4001) -> ContrastResult:
    """(max_R C - min_R C) / C0(0) over a disk R around the optical axis.

    The spatial and temporal factors are also computed independently, so
    C = Cs * Ct can be checked rather than enforced.
    """
    if not getattr(model.mask, "is_real", False):
        raise UnsupportedMaskError("contrast is defined for real-valued masks")
    if isinstance(model.regime, (Coherent, ThermalOnly)):
        raise UnsupportedRegimeError("contrast needs a phase-sensitive source")
    radius = region_radius if region_radius is not None else _default_region_radius(
        model, L)
    _check_far_field(model, L, strict, threshold)

    # precompute the rho-independent pieces once; the scan closure reuses them
    pref = _prefactor(model, det, L)
    sbar = _spectral_mean(model)
    ct_num = temporal_convolution_at_zero(model, det, which="p")
    gp0 = abs(complex(model.G_hat_p(np.zeros(model.dim) if model.dim == 2 else 0.0)))
    w0 = model.omega0

    if model.dim == 1:
        tn0 = abs(complex(mask_transform(model.mask, "Tn", 0.0)))

        def c_of_x(x):
            kn = w0 * x / (C_LIGHT * L)
            bg = (pref * tn0 * float(model.G_hat_n(kn)) * sbar) ** 2
            tp = abs(complex(mask_transform(model.mask, "Tp", 2.0 * kn)))
            return bg + pref ** 2 * ct_num * (gp0 * tp) ** 2
    else:
        tn0 = abs(complex(mask_transform(model.mask, "Tn", np.zeros(2))))

        def c_of_x(x):
            kv = (w0 / (C_LIGHT * L)) * np.array([x, 0.0])
            bg = (pref * tn0 * float(model.G_hat_n(kv)) * sbar) ** 2
            tp = abs(complex(mask_transform(model.mask, "Tp", 2.0 * kv)))
            return bg + pref ** 2 * ct_num * (gp0 * tp) ** 2

    cmax, cmin = _scan_extrema(c_of_x, radius, n=n_scan)
    c0_axis = (pref * tn0 * float(model.G_hat_n(np.zeros(model.dim) if model.dim == 2
                                                else 0.0)) * sbar) ** 2
    c_value = (cmax - cmin) / c0_axis

    # spatial factor from the mask transforms over the same region
    if model.dim == 1:
        tp_of_x = lambda x: abs(complex(mask_transform(
            model.mask, "Tp", 2 * w0 * x / (C_LIGHT * L)))) ** 2
    else:
        tp_of_x = lambda x: abs(complex(mask_transform(
            model.mask, "Tp", 2 * w0 / (C_LIGHT * L) * np.array([x, 0.0])))) ** 2
    tp_max, tp_min = _scan_extrema(tp_of_x, radius, n=n_scan)
    cs = (tp_max - tp_min) / tn0 ** 2

    # temporal factor from the convolution integrals
    if isinstance(model.regime, QuantumMax):
        ct = ct_num / (model.g_peak_n() * sbar ** 2)
    else:
        ct = ct_num / sbar ** 2
    return ContrastResult(C=c_value, Cs=cs, Ct=ct, region_radius=radius)


# ---------------------------------------------------------------------------
# Fringe measurement helper


def fringe_minima(f, lo, hi, count=2, n_scan=6001):
    """Positions of the first ``count`` interior minima of f on [lo, hi]."""
    xs = np.linspace(lo, hi, n_scan)
    vals = np.array([f(x) for x in xs])
    minima = []
    for i in range(1, n_scan - 1):
        if vals[i] < vals[i - 1] and vals[i] <= vals[i + 1]:
            x, _ = _refine_extremum(f, xs[i - 1], xs[i + 1], 1.0)
            minima.append(x)
            if len(minima) == count:
                break
    if len(minima) < count:
        raise ValueError(f"found only {len(minima)} minima in [{lo}, {hi}]")
    return minima
