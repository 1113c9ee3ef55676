"""Self-contained numerical primitives: Bessel J1, quadrature, root finding, FFT.

Everything here is pure and reentrant; no module-level mutable state.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    AliasingError,
    ConvergenceError,
    DomainError,
    RootNotFoundError,
    ShapeError,
)

__all__ = [
    "QuadratureSpec",
    "QuadratureResult",
    "DEFAULT_QUADRATURE",
    "Grid2D",
    "bessel_j1",
    "jinc",
    "integrate_1d",
    "find_first_zero",
    "fft2_centered",
]

# ---------------------------------------------------------------------------
# Bessel J1 and the jinc kernel

_SERIES_SWITCH = 8.0
_JINC_EPS = 1e-5

# c_k = (-1)^k / (k! (k+1)!) for J1(x) = (x/2) sum_k c_k (x^2/4)^k
_J1_SERIES = [(-1.0) ** k / (math.factorial(k) * math.factorial(k + 1)) for k in range(31)]


def _j1_series(y):
    # y = x^2/4; Horner in y
    acc = np.full_like(y, _J1_SERIES[-1])
    for c in reversed(_J1_SERIES[:-1]):
        acc = acc * y + c
    return acc


def _j1_recurrence(x):
    # Miller's downward recurrence with the J0 + 2*sum J_{2k} = 1 normalization.
    # Stable for any x; iteration count set by the largest argument.
    nstart = int(np.max(x)) + 60
    jp = np.zeros_like(x)
    jc = np.full_like(x, 1e-30)
    total = np.zeros_like(x)
    j1v = np.zeros_like(x)
    for n in range(nstart, 0, -1):
        jm = (2.0 * n / x) * jc - jp
        jp = jc
        jc = jm  # jc is now J_{n-1} up to a common scale
        big = np.abs(jc) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            jc = jc * scale
            jp = jp * scale
            total = total * scale
            j1v = j1v * scale
        order = n - 1
        if order == 1:
            j1v = jc.copy()
        if order >= 2 and order % 2 == 0:
            total += 2.0 * jc
    total += jc  # jc holds J_0
    return j1v / total


def bessel_j1(x):
    """Bessel function J1 for x >= 0 (scalar or ndarray).

    Power series below x = 8, Miller downward recurrence above; relative
    accuracy is better than 1e-12 (against the envelope near zeros) for
    x <= 50.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("bessel_j1 requires finite input")
    if np.any(arr < 0):
        raise DomainError("bessel_j1 requires x >= 0")
    out = np.empty_like(arr)
    small = arr < _SERIES_SWITCH
    if np.any(small):
        xs = arr[small]
        out[small] = 0.5 * xs * _j1_series(0.25 * xs * xs)
    if np.any(~small):
        out[~small] = _j1_recurrence(arr[~small])
    return out if out.ndim else float(out)


def jinc(x):
    """2 J1(x)/x with the removable singularity handled by series (x >= 0)."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("jinc requires finite input")
    if np.any(arr < 0):
        raise DomainError("jinc requires x >= 0")
    out = np.empty_like(arr)
    small = arr <= _JINC_EPS
    # even series: both branches agree to <= 1e-13 at the switch point
    out[small] = 1.0 - arr[small] ** 2 / 8.0
    big = ~small
    if np.any(big):
        xb = arr[big]
        out[big] = 2.0 * np.asarray(bessel_j1(xb)) / xb
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Quadrature


@dataclass(frozen=True)
class QuadratureSpec:
    method: str = "adaptive_gk"  # or "composite_simpson"
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.method not in ("adaptive_gk", "composite_simpson"):
            raise DomainError(f"unknown quadrature method {self.method!r}")
        if not (self.rel_tol > 0 and self.abs_tol >= 0 and self.max_subdivisions >= 1):
            raise DomainError("require rel_tol > 0, abs_tol >= 0, max_subdivisions >= 1")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    err_est: float


DEFAULT_QUADRATURE = QuadratureSpec()

# 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 constants).
_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
])
_WG = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # 15 ascending nodes
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:-1:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _as_vectorized(f: Callable[[float], float]) -> Callable[[np.ndarray], np.ndarray]:
    probe = np.array([0.5, 0.25])
    try:
        out = np.asarray(f(probe), dtype=float)
        if out.shape == probe.shape:
            return lambda x: np.asarray(f(x), dtype=float)
    except Exception:
        pass
    return np.vectorize(f, otypes=[float])


def _gk15(fv, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = fv(mid + half * _NODES)
    resk = half * float(np.dot(_KW, y))
    resg = half * float(np.dot(_GW, y))
    # QUADPACK-style scaled error estimate with a roundoff floor
    reskh = resk / (b - a) if b != a else 0.0
    resabs = abs(half) * float(np.dot(_KW, np.abs(y)))
    resasc = abs(half) * float(np.dot(_KW, np.abs(y - 2.0 * reskh)))
    err = abs(resk - resg)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 50.0 * np.finfo(float).eps * resabs)
    return resk, err


def _adaptive_gk(fv, a, b, spec):
    val, err = _gk15(fv, a, b)
    heap = [(-err, a, b, val)]
    total_val, total_err = val, err
    n_intervals = 1
    while True:
        tol = max(spec.abs_tol, spec.rel_tol * abs(total_val))
        if total_err <= tol:
            return QuadratureResult(total_val, total_err)
        if n_intervals >= spec.max_subdivisions:
            raise ConvergenceError(
                f"adaptive quadrature did not converge within "
                f"{spec.max_subdivisions} subdivisions (err~{total_err:.3e})",
                best_estimate=total_val,
                err_est=total_err,
            )
        neg_err, ia, ib, ival = heapq.heappop(heap)
        im = 0.5 * (ia + ib)
        v1, e1 = _gk15(fv, ia, im)
        v2, e2 = _gk15(fv, im, ib)
        total_val += v1 + v2 - ival
        total_err += e1 + e2 + neg_err  # neg_err == -old error
        heapq.heappush(heap, (-e1, ia, im, v1))
        heapq.heappush(heap, (-e2, im, ib, v2))
        n_intervals += 1


def _composite_simpson(fv, a, b, spec):
    n = 16
    prev = None
    while n <= spec.max_subdivisions * 16:
        x = np.linspace(a, b, n + 1)
        y = fv(x)
        h = (b - a) / n
        val = h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())
        if prev is not None:
            err = abs(val - prev) / 15.0
            if err <= max(spec.abs_tol, spec.rel_tol * abs(val)):
                return QuadratureResult(val, err)
        prev = val
        n *= 2
    raise ConvergenceError(
        "composite Simpson did not converge",
        best_estimate=prev,
        err_est=abs(val - prev) / 15.0 if prev is not None else np.inf,
    )


def integrate_1d(f, a, b, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> QuadratureResult:
    """Integrate f over [a, b] to the tolerances in ``spec``.

    Raises ConvergenceError (carrying the best estimate) if the subdivision
    budget is exhausted.
    """
    if not (np.isfinite(a) and np.isfinite(b) and a < b):
        raise DomainError("integrate_1d requires finite a < b")
    fv = _as_vectorized(f)
    if spec.method == "adaptive_gk":
        return _adaptive_gk(fv, a, b, spec)
    return _composite_simpson(fv, a, b, spec)


def gauss_legendre_panels(a, b, n_panels, order=32):
    """Fixed composite Gauss-Legendre nodes/weights on [a, b] (vectorizable)."""
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mids = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mids[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


# ---------------------------------------------------------------------------
# Root finding


def find_first_zero(f, start, step=0.01, tol=1e-12, horizon=50.0):
    """Smallest x > start with f(x) = 0, by forward scan then bisection.

    Requires f(start) > 0. Raises RootNotFoundError if no sign change
    occurs within ``horizon`` of the start point.
    """
    if step <= 0:
        raise DomainError("step must be positive")
    f0 = float(f(start))
    if not np.isfinite(f0):
        raise DomainError("f(start) is not finite")
    if f0 <= 0:
        raise DomainError("find_first_zero requires f(start) > 0")
    a, fa = start, f0
    x = start
    limit = start + horizon
    while x < limit:
        x = min(x + step, limit)
        fx = float(f(x))
        if fx == 0.0:
            return x
        if fx < 0.0:
            b, fb = x, fx
            break
        a, fa = x, fx
    else:
        raise RootNotFoundError(f"no sign change of f in ({start}, {limit}]")
    if x >= limit and fx > 0:
        raise RootNotFoundError(f"no sign change of f in ({start}, {limit}]")
    while (b - a) > tol:
        m = 0.5 * (a + b)
        fm = float(f(m))
        if fm == 0.0:
            return m
        if fm > 0.0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# Grids and centered FFT


@dataclass(frozen=True)
class Grid2D:
    """Square sampling grid: n samples per axis (power of two), pitch dx (m)."""

    n: int
    dx: float

    def __post_init__(self):
        if self.n < 16 or (self.n & (self.n - 1)) != 0:
            raise DomainError("Grid2D requires n = 2^k with k >= 4")
        if not (self.dx > 0 and np.isfinite(self.dx)):
            raise DomainError("Grid2D requires dx > 0")

    @property
    def extent(self) -> float:
        return self.n * self.dx

    def coords(self) -> np.ndarray:
        """Centered sample coordinates along one axis (m)."""
        return (np.arange(self.n) - self.n // 2) * self.dx

    def kcoords(self) -> np.ndarray:
        """Centered angular spatial frequencies along one axis (rad/m)."""
        return 2.0 * np.pi * (np.arange(self.n) - self.n // 2) / (self.n * self.dx)


def fft2_centered(field, direction="forward"):
    """Unitary, DC-centered 2-D FFT on a power-of-two square grid."""
    arr = np.asarray(field)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"expected a square 2-D array, got shape {arr.shape}")
    n = arr.shape[0]
    if n < 16 or (n & (n - 1)) != 0:
        raise ShapeError("grid dimension must be a power of two (>= 16)")
    if direction == "forward":
        return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(arr), norm="ortho"))
    if direction == "inverse":
        return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(arr), norm="ortho"))
    raise DomainError(f"unknown direction {direction!r}")


def fresnel_sampling_ok(extent, dx, wavelength, distance):
    """Transfer-function Fresnel criterion: extent * dx >= lambda * L."""
    return extent * dx >= wavelength * distance


def require_fresnel_sampling(extent, dx, wavelength, distance):
    if not fresnel_sampling_ok(extent, dx, wavelength, distance):
        n = extent / dx
        need = math.sqrt(n * wavelength * distance)
        raise AliasingError(
            f"Fresnel transfer sampling violated: extent*dx = {extent * dx:.3e} "
            f"< lambda*L = {wavelength * distance:.3e}; "
            f"need extent >= {need:.3e} m at n = {int(n)}",
            required_extent=need,
        )
