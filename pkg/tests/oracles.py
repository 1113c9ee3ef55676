"""Independent oracles used by the test suite.

These deliberately avoid the code paths they check: the Bessel oracle is a
plain high-precision power series, the propagation oracle is brute-force
Gauss-Legendre quadrature of the Fresnel superposition integrals, and the
contrast oracles are closed-form Gaussian convolutions.
"""

import math

import mpmath
import numpy as np

C_LIGHT = 299792458.0


# ---------------------------------------------------------------------------
# Bessel J1: arbitrary-precision power series (60 significant digits)


def j1_series_oracle(x, dps=60):
    """J1(x) summed term by term at high precision; converges for x <= ~60."""
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        y = xm * xm / 4
        term = xm / 2
        total = term
        k = 0
        while True:
            k += 1
            term = -term * y / (k * (k + 1))
            total += term
            if abs(term) < abs(total) * mpmath.mpf(10) ** (-dps + 5) and k > 5:
                break
        return float(total)


def j1_first_zero_oracle(dps=50):
    """First positive zero of J1 by bisection on the series oracle."""
    lo, hi = 3.0, 4.5
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if j1_series_oracle(mid, dps=dps) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# 1-D paraxial Green's function and brute-force Fresnel propagation of
# Schell-model correlation spectra (per Cartesian axis; 2-D results are
# products of per-axis integrals for separable Gaussian sources).


def h1d(x, L, omega):
    """1-D paraxial kernel: sqrt(omega/(i 2 pi c L)) e^{i omega (L + x^2/2L)/c}."""
    amp = np.sqrt(omega / (2.0 * np.pi * C_LIGHT * L))
    return amp * np.exp(1j * (omega * (L + x * x / (2.0 * L)) / C_LIGHT - np.pi / 4.0))


def _gl_nodes(a, b, n_panels, order):
    xg, wg = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    weights = (half[:, None] * wg[None, :]).ravel()
    return nodes, weights


def propagate_pair_axis(env_sum, env_diff, x1, x2, L, omega1, omega2, conj_first,
                        sum_half, diff_half, n_sum=48, n_diff=24, order=16):
    """Brute-force S_L(x1,x2) on one axis by Gauss-Legendre tensor quadrature.

    The source is the Schell product env_sum(xs') env_diff(xd') in
    sum/difference coordinates (unit Jacobian), which keeps narrow coherence
    bands resolvable.  k1 is conj(h(x1-x1', omega1)) for phase-insensitive
    propagation (conj_first=True) or h(x1-x1', omega1) for phase-sensitive;
    k2 is always h(x2-x2', omega2).
    """
    xs, ws = _gl_nodes(-sum_half, sum_half, n_sum, order)
    xd, wd = _gl_nodes(-diff_half, diff_half, n_diff, order)
    x1p = xs[:, None] - 0.5 * xd[None, :]
    x2p = xs[:, None] + 0.5 * xd[None, :]
    k1 = h1d(x1 - x1p, L, omega1)
    if conj_first:
        k1 = np.conj(k1)
    k2 = h1d(x2 - x2p, L, omega2)
    s = env_sum(xs)[:, None] * env_diff(xd)[None, :]
    integrand = s * k1 * k2
    return complex(np.einsum("i,j,ij->", ws, wd, integrand))


# ---------------------------------------------------------------------------
# Closed-form Gaussian results


def contrast_classical_closed(T0, Td):
    """1/sqrt(1 + (Td/2T0)^2)."""
    return 1.0 / math.sqrt(1.0 + (Td / (2.0 * T0)) ** 2)


def contrast_quantum_closed(T0, Td, brightness):
    """2 / (b sqrt(1 + Td^2/2T0^2))."""
    return 2.0 / (brightness * math.sqrt(1.0 + Td ** 2 / (2.0 * T0 ** 2)))


def cp_convolution_closed(T0, Td):
    """[ |F^{-1}{S}|^2 * h_B * h_B^- ]_{t=0} for the unit-area Gaussian pair.

    With S(O) = e^{-T0^2 O^2/2} sqrt(2 pi T0^2) and the e^{-2}-duration-Td
    Gaussian detector response, the convolution evaluates to the classical
    temporal contrast factor.
    """
    return contrast_classical_closed(T0, Td)


def quantum_convolution_closed(T0, Td):
    """Same stack with sqrt(S): equals 2/(sqrt(pi) sqrt(Td^2 + 2 T0^2))."""
    return 2.0 / (math.sqrt(math.pi) * math.sqrt(Td ** 2 + 2.0 * T0 ** 2))


def gaussian_beam_radius(w0, L, omega):
    """1/e^2 intensity radius of a Gaussian beam after distance L."""
    zr = omega * w0 ** 2 / (2.0 * C_LIGHT)
    return w0 * math.sqrt(1.0 + (L / zr) ** 2)
