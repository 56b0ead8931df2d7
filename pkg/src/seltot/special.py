"""Complex special functions.

Log-gamma and digamma delegate to scipy's complex implementations (their
accuracy on vertical lines is re-checked against an independent Stirling
oracle in the test suite).  The Riemann/Hurwitz zeta functions are a
vectorized Euler-Maclaurin evaluator valid on the whole plane away from
the pole.  The confluent hypergeometric family -- Kummer Phi, Tricomi Psi,
Whittaker W and its Barnes-integral form -- is implemented from scratch,
together with the leading z->0 behaviour of W split by the order mu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.special as sc

from .errors import (
    BranchCutError,
    ConfigError,
    ConvergenceError,
    PoleError,
    TailBoundError,
)

EULER_GAMMA = 0.57721566490153286060651209008240243

_INT_TOL = 1e-12


def _is_nonpositive_integer(s, tol=_INT_TOL):
    s = complex(s)
    return abs(s.imag) < tol and s.real < 0.5 and abs(s.real - round(s.real)) < tol


def pochhammer(lam, k):
    """Rising factorial lam (lam+1) ... (lam+k-1); equals 1 for k = 0."""
    if k < 0 or k != int(k):
        raise ConfigError("pochhammer order must be a nonnegative integer")
    out = complex(1.0)
    lam = complex(lam)
    for j in range(int(k)):
        out *= lam + j
    return out


def log_gamma(s):
    """Principal branch of log Gamma; rejects the poles at 0, -1, -2, ..."""
    arr = np.asarray(s, dtype=complex)
    if np.any((np.abs(arr.imag) < _INT_TOL)
              & (arr.real < 0.5)
              & (np.abs(arr.real - np.round(arr.real)) < _INT_TOL)):
        raise PoleError("log_gamma pole at a non-positive integer")
    out = sc.loggamma(arr)
    return out if isinstance(s, np.ndarray) else complex(out)


def digamma(s):
    """psi(s) = Gamma'(s)/Gamma(s); rejects non-positive integers."""
    arr = np.asarray(s, dtype=complex)
    if np.any((np.abs(arr.imag) < _INT_TOL)
              & (arr.real < 0.5)
              & (np.abs(arr.real - np.round(arr.real)) < _INT_TOL)):
        raise PoleError("digamma pole at a non-positive integer")
    out = sc.digamma(arr)
    return out if isinstance(s, np.ndarray) else complex(out)


def rgamma(s):
    """1/Gamma(s), zero at the poles of Gamma."""
    if _is_nonpositive_integer(s):
        return 0j
    return complex(np.exp(-sc.loggamma(complex(s))))


def gamma_fn(s):
    """Gamma(s) via the principal log branch."""
    return complex(np.exp(sc.loggamma(complex(s))))


# ---------------------------------------------------------------------------
# Hurwitz / Riemann zeta by Euler-Maclaurin.

# B_{2j}/(2j)! for j = 1..15
_B2J_OVER_FACT = np.array([
    sc.bernoulli(30)[2 * j] / math.factorial(2 * j) for j in range(1, 16)
])


def hurwitz_zeta(s, a=1.0, subtract_pole=False):
    """zeta(s, a) for complex s (scalar or ndarray), real a > 0.

    Euler-Maclaurin with the cutoff scaled to max |s| in the batch; this
    keeps the correction series safely convergent up to |Im s| ~ several
    hundred in double precision.  With subtract_pole the analytic part
    zeta(s, a) - 1/(s-1) is returned, finite at s = 1.
    """
    s_in = np.asarray(s, dtype=complex)
    sf = np.atleast_1d(s_in).ravel()
    if not subtract_pole and np.any(np.abs(sf - 1.0) < 1e-12):
        raise PoleError("zeta pole at s = 1")
    smax = float(np.max(np.abs(sf))) if sf.size else 1.0
    n_cut = max(24, int(0.6 * smax) + 12)
    ns = np.arange(n_cut, dtype=float) + a                  # a, a+1, ..., a+N-1
    # sum_{n<N} (n+a)^{-s}
    head = np.exp(-sf[:, None] * np.log(ns[None, :])).sum(axis=1)
    base = float(n_cut) + a
    lb = math.log(base)
    if subtract_pole:
        # (base^{1-s} - 1)/(s-1) = -lb*(e^w - 1)/w with w = (1-s)*lb, stable at s = 1
        w = (1.0 - sf) * lb
        small = np.abs(w) < 1e-2
        w_safe = np.where(small, 1.0, w)
        ratio = np.where(small,
                         -lb * (1.0 + w / 2.0 + w * w / 6.0 + w * w * w / 24.0),
                         -lb * (np.exp(w_safe) - 1.0) / w_safe)
        tail = ratio + 0.5 * np.exp(-sf * lb)
    else:
        tail = np.exp((1.0 - sf) * lb) / (sf - 1.0) + 0.5 * np.exp(-sf * lb)
    # correction sum: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * base^{-s-2j+1}
    rising = sf.copy()                                      # (s)_1
    power = np.exp((-sf - 1.0) * lb)                        # base^{-s-1}
    corr = _B2J_OVER_FACT[0] * rising * power
    for j in range(2, 16):
        rising = rising * (sf + (2 * j - 3)) * (sf + (2 * j - 2))
        power = power / (base * base)
        corr = corr + _B2J_OVER_FACT[j - 1] * rising * power
    out = (head + tail + corr).reshape(np.shape(s_in))
    return out if isinstance(s, np.ndarray) else complex(out)


def riemann_zeta(s):
    """zeta(s) on the whole plane, s != 1.

    Euler-Maclaurin for Re s >= -1/2; the reflection formula
    zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s) below, where
    direct summation would cancel catastrophically.
    """
    s_in = np.asarray(s, dtype=complex)
    sf = np.atleast_1d(s_in).ravel()
    out = np.empty_like(sf)
    right = sf.real >= -0.5
    if np.any(right):
        out[right] = np.atleast_1d(hurwitz_zeta(sf[right], 1.0)).ravel()
    if np.any(~right):
        sl = sf[~right]
        chi = np.exp(sl * math.log(2.0) + (sl - 1.0) * math.log(math.pi)
                     + sc.loggamma(1.0 - sl)) * np.sin(0.5 * math.pi * sl)
        out[~right] = chi * np.atleast_1d(hurwitz_zeta(1.0 - sl, 1.0)).ravel()
    out = out.reshape(np.shape(s_in))
    return out if isinstance(s, np.ndarray) else complex(out)


def dirichlet_beta(s):
    """L(s, chi_-4) = sum (-1)^k (2k+1)^{-s}, continued to the plane.

    The two Hurwitz pieces are evaluated with their common 1/(s-1) pole
    subtracted, so the difference stays finite at s = 1 as it should.
    """
    s_arr = np.asarray(s, dtype=complex)
    diff = (hurwitz_zeta(np.asarray(s_arr, dtype=complex), 0.25, subtract_pole=True)
            - hurwitz_zeta(np.asarray(s_arr, dtype=complex), 0.75, subtract_pole=True))
    out = np.exp(-s_arr * math.log(4.0)) * diff
    return out if isinstance(s, np.ndarray) else complex(out)


# ---------------------------------------------------------------------------
# Confluent hypergeometric family.

@dataclass(frozen=True)
class WhittakerParams:
    """Orders (k, mu) of the Whittaker W function."""
    k: complex
    mu: complex

    def validate_barnes(self):
        # The Barnes form degenerates when k +- mu + 1/2 is a nonnegative integer.
        for sign in (+1, -1):
            w = complex(self.k) + sign * complex(self.mu) + 0.5
            if abs(w.imag) < _INT_TOL and w.real > -0.5 and abs(w.real - round(w.real)) < _INT_TOL:
                raise ConfigError(
                    f"Barnes form invalid: k {'+' if sign > 0 else '-'} mu + 1/2 = {w.real:g} "
                    "is a nonnegative integer")


def kummer_phi(alpha, gamma, z, tol=1e-15):
    """Kummer's function Phi(alpha, gamma; z) by its power series.

    Stops once the next term is below tol*(1+|partial|) three times in a
    row; raises if gamma is a non-positive integer or 10^6 terms are hit.
    """
    if _is_nonpositive_integer(gamma):
        raise PoleError("kummer_phi undefined for gamma in {0, -1, -2, ...}")
    alpha = complex(alpha)
    gamma = complex(gamma)
    z = complex(z)
    term = complex(1.0)
    total = complex(1.0)
    small_in_a_row = 0
    for n in range(1, 10 ** 6 + 1):
        term *= (alpha + n - 1) / (gamma + n - 1) * z / n
        total += term
        if abs(term) < tol * (1.0 + abs(total)):
            small_in_a_row += 1
            if small_in_a_row == 3:
                return total
        else:
            small_in_a_row = 0
    raise ConvergenceError("kummer_phi: 10^6 terms without convergence")


def _psi_generic(alpha, gamma, z):
    # Two-series form, gamma not an integer.
    alpha = complex(alpha)
    gamma = complex(gamma)
    z = complex(z)
    c1 = gamma_fn(1.0 - gamma) * rgamma(1.0 + alpha - gamma)
    c2 = gamma_fn(gamma - 1.0) * rgamma(alpha)
    out = 0j
    if c1 != 0:
        out += c1 * kummer_phi(alpha, gamma, z)
    if c2 != 0:
        out += c2 * np.exp((1.0 - gamma) * np.log(z)) * kummer_phi(1.0 + alpha - gamma, 2.0 - gamma, z)
    return complex(out)


def tricomi_psi(alpha, gamma, z, eps=1e-6):
    """Tricomi's Psi(alpha, gamma; z) on the principal branch.

    Integer gamma is handled by evaluating at gamma(1 +- eps) and averaging,
    which cancels the simple pole in gamma of each series separately.
    """
    z = complex(z)
    if z == 0 or (z.imag == 0.0 and z.real < 0.0):
        raise BranchCutError("tricomi_psi: z on the cut along the negative real axis")
    gamma = complex(gamma)
    if abs(gamma.imag) < 1e-9 and abs(gamma.real - round(gamma.real)) < 1e-9:
        g0 = round(gamma.real)
        delta = eps * max(1.0, abs(g0))
        vp = _psi_generic(alpha, g0 + delta, z)
        vm = _psi_generic(alpha, g0 - delta, z)
        val = 0.5 * (vp + vm)
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise ConvergenceError("tricomi_psi: integer-gamma limit did not converge")
        return val
    return _psi_generic(alpha, gamma, z)


def whittaker_w(params: WhittakerParams, z):
    """W_{k,mu}(z) = z^{mu+1/2} e^{-z/2} Psi(1/2 - k + mu, 2 mu + 1; z)."""
    z = complex(z)
    if z == 0 or (z.imag == 0.0 and z.real < 0.0):
        raise BranchCutError("whittaker_w: z on the cut along the negative real axis")
    k = complex(params.k)
    mu = complex(params.mu)
    psi = tricomi_psi(0.5 - k + mu, 2.0 * mu + 1.0, z)
    return complex(np.exp((mu + 0.5) * np.log(z) - 0.5 * z) * psi)


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def whittaker_w_barnes(params: WhittakerParams, z, height=80.0, arg_z=None,
                       tail_tol=1e-6):
    """W_{k,mu}(z) through its Barnes integral, truncated at |Im s| = height.

    Valid for |arg z| < 3pi/2; pass arg_z explicitly to evaluate on the
    continuation sheets beyond the principal argument.  The contour offset
    is chosen between the pole families of the integrand; parameter sets
    that would force contour loops are rejected.
    """
    params.validate_barnes()
    k = complex(params.k)
    mu = complex(params.mu)
    z = complex(z)
    if z == 0:
        raise BranchCutError("whittaker_w_barnes: z = 0")
    theta = float(arg_z) if arg_z is not None else math.atan2(z.imag, z.real)
    if abs(theta) >= 1.5 * math.pi - 1e-9:
        raise ConfigError("whittaker_w_barnes: |arg z| must be < 3pi/2")
    log_z = math.log(abs(z)) + 1j * theta
    # Right pole families start at Re s = Re(1/2 - k -+ mu); the line must
    # sit strictly between them and the poles of Gamma(s) at Re s <= 0.
    rmin = min((0.5 - k - mu).real, (0.5 - k + mu).real)
    if rmin <= 0.05:
        raise ConfigError("whittaker_w_barnes: pole families overlap; contour loops unsupported")
    c = min(0.75, 0.5 * rmin)
    norm = sc.loggamma(0.5 - k - mu) + sc.loggamma(0.5 - k + mu)

    nodes, weights = _gl(20)
    n_panels = max(4, int(math.ceil(height / 2.0)))
    edges = np.linspace(-height, height, 2 * n_panels + 1)
    mids = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    t = (mids[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    s = c + 1j * t
    lg = (sc.loggamma(s) + sc.loggamma(-s - k - mu + 0.5) + sc.loggamma(-s - k + mu + 0.5)
          - norm + s * log_z)
    integral = np.sum(np.exp(lg) * w)

    decay = 1.5 * math.pi - abs(theta)
    edge = 0.5 * (abs(np.exp(lg[0])) + abs(np.exp(lg[-1])))
    tail = 4.0 * edge / decay
    if tail > tail_tol:
        raise TailBoundError(f"whittaker_w_barnes: tail estimate {tail:.2e} exceeds {tail_tol:g}")
    value = np.exp(-0.5 * z + k * log_z) * integral / (2.0 * math.pi)
    return complex(value)


def whittaker_small_z(params: WhittakerParams, z):
    """Leading z->0 term of W_{k,mu}(z) and the exponent of the error order.

    The five cases are split on mu: Re mu >= 1/2 (mu != 1/2), mu = 1/2,
    0 < Re mu < 1/2, Re mu = 0 with mu != 0, and mu = 0 (logarithmic).
    """
    k = complex(params.k)
    mu = complex(params.mu)
    z = complex(z)
    if abs(z) >= 1.0:
        raise ConfigError("whittaker_small_z: needs |z| < 1")
    log_z = np.log(z)
    if abs(mu) < _INT_TOL:
        lead = -np.exp(0.5 * log_z) * rgamma(0.5 - k) * (log_z + digamma(0.5 - k) + 2.0 * EULER_GAMMA)
        return complex(lead), 1.5
    if abs(mu - 0.5) < _INT_TOL:
        return complex(rgamma(1.0 - k)), 1.0
    if abs(mu.real) < _INT_TOL:
        lead = (gamma_fn(-2.0 * mu) * rgamma(0.5 - mu - k) * np.exp((mu + 0.5) * log_z)
                + gamma_fn(2.0 * mu) * rgamma(0.5 + mu - k) * np.exp((0.5 - mu) * log_z))
        return complex(lead), 1.5
    if mu.real > 0.0:
        lead = gamma_fn(2.0 * mu) * rgamma(0.5 + mu - k) * np.exp((0.5 - mu) * log_z)
        order = 1.5 - mu.real if mu.real >= 0.5 else mu.real + 0.5
        return complex(lead), order
    raise ConfigError("whittaker_small_z: Re mu < 0 matches no expansion case")
