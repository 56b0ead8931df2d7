"""Zero-sum and contour representations of the associated function f(z, F).

Two independent routes to the same value on the upper half-plane: the
partial zero sum  sum_rho e^{rho z} zeta(rho - 1)/F'(rho)  over tabulated
zeros, and the contour assembly  2 pi i f = f1 + f2 + f3  with f1 a ray
integral on Re s = a, f2 a finite broken path below the first zero, and
f3 the meromorphic series  -e^{bz} sum g(n) / (n^b (z - log n)).  The
lower half-plane mirror produces f^-(z, F).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, PoleError, RegionError, TailBoundError
from .lfunctions import derivative_at
from .quadrature import integrate_path, integrate_segment
from .special import riemann_zeta

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class ContourSpec:
    """Parameters of the broken contour: abscissas a < 0 < b and the dip
    height alpha below the first zero."""
    a: float = -0.25
    b: float = 2.5
    alpha: float = 7.0
    T: float = 200.0

    def __post_init__(self):
        if not (-1.5 < self.a < 0.0):
            raise ConfigError("contour abscissa must satisfy -3/2 < a < 0")
        if self.b < 2.5:
            raise ConfigError("contour needs b >= 5/2")
        if self.alpha <= 0.0:
            raise ConfigError("contour dip height alpha must be positive")


def default_contour(F, table=None, a=-0.25, b=2.5):
    """Rekos-style contour; alpha is half the first tabulated ordinate."""
    if F.fe is not None:
        # keep a off the poles of Gamma(s +- mu)
        for m in range(3):
            for sign in (1.0, -1.0):
                if abs(a - (sign * F.fe.mu - m)) < 1e-9:
                    raise ConfigError(f"a = {a:g} sits on a pole of the gamma factors")
    alpha = 0.5 * float(table.ordinates[0]) if table is not None and len(table) else 7.0
    return ContourSpec(a=a, b=b, alpha=alpha)


@dataclass(frozen=True)
class RepresentationValue:
    """A value of f together with its truncation-error estimate."""
    value: complex
    trunc_error: float
    tag: str

    def __post_init__(self):
        if not (self.trunc_error >= 0.0 and math.isfinite(self.trunc_error)):
            raise ConfigError("truncation error must be finite and nonnegative")


# ---------------------------------------------------------------------------
# Zero-sum representation.

def zero_sum_weights(F, table):
    """Cached e^{rho z}-free weights zeta(rho - 1)/F'(rho) per zero."""
    cached = table._weights.get(F.name)
    if cached is not None:
        return cached
    rho = table.zeros("upper")
    num = riemann_zeta(rho - 1.0)
    den = np.array([derivative_at(F, r) for r in rho])
    if np.any(np.abs(den) < 1e-8):
        bad = table.ordinates[np.abs(den) < 1e-8]
        raise PoleError(f"zero at t = {bad[0]:.6f} is numerically non-simple")
    w = num / den
    table._weights[F.name] = w
    return w


def _zero_density(F, T):
    return F.degree_dF / (2.0 * math.pi) * math.log(T + math.e) + 0.3


def zero_sum_partial(F, z, table, T, half="upper"):
    """Partial zero sum over 0 < Im rho < T (or its lower mirror).

    The truncation estimate follows the e^{-y Im rho} tail model: largest
    weight times local zero density times the first omitted exponential.
    """
    z = complex(z)
    if half == "upper":
        if z.imag <= 0:
            raise RegionError("upper zero sum needs Im z > 0")
    elif half == "lower":
        if z.imag >= 0:
            raise RegionError("lower zero sum needs Im z < 0")
        if not F.real_coefficients:
            raise ConfigError("lower zero table mirrors the upper one only for real coefficients")
    else:
        raise ConfigError("half must be 'upper' or 'lower'")
    if T > table.height() + 1e-9:
        raise ConfigError(f"zero table reaches {table.height():.3f} < T = {T:g}")
    w = zero_sum_weights(F, table)
    mask = table.ordinates < T
    beta = table.assumed_beta
    y = abs(z.imag)
    if half == "upper":
        terms = w[mask] * np.exp((beta + 1j * table.ordinates[mask]) * z)
    else:
        terms = np.conj(w[mask]) * np.exp((beta - 1j * table.ordinates[mask]) * z)
    # trivial zeros on the imaginary axis would join the sum here; the
    # bundled functions have none (real shift mu), so the hook is empty.
    for rho0 in F.trivial_zeros_on_imaginary_axis():
        if (half == "upper") == (rho0.imag > 0):
            terms = np.append(terms, riemann_zeta(rho0 - 1.0) / derivative_at(F, rho0)
                              * np.exp(rho0 * z))
    value = complex(np.sum(terms)) if terms.size else 0j
    peak = float(np.max(np.abs(w))) * math.exp(beta * z.real) if len(table) else 1.0
    err = peak * _zero_density(F, T) * math.exp(-y * T) / max(y, 1e-12)
    return RepresentationValue(value, err, "zero_sum")


def pick_grouping_height(F, n, table, a=-0.25, b=2.5):
    """A height T_n in [n, n+1] keeping its distance from tabulated zeros
    and maximizing min |F| over a fixed abscissa set; deterministic."""
    n = int(n)
    if table.height() < n + 1:
        raise ConfigError(f"zero table must cover heights up to {n + 1}")
    ts = n + 0.025 + 0.95 * np.arange(39) / 38.0
    near = table.ordinates[(table.ordinates > n - 0.5) & (table.ordinates < n + 1.5)]
    if near.size:
        ok = np.all(np.abs(ts[:, None] - near[None, :]) >= 0.05, axis=1)
    else:
        ok = np.ones(ts.shape, dtype=bool)
    if not np.any(ok):
        raise ConfigError(f"no admissible height in [{n}, {n + 1}]: every grid line "
                          "comes within 0.05 of a tabulated zero")
    ts = ts[ok]
    sigmas = np.array([a, 0.0, 0.5, 1.0, b])
    pts = (sigmas[:, None] + 1j * ts[None, :]).ravel()
    vals = np.abs(np.asarray(F.evaluate(pts)).reshape(sigmas.size, ts.size))
    score = vals.min(axis=0)
    return float(ts[int(np.argmax(score))])


# ---------------------------------------------------------------------------
# Contour representation.

def _reciprocal_integrand(F, z):
    z = complex(z)

    def f(s):
        s = np.asarray(s, dtype=complex)
        return riemann_zeta(s - 1.0) / F.evaluate(s) * np.exp(s * z)

    return f


def f3_series(F, z, b=2.5, N=2000, half="upper"):
    """The series  -e^{bz} sum_n g(n)/(n^b (z - log n))  (sign flipped for
    the lower mirror), with the tail beyond N summed exactly through

        sum_{n>N} g(n) n^{-b} / (z - log n)
            = -int_0^inf e^{zu} [zeta(b+u-1)/F(b+u) - sum_{n<=N} g(n) n^{-b-u}] du,

    valid for Re z < log(N+1).  Poles at z = log n, n <= N, stay explicit.
    """
    z = complex(z)
    if b < 2.5:
        raise ConfigError("f3 series needs b >= 5/2")
    x = z.real
    if x >= math.log(N + 1) - 0.7:
        raise ConfigError(f"f3 tail integral needs Re z < log(N+1) - 0.7; "
                          f"increase N beyond {N}")
    sign = -1.0 if half == "upper" else 1.0
    g = F.g_table(N)[1:N + 1]
    log_n = np.log(np.arange(1, N + 1, dtype=float))
    dist = np.abs(z - log_n)
    if np.any(dist < 1e-8):
        n_bad = int(np.argmin(dist)) + 1
        raise PoleError(f"z within 1e-8 of the pole at log {n_bad}")
    inv_nb = np.exp(-b * log_n)
    head = complex(np.sum(g * inv_nb / (z - log_n)))

    rate = math.log(N + 1) - x
    partial_scale = float(np.sum(np.abs(g) * inv_nb))

    def tail_integrand(u):
        u = np.asarray(u, dtype=complex)
        w = b + u
        partial = np.exp(-np.outer(w, log_n)) @ (g * 1.0)
        rest = riemann_zeta(w - 1.0) / F.evaluate(w) - partial
        return np.exp(z * u) * rest

    # The subtraction has a noise floor ~1e-16 * partial_scale; stop the
    # integral where the true remainder sinks below it, and match the
    # quadrature target to the amplified noise level.
    rest0 = abs(complex(tail_integrand(np.zeros(1))[0]))
    noise = 1e-16 * max(partial_scale, 1.0)
    span = math.log(max(rest0 / noise, 10.0)) / rate
    q_tol = max(1e-14, 4.0 * noise * max(1.0, math.exp(x * span)))
    tail_int, q_err = integrate_segment(tail_integrand, 0.0, span, abs_tol=q_tol)
    # sum_{n>N} = -tail_int;  value = sign * e^{bz} (head + tail)
    value = sign * np.exp(b * z) * (head - tail_int)
    scale = abs(np.exp(b * z))
    beyond = (rest0 * math.exp(-rate * span) + noise) / max(rate - x, 0.2)
    err = scale * (q_err + q_tol + beyond)
    return RepresentationValue(complex(value), float(err), "contour")


def _ray_integral(F, z, a, t0, t1, abs_tol):
    """Integral of zeta(s-1)/F(s) e^{sz} along s = a + it, t0 -> t1, with
    geometric panels away from the real axis."""
    f = _reciprocal_integrand(F, z)
    total = 0j
    err = 0.0
    # panel edges grow away from whichever end is closer to t = 0
    edges = [t0]
    t = t0
    width = 2.0
    step = 1.0 if t1 > t0 else -1.0
    while (t1 - t) * step > 0:
        t = t + step * width if (t1 - t) * step > width else t1
        edges.append(t)
        width = min(width * 1.4, 10.0)
    for u0, u1 in zip(edges[:-1], edges[1:]):
        v, e = integrate_segment(f, complex(a, u0), complex(a, u1), abs_tol)
        total += v
        err += e
    return total, err


def _tilted_tail(F, z, start, direction, rate, abs_tol):
    """Integral up a left-tilted ray where e^{sz} decays at the given rate.

    Legitimate deformation of the vertical tail: the integrand has no
    singularity left of Re s = a above the real axis (zeros sit in the
    critical strip, trivial zeros on the real axis), and the connecting
    arc vanishes for Re z > 0.
    """
    length = 46.0 / rate
    f = _reciprocal_integrand(F, z)
    total = 0j
    err = 0.0
    r0 = 0.0
    width = min(8.0, length)
    while r0 < length:
        r1 = min(length, r0 + width)
        v, e = integrate_segment(f, start + r0 * direction, start + r1 * direction, abs_tol)
        total += v
        err += e
        r0 = r1
        width = min(width * 1.5, 25.0)
    return total, err


def _f1_one_sided(F, z, spec, height, abs_tol, tail_tol, lower=False):
    z = complex(z)
    y = abs(z.imag)
    x = z.real
    sgn = -1.0 if lower else 1.0
    f = _reciprocal_integrand(F, z)
    if x > 0.02 and (height is None or 30.0 / max(y, 1e-12) > height):
        # bend the ray up-left at 45 degrees once past the dangerous strip;
        # decay rate (x + y)/sqrt(2) replaces the slow e^{-yt}
        H0 = 6.0
        up, err = _ray_integral(F, z, spec.a, 0.0, sgn * H0, abs_tol)
        rate = (x + y) * math.sqrt(0.5)
        tilt_dir = np.exp(1j * sgn * 0.75 * math.pi)
        tilt, terr = _tilted_tail(F, z, complex(spec.a, sgn * H0), tilt_dir, rate, abs_tol)
        return up + tilt, err + terr + 1e-15
    H = float(height) if height is not None else max(200.0, 30.0 / max(y, 1e-12))
    end = abs(complex(f(np.array([complex(spec.a, sgn * H)]))[0]))
    est = end * (1.0 + 2.0 / max(y * H, 0.1)) / max(y, 1e-12) * 1.5
    if est > tail_tol:
        raise TailBoundError(f"f1 tail estimate {est:.2e} at height {H:g} exceeds {tail_tol:g}; "
                             "increase the height")
    val, err = _ray_integral(F, z, spec.a, 0.0, sgn * H, abs_tol)
    return val, err + est


def f1_quadrature(F, z, spec=None, height=None, abs_tol=1e-11, tail_tol=1e-6):
    """f1(z, F) = int_{a+i inf}^{a} zeta(s-1)/F(s) e^{sz} ds for Im z > 0."""
    z = complex(z)
    if z.imag <= 0:
        raise RegionError("f1 needs Im z > 0")
    spec = spec or ContourSpec()
    up, err = _f1_one_sided(F, z, spec, height, abs_tol, tail_tol)
    return RepresentationValue(complex(-up), float(err), "contour")


def f1_minus_quadrature(F, z, spec=None, height=None, abs_tol=1e-11, tail_tol=1e-6):
    """f1^-(z, F) = int_{a}^{a-i inf} zeta(s-1)/F(s) e^{sz} ds for Im z < 0."""
    z = complex(z)
    if z.imag >= 0:
        raise RegionError("f1^- needs Im z < 0")
    spec = spec or ContourSpec()
    down, err = _f1_one_sided(F, z, spec, height, abs_tol, tail_tol, lower=True)
    return RepresentationValue(complex(down), float(err), "contour")


def f2_quadrature(F, z, spec=None, abs_tol=1e-10, half="upper"):
    """f2(z, F) over the broken path through (a+b)/2 +- i alpha (entire in z).

    The upper path runs a -> b below the first zero; its mirror is
    traversed b -> a so that the lower contour stays positively oriented
    (this is the orientation that makes f2 + f2^- pick up the residue at
    s = 2 with the printed sign).
    """
    z = complex(z)
    spec = spec or ContourSpec()
    f = _reciprocal_integrand(F, z)
    if half == "upper":
        pts = [complex(spec.a, 0.0), complex(0.5 * (spec.a + spec.b), spec.alpha),
               complex(spec.b, 0.0)]
    else:
        pts = [complex(spec.b, 0.0), complex(0.5 * (spec.a + spec.b), -spec.alpha),
               complex(spec.a, 0.0)]
    val, err = integrate_path(f, pts, abs_tol)
    return RepresentationValue(complex(val), float(err), "contour")


def f_contour(F, z, spec=None, height=None, N=2000, table=None):
    """f(z, F) = (f1 + f2 + f3) / 2 pi i on the upper half-plane."""
    z = complex(z)
    if z.imag <= 0:
        raise RegionError("contour representation needs Im z > 0")
    spec = spec or (default_contour(F, table) if table is not None else ContourSpec())
    p1 = f1_quadrature(F, z, spec, height)
    p2 = f2_quadrature(F, z, spec)
    p3 = f3_series(F, z, spec.b, N, half="upper")
    value = (p1.value + p2.value + p3.value) / TWO_PI_I
    err = (p1.trunc_error + p2.trunc_error + p3.trunc_error) / (2.0 * math.pi)
    return RepresentationValue(complex(value), float(err), "contour")


def f_minus_contour(F, z, spec=None, height=None, N=2000, table=None):
    """f^-(z, F) = (f1^- + f2^- + f3^-) / 2 pi i on the lower half-plane."""
    z = complex(z)
    if z.imag >= 0:
        raise RegionError("lower contour representation needs Im z < 0")
    spec = spec or (default_contour(F, table) if table is not None else ContourSpec())
    p1 = f1_minus_quadrature(F, z, spec, height)
    p2 = f2_quadrature(F, z, spec, half="lower")
    p3 = f3_series(F, z, spec.b, N, half="lower")
    value = (p1.value + p2.value + p3.value) / TWO_PI_I
    err = (p1.trunc_error + p2.trunc_error + p3.trunc_error) / (2.0 * math.pi)
    return RepresentationValue(complex(value), float(err), "contour")


def contour_box_integral(F, z, x0, x1, y0, y1, abs_tol=1e-10):
    """Counterclockwise rectangle integral of zeta(s-1)/F(s) e^{sz}; equals
    2 pi i times the enclosed residues when F has no zero on the boundary."""
    f = _reciprocal_integrand(F, complex(z))
    pts = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1),
           complex(x0, y0)]
    val, err = integrate_path(f, pts, abs_tol)
    return complex(val), float(err)
