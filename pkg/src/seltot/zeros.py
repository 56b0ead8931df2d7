"""Non-trivial zero ordinates: scanning, refinement, persistence.

Zeros are located as sign changes of the rotated completed function
Z(t) = e^{i theta(t)} F(1/2 + it), which is real on the critical line for
the real-coefficient builtins, then polished by Newton iteration.  Tables
are plain text, one ordinate per line, with a provenance header; re-scans
append above the previous height and never reorder existing lines.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.special as sc

from .errors import ConfigError, DataError, NumericsError, ScanError
from .lfunctions import DATA_ENV_VAR, _PACKAGE_DATA, derivative_at

_REFINE_TARGET = 1e-8
_SIMPLE_FLOOR = 1e-8


@dataclass
class ZeroTable:
    """Ordinates of zeros 1/2 + i gamma with gamma > 0, strictly increasing."""
    ordinates: np.ndarray
    assumed_beta: float = 0.5
    source: str = ""

    def __post_init__(self):
        self.ordinates = np.asarray(self.ordinates, dtype=float)
        if self.ordinates.size and np.any(np.diff(self.ordinates) <= 0):
            raise DataError("zero table must be strictly increasing")
        if np.any(self.ordinates <= 0):
            raise DataError("zero table holds positive ordinates only")
        self._weights = {}

    def __len__(self):
        return int(self.ordinates.size)

    def height(self):
        return float(self.ordinates[-1]) if len(self) else 0.0

    def below(self, T):
        return self.ordinates[self.ordinates < T]

    def zeros(self, half="upper"):
        """Zero locations beta + i gamma (conjugates for the lower half)."""
        sign = 1.0 if half == "upper" else -1.0
        return self.assumed_beta + 1j * sign * self.ordinates

    def save(self, path):
        path = Path(path)
        lines = [f"# source: {self.source}", f"# assumed_beta: {self.assumed_beta:.17g}"]
        lines += [f"{g:.17g}" for g in self.ordinates]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path):
        path = Path(path)
        if not path.exists():
            raise DataError(f"zero table not found: {path}")
        source = ""
        beta = 0.5
        ords = []
        for line in path.read_text(encoding="utf-8").splitlines():
            body = line.strip()
            if body.startswith("#"):
                if "source:" in body:
                    source = body.split("source:", 1)[1].strip()
                elif "assumed_beta:" in body:
                    beta = float(body.split("assumed_beta:", 1)[1])
                continue
            if body:
                ords.append(float(body))
        return cls(np.asarray(ords), assumed_beta=beta, source=source)


def phase_theta(F, t):
    """Rotation angle theta(t) making e^{i theta} F(1/2 + it) real.

    Classical gamma factor for zeta; t log Q + Im log Gamma(1/2 + mu + it)
    for the (r, lambda) = (1, 1) builtins with root number +1.
    """
    t = np.asarray(t, dtype=float)
    if F.fe is None:
        out = np.imag(sc.loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)
    else:
        out = t * math.log(F.fe.Q) + np.imag(sc.loggamma(0.5 + F.fe.mu + 1j * t))
    return out


def completed_real(F, t):
    """Z(t) = e^{i theta(t)} F(1/2 + it); real on the line for the builtins."""
    t = np.asarray(t, dtype=float)
    vals = F.evaluate(0.5 + 1j * t)
    z = np.exp(1j * phase_theta(F, t)) * vals
    return z.real if isinstance(t, np.ndarray) and t.shape else float(np.real(z))


def refine_zero(F, t0, target=_REFINE_TARGET, max_steps=40):
    """Newton-polish an ordinate until |F(1/2 + i t)| < target."""
    t = float(t0)
    h = 1e-6
    for _ in range(max_steps):
        val = complex(F.evaluate(0.5 + 1j * t))
        if abs(val) < target:
            return t
        z0 = completed_real(F, t)
        zp = (completed_real(F, t + h) - completed_real(F, t - h)) / (2.0 * h)
        if zp == 0.0:
            break
        step = z0 / zp
        if abs(step) > 0.5:
            step = math.copysign(0.5, step)
        t -= step
    val = complex(F.evaluate(0.5 + 1j * t))
    if abs(val) < target:
        return t
    raise NumericsError(f"zero refinement stalled near t = {t0:.6f} (|F| = {abs(val):.2e})")


def scan_zeros(F, t_min, t_max, step=0.01):
    """Ordinates of sign changes of Z on [t_min, t_max], Newton-refined.

    Raises ScanError naming the interval if bisection inside a bracketing
    step fails to keep the sign change.
    """
    if t_max <= t_min:
        return np.empty(0)
    grid = np.arange(max(t_min, step), t_max + step, step)
    vals = completed_real(F, grid)
    flips = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    out = []
    for i in flips:
        a, b = float(grid[i]), float(grid[i + 1])
        fa, fb = float(vals[i]), float(vals[i + 1])
        for _ in range(60):
            m = 0.5 * (a + b)
            fm = completed_real(F, m)
            if fa * fm <= 0:
                b, fb = m, fm
            else:
                a, fa = m, fm
            if b - a < 1e-9:
                break
        else:
            raise ScanError(f"bisection failed in [{grid[i]:.4f}, {grid[i+1]:.4f}]",
                            interval=(float(grid[i]), float(grid[i + 1])))
        gamma = refine_zero(F, 0.5 * (a + b))
        if t_min < gamma <= t_max:
            out.append(gamma)
    out = np.asarray(sorted(out))
    # collapse accidental duplicates from refinement drift
    if out.size:
        keep = np.concatenate([[True], np.diff(out) > 1e-6])
        out = out[keep]
    return out


def assert_simple(F, table, sample=None):
    """Check |F'(rho)| exceeds the simplicity floor on (a sample of) the table."""
    ords = table.ordinates if sample is None else table.ordinates[:sample]
    for g in ords:
        d = derivative_at(F, table.assumed_beta + 1j * float(g))
        if abs(d) <= _SIMPLE_FLOOR:
            raise NumericsError(f"zero at t = {g:.6f} fails the simplicity floor")


def zero_table_path(name, for_write=False):
    filename = f"{name}_zeros.txt"
    env = os.environ.get(DATA_ENV_VAR)
    if env:
        cand = Path(env) / filename
        if for_write or cand.exists():
            return cand
    return _PACKAGE_DATA / filename


def builtin_zero_table(F):
    """Load the persisted table for a builtin."""
    return ZeroTable.load(zero_table_path(F.name))


def write_zero_table(F, t_max, path=None, step=0.01):
    """Scan up to t_max and persist; idempotent re-runs append above the
    previous height and leave existing lines untouched."""
    path = Path(path) if path is not None else zero_table_path(F.name, for_write=True)
    if path.exists():
        existing = ZeroTable.load(path)
        start = existing.height()
        old = existing.ordinates
        source = existing.source
    else:
        start, old = 0.0, np.empty(0)
        source = (f"{F.name}: sign-change scan of the rotated completed function "
                  f"on the critical line, Newton-refined to |F| < {_REFINE_TARGET:g}")
    if t_max <= start:
        table = ZeroTable(old, source=source) if old.size else ZeroTable(old, source=source)
        table.save(path)
        return table
    fresh = scan_zeros(F, start, t_max, step=step)
    if old.size and fresh.size:
        fresh = fresh[fresh > old[-1] + 1e-6]
    merged = np.concatenate([old, fresh])
    table = ZeroTable(merged, source=source)
    table.save(path)
    return table
