"""Exact truncations of the closed-form dimension formulas for two-branch
Cantor ratio schedules.

Everything reduces to the table L_k = sum_{i<=k} |log2 r_i|: each dimension
is a sup/inf of n / (L_{k+n} - L_k) over window positions k and widths n,
with the quasi variants restricting to windows that are deep relative to
their start (L_{k+n} - L_k >= delta * L_k).  Rational exponent schedules run
on an exact scaled-integer fast path; irrational ones fall back to float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .generators import RatioSchedule
from .setcore import DomainError

__all__ = [
    "LogLengthTable",
    "FormulaResult",
    "upper_box_formula",
    "lower_box_formula",
    "assouad_formula",
    "lower_assouad_formula",
    "quasi_assouad_formula",
    "quasi_lower_formula",
    "qa_curve",
    "six_values",
    "product_bounds",
    "ordering_check",
    "geometric_n_grid",
]

CONVERGENCE_TOL = 0.02


class LogLengthTable:
    """Cumulative log-lengths of a ratio schedule: L[k] = sum_{i<=k} e_i.

    Stored as a scaled int64 array (exact) when all exponents are rational
    with a modest common denominator, else as float64.
    """

    __slots__ = ("N", "L", "denom", "inf_positive", "rho0_exp")

    def __init__(self, L: np.ndarray, denom: int | None, inf_positive: bool,
                 rho0_exp: float | None):
        self.L = L
        self.denom = denom
        self.N = len(L) - 1
        self.inf_positive = inf_positive
        self.rho0_exp = rho0_exp

    @classmethod
    def from_schedule(cls, schedule: RatioSchedule) -> "LogLengthTable":
        counts = [c for c, _ in schedule.segments]
        exps = [e for _, e in schedule.segments]
        rho0_exp = None
        if schedule.inf_positive:
            rho0_exp = max(float(e) for e in exps)
        if schedule.is_rational():
            denom = 1
            for e in exps:
                denom = denom * e.denominator // math.gcd(denom, e.denominator)
            if denom <= 1 << 20:
                scaled = [int(e * denom) for e in exps]
                total = sum(c * v for c, v in zip(counts, scaled))
                if total < 1 << 62:
                    steps = np.repeat(
                        np.asarray(scaled, dtype=np.int64),
                        np.asarray(counts, dtype=np.int64),
                    )
                    L = np.concatenate(
                        [np.zeros(1, dtype=np.int64), np.cumsum(steps, dtype=np.int64)]
                    )
                    return cls(L, denom, schedule.inf_positive, rho0_exp)
        steps = np.repeat(
            np.asarray([float(e) for e in exps], dtype=np.float64),
            np.asarray(counts, dtype=np.int64),
        )
        L = np.concatenate([np.zeros(1), np.cumsum(steps)])
        return cls(L, None, schedule.inf_positive, rho0_exp)

    def value(self, n: int, dL) -> float:
        """n / (window log-length), honoring the integer scaling."""
        if self.denom is not None:
            return n * self.denom / float(dL)
        return n / float(dL)


@dataclass
class FormulaResult:
    value: float
    witness_n: int | None
    witness_k: int | None
    tail_start: int | None = None
    delta: float | None = None
    converged: bool | None = None

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "witness_n": self.witness_n,
            "witness_k": self.witness_k,
            "tail_start": self.tail_start,
            "delta": self.delta,
            "converged": self.converged,
        }


def _as_table(T) -> LogLengthTable:
    if isinstance(T, LogLengthTable):
        return T
    if isinstance(T, RatioSchedule):
        return LogLengthTable.from_schedule(T)
    raise TypeError(f"expected LogLengthTable or RatioSchedule, got {type(T)!r}")


def _require_length(T: LogLengthTable, minimum: int = 16) -> None:
    if T.N < minimum:
        raise DomainError(f"table too short: N={T.N} < {minimum}")


def geometric_n_grid(N: int, ratio: float = 1.15) -> list:
    """Window widths {ceil(ratio^m)} within [1, N/2], deduplicated."""
    if N < 2:
        raise DomainError("table too short for any window")
    top = max(1, N // 2)
    grid = []
    x = 1.0
    while True:
        n = math.ceil(x)
        if n > top:
            break
        if not grid or n != grid[-1]:
            grid.append(n)
        x *= ratio
    return grid


# ---------------------------------------------------------------------------
# box dimensions: tail extrema of n / L_n


def _box(T, tail_frac: float, upper: bool) -> FormulaResult:
    T = _as_table(T)
    _require_length(T)
    tail_start = max(1, int(math.floor(T.N * tail_frac)))
    ns = np.arange(tail_start, T.N + 1, dtype=np.float64)
    Ls = T.L[tail_start:].astype(np.float64)
    vals = ns / Ls
    if T.denom is not None:
        vals = vals * T.denom
    idx = int(np.argmax(vals)) if upper else int(np.argmin(vals))
    n = tail_start + idx
    return FormulaResult(
        value=float(vals[idx]),
        witness_n=n,
        witness_k=0,
        tail_start=tail_start,
    )


def upper_box_formula(T, tail_frac: float = 0.25) -> FormulaResult:
    """Tail-sup of n / L_n as the limsup proxy.

    The tail must contain a full oscillation of the schedule; for geometric
    stage schedules with growth <= 4 the default quarter-tail includes the
    previous stage boundary.
    """
    return _box(T, tail_frac, upper=True)


def lower_box_formula(T, tail_frac: float = 0.25) -> FormulaResult:
    return _box(T, tail_frac, upper=False)


# ---------------------------------------------------------------------------
# Assouad-family formulas: window extrema with admissibility


def _delta_fraction(delta) -> Fraction:
    if isinstance(delta, Fraction):
        return delta
    return Fraction(delta).limit_denominator(10**9)


def _window_extremum(T: LogLengthTable, delta, n_grid, upper: bool) -> FormulaResult:
    """sup (upper) or inf (lower) over n in grid and admissible k of n/(dL).

    Admissible k at width n: L[k+n] - L[k] >= delta * L[k]; delta None or 0
    admits every k.
    """
    grid = n_grid if n_grid is not None else geometric_n_grid(T.N)
    if not grid:
        raise DomainError("empty window grid")
    L = T.L
    best = None
    witness = (None, None)
    dfrac = None
    if delta:
        dfrac = _delta_fraction(delta)
    for n in grid:
        if n < 1 or n > T.N:
            continue
        d = L[n:] - L[:-n]
        if dfrac is not None:
            starts = L[: len(d)]
            if T.denom is not None:
                mask = d * dfrac.denominator >= starts * dfrac.numerator
            else:
                mask = d >= starts * float(dfrac)
            if not mask.any():
                continue
            cand = d[mask]
            ks = np.nonzero(mask)[0]
        else:
            cand = d
            ks = None
        if upper:
            i = int(np.argmin(cand))  # smallest window -> largest value
        else:
            i = int(np.argmax(cand))
        k = int(ks[i]) if ks is not None else i
        val = T.value(n, cand[i])
        if best is None or (upper and val > best) or (not upper and val < best):
            best = val
            witness = (n, k)
    if best is None:
        raise DomainError(
            f"no admissible window at delta={delta}; table too short for this depth"
        )
    return FormulaResult(
        value=best,
        witness_n=witness[0],
        witness_k=witness[1],
        delta=float(delta) if delta else 0.0,
    )


def assouad_formula(T, n_grid=None) -> FormulaResult:
    """sup over window widths of n / (min window log-length)."""
    T = _as_table(T)
    _require_length(T)
    return _window_extremum(T, None, n_grid, upper=True)


def lower_assouad_formula(T, n_grid=None) -> FormulaResult:
    """inf over window widths of n / (max window log-length)."""
    T = _as_table(T)
    _require_length(T)
    return _window_extremum(T, None, n_grid, upper=False)


def quasi_assouad_formula(T, delta, n_grid=None) -> FormulaResult:
    T = _as_table(T)
    _require_length(T)
    if not delta or delta <= 0:
        raise DomainError("delta must be > 0 (use assouad_formula for delta = 0)")
    if not T.inf_positive:
        raise DomainError(
            "quasi formula requires a schedule with inf r_k > 0 (inf_positive unset)"
        )
    return _window_extremum(T, delta, n_grid, upper=True)


def quasi_lower_formula(T, delta, n_grid=None) -> FormulaResult:
    T = _as_table(T)
    _require_length(T)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    if delta > 0 and not T.inf_positive:
        raise DomainError(
            "quasi formula requires a schedule with inf r_k > 0 (inf_positive unset)"
        )
    return _window_extremum(T, delta if delta else None, n_grid, upper=False)


def qa_curve(T, delta_grid, n_grid=None, tol: float = CONVERGENCE_TOL):
    """Evaluate the quasi upper formula along a decreasing delta grid.

    Returns (curve, limit FormulaResult); the limit is the value at the
    smallest delta, flagged converged when the last two values differ < tol.
    """
    deltas = list(delta_grid)
    if len(deltas) < 3 or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("delta grid must be decreasing with >= 3 entries")
    T = _as_table(T)
    curve = [(d, quasi_assouad_formula(T, d, n_grid)) for d in deltas]
    last = curve[-1][1]
    converged = (
        T.N >= 64 and abs(curve[-1][1].value - curve[-2][1].value) < tol
    )
    limit = FormulaResult(
        value=last.value,
        witness_n=last.witness_n,
        witness_k=last.witness_k,
        delta=float(deltas[-1]),
        converged=bool(converged),
    )
    return curve, limit


_SIX_KEYS = ("lower_assouad", "quasi_lower", "lower_box", "upper_box",
             "quasi_assouad", "assouad")


def six_values(T, delta: float = 0.05, n_grid=None, tail_frac: float = 0.25) -> dict:
    """All six dimension truncations of a schedule, keyed smallest to largest
    (per the ordering chain)."""
    T = _as_table(T)
    return {
        "lower_assouad": lower_assouad_formula(T, n_grid),
        "quasi_lower": quasi_lower_formula(T, delta, n_grid),
        "lower_box": lower_box_formula(T, tail_frac),
        "upper_box": upper_box_formula(T, tail_frac),
        "quasi_assouad": quasi_assouad_formula(T, delta, n_grid),
        "assouad": assouad_formula(T, n_grid),
    }


# ---------------------------------------------------------------------------
# inequality helpers


def product_bounds(qLX, qAX, qLY, qAY):
    """Product-set dimension bounds from the paired quasi dimensions:
    returns ((qA lower, qA upper), (qL lower, qL upper)) for X x Y."""
    for v in (qLX, qAX, qLY, qAY):
        if v < 0:
            raise DomainError("dimension inputs must be nonnegative")
    qa = (qLX + qAY, qAX + qAY)
    ql = (qLX + qLY, qLX + qAY)
    return qa, ql


_CHAIN = ("lower_assouad", "quasi_lower", "lower_box", "upper_box",
          "quasi_assouad", "assouad")


def ordering_check(dL, dqL, lbox, ubox, dqA, dA, slack: float = 0.0):
    """Verify the dimension ordering chain within slack; returns
    (ok, first violated link or None)."""
    if slack < 0:
        raise DomainError("slack must be >= 0")
    values = [dL, dqL, lbox, ubox, dqA, dA]
    names = ["lower Assouad", "quasi-lower", "lower box", "upper box",
             "quasi-Assouad", "Assouad"]
    for i in range(5):
        if values[i] > values[i + 1] + slack:
            return False, f"{names[i]} <= {names[i + 1]}"
    return True, None


def convergence_study(make_schedule, sizes, delta: float = 0.05, tol: float = CONVERGENCE_TOL):
    """Evaluate six_values at increasing truncations; converged when the last
    two evaluations agree within tol for every key."""
    rows = []
    for size in sizes:
        sched = make_schedule(size)
        rows.append((size, {k: r.value for k, r in six_values(sched, delta).items()}))
    last, prev = rows[-1][1], rows[-2][1]
    deltas = {k: abs(last[k] - prev[k]) for k in last}
    return rows, deltas, all(v < tol for v in deltas.values())
