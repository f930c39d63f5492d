"""Finite-depth generators for every set family used by the toolkit.

Scales are bookkept exactly: every generated object carries its per-level
lengths (and gap lengths where the construction makes them uniform), which
the estimators use as native anchor scales, and dyadic constructions have
exactly representable endpoints.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import gmpy2
from gmpy2 import mpfr

from .precision import scalar, pow2, fmt, get_precision
from .setcore import (
    DomainError,
    Interval,
    IntervalSet1D,
    PointSet1D,
    PointSet2D,
)

__all__ = [
    "RatioSchedule",
    "CantorApprox",
    "SimilarityIFS1D",
    "MoranCut",
    "MoranReport",
    "FAlphaApprox",
    "StrictScheduleResult",
    "ProjectionExample",
    "cantor_step",
    "moran_cut",
    "validate_moran",
    "f_alpha_step",
    "strict_schedule",
    "decreasing_gap_points",
    "projection_example",
    "product_set",
    "export_lines",
    "from_spec",
]


def _as_exponent(e):
    """Normalize an exponent: exact Fraction when rational, else mpfr."""
    if isinstance(e, Fraction):
        return e
    if isinstance(e, int):
        return Fraction(e)
    if isinstance(e, float):
        return Fraction(e)  # binary floats are exact rationals
    if isinstance(e, mpfr):
        return e
    if isinstance(e, str):
        return Fraction(e)
    raise TypeError(f"unsupported exponent type {type(e)!r}")


def _exp_to_mpfr(e) -> mpfr:
    if isinstance(e, Fraction):
        return mpfr(e.numerator) / mpfr(e.denominator)
    return e


class RatioSchedule:
    """Per-step dissection ratios r_k = 2^{-e_k}, run-length encoded.

    Exponents are stored exactly (Fraction) when rational; every e_k must be
    >= 1 so that the two children of a step never overlap.
    """

    __slots__ = ("segments", "inf_positive", "rho0", "_cum", "_n")

    def __init__(self, segments: Iterable, inf_positive: bool = True, rho0=None):
        segs = []
        for count, e in segments:
            count = int(count)
            if count <= 0:
                continue
            e = _as_exponent(e)
            if e < 1:
                raise DomainError(f"ratio 2^-{e} exceeds 1/2; children would overlap")
            if segs and segs[-1][1] == e:
                segs[-1] = (segs[-1][0] + count, e)
            else:
                segs.append((count, e))
        if not segs:
            raise DomainError("empty ratio schedule")
        self.segments = tuple(segs)
        cum = []
        total = 0
        for count, _ in segs:
            total += count
            cum.append(total)
        self._cum = tuple(cum)
        self._n = total
        self.inf_positive = bool(inf_positive)
        if rho0 is not None:
            self.rho0 = scalar(rho0)
        elif inf_positive:
            self.rho0 = pow2(-_exp_to_mpfr(max(s[1] for s in segs)))
        else:
            self.rho0 = None

    # -- constructors

    @classmethod
    def constant(cls, e, n: int) -> "RatioSchedule":
        return cls([(n, e)])

    @classmethod
    def from_exponents(cls, exponents: Iterable, inf_positive: bool = True) -> "RatioSchedule":
        return cls([(1, e) for e in exponents], inf_positive=inf_positive)

    @classmethod
    def from_ratios(cls, ratios: Iterable, inf_positive: bool = True) -> "RatioSchedule":
        exps = []
        for r in ratios:
            e = _ratio_to_exponent(r)
            exps.append((1, e))
        return cls(exps, inf_positive=inf_positive)

    @classmethod
    def from_rule(cls, rule: Callable[[int], object], n: int, kind: str = "exponent",
                  inf_positive: bool = True) -> "RatioSchedule":
        if kind == "exponent":
            return cls([(1, rule(k)) for k in range(1, n + 1)], inf_positive=inf_positive)
        if kind == "ratio":
            return cls.from_ratios((rule(k) for k in range(1, n + 1)), inf_positive=inf_positive)
        raise DomainError(f"unknown rule kind {kind!r}")

    # -- access

    @property
    def n(self) -> int:
        return self._n

    def __len__(self) -> int:
        return self._n

    def exponent(self, k: int):
        """Exponent e_k (1-indexed)."""
        if not 1 <= k <= self._n:
            raise DomainError(f"step {k} outside schedule of length {self._n}")
        i = bisect_right(self._cum, k - 1)
        return self.segments[i][1]

    def exponents(self) -> list:
        out = []
        for count, e in self.segments:
            out.extend([e] * count)
        return out

    def ratios(self, upto: int | None = None) -> list:
        """Ratios r_k as mpfr, optionally truncated."""
        limit = self._n if upto is None else min(upto, self._n)
        out = []
        done = 0
        for count, e in self.segments:
            if done >= limit:
                break
            take = min(count, limit - done)
            r = pow2(-_exp_to_mpfr(e))
            out.extend([r] * take)
            done += take
        return out

    def is_rational(self) -> bool:
        return all(isinstance(e, Fraction) for _, e in self.segments)

    def truncated(self, n: int) -> "RatioSchedule":
        if n > self._n:
            raise DomainError(f"cannot extend schedule of length {self._n} to {n}")
        segs = []
        done = 0
        for count, e in self.segments:
            take = min(count, n - done)
            if take <= 0:
                break
            segs.append((take, e))
            done += take
        return RatioSchedule(segs, inf_positive=self.inf_positive, rho0=self.rho0)

    def scaled(self, lam) -> "RatioSchedule":
        """Multiply every exponent by lam (> 0)."""
        lam = _as_exponent(lam)
        segs = []
        for count, e in self.segments:
            if isinstance(e, Fraction) and isinstance(lam, Fraction):
                segs.append((count, e * lam))
            else:
                segs.append((count, _exp_to_mpfr(e) * _exp_to_mpfr(lam)))
        return RatioSchedule(segs, inf_positive=self.inf_positive)


def _ratio_to_exponent(r):
    """Exponent e with r = 2^-e; exact when r is a power of two."""
    if isinstance(r, mpfr):
        return -gmpy2.log2(r)
    frac = Fraction(r) if not isinstance(r, Fraction) else r
    if frac <= 0 or frac > Fraction(1, 2):
        raise DomainError(f"ratio must lie in (0, 1/2], got {frac}")
    if frac.numerator == 1 and (frac.denominator & (frac.denominator - 1)) == 0:
        return Fraction(frac.denominator.bit_length() - 1)
    return -gmpy2.log2(scalar(frac))


# ---------------------------------------------------------------------------
# two-branch Cantor construction


@dataclass
class CantorApprox:
    depth: int
    intervals: IntervalSet1D
    schedule: RatioSchedule
    level_lengths: list  # level_lengths[k] = |step-k interval|, k = 0..depth

    @property
    def set(self) -> IntervalSet1D:
        return self.intervals

    def scale_ladder(self) -> list:
        return sorted(set(self.level_lengths), reverse=True)


def cantor_step(schedule: RatioSchedule, n: int) -> CantorApprox:
    """Depth-n two-branch Cantor approximation: each interval [a, b] spawns
    children anchored at its endpoints with length ratio r_k at step k."""
    if n < 0:
        raise DomainError("depth must be >= 0")
    if n > schedule.n:
        raise DomainError(f"schedule provides {schedule.n} steps, requested {n}")
    if n > 26:
        raise DomainError(f"depth {n} would produce 2^{n} intervals; cap is 26")
    ratios = schedule.ratios(n)
    los = [scalar(0)]
    length = scalar(1)
    level_lengths = [length]
    for k in range(1, n + 1):
        child = ratios[k - 1] * length
        shift = length - child
        los = [a for lo in los for a in (lo, lo + shift)]
        length = child
        level_lengths.append(length)
    his = [lo + length for lo in los]
    return CantorApprox(
        depth=n,
        intervals=IntervalSet1D._from_sorted(los, his),
        schedule=schedule,
        level_lengths=level_lengths,
    )


# ---------------------------------------------------------------------------
# similarity IFS and Moran cuts


class SimilarityIFS1D:
    """Contracting similarities f_i(x) = rho_i x + t_i on [0, 1].

    The optional transition matrix restricts admissible words to a subshift
    of finite type: letter j may follow letter i iff matrix[i][j] == 1.
    """

    __slots__ = ("rhos", "offsets", "transition")

    def __init__(self, maps: Sequence, transition: Sequence | None = None):
        rhos, offsets = [], []
        for rho, t in maps:
            rho, t = scalar(rho), scalar(t)
            if not 0 < rho < 1:
                raise DomainError(f"contraction ratio must lie in (0,1), got {rho}")
            if t < 0 or rho + t > 1:
                raise DomainError(
                    f"map x -> {rho}x + {t} does not send [0,1] into itself"
                )
            rhos.append(rho)
            offsets.append(t)
        if not rhos:
            raise DomainError("IFS needs at least one map")
        self.rhos = tuple(rhos)
        self.offsets = tuple(offsets)
        if transition is not None:
            m = len(rhos)
            mat = tuple(tuple(int(v) for v in row) for row in transition)
            if len(mat) != m or any(len(row) != m for row in mat):
                raise DomainError("transition matrix must be m x m")
            if any(v not in (0, 1) for row in mat for v in row):
                raise DomainError("transition matrix entries must be 0/1")
            if any(not any(row) for row in mat):
                raise DomainError("transition matrix has a dead state (all-zero row)")
            self.transition = mat
        else:
            self.transition = None

    @property
    def m(self) -> int:
        return len(self.rhos)

    def allowed_next(self, letter: int | None) -> range | list:
        if self.transition is None or letter is None:
            return range(self.m)
        return [j for j in range(self.m) if self.transition[letter][j]]

    def cylinder(self, word: Sequence[int]) -> Interval:
        """J_w = f_w([0, 1]) with f_w = f_{w1} o ... o f_{wn}."""
        lo, scale = scalar(0), scalar(1)
        for i in word:
            lo = lo + scale * self.offsets[i]
            scale = scale * self.rhos[i]
        return Interval(lo, lo + scale)

    def word_is_admissible(self, word: Sequence[int]) -> bool:
        if self.transition is None:
            return True
        return all(self.transition[a][b] for a, b in zip(word, word[1:]))

    def words(self, depth: int):
        """All admissible words of exactly the given length."""
        frontier = [(i,) for i in range(self.m)]
        for _ in range(depth - 1):
            nxt = []
            for w in frontier:
                for j in self.allowed_next(w[-1]):
                    nxt.append(w + (j,))
            frontier = nxt
        return frontier if depth >= 1 else [()]

    def attractor_approx(self, depth: int) -> "CylinderApprox":
        """Union of all admissible depth-n cylinders, merged."""
        if depth < 1:
            raise DomainError("depth must be >= 1")
        pairs = []
        stack = [((), scalar(0), scalar(1))]
        while stack:
            word, lo, length = stack.pop()
            if len(word) == depth:
                pairs.append((lo, lo + length))
                continue
            last = word[-1] if word else None
            for j in self.allowed_next(last):
                stack.append(
                    (word + (j,), lo + length * self.offsets[j], length * self.rhos[j])
                )
        rho_max = max(self.rhos)
        rho_min = min(self.rhos)
        ladder = [rho_max ** k for k in range(0, depth + 1)]
        if rho_min != rho_max:
            ladder += [rho_min ** k for k in range(1, depth + 1)]
        return CylinderApprox(
            depth=depth,
            intervals=IntervalSet1D(pairs),
            ifs=self,
            level_lengths=sorted(set(ladder), reverse=True),
        )


@dataclass
class CylinderApprox:
    depth: int
    intervals: IntervalSet1D
    ifs: SimilarityIFS1D
    level_lengths: list

    @property
    def set(self) -> IntervalSet1D:
        return self.intervals

    def scale_ladder(self) -> list:
        return list(self.level_lengths)


@dataclass
class MoranCut:
    """All admissible words whose cylinders first drop below diameter r."""

    words: list
    intervals: list  # Interval per word, same order
    r: mpfr
    D: mpfr

    def family(self) -> list:
        return list(self.intervals)

    def __len__(self) -> int:
        return len(self.words)


def moran_cut(ifs: SimilarityIFS1D, r) -> MoranCut:
    r = scalar(r)
    min_first = min(ifs.rhos)
    if not 0 < r < min_first:
        raise DomainError(
            f"cut scale must satisfy 0 < r < min |J_i| = {min_first}, got {r}"
        )
    D = 1 / min(ifs.rhos)
    words, intervals = [], []
    # maintain (word, lo, length); expansion stops once |J_w| < r <= |J_w-|
    stack = [((i,), ifs.offsets[i], ifs.rhos[i]) for i in range(ifs.m)]
    while stack:
        word, lo, length = stack.pop()
        if length < r:
            words.append(word)
            intervals.append(Interval(lo, lo + length))
            if not (r <= D * length):
                raise DomainError(
                    f"cut member {word} violates r <= D|J|: r={r}, D|J|={D * length}"
                )
            continue
        for j in ifs.allowed_next(word[-1]):
            stack.append(
                (word + (j,), lo + length * ifs.offsets[j], length * ifs.rhos[j])
            )
    order = sorted(range(len(words)), key=lambda i: (intervals[i].lo, intervals[i].hi))
    return MoranCut(
        words=[words[i] for i in order],
        intervals=[intervals[i] for i in order],
        r=r,
        D=D,
    )


@dataclass
class MoranReport:
    passed: bool
    smallest_D: mpfr
    violations: list
    depth: int
    m5_pairs_checked: int


def validate_moran(ifs: SimilarityIFS1D, depth: int) -> MoranReport:
    """Exhaustively check the nesting/submultiplicativity/comparability/
    separation axioms on all admissible words up to the given depth and
    report the smallest feasible comparability constant."""
    if depth < 2:
        raise DomainError("depth must be >= 2")
    violations = []
    # enumerate words by length with cylinders
    by_len: dict[int, dict[tuple, Interval]] = {0: {(): Interval(0, 1)}}
    for n in range(1, depth + 1):
        cur = {}
        for word, J in by_len[n - 1].items():
            last = word[-1] if word else None
            for j in ifs.allowed_next(last):
                w = word + (j,)
                cur[w] = ifs.cylinder(w)
        by_len[n] = cur
    # M1: nesting
    for n in range(1, depth + 1):
        for w, J in by_len[n].items():
            parent = by_len[n - 1][w[:-1]]
            if J.lo < parent.lo or J.hi > parent.hi:
                violations.append(f"M1: J_{w} not inside J_{w[:-1]}")
    # M4: |J_w| >= D^-1 |J_w-|, smallest D = max ratio
    d4 = mpfr(1)
    for n in range(1, depth + 1):
        for w, J in by_len[n].items():
            parent = by_len[n - 1][w[:-1]]
            ratio = parent.length / J.length
            if ratio > d4:
                d4 = ratio
    # M3: |J_wt| <= D |J_w||J_t| over admissible concatenations
    d3 = mpfr(0)
    all_words = [(w, J) for n in range(1, depth + 1) for w, J in by_len[n].items()]
    for w, Jw in all_words:
        for t, Jt in all_words:
            if len(w) + len(t) > depth:
                continue
            wt = w + t
            if not ifs.word_is_admissible(wt):
                continue
            Jwt = by_len[len(wt)].get(wt)
            if Jwt is None:
                continue
            ratio = Jwt.length / (Jw.length * Jt.length)
            if ratio > d3:
                d3 = ratio
    # M5: disjoint deeper images force disjoint cylinders
    m5_pairs = 0
    deep = sorted(by_len[depth].items())
    for a in range(len(deep)):
        wa, Ja = deep[a]
        for b in range(a + 1, len(deep)):
            wb, Jb = deep[b]
            overlap = not (Ja.hi < Jb.lo or Jb.hi < Ja.lo)
            if not overlap:
                continue
            # overlapping pair: no admissible prefix may separate the images
            for tn in range(1, depth - 0):
                for t, Jt in by_len[tn].items():
                    if len(t) + depth > 2 * depth:
                        break
                    ta, tb = t + wa, t + wb
                    if not (ifs.word_is_admissible(ta) and ifs.word_is_admissible(tb)):
                        continue
                    Jta = ifs.cylinder(ta)
                    Jtb = ifs.cylinder(tb)
                    m5_pairs += 1
                    if Jta.hi < Jtb.lo or Jtb.hi < Jta.lo:
                        violations.append(
                            f"M5: prefix {t} separates overlapping cylinders {wa}, {wb}"
                        )
                        break
    smallest = max(d3, d4)
    return MoranReport(
        passed=not violations,
        smallest_D=smallest,
        violations=violations,
        depth=depth,
        m5_pairs_checked=m5_pairs,
    )


# ---------------------------------------------------------------------------
# accelerating-branching Cantor family (2^k children at step k)


@dataclass
class FAlphaApprox:
    alpha: mpfr
    depth: int
    intervals: IntervalSet1D
    level_lengths: list   # [1, len_1, ..., len_depth]
    gap_lengths: list     # gap_lengths[k] = gap between step-k siblings, k >= 1
    children_per_level: list

    @property
    def set(self) -> IntervalSet1D:
        return self.intervals

    def scale_ladder(self) -> list:
        vals = set(self.level_lengths)
        for g in self.gap_lengths[1:]:
            vals.add(g)
            vals.add(g / 2)
        return sorted(vals, reverse=True)


def f_alpha_step(alpha, k: int) -> FAlphaApprox:
    """Depth-k approximation where each step-j parent carries 2^j equally
    spaced children of relative length 2^{-j/alpha}, flush with its ends."""
    alpha = scalar(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if k < 1:
        raise DomainError("depth must be >= 1")
    total = k * (k + 1) // 2
    if total > 22:
        raise DomainError(f"depth {k} needs 2^{total} intervals; cap is 2^22")
    los = [scalar(0)]
    length = scalar(1)
    level_lengths = [length]
    gap_lengths = [mpfr(0)]
    children = [1]
    for j in range(1, k + 1):
        nchild = 1 << j
        child = pow2(-scalar(j) / alpha) * length
        if nchild * child >= length:
            raise DomainError(
                f"step {j}: 2^{j} children of relative length 2^(-{j}/alpha) overlap"
            )
        gap = (length - nchild * child) / (nchild - 1)
        stride = child + gap
        offsets = [i * stride for i in range(nchild)]
        los = [lo + off for lo in los for off in offsets]
        length = child
        level_lengths.append(length)
        gap_lengths.append(gap)
        children.append(nchild)
    his = [lo + length for lo in los]
    return FAlphaApprox(
        alpha=alpha,
        depth=k,
        intervals=IntervalSet1D._from_sorted(los, his),
        level_lengths=level_lengths,
        gap_lengths=gap_lengths,
        children_per_level=children,
    )


# ---------------------------------------------------------------------------
# six-exponent block schedule with prescribed dimension values


@dataclass
class StrictScheduleResult:
    schedule: RatioSchedule
    stages: int
    s_values: list
    t_values: dict
    rounding_residues: dict
    phases: list  # (first_step, last_step, exponent) for inspection

    @property
    def n(self) -> int:
        return self.schedule.n


def strict_schedule(a, alpha, u, v, beta, b, *, s1: int | None = None,
                    growth: int = 4, stages: int = 8) -> StrictScheduleResult:
    """Block exponent schedule realizing six prescribed dimension values.

    Blocks cycle through six exponent phases (v, alpha, a, u, beta, b runs);
    phase boundaries follow a geometric stage sequence s_j = s1 * growth^(j-1)
    with interleaved tstops chosen so the running exponent averages stay
    pinned between u and v.  Emission stops exactly at step s_stages.
    """
    ea, eal, eu, ev, ebt, eb = (_as_exponent(x) for x in (a, alpha, u, v, beta, b))
    if not (1 <= ea <= eal <= eu < ev <= ebt <= eb):
        raise DomainError(
            "exponents must satisfy 1 <= a <= alpha <= u < v <= beta <= b; got "
            f"({ea}, {eal}, {eu}, {ev}, {ebt}, {eb})"
        )
    if growth < 2:
        raise DomainError("stage growth must be >= 2")
    if s1 is None:
        s1 = growth
    if s1 < 2:
        raise DomainError("s1 must be >= 2")
    if stages < 2:
        raise DomainError("need at least 2 stages")

    def s_val(j: int) -> int:
        return s1 * growth ** (j - 1)

    s_values = [s_val(j) for j in range(1, stages + 1)]

    t_values: dict[int, int] = {}
    residues: dict[int, Fraction] = {}

    def t_even(idx: int) -> int:
        s = s_val(idx)
        if eu == eal:
            t_values[idx] = s
            residues[idx] = Fraction(0)
            return s
        exact = Fraction(s) * (ev - eal) / (eu - eal)
        t = max(s, round(exact))
        t_values[idx] = t
        residues[idx] = exact - t
        return t

    def t_odd(idx: int) -> int:
        s = s_val(idx)
        if ev == ebt:
            t_values[idx] = s
            residues[idx] = Fraction(0)
            return s
        exact = Fraction(s) * (ebt - eu) / (ebt - ev)
        t = max(s, round(exact))
        t_values[idx] = t
        residues[idx] = exact - t
        return t

    segments: list[tuple[int, object]] = []
    phases: list[tuple[int, int, object]] = []
    step = 0  # last emitted step number
    limit = s_val(stages)

    def emit(upto: int, e) -> bool:
        """Emit exponent e through step `upto` (clamped to the stage limit);
        returns False once the limit is reached."""
        nonlocal step
        upto = min(upto, limit)
        if upto > step:
            segments.append((upto - step, e))
            phases.append((step + 1, upto, e))
            step = upto
        return step < limit

    # stage-1 prelude: u through s_1, then beta through t_1
    emit(s_val(1), eu)
    t1 = t_odd(1)
    alive = emit(t1, ebt)
    j = 1
    while alive:
        if 2 * j > stages:
            break
        alive = emit(s_val(2 * j), ev)
        if not alive:
            break
        t2j = t_even(2 * j)
        alive = emit(t2j, eal)
        if not alive:
            break
        alive = emit(t2j + j, ea)
        if not alive or 2 * j + 1 > stages:
            break
        alive = emit(s_val(2 * j + 1), eu)
        if not alive:
            break
        t2j1 = t_odd(2 * j + 1)
        alive = emit(t2j1, ebt)
        if not alive:
            break
        alive = emit(t2j1 + j, eb)
        j += 1

    schedule = RatioSchedule(segments, inf_positive=True)
    return StrictScheduleResult(
        schedule=schedule,
        stages=stages,
        s_values=s_values,
        t_values=t_values,
        rounding_residues=residues,
        phases=phases,
    )


# ---------------------------------------------------------------------------
# decreasing-gap sequence sets


def decreasing_gap_points(rule: Callable[[int], object], n: int) -> PointSet1D:
    """Points a_1 > ... > a_n in [0, 1] with weakly decreasing gaps.

    The rule is evaluated at k = 1..n and validated; a gap-monotonicity
    failure names the first offending index.
    """
    if n < 2:
        raise DomainError("need n >= 2 points")
    pts = [scalar(rule(k)) for k in range(1, n + 1)]
    if pts[0] > 1 or pts[-1] < 0:
        raise DomainError("sequence must lie in [0, 1]")
    prev_gap = None
    for k in range(n - 1):
        gap = pts[k] - pts[k + 1]
        if gap <= 0:
            raise DomainError(f"sequence not strictly decreasing at index {k + 1}")
        if prev_gap is not None and gap > prev_gap:
            raise DomainError(
                f"gaps increase at index {k + 1}: a_{k}-a_{k + 1}={fmt(prev_gap, 8)}"
                f" < a_{k + 1}-a_{k + 2}={fmt(gap, 8)}"
            )
        prev_gap = gap
    return PointSet1D._from_sorted(list(reversed(pts)))


# ---------------------------------------------------------------------------
# planar projection example


@dataclass
class ProjectionExample:
    jmax: int
    E: PointSet2D
    Ex: PointSet1D
    levels: list  # levels[j-1] = list of (x_ij, y_ij), i ascending

    @property
    def set(self) -> PointSet2D:
        return self.E

    def scale_ladder(self) -> list:
        return [pow2(-j) for j in range(1, 2 * self.jmax + 1)]


def projection_example(jmax: int) -> ProjectionExample:
    """Planar point set whose x-projection is locally far denser than the set.

    Level j places 2^j points with x-coordinates 2^-j + (i-1) 4^-j marching
    across [2^-j, 2^-(j-1)) and y-coordinates the left-to-right endpoints of
    the gaps created at step j of the ratio-1/4 Cantor construction.
    """
    if not 1 <= jmax <= 30:
        raise DomainError(f"jmax must lie in [1, 30], got {jmax}")
    levels = []
    cantor_los = [scalar(0)]
    length = scalar(1)
    for j in range(1, jmax + 1):
        child = length / 4
        # gaps created at this step: (c + child, c + 3*child) inside each parent
        ys = []
        for c in cantor_los:
            ys.append(c + child)
            ys.append(c + 3 * child)
        ys.sort()
        xbase = pow2(-j)
        xstep = pow2(-2 * j)
        level = [(xbase + i * xstep, ys[i]) for i in range(len(ys))]
        levels.append(level)
        cantor_los = [a for c in cantor_los for a in (c, c + 3 * child)]
        length = child
    pts = [p for level in levels for p in level]
    E = PointSet2D(pts)
    Ex = PointSet1D([p[0] for p in pts])
    if len(E) != sum(len(level) for level in levels):
        raise DomainError("projection example produced duplicate points")
    return ProjectionExample(jmax=jmax, E=E, Ex=Ex, levels=levels)


# ---------------------------------------------------------------------------
# products


def product_set(A, B):
    """Cartesian product representation: cells (I x J) plus corner points."""
    def cells_of(S):
        if isinstance(S, IntervalSet1D):
            return list(zip(S.los, S.his))
        if isinstance(S, PointSet1D):
            return [(p, p) for p in S.points]
        raise TypeError(f"product factors must be 1-D sets, got {type(S)!r}")

    ca, cb = cells_of(A), cells_of(B)
    if not ca or not cb:
        raise DomainError("product factors must be nonempty")
    cells = [(Interval(alo, ahi), Interval(blo, bhi))
             for alo, ahi in ca for blo, bhi in cb]
    corners = []
    for alo, ahi in ca:
        for blo, bhi in cb:
            corners.append((alo, blo))
            corners.append((alo, bhi))
            corners.append((ahi, blo))
            corners.append((ahi, bhi))
    return PointSet2D(corners), cells


# ---------------------------------------------------------------------------
# export and JSON set specs


def export_lines(S) -> list:
    """Line-based text export: 'lo hi' per interval or 'x [y]' per point."""
    digits = math.ceil(get_precision() * math.log10(2)) + 2
    if isinstance(S, IntervalSet1D):
        return [f"{fmt(lo, digits)} {fmt(hi, digits)}" for lo, hi in zip(S.los, S.his)]
    if isinstance(S, PointSet1D):
        return [fmt(p, digits) for p in S.points]
    if isinstance(S, PointSet2D):
        return [f"{fmt(x, digits)} {fmt(y, digits)}" for x, y in zip(S.xs, S.ys)]
    raise TypeError(f"unsupported set type {type(S)!r}")


_SEQUENCE_RULES = {
    "one_over_n": lambda k: 1 / scalar(k),
    "one_over_n_sq": lambda k: 1 / (scalar(k) * scalar(k)),
    "exp_sqrt": lambda k: gmpy2.exp(-gmpy2.sqrt(scalar(k))),
}


def from_spec(spec: dict):
    """Build a generator object from the JSON set-spec schema.

    Families: cantor | ifs | falpha | strict | sequence | projection | product.
    Returns the rich generator result (with .set and .scale_ladder()).
    """
    family = spec.get("family")
    if family == "cantor":
        if "ratio" in spec:
            sched = RatioSchedule.constant(_ratio_to_exponent(Fraction(str(spec["ratio"]))), spec["depth"])
        elif "exponents" in spec:
            sched = RatioSchedule.from_exponents(spec["exponents"])
        else:
            raise DomainError("cantor spec needs 'ratio' or 'exponents'")
        return cantor_step(sched, spec["depth"])
    if family == "ifs":
        ifs = SimilarityIFS1D(
            [(m["ratio"], m["offset"]) for m in spec["maps"]],
            transition=spec.get("transition"),
        )
        return ifs.attractor_approx(spec["depth"])
    if family == "falpha":
        return f_alpha_step(Fraction(str(spec["alpha"])), spec["depth"])
    if family == "strict":
        params = spec["exponents"]  # [a, alpha, u, v, beta, b]
        result = strict_schedule(
            *[Fraction(str(x)) for x in params],
            s1=spec.get("s1"),
            growth=spec.get("growth", 4),
            stages=spec.get("stages", 8),
        )
        depth = spec.get("depth")
        if depth is not None:
            return cantor_step(result.schedule, depth)
        return result
    if family == "sequence":
        rule_name = spec["rule"]
        if rule_name not in _SEQUENCE_RULES:
            raise DomainError(f"unknown sequence rule {rule_name!r};"
                              f" known: {sorted(_SEQUENCE_RULES)}")
        return decreasing_gap_points(_SEQUENCE_RULES[rule_name], spec["n"])
    if family == "projection":
        return projection_example(spec["jmax"])
    if family == "product":
        left = from_spec(spec["left"])
        right = from_spec(spec["right"])
        a = left.set if hasattr(left, "set") else left
        b = right.set if hasattr(right, "set") else right
        return product_set(a, b)
    raise DomainError(f"unknown family {family!r}")
