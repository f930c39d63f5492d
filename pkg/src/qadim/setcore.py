"""Finite-resolution set representations and exact covering machinery.

1-D sets are unions of closed intervals (or finite point lists) with
arbitrary-precision endpoints; covering numbers are computed exactly by a
left-to-right greedy sweep, which is optimal in one dimension.  2-D point
sets use the sup-square metric with grid counting as the covering proxy.

All types are immutable after construction and all operations are pure.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpfr

from .precision import scalar

__all__ = [
    "Interval",
    "IntervalSet1D",
    "PointSet1D",
    "PointSet2D",
    "CenterPolicy",
    "covering_number_1d",
    "local_restrict",
    "nrr",
    "box_count_2d",
    "hausdorff_distance",
    "three_interval_cover_oracle",
]


class DomainError(ValueError):
    """Raised when an operation precondition is violated."""


@dataclass(frozen=True)
class Interval:
    lo: mpfr
    hi: mpfr

    def __post_init__(self):
        object.__setattr__(self, "lo", scalar(self.lo))
        object.__setattr__(self, "hi", scalar(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"interval lo > hi: {self.lo} > {self.hi}")

    @property
    def length(self) -> mpfr:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi


class IntervalSet1D:
    """Disjoint union of closed intervals, sorted; touching members are merged."""

    __slots__ = ("los", "his")

    def __init__(self, intervals: Iterable = ()):
        pairs = []
        for item in intervals:
            if isinstance(item, Interval):
                pairs.append((item.lo, item.hi))
            else:
                lo, hi = item
                lo, hi = scalar(lo), scalar(hi)
                if lo > hi:
                    raise DomainError(f"interval lo > hi: {lo} > {hi}")
                pairs.append((lo, hi))
        pairs.sort()
        los: list = []
        his: list = []
        for lo, hi in pairs:
            if his and lo <= his[-1]:
                if hi > his[-1]:
                    his[-1] = hi
            else:
                los.append(lo)
                his.append(hi)
        self.los = tuple(los)
        self.his = tuple(his)

    @classmethod
    def _from_sorted(cls, los: Sequence, his: Sequence) -> "IntervalSet1D":
        """Trusted constructor for already sorted, disjoint, merged data."""
        obj = cls.__new__(cls)
        obj.los = tuple(los)
        obj.his = tuple(his)
        return obj

    def __len__(self) -> int:
        return len(self.los)

    def __bool__(self) -> bool:
        return bool(self.los)

    def __iter__(self):
        return (Interval(lo, hi) for lo, hi in zip(self.los, self.his))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntervalSet1D)
            and self.los == other.los
            and self.his == other.his
        )

    @property
    def min_len(self) -> mpfr:
        if not self.los:
            raise DomainError("empty set has no min_len")
        return min(hi - lo for lo, hi in zip(self.los, self.his))

    @property
    def diameter(self) -> mpfr:
        if not self.los:
            return mpfr(0)
        return self.his[-1] - self.los[0]

    def endpoints(self) -> list:
        """All interval endpoints, ascending (set points usable as chain nodes)."""
        out = []
        for lo, hi in zip(self.los, self.his):
            out.append(lo)
            if hi != lo:
                out.append(hi)
        return out

    def left_endpoints(self) -> tuple:
        return self.los


class PointSet1D:
    """Finite strictly increasing list of points."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable = ()):
        pts = sorted(scalar(p) for p in points)
        dedup: list = []
        for p in pts:
            if not dedup or p != dedup[-1]:
                dedup.append(p)
        self.points = tuple(dedup)

    @classmethod
    def _from_sorted(cls, points: Sequence) -> "PointSet1D":
        obj = cls.__new__(cls)
        obj.points = tuple(points)
        return obj

    def __len__(self) -> int:
        return len(self.points)

    def __bool__(self) -> bool:
        return bool(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet1D) and self.points == other.points

    @property
    def min_gap(self) -> mpfr:
        if len(self.points) < 2:
            raise DomainError("need >= 2 points for min_gap")
        return min(b - a for a, b in zip(self.points, self.points[1:]))

    @property
    def diameter(self) -> mpfr:
        if not self.points:
            return mpfr(0)
        return self.points[-1] - self.points[0]


class PointSet2D:
    """Finite set of distinct planar points; local balls are sup-squares."""

    __slots__ = ("xs", "ys")

    def __init__(self, points: Iterable = ()):
        seen = set()
        uniq = []
        for x, y in points:
            x, y = scalar(x), scalar(y)
            key = (gmpy2.to_binary(x), gmpy2.to_binary(y))
            if key not in seen:
                seen.add(key)
                uniq.append((x, y))
        uniq.sort()
        self.xs = tuple(p[0] for p in uniq)
        self.ys = tuple(p[1] for p in uniq)

    def __len__(self) -> int:
        return len(self.xs)

    def __bool__(self) -> bool:
        return bool(self.xs)

    def points(self) -> list:
        return list(zip(self.xs, self.ys))

    @property
    def diameter(self) -> mpfr:
        if not self.xs:
            return mpfr(0)
        dx = max(self.xs) - min(self.xs)
        dy = max(self.ys) - min(self.ys)
        return max(dx, dy)

    @property
    def min_gap(self) -> mpfr:
        """Min positive gap among sorted x and y coordinates (resolution proxy)."""
        best = None
        for coords in (sorted(self.xs), sorted(self.ys)):
            for a, b in zip(coords, coords[1:]):
                d = b - a
                if d > 0 and (best is None or d < best):
                    best = d
        if best is None:
            raise DomainError("degenerate 2-D set has no resolution")
        return best


def resolution(S) -> mpfr:
    """Finest meaningful scale of a representation (counting below it measures
    the truncation, not the set)."""
    if isinstance(S, IntervalSet1D):
        return S.min_len
    if isinstance(S, PointSet1D):
        return S.min_gap if len(S) >= 2 else mpfr(0)
    if isinstance(S, PointSet2D):
        return S.min_gap if len(S) >= 2 else mpfr(0)
    raise TypeError(f"unsupported set type {type(S)!r}")


# ---------------------------------------------------------------------------
# covering numbers


def covering_number_1d(S, r) -> int:
    """Minimum number of closed length-2r intervals covering S (exact).

    Greedy sweep: each ball's left end is placed at the current uncovered
    infimum, which is optimal in one dimension.
    """
    r = scalar(r)
    if r <= 0:
        raise DomainError(f"covering radius must be positive, got {r}")
    d = 2 * r
    if isinstance(S, PointSet1D):
        pts = S.points
        n = len(pts)
        if n == 0:
            return 0
        count = 0
        i = 0
        while i < n:
            count += 1
            i = bisect_right(pts, pts[i] + d, i + 1)
        return count
    if isinstance(S, IntervalSet1D):
        los, his = S.los, S.his
        n = len(los)
        if n == 0:
            return 0
        count = 0
        i = 0
        q = los[0]
        while i < n:
            count += 1
            end = q + d
            # first interval not fully covered by [q, end]
            j = bisect_right(his, end, i)
            if j >= n:
                break
            if los[j] <= end:
                i, q = j, end  # resume inside interval j; uncovered part is (end, hi]
            else:
                i, q = j, los[j]
        return count
    raise TypeError(f"covering_number_1d expects a 1-D set, got {type(S)!r}")


def local_restrict(S, x, R):
    """S intersected with the ball B(x, R).

    In 1-D the ball is [x-R, x+R]; in 2-D it is the closed sup-square of
    side R centred at x.  Returns the same representation type (may be empty).
    """
    R = scalar(R)
    if R <= 0:
        raise DomainError(f"ball size must be positive, got {R}")
    if isinstance(S, PointSet1D):
        x = scalar(x)
        lo, hi = x - R, x + R
        i = bisect_left(S.points, lo)
        j = bisect_right(S.points, hi)
        return PointSet1D._from_sorted(S.points[i:j])
    if isinstance(S, IntervalSet1D):
        x = scalar(x)
        w_lo, w_hi = x - R, x + R
        i = bisect_right(S.his, w_lo)
        if i > 0 and i - 1 < len(S.his) and S.his[i - 1] == w_lo and S.los[i - 1] <= w_lo:
            i -= 1  # closed intervals: touching at w_lo still intersects
        j = bisect_left(S.los, w_hi)
        if j < len(S.los) and S.los[j] == w_hi:
            j += 1
        los, his = [], []
        for k in range(i, j):
            lo = S.los[k] if S.los[k] > w_lo else w_lo
            hi = S.his[k] if S.his[k] < w_hi else w_hi
            if lo <= hi:
                los.append(lo)
                his.append(hi)
        return IntervalSet1D._from_sorted(los, his)
    if isinstance(S, PointSet2D):
        cx, cy = scalar(x[0]), scalar(x[1])
        h = R / 2  # sup-square of side R
        pts = [
            (px, py)
            for px, py in zip(S.xs, S.ys)
            if abs(px - cx) <= h and abs(py - cy) <= h
        ]
        out = PointSet2D.__new__(PointSet2D)
        out.xs = tuple(p[0] for p in pts)
        out.ys = tuple(p[1] for p in pts)
        return out
    raise TypeError(f"unsupported set type {type(S)!r}")


@dataclass(frozen=True)
class CenterPolicy:
    """How centers are sampled for the two-scale local count.

    ``stratified`` takes every ceil(n/cap)-th candidate in positional order
    (offset = seed mod step, so seed 0 keeps the leftmost candidate, which is
    where construction-aligned witnesses live).  ``exhaustive`` uses all.
    """

    mode: str = "stratified"
    cap: int = 4096
    seed: int = 0

    def select(self, candidates: Sequence) -> Sequence:
        n = len(candidates)
        if self.mode == "exhaustive" or n <= self.cap:
            return candidates
        if self.mode != "stratified":
            raise DomainError(f"unknown center policy mode {self.mode!r}")
        step = -(-n // self.cap)
        offset = self.seed % step
        return candidates[offset::step]


def center_candidates(S) -> Sequence:
    """Native center candidates: interval left endpoints, or the points."""
    if isinstance(S, IntervalSet1D):
        return S.los
    if isinstance(S, PointSet1D):
        return S.points
    if isinstance(S, PointSet2D):
        return list(zip(S.xs, S.ys))
    raise TypeError(f"unsupported set type {type(S)!r}")


def _local_count(S, x, r, R) -> int:
    piece = local_restrict(S, x, R)
    if isinstance(piece, PointSet2D):
        return box_count_2d(piece, r)
    return covering_number_1d(piece, r)


def nrr(S, r, R, centers: CenterPolicy | Sequence | None = None):
    """Max over sampled centers of the covering count of S ∩ B(center, R)
    at scale r.  Returns (count, maximizing center); ties break to the
    lexicographically smallest center.
    """
    r, R = scalar(r), scalar(R)
    if not 0 < r < R:
        raise DomainError(f"need 0 < r < R, got r={r}, R={R}")
    if centers is None:
        centers = CenterPolicy()
    if isinstance(centers, CenterPolicy):
        sample = centers.select(center_candidates(S))
    else:
        sample = centers
    best = 0
    witness = None
    for c in sample:
        count = _local_count(S, c, r, R)
        if count > best or (count == best and witness is not None and c < witness):
            best = count
            witness = c
    if witness is None:
        raise DomainError("no centers available (empty set?)")
    return best, witness


def box_count_2d(P: PointSet2D, r) -> int:
    """Occupied cells of the origin-anchored axis grid with mesh r."""
    r = scalar(r)
    if r <= 0:
        raise DomainError(f"mesh must be positive, got {r}")
    cells = set()
    for x, y in zip(P.xs, P.ys):
        cells.add((int(gmpy2.floor(x / r)), int(gmpy2.floor(y / r))))
    return len(cells)


# ---------------------------------------------------------------------------
# Hausdorff distances


def _as_union(S):
    """Normalize a 1-D set to sorted (los, his) with points as degenerate
    intervals."""
    if isinstance(S, IntervalSet1D):
        return S.los, S.his
    if isinstance(S, PointSet1D):
        return S.points, S.points
    raise TypeError(f"expected 1-D set, got {type(S)!r}")


def _dist_point_to_union(x, los, his) -> mpfr:
    i = bisect_right(los, x)
    if i > 0 and x <= his[i - 1]:
        return mpfr(0)
    best = None
    if i > 0:
        best = x - his[i - 1]
    if i < len(los):
        d = los[i] - x
        if best is None or d < best:
            best = d
    return best


def one_sided_hausdorff_1d(A, B) -> mpfr:
    """p_H(A, B) = sup_{a in A} dist(a, B) for 1-D interval unions / point sets.

    Exact: the supremum over a continuum component is attained either at one
    of its endpoints or at the deepest point of a gap of B that it covers.
    """
    alos, ahis = _as_union(A)
    blos, bhis = _as_union(B)
    if not alos or not blos:
        raise DomainError("one-sided Hausdorff distance needs nonempty sets")
    best = mpfr(0)
    for x in alos:
        d = _dist_point_to_union(x, blos, bhis)
        if d > best:
            best = d
    for x in ahis:
        d = _dist_point_to_union(x, blos, bhis)
        if d > best:
            best = d
    # interior candidates: deepest covered point of each gap of B
    for g in range(len(blos) - 1):
        g1, g2 = bhis[g], blos[g + 1]
        mid = (g1 + g2) / 2
        # A-coverage nearest to mid: max over A ∩ (g1, g2) of min(x-g1, g2-x)
        i = bisect_right(alos, mid)
        cand = None
        if i > 0 and ahis[i - 1] > g1:
            x = min(ahis[i - 1], mid)
            if x > g1:
                cand = min(x - g1, g2 - x)
        if i < len(alos) and alos[i] < g2:
            x = alos[i]
            d = min(x - g1, g2 - x)
            if cand is None or d > cand:
                cand = d
        if cand is not None and cand > best:
            best = cand
    return best


def _one_sided_2d(A: PointSet2D, B: PointSet2D) -> mpfr:
    best = mpfr(0)
    bpts = list(zip(B.xs, B.ys))
    for ax, ay in zip(A.xs, A.ys):
        d = None
        for bx, by in bpts:
            dd = max(abs(ax - bx), abs(ay - by))
            if d is None or dd < d:
                d = dd
                if d <= best:
                    break
        if d > best:
            best = d
    return best


def hausdorff_distance(A, B):
    """(two_sided, one_sided_A_to_B); sup-norm in 2-D, exact arithmetic."""
    if isinstance(A, PointSet2D) or isinstance(B, PointSet2D):
        if not (isinstance(A, PointSet2D) and isinstance(B, PointSet2D)):
            raise TypeError("cannot mix 1-D and 2-D sets")
        if not A or not B:
            raise DomainError("Hausdorff distance needs nonempty sets")
        ab = _one_sided_2d(A, B)
        ba = _one_sided_2d(B, A)
        return max(ab, ba), ab
    ab = one_sided_hausdorff_1d(A, B)
    ba = one_sided_hausdorff_1d(B, A)
    return max(ab, ba), ab


# ---------------------------------------------------------------------------
# three-interval covering oracle


def three_interval_cover_oracle(C: IntervalSet1D | Sequence, x, R) -> list:
    """Select <= 3 members of a basic-set family whose union traps the trace
    of the family on B(x, R); test oracle for the cut-set covering argument.

    Members must have length >= 2R and x must lie in some member.  The member
    through x covers one half of the ball; a neighbour continues past the far
    end of that half, and at most one detached member on the remaining side
    can still meet the ball.
    """
    R = scalar(R)
    if R <= 0:
        raise DomainError("R must be positive")
    x = scalar(x)
    if isinstance(C, IntervalSet1D):
        members = [Interval(lo, hi) for lo, hi in zip(C.los, C.his)]
    else:
        members = [m if isinstance(m, Interval) else Interval(*m) for m in C]
    if not members:
        raise DomainError("empty family")
    for m in members:
        if m.length < 2 * R:
            raise DomainError(
                f"family member {m} shorter than 2R={2 * R}; not a valid cut at this scale"
            )
    containing = [m for m in members if m.contains(x)]
    if not containing:
        raise DomainError(f"x={x} lies in no family member")
    # prefer a member covering a full half of the ball
    i1 = None
    for m in containing:
        if m.hi >= x + R or m.lo <= x - R:
            i1 = m
            break
    if i1 is None:
        i1 = containing[0]
    picks = [i1]
    if i1.hi >= x + R:
        # right half covered; extend leftward
        touching = [m for m in members if m.hi >= i1.lo and m.lo <= i1.hi]
        i2 = min(touching, key=lambda m: (m.lo, m.hi))
        if i2 is not i1:
            picks.append(i2)
        left = [m for m in members if m.hi < i1.lo]
        if left:
            i3 = max(left, key=lambda m: (m.hi, m.lo))
            picks.append(i3)
    else:
        # left half covered; extend rightward (mirror of the above)
        touching = [m for m in members if m.hi >= i1.lo and m.lo <= i1.hi]
        i2 = max(touching, key=lambda m: (m.hi, m.lo))
        if i2 is not i1:
            picks.append(i2)
        right = [m for m in members if m.lo > i1.hi]
        if right:
            i3 = min(right, key=lambda m: (m.lo, m.hi))
            picks.append(i3)
    return picks
