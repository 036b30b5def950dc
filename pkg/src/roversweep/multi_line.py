"""Optimal line exploration by a team of reliable robots.

Fixed placements: per-robot interval times from one shared state graph
(each robot restricted to the open window between its neighbours), then
a prefix recurrence that picks the idle edge separating consecutive
robots' work intervals.

Free placements: tables T[r][i][j] of optimal times for r freely placed
robots, combined by robot-count doubling along the binary digits of k.
Each combination step resolves min-over-splits of max(left, right) by
binary search on the crossing point of the two monotone sequences, so a
full table costs O(n^2 log n) instead of O(n^3).
"""

from __future__ import annotations

from bisect import bisect_right
from typing import Iterable, List, Optional

from .exact import ExactNumber, INFINITY
from .instance import LineInstance
from .schedule import RobotTrack, Schedule, Verdict
from .single_robot import (
    best_target,
    extract_trajectory,
    init_start,
    interval_table,
    optimal_time,
    propagate,
)
from .state_graph import StateGraph


def _split_scan(left_of, right_of, lo: int, hi: int) -> tuple:
    """(value, split) minimizing max(left_of(k), right_of(k)) for k in [lo, hi].

    left_of must be nondecreasing and right_of nonincreasing over the
    range; the minimum then sits where the sequences cross, found by
    binary search.  Ties resolve to the smaller split.
    """
    a, b = lo, hi
    while b - a > 1:
        mid = (a + b) >> 1
        if left_of(mid) < right_of(mid):
            a = mid
        else:
            b = mid
    la, ra = left_of(a), right_of(a)
    va = la if la >= ra else ra
    if a == b:
        return va, a
    lb, rb = left_of(b), right_of(b)
    vb = lb if lb >= rb else rb
    if va <= vb:
        return va, a
    return vb, b


def opt_time(table_a, r1: int, table_b, r2: int, i: int, j: int) -> ExactNumber:
    """Optimal time for r1+r2 robots on [i, j] given the two partial tables."""
    return _opt_split(table_a, r1, table_b, r2, i, j)[0]


def _opt_split(table_a, r1: int, table_b, r2: int, i: int, j: int) -> tuple:
    if j - i + 1 <= r1 + r2:
        return 0, None
    # splits that starve either side below its robot count are dominated
    lo = i + r1 - 1
    hi = j - r2
    return _split_scan(
        lambda k: table_a[i][k],
        lambda k: table_b[k + 1][j],
        lo,
        hi,
    )


def exhaustive_opt_time(table_a, r1, table_b, r2, i, j) -> ExactNumber:
    """Reference split scan over every k (for cross-checking opt_time)."""
    if j - i + 1 <= r1 + r2:
        return 0
    best = INFINITY
    for k in range(i, j + 1):
        left = table_a[i][k] if k >= i else 0
        right = table_b[k + 1][j] if k + 1 <= j else 0
        cand = max(left, right)
        if cand < best:
            best = cand
    return best


# --------------------------------------------------------------------------
# fixed initial positions
# --------------------------------------------------------------------------


def solve_fixed(
    line: LineInstance,
    positions: Iterable[int],
    collect_candidates: bool = False,
) -> Verdict:
    """Optimal exploration with robots at given distinct nodes.

    Returns the optimum, the chosen idle edges, and one trajectory per
    robot; INFINITY/infeasible when no deadline-respecting split exists.
    """
    positions = tuple(sorted(positions))
    n = line.n
    if len(set(positions)) != len(positions):
        raise ValueError("fixed positions must be distinct for reliable robots")
    if any(not 0 <= p < n for p in positions):
        raise ValueError("robot position out of range")
    k = len(positions)

    graph = StateGraph.from_line(line)
    forests: List[tuple] = []
    for m, p in enumerate(positions):
        lo = positions[m - 1] if m > 0 else -1
        hi = positions[m + 1] if m < k - 1 else n
        labels = init_start(graph, [p])
        propagate(graph, labels, line.deadlines, window=(lo, hi))
        forests.append((labels, lo, hi))

    def robot_time(m: int, i: int, j: int) -> ExactNumber:
        labels, lo, hi = forests[m]
        if not (lo < i and j < hi):
            return INFINITY
        return optimal_time(labels, i, j)

    prefix: list = [INFINITY] * n
    choice: list = [None] * n
    for j in range(n):
        r = bisect_right(positions, j)
        if r == 0:
            continue
        m_lo = positions[r - 2] + 1 if r >= 2 else 0
        m_hi = positions[r - 1]
        best = INFINITY
        best_m = None
        for m in range(m_lo, m_hi + 1):
            left = 0 if m == 0 else prefix[m - 1]
            if left is INFINITY:
                continue
            right = robot_time(r - 1, m, j)
            cand = left if left >= right else right
            if cand < best:
                best = cand
                best_m = m
        prefix[j] = best
        choice[j] = best_m

    candidates = None
    if collect_candidates:
        vals = {0}
        for labels, _, _ in forests:
            vals.update(labels.finite_values())
        candidates = tuple(sorted(vals))

    if prefix[n - 1] is INFINITY:
        return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)

    # read back the idle edges and per-robot trajectories
    segments: List[tuple] = []
    j = n - 1
    while j >= 0:
        r = bisect_right(positions, j)
        m = choice[j]
        segments.append((r - 1, m, j))
        j = m - 1
    segments.reverse()
    tracks = []
    idle = []
    for robot, i, j in segments:
        labels = forests[robot][0]
        tracks.append(RobotTrack(extract_trajectory(labels, best_target(labels, i, j))))
        if i > 0:
            idle.append((i - 1, i))
    return Verdict(
        feasible=True,
        optimum=prefix[n - 1],
        schedule=Schedule(kind="line", tracks=tuple(tracks)),
        idle_edges=tuple(idle),
        candidates=candidates,
    )


# --------------------------------------------------------------------------
# free initial positions
# --------------------------------------------------------------------------


class FreeSolve:
    """Tables T[r] plus the composition history needed to rebuild schedules."""

    __slots__ = ("line", "k", "base", "tables", "parts")

    def __init__(self, line: LineInstance, k: int):
        if k < 1:
            raise ValueError("need at least one robot")
        self.line = line
        self.k = k
        n = line.n
        self.base = interval_table(line, range(n))
        t1 = [[self.base.get(i, j) if j >= i else 0 for j in range(n)] for i in range(n)]
        self.tables = {1: t1}
        self.parts = {}
        if k == 1:
            return
        b = k.bit_length() - 1
        for m in range(1, b + 1):
            half = 1 << (m - 1)
            self.tables[1 << m] = self._combine(half, half)
            self.parts[1 << m] = (half, half)
        r = 1 << b
        for m in range(1, b + 1):
            if (k >> (b - m)) & 1:
                p = 1 << (b - m)
                total = p + r
                self.tables[total] = self._combine(p, r)
                self.parts[total] = (p, r)
                r = total

    def _combine(self, r1: int, r2: int):
        a = self.tables[r1]
        bt = self.tables[r2]
        n = self.line.n
        out = [[0] * n for _ in range(n)]
        rsum = r1 + r2
        for i in range(n):
            ai = a[i]
            row = out[i]
            for j in range(i + rsum, n):
                lo = i + r1 - 1
                hi = j - r2
                x, y = lo, hi
                while y - x > 1:
                    mid = (x + y) >> 1
                    if ai[mid] < bt[mid + 1][j]:
                        x = mid
                    else:
                        y = mid
                lx, rx = ai[x], bt[x + 1][j]
                vx = lx if lx >= rx else rx
                if x != y:
                    ly, ry = ai[y], bt[y + 1][j]
                    vy = ly if ly >= ry else ry
                    if vy < vx:
                        vx = vy
                row[j] = vx
        return out

    def value(self, i: int, j: int, r: Optional[int] = None) -> ExactNumber:
        r = self.k if r is None else r
        if j - i + 1 <= r:
            return 0
        return self.tables[r][i][j]

    def rebuild_tracks(self, i: int, j: int, r: int, out: list):
        """Append one track per robot covering [i, j] with r robots."""
        if j < i:
            return
        count = j - i + 1
        x = self.line.coordinates
        if count <= r:
            for v in range(i, j + 1):
                out.append(RobotTrack(((0, x[v]),)))
            for _ in range(r - count):
                out.append(RobotTrack(((0, x[i]),)))
            return
        if r == 1:
            labels = self.base.labels
            out.append(RobotTrack(extract_trajectory(labels, best_target(labels, i, j))))
            return
        r1, r2 = self.parts[r]
        _, split = _opt_split(self.tables[r1], r1, self.tables[r2], r2, i, j)
        self.rebuild_tracks(i, split, r1, out)
        self.rebuild_tracks(split + 1, j, r2, out)

    def all_finite_values(self) -> set:
        vals = {0}
        vals.update(self.base.labels.finite_values())
        for table in self.tables.values():
            for row in table:
                vals.update(v for v in row if v is not INFINITY)
        return vals


def solve_free(line: LineInstance, k: int, collect_candidates: bool = False) -> Verdict:
    """Optimal exploration time and placement for k freely placed robots."""
    solver = FreeSolve(line, k)
    n = line.n
    optimum = solver.value(0, n - 1)
    candidates = tuple(sorted(solver.all_finite_values())) if collect_candidates else None
    if optimum is INFINITY:
        return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)
    tracks: list = []
    solver.rebuild_tracks(0, n - 1, k, tracks)
    return Verdict(
        feasible=True,
        optimum=optimum,
        schedule=Schedule(kind="line", tracks=tuple(tracks)),
        candidates=candidates,
    )


def free_tables(line: LineInstance, k: int) -> dict:
    """The T[r] tables computed on the doubling path to k (for validation)."""
    return FreeSolve(line, k).tables
