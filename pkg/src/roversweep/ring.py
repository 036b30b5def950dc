"""Exploration of rings: fixed and free placements, with and without crashes.

Fixed reliable placement: some edge between the closest pair of adjacent
robots is idle in an optimal solution, so the ring is cut at each
candidate edge and the line combination recurrence is re-run; per-robot
segment times come from a single state-graph pass per robot, restricted
to the window between its neighbours, so the cut loop only repeats the
cheap combination phase.

Crash tolerance with free placement reduces to exploring the ring made
of f+1 concatenated copies: visiting every copy once is the same as
covering the original ring f+1 times.  For fixed positions the decision
procedure computes, per node of the replicated ring, the farthest
counterclockwise reach P(i) achievable within the bound by a robot
started at any permitted copy position, then greedily chains reaches
along each of the n candidate cut segments.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from .exact import ExactNumber, INFINITY, is_finite
from .instance import FREE, ProblemSpec, RingInstance, RobotPlacement
from .oracle import verify_schedule
from .schedule import RobotTrack, Schedule, Verdict
from .single_robot import (
    TimeLabels,
    best_target,
    extract_trajectory,
    init_start,
    optimal_time,
    propagate,
)
from .state_graph import StateGraph


def _segment_inside(n: int, i: int, j: int, lo: int, hi: int) -> bool:
    """Is the ccw segment [i, j] strictly inside the open ccw interval (lo, hi)?"""
    room = (hi - lo - 1) % n
    oi = (i - lo) % n
    oj = (j - lo) % n
    return 1 <= oi <= oj <= room


def _track_from_ring_labels(labels: TimeLabels, target: int) -> RobotTrack:
    return RobotTrack(extract_trajectory(labels, target))


# --------------------------------------------------------------------------
# fixed placement, reliable robots
# --------------------------------------------------------------------------


def solve_ring_fixed(
    ring: RingInstance,
    positions: Iterable[int],
    collect_candidates: bool = False,
) -> Verdict:
    """Optimal ring exploration by reliable robots at given distinct nodes."""
    positions = tuple(sorted(positions))
    n = ring.n
    if len(set(positions)) != len(positions):
        raise ValueError("fixed positions must be distinct for reliable robots")
    if any(not 0 <= p < n for p in positions):
        raise ValueError("robot position out of range")
    k = len(positions)
    graph = StateGraph.from_ring(ring)

    if k == 1:
        labels = init_start(graph, [positions[0]])
        propagate(graph, labels, ring.deadlines)
        candidates = tuple(sorted(set(labels.finite_values()))) if collect_candidates else None
        best_uid = None
        best_time = INFINITY
        for uid in graph.terminal_ids():
            t = labels.time[uid]
            if t < best_time:
                best_time, best_uid = t, uid
        if best_uid is None:
            return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)
        return Verdict(
            feasible=True,
            optimum=best_time,
            schedule=Schedule(
                kind="ring",
                tracks=(_track_from_ring_labels(labels, best_uid),),
                circumference=ring.total,
            ),
            candidates=candidates,
        )

    forests: List[tuple] = []
    for m, p in enumerate(positions):
        lo = positions[(m - 1) % k]
        hi = positions[(m + 1) % k]
        labels = init_start(graph, [p])
        propagate(graph, labels, ring.deadlines, window=(lo, hi))
        forests.append((labels, lo, hi))

    def robot_time(m: int, i: int, j: int):
        labels, lo, hi = forests[m]
        if not _segment_inside(n, i, j, lo, hi):
            return INFINITY
        return optimal_time(labels, i, j)

    # candidate idle edges live between the closest adjacent pair (fewest edges)
    gaps = [((positions[(m + 1) % k] - positions[m]) % n, m) for m in range(k)]
    gap, pick = min(gaps)
    cut_edges = [(positions[pick] + t) % n for t in range(gap)]

    best = (INFINITY, None, None)  # optimum, cut edge, segment list
    for cut in cut_edges:
        head = (cut + 1) % n
        order = [(head + t) % n for t in range(n)]
        line_pos = sorted(((p - head) % n, m) for m, p in enumerate(positions))
        qs = [q for q, _ in line_pos]
        prefix: list = [INFINITY] * n
        choice: list = [None] * n
        for j in range(n):
            r = bisect_right(qs, j)
            if r == 0:
                continue
            m_lo = qs[r - 2] + 1 if r >= 2 else 0
            m_hi = qs[r - 1]
            robot = line_pos[r - 1][1]
            b = INFINITY
            bm = None
            for m in range(m_lo, m_hi + 1):
                left = 0 if m == 0 else prefix[m - 1]
                if left is INFINITY:
                    continue
                right = robot_time(robot, order[m], order[j])
                cand = left if left >= right else right
                if cand < b:
                    b, bm = cand, m
            prefix[j] = b
            choice[j] = bm
        if prefix[n - 1] < best[0]:
            segments = []
            j = n - 1
            while j >= 0:
                r = bisect_right(qs, j)
                m = choice[j]
                segments.append((line_pos[r - 1][1], order[m], order[j]))
                j = m - 1
            segments.reverse()
            best = (prefix[n - 1], cut, segments)

    candidates = None
    if collect_candidates:
        vals = {0}
        for labels, _, _ in forests:
            vals.update(labels.finite_values())
        candidates = tuple(sorted(vals))

    if best[1] is None:
        return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)
    optimum, cut, segments = best
    tracks = [None] * k
    idle = [(cut, (cut + 1) % n)]
    for robot, i, j in segments:
        labels = forests[robot][0]
        tracks[robot] = _track_from_ring_labels(labels, best_target(labels, i, j))
        if i != (cut + 1) % n:
            idle.append(((i - 1) % n, i))
    return Verdict(
        feasible=True,
        optimum=optimum,
        schedule=Schedule(kind="ring", tracks=tuple(tracks), circumference=ring.total),
        idle_edges=tuple(sorted(idle)),
        candidates=candidates,
    )


# --------------------------------------------------------------------------
# free placement, reliable robots
# --------------------------------------------------------------------------


class RingFreeSolve:
    """Tables T[r][start][length-1] over counterclockwise segments."""

    __slots__ = ("ring", "k", "graph", "labels", "tables", "parts")

    def __init__(self, ring: RingInstance, k: int):
        if k < 1:
            raise ValueError("need at least one robot")
        self.ring = ring
        self.k = k
        n = ring.n
        self.graph = StateGraph.from_ring(ring)
        self.labels = init_start(self.graph, range(n))
        propagate(self.graph, self.labels, ring.deadlines)
        t1 = [[None] * n for _ in range(n)]
        for i in range(n):
            for ell in range(n - 1):
                t1[i][ell] = optimal_time(self.labels, i, (i + ell) % n)
            # full-coverage entries are never read through the tables
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
                self.tables[p + r] = self._combine(p, r)
                self.parts[p + r] = (p, r)
                r = p + r

    def _combine(self, r1: int, r2: int):
        a = self.tables[r1]
        bt = self.tables[r2]
        n = self.ring.n
        rsum = r1 + r2
        out = [[0] * n for _ in range(n)]
        for i in range(n):
            ai = a[i]
            row = out[i]
            for ell in range(rsum, n):
                lo = r1 - 1
                hi = ell - r2
                x, y = lo, hi
                while y - x > 1:
                    mid = (x + y) >> 1
                    if ai[mid] < bt[(i + mid + 1) % n][ell - mid - 1]:
                        x = mid
                    else:
                        y = mid
                lx, rx = ai[x], bt[(i + x + 1) % n][ell - x - 1]
                vx = lx if lx >= rx else rx
                if x != y:
                    ly, ry = ai[y], bt[(i + y + 1) % n][ell - y - 1]
                    vy = ly if ly >= ry else ry
                    if vy < vx:
                        vx = vy
                row[ell] = vx
        return out

    def value(self, i: int, ell: int, r: Optional[int] = None) -> ExactNumber:
        r = self.k if r is None else r
        if ell + 1 <= r:
            return 0
        return self.tables[r][i][ell]

    def rebuild_tracks(self, i: int, ell: int, r: int, out: list):
        pos = self.ring.arc_positions()
        n = self.ring.n
        count = ell + 1
        if count <= r:
            for t in range(count):
                out.append(RobotTrack(((0, pos[(i + t) % n]),)))
            for _ in range(r - count):
                out.append(RobotTrack(((0, pos[i]),)))
            return
        if r == 1:
            target = best_target(self.labels, i, (i + ell) % n)
            out.append(_track_from_ring_labels(self.labels, target))
            return
        r1, r2 = self.parts[r]
        a = self.tables[r1]
        bt = self.tables[r2]
        lo, hi = r1 - 1, ell - r2
        x, y = lo, hi
        while y - x > 1:
            mid = (x + y) >> 1
            if a[i][mid] < bt[(i + mid + 1) % n][ell - mid - 1]:
                x = mid
            else:
                y = mid
        lx, rx = a[i][x], bt[(i + x + 1) % n][ell - x - 1]
        vx = lx if lx >= rx else rx
        split = x
        if x != y:
            ly, ry = a[i][y], bt[(i + y + 1) % n][ell - y - 1]
            vy = ly if ly >= ry else ry
            if vy < vx:
                split = y
        self.rebuild_tracks(i, split, r1, out)
        self.rebuild_tracks((i + split + 1) % n, ell - split - 1, r2, out)


def solve_ring_free(ring: RingInstance, k: int, collect_candidates: bool = False) -> Verdict:
    """Optimal ring exploration time for k freely placed robots."""
    n = ring.n
    solver = RingFreeSolve(ring, k)
    candidates = None
    if collect_candidates:
        vals = {0}
        vals.update(solver.labels.finite_values())
        for tbl in solver.tables.values():
            for row in tbl:
                vals.update(v for v in row if v is not None and v is not INFINITY)
        candidates = tuple(sorted(vals))

    if k == 1:
        best_uid = None
        best_time = INFINITY
        for uid in solver.graph.terminal_ids():
            t = solver.labels.time[uid]
            if t < best_time:
                best_time, best_uid = t, uid
        if best_uid is None:
            return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)
        return Verdict(
            feasible=True,
            optimum=best_time,
            schedule=Schedule(
                kind="ring",
                tracks=(_track_from_ring_labels(solver.labels, best_uid),),
                circumference=ring.total,
            ),
            candidates=candidates,
        )

    best_i, best_val = None, INFINITY
    for i in range(n):
        val = solver.value(i, n - 1)
        if val < best_val:
            best_val, best_i = val, i
    if best_i is None:
        return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)
    tracks: list = []
    solver.rebuild_tracks(best_i, n - 1, k, tracks)
    return Verdict(
        feasible=True,
        optimum=best_val,
        schedule=Schedule(kind="ring", tracks=tuple(tracks), circumference=ring.total),
        candidates=candidates,
    )


# --------------------------------------------------------------------------
# crash faults
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ReplicatedRing:
    """f+1 copies of a ring glued end to end; node i maps back to i mod n."""

    base: RingInstance
    ring: RingInstance
    copies: int
    permitted_starts: Optional[tuple] = None

    def copy_of(self, i: int) -> int:
        return i % self.base.n


def replicate_ring(
    ring: RingInstance, f: int, starts: Optional[Iterable[int]] = None
) -> ReplicatedRing:
    """Covering the base ring f+1 times equals exploring this ring once."""
    if f < 0:
        raise ValueError("fault budget must be non-negative")
    copies = f + 1
    big = RingInstance(ring.edge_weights * copies, ring.deadlines * copies)
    permitted = None
    if starts is not None:
        n = ring.n
        permitted = tuple(sorted({p + t * n for p in starts for t in range(copies)}))
    return ReplicatedRing(base=ring, ring=big, copies=copies, permitted_starts=permitted)


def _project_tracks(tracks: Sequence[RobotTrack], base_total) -> tuple:
    """Re-anchor replicated-ring tracks onto the base circumference."""
    projected = []
    for tr in tracks:
        start = tr.waypoints[0][1]
        shift = (start // base_total) * base_total
        projected.append(RobotTrack(tuple((t, x - shift) for t, x in tr.waypoints)))
    return tuple(projected)


def solve_ring_free_faulty(ring: RingInstance, k: int, f: int) -> Verdict:
    """f-reliable ring exploration with free starts, via ring replication.

    Solves the f+1-times-replicated ring and projects each robot's
    segment back.  Without finite node deadlines this is exactly optimal
    (validated against exhaustive search); finite deadlines can make
    irregularly overlapping covers beat any replication tiling, in which
    case this value is only the best replication-shaped answer.  The
    projected schedule is re-verified before being returned.
    """
    if not 0 <= f < k:
        raise ValueError("need 0 <= f < k")
    rep = replicate_ring(ring, f)
    big = solve_ring_free(rep.ring, k)
    if not big.feasible:
        return Verdict(feasible=False, optimum=INFINITY)
    tracks = _project_tracks(big.schedule.tracks, ring.total)
    schedule = Schedule(kind="ring", tracks=tracks, circumference=ring.total)
    spec = ProblemSpec(
        topology=ring, placement=RobotPlacement(FREE, count=k), faults=f, bound=None
    )
    report = verify_schedule(spec, schedule)
    if not report.passed:
        # a replication segment spanned more than one lap, so one robot
        # would have to cover some node twice; the value is unrealizable
        raise RuntimeError(
            "replication produced a segment longer than one lap; "
            "its value is not achievable by distinct robots"
        )
    witness = {c.node: c.visits for c in report.nodes}
    return Verdict(feasible=True, optimum=big.optimum, schedule=schedule, witness=witness)


def _reach_table(rep: ReplicatedRing, delta) -> tuple:
    """P(i): farthest ccw node coverable from a permitted start within delta.

    Also reports whether some single permitted start explores the whole
    replicated ring within delta.  Time tables with restricted starts are
    not containment-monotone (a longer segment may admit a better start),
    so every length is scanned.
    """
    big = rep.ring
    n = big.n
    graph = StateGraph.from_ring(big)
    labels = init_start(graph, rep.permitted_starts)
    propagate(graph, labels, big.deadlines)
    reach: List[Optional[int]] = [None] * n
    for i in range(n):
        best = None
        for ell in range(n - 1):
            if optimal_time(labels, i, (i + ell) % n) <= delta:
                best = ell
        reach[i] = best
    full = None
    full_time = INFINITY
    for uid in graph.terminal_ids():
        t = labels.time[uid]
        if t <= delta and t < full_time:
            full, full_time = uid, t
    return reach, labels, full


def _assign_segments(
    rep: ReplicatedRing,
    positions: Sequence[int],
    graph: StateGraph,
    targets: Sequence[int],
    delta,
) -> Optional[list]:
    """Match the greedy's segments to distinct physical robots.

    An edge exists when some copy of the robot, started alone, explores
    the segment within the bound; a perfect matching yields one track per
    served segment.  Returns None when no matching exists.
    """
    big = rep.ring
    n = rep.base.n
    start_labels: dict = {}

    def labels_for(s: int) -> TimeLabels:
        if s not in start_labels:
            lab = init_start(graph, [s])
            propagate(graph, lab, big.deadlines)
            start_labels[s] = lab
        return start_labels[s]

    def serve_target(s: int, uid: int) -> Optional[int]:
        """Best reachable writing of the target segment from start s."""
        lab = labels_for(s)
        st = graph.state_of(uid)
        if graph.layer_of(uid) == big.n - 1:
            best_uid, best_t = None, INFINITY
            for t_uid in graph.terminal_ids():
                t = lab.time[t_uid]
                if t <= delta and t < best_t:
                    best_uid, best_t = t_uid, t
            return best_uid
        cand = best_target(lab, st.left, st.right)
        if cand is not None and lab.time[cand] <= delta:
            return cand
        return None

    edges = []
    for sidx, uid in enumerate(targets):
        row = []
        for ridx, p in enumerate(positions):
            for copy in range(rep.copies):
                s = p + copy * n
                cand = serve_target(s, uid)
                if cand is not None:
                    row.append((ridx, s, cand))
                    break
        edges.append(row)

    matched_robot_of: List[Optional[int]] = [None] * len(positions)
    pick: List[Optional[tuple]] = [None] * len(targets)

    def augment(sidx: int, seen: set) -> bool:
        for ridx, s, cand in edges[sidx]:
            if ridx in seen:
                continue
            seen.add(ridx)
            if matched_robot_of[ridx] is None or augment(matched_robot_of[ridx], seen):
                matched_robot_of[ridx] = sidx
                pick[sidx] = (ridx, s, cand)
                return True
        return False

    for sidx in range(len(targets)):
        if not augment(sidx, set()):
            return None
    out = []
    for sidx, chosen in enumerate(pick):
        ridx, s, cand = chosen
        out.append((_track_from_ring_labels(labels_for(s), cand), ridx))
    return out


def decide_ring_fixed_faulty(
    ring: RingInstance,
    positions: Iterable[int],
    f: int,
    delta: ExactNumber,
) -> Verdict:
    """Polynomial decision for fixed positions with up to f crashes.

    Works on the replicated ring: cut at each of the n base edges, then
    greedily extend the covered prefix, each step taking the farthest
    reach P(prefix end + 1) over all permitted start copies.  A YES comes
    with a schedule whenever the greedy's segments can be served by
    distinct physical robots; the greedy itself does not track robot
    identities (copies of one robot may serve two segments), which the
    exhaustive cross-check suite monitors.
    """
    positions = tuple(sorted(positions))
    k = len(positions)
    if not 0 <= f < k:
        raise ValueError("need 0 <= f < k")
    if not is_finite(delta):
        raise ValueError("the decision needs a finite time bound")
    n = ring.n
    rep = replicate_ring(ring, f, starts=positions)
    big_n = rep.ring.n
    reach, labels, full = _reach_table(rep, delta)

    targets = None
    if full is not None:
        targets = [full]
    else:
        for cut in range(n):
            head = (cut + 1) % big_n
            pos = 0
            segs = []
            ok = False
            for _ in range(k):
                cur = (head + pos) % big_n
                ell = reach[cur]
                if ell is None:
                    break
                segs.append(best_target(labels, cur, (cur + ell) % big_n))
                pos += ell + 1
                if pos >= big_n:
                    ok = True
                    break
            if ok:
                targets = segs
                break
    if targets is None:
        return Verdict(feasible=False, optimum=None)

    # serve the segments with distinct physical robots, if possible
    assignment = _assign_segments(rep, positions, labels.graph, targets, delta)
    if assignment is None:
        # the greedy reused copies of one robot; decision stands, no witness
        return Verdict(feasible=True, optimum=None, schedule=None)

    arc = ring.arc_positions()
    tracks: List[Optional[RobotTrack]] = [None] * k
    projected = _project_tracks([t for t, _ in assignment], ring.total)
    for proj, (_, robot) in zip(projected, assignment):
        tracks[robot] = proj
    for r, p in enumerate(positions):
        if tracks[r] is None:
            tracks[r] = RobotTrack(((0, arc[p]),))
    schedule = Schedule(kind="ring", tracks=tuple(tracks), circumference=ring.total)
    spec = ProblemSpec(
        topology=ring, placement=RobotPlacement(FREE, count=k), faults=f, bound=delta
    )
    report = verify_schedule(spec, schedule)
    if not report.passed:
        # greedy accepted a cover the physical schedule cannot realize
        return Verdict(feasible=True, optimum=None, schedule=None)
    witness = {c.node: c.visits for c in report.nodes}
    return Verdict(feasible=True, optimum=None, schedule=schedule, witness=witness)


def optimize_ring_fixed_faulty(
    ring: RingInstance, positions: Iterable[int], f: int
) -> Verdict:
    """Minimal delta for which the fixed-faulty ring decision says YES.

    Convenience wrapper: the answer can only change at a label value of
    the replicated ring, so a binary search over that candidate set with
    the decision procedure pins the optimum exactly.
    """
    positions = tuple(sorted(positions))
    rep = replicate_ring(ring, f, starts=positions)
    graph = StateGraph.from_ring(rep.ring)
    labels = init_start(graph, rep.permitted_starts)
    propagate(graph, labels, rep.ring.deadlines)
    candidates = tuple(sorted({0, *labels.finite_values()}))
    lo, hi = 0, len(candidates) - 1
    if not decide_ring_fixed_faulty(ring, positions, f, candidates[hi]).feasible:
        return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)
    while lo < hi:
        mid = (lo + hi) >> 1
        if decide_ring_fixed_faulty(ring, positions, f, candidates[mid]).feasible:
            hi = mid
        else:
            lo = mid + 1
    final = decide_ring_fixed_faulty(ring, positions, f, candidates[lo])
    return Verdict(
        feasible=True,
        optimum=candidates[lo],
        schedule=final.schedule,
        witness=final.witness,
        candidates=candidates,
    )
