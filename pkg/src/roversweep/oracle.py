"""Brute-force reference solvers and the schedule verifier.

Everything here is deliberately independent of the state-graph dynamic
programs: walks are enumerated by direct recursion over turning choices,
and verdicts come from exhaustive search over walk assignments (with
exactness-preserving pruning only).  These are the oracles the fast
solvers are tested against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from .exact import ExactNumber, INFINITY
from .instance import (
    FIXED,
    FREE,
    LineInstance,
    ProblemSpec,
    RingInstance,
    StarInstance,
    node_count,
)
from .schedule import (
    NodeCheck,
    RobotTrack,
    Schedule,
    ScheduleError,
    Verdict,
    VerificationReport,
)


class CapExceeded(RuntimeError):
    """Exact search refused: the instance exceeds the configured size caps."""


@dataclass(frozen=True)
class Caps:
    max_n: int = 10
    max_k: int = 4
    max_f: int = 2


@dataclass(frozen=True)
class Walk:
    """A single-robot trajectory that grows its covered stretch at every turn."""

    start: int
    turns: tuple            # turning-point node indices, final position last
    first_visit: tuple      # per node: time of first visit, or None
    completion: ExactNumber  # time of the last first-visit
    waypoints: tuple        # ((time, unwrapped coordinate), ...) incl. the start

    def covered(self) -> frozenset:
        return frozenset(v for v, t in enumerate(self.first_visit) if t is not None)


def _line_walks(line: LineInstance, start: int, budget, deadlines) -> List[Walk]:
    x = line.coordinates
    n = line.n
    out: List[Walk] = []
    fv: list = [None] * n
    fv[start] = 0

    def emit(t, end, turns, waypoints):
        final = tuple(turns) + ((end,) if len(waypoints) > 1 else ())
        out.append(Walk(start, final, tuple(fv), t, tuple(waypoints)))

    def rec(lo, hi, at_left, t, last_dir, turns, waypoints):
        pos = x[lo] if at_left else x[hi]
        can_left = False
        can_right = False
        if lo > 0:
            t_left = t + (pos - x[lo - 1])
            can_left = t_left <= budget and t_left <= deadlines[lo - 1]
        if hi < n - 1:
            t_right = t + (x[hi + 1] - pos)
            can_right = t_right <= budget and t_right <= deadlines[hi + 1]
        if not can_left and not can_right:
            emit(t, lo if at_left else hi, turns, waypoints)
            return
        if can_left:
            fv[lo - 1] = t_left
            new_turns = turns + [hi] if last_dir == 1 else turns
            wp = waypoints + [(t_left, x[lo - 1])]
            if last_dir == -1:
                wp = waypoints[:-1] + [(t_left, x[lo - 1])]
            rec(lo - 1, hi, True, t_left, -1, new_turns, wp)
            fv[lo - 1] = None
        if can_right:
            fv[hi + 1] = t_right
            new_turns = turns + [lo] if last_dir == -1 else turns
            wp = waypoints + [(t_right, x[hi + 1])]
            if last_dir == 1:
                wp = waypoints[:-1] + [(t_right, x[hi + 1])]
            rec(lo, hi + 1, False, t_right, 1, new_turns, wp)
            fv[hi + 1] = None

    rec(start, start, True, 0, 0, [], [(0, x[start])])
    return out


def _ring_walks(ring: RingInstance, start: int, budget, deadlines) -> List[Walk]:
    n = ring.n
    w = ring.edge_weights
    pos_of = ring.arc_positions()
    out: List[Walk] = []
    fv: list = [None] * n
    fv[start] = 0

    def emit(t, end, turns, waypoints):
        final = tuple(turns) + ((end,) if len(waypoints) > 1 else ())
        out.append(Walk(start, final, tuple(fv), t, tuple(waypoints)))

    def seg_len(i, j):
        return ring.ccw_dist(i, j)

    def rec(i, j, at_left, size, t, last_dir, turns, waypoints):
        here = i if at_left else j
        if size == n:
            emit(t, here, turns, waypoints)
            return
        unwrapped = waypoints[-1][1]
        nxt_ccw = (j + 1) % n
        nxt_cw = (i - 1) % n
        d_ccw = (seg_len(here, j) if at_left else 0) + w[j]
        d_cw = (seg_len(i, here) if not at_left else 0) + w[nxt_cw]
        t_ccw = t + d_ccw
        t_cw = t + d_cw
        can_ccw = t_ccw <= budget and t_ccw <= deadlines[nxt_ccw]
        can_cw = t_cw <= budget and t_cw <= deadlines[nxt_cw]
        if not can_ccw and not can_cw:
            emit(t, here, turns, waypoints)
            return
        if can_cw:
            fv[nxt_cw] = t_cw
            new_turns = turns + [here] if last_dir == 1 else turns
            wp = (waypoints[:-1] if last_dir == -1 else waypoints) + [(t_cw, unwrapped - d_cw)]
            rec(nxt_cw, j, True, size + 1, t_cw, -1, new_turns, wp)
            fv[nxt_cw] = None
        if can_ccw:
            fv[nxt_ccw] = t_ccw
            new_turns = turns + [here] if last_dir == -1 else turns
            wp = (waypoints[:-1] if last_dir == 1 else waypoints) + [(t_ccw, unwrapped + d_ccw)]
            rec(i, nxt_ccw, False, size + 1, t_ccw, 1, new_turns, wp)
            fv[nxt_ccw] = None

    rec(start, start, False, 1, 0, 0, [], [(0, pos_of[start])])
    return out


def enumerate_walks(
    topology: Union[LineInstance, RingInstance],
    start: int,
    budget: ExactNumber = INFINITY,
    deadlines: Optional[Sequence[ExactNumber]] = None,
) -> List[Walk]:
    """All maximal turning-point walks whose first visits meet the deadlines.

    Any physical trajectory's first-visit profile is matched or beaten by
    one of these walks, so they are a complete plan space for one robot.
    Pass all-INFINITY deadlines to enumerate unpruned walks (useful when
    late arrivals are allowed but simply do not count as coverage).
    """
    if deadlines is None:
        deadlines = topology.deadlines
    if isinstance(topology, LineInstance):
        return _line_walks(topology, start, budget, deadlines)
    if isinstance(topology, RingInstance):
        return _ring_walks(topology, start, budget, deadlines)
    raise TypeError("walks are defined for lines and rings only")


def walk_track(walk: Walk) -> RobotTrack:
    return RobotTrack(tuple(walk.waypoints))


# --------------------------------------------------------------------------
# exhaustive solving
# --------------------------------------------------------------------------

_NO_DEADLINES: dict = {}


def _free_walks(topology, start) -> List[Walk]:
    """Unpruned maximal walks (deadlines ignored during expansion)."""
    n = topology.n
    return enumerate_walks(topology, start, INFINITY, (INFINITY,) * n)


def _profiles(topology, start, deadlines, bound) -> List[tuple]:
    """Dominance antichain of on-time first-visit profiles for one start.

    A profile lists, per node, the first visit time if it lands by
    min(deadline, bound), else None.  Profiles that are pointwise no
    better than another are dropped; this never changes exact optima.
    """
    n = topology.n
    raw = []
    for walk in _free_walks(topology, start):
        prof = []
        for v in range(n):
            t = walk.first_visit[v]
            if t is None or t > deadlines[v] or (bound is not None and t > bound):
                prof.append(None)
            else:
                prof.append(t)
        raw.append((tuple(prof), walk))
    raw.sort(key=lambda pw: (sum(1 for t in pw[0] if t is None), pw[1].completion, pw[1].turns))
    kept: List[tuple] = []
    for prof, walk in raw:
        dominated = False
        for kp, _ in kept:
            if all(
                (t is None) or (kp[v] is not None and kp[v] <= t)
                for v, t in enumerate(prof)
            ):
                dominated = True
                break
        if not dominated:
            kept.append((prof, walk))
    return kept


def _placements(spec: ProblemSpec):
    k = spec.k
    nodes = node_count(spec.topology)
    if spec.placement.mode == FIXED:
        yield spec.placement.positions
        return
    pool = range(nodes) if spec.placement.mode == FREE else spec.placement.allowed
    combine = (
        itertools.combinations_with_replacement if spec.faults > 0 else itertools.combinations
    )
    yield from combine(tuple(pool), k)


def _kth_smallest(values: list, need: int) -> ExactNumber:
    finite = sorted(v for v in values if v is not None)
    if len(finite) < need:
        return INFINITY
    return finite[need - 1]


def brute_solve(spec: ProblemSpec, caps: Caps = Caps()) -> Verdict:
    """Exact optimum by exhaustive search over placements and walk tuples.

    Minimizes the earliest moment by which every node has been visited by
    f+1 distinct robots on time.  Refuses instances beyond ``caps``.
    """
    top = spec.topology
    if isinstance(top, StarInstance):
        raise TypeError("brute_solve covers lines and rings; use the star solvers")
    n = top.n
    k = spec.k
    if n > caps.max_n or k > caps.max_k or spec.faults > caps.max_f:
        raise CapExceeded(
            f"exact search refused: n={n}, k={k}, f={spec.faults} exceeds caps "
            f"(max_n={caps.max_n}, max_k={caps.max_k}, max_f={caps.max_f})"
        )
    need = spec.faults + 1
    deadlines = top.deadlines
    bound = spec.bound

    best = [INFINITY, None, None]  # metric, placement, plan tuple
    profile_cache: dict = {}

    def profiles_for(start):
        if start not in profile_cache:
            profile_cache[start] = _profiles(top, start, deadlines, bound)
        return profile_cache[start]

    for placement in _placements(spec):
        plan_sets = [profiles_for(p) for p in placement]
        if any(not ps for ps in plan_sets):
            continue
        best_fv = [
            [
                min((prof[v] for prof, _ in ps if prof[v] is not None), default=None)
                for v in range(n)
            ]
            for ps in plan_sets
        ]
        chosen: List[tuple] = []

        def bound_partial() -> ExactNumber:
            worst = 0
            for v in range(n):
                pool = [prof[v] for prof, _ in chosen]
                pool += [best_fv[r][v] for r in range(len(chosen), k)]
                tv = _kth_smallest(pool, need)
                if tv is INFINITY:
                    return INFINITY
                if tv > worst:
                    worst = tv
            return worst

        def dfs(r: int):
            lb = bound_partial()
            if lb is INFINITY or lb >= best[0]:
                return
            if r == k:
                if lb < best[0]:
                    best[0] = lb
                    best[1] = placement
                    best[2] = tuple(chosen)
                return
            for prof_walk in plan_sets[r]:
                chosen.append(prof_walk)
                dfs(r + 1)
                chosen.pop()

        dfs(0)

    if best[1] is None:
        return Verdict(feasible=False, optimum=INFINITY)
    tracks = tuple(walk_track(walk) for _, walk in best[2])
    kind = "line" if isinstance(top, LineInstance) else "ring"
    schedule = Schedule(
        kind=kind,
        tracks=tracks,
        circumference=top.total if kind == "ring" else None,
    )
    witness = {}
    for v in range(n):
        visits = sorted(
            ((ridx, prof[v]) for ridx, (prof, _) in enumerate(best[2]) if prof[v] is not None),
            key=lambda rt: (rt[1], rt[0]),
        )
        witness[v] = tuple(visits)
    return Verdict(feasible=True, optimum=best[0], schedule=schedule, witness=witness)


def brute_solve_alt(spec: ProblemSpec) -> Verdict:
    """Second, independently coded enumerator (tiny caps, no pruning).

    Cross-checks brute_solve; walks come from a breadth-first expansion
    instead of the depth-first recursion, and tuples are evaluated by a
    plain product scan.
    """
    top = spec.topology
    n = top.n
    k = spec.k
    if n > 6 or k > 3:
        raise CapExceeded("alternate enumerator caps at n <= 6, k <= 3")
    need = spec.faults + 1
    deadlines = top.deadlines
    bound = spec.bound
    is_line = isinstance(top, LineInstance)

    def expand(start):
        # states: (covered frozenset, boundary pair, at_left, time, fv dict)
        if is_line:
            init = (start, start, True, 0, ((start, 0),))
        else:
            init = (start, start, False, 0, ((start, 0),))
        frontier = [init]
        finished = []
        while frontier:
            nxt = []
            for lo, hi, at_left, t, fv in frontier:
                moves = []
                if is_line:
                    pos = top.coordinates[lo] if at_left else top.coordinates[hi]
                    if lo > 0:
                        moves.append((lo - 1, hi, True, t + (pos - top.coordinates[lo - 1])))
                    if hi < n - 1:
                        moves.append((lo, hi + 1, False, t + (top.coordinates[hi + 1] - pos)))
                else:
                    size = (hi - lo) % n + 1
                    if size < n:
                        here = lo if at_left else hi
                        d_ccw = (top.ccw_dist(here, hi)) + top.edge_weights[hi]
                        d_cw = (top.ccw_dist(lo, here)) + top.edge_weights[(lo - 1) % n]
                        moves.append(((lo - 1) % n, hi, True, t + d_cw))
                        moves.append((lo, (hi + 1) % n, False, t + d_ccw))
                if not moves:
                    finished.append(fv)
                    continue
                for nlo, nhi, nat_left, nt in moves:
                    new_node = nlo if nat_left else nhi
                    nxt.append((nlo, nhi, nat_left, nt, fv + ((new_node, nt),)))
            frontier = nxt
        return [dict(fv) for fv in finished]

    best: List = [INFINITY]
    for placement in _placements(spec):
        plan_lists = [expand(p) for p in placement]
        for combo in itertools.product(*plan_lists):
            worst = 0
            ok = True
            for v in range(n):
                times = []
                for fv in combo:
                    t = fv.get(v)
                    if t is not None and t <= deadlines[v] and (bound is None or t <= bound):
                        times.append(t)
                times.sort()
                if len(times) < need:
                    ok = False
                    break
                if times[need - 1] > worst:
                    worst = times[need - 1]
            if ok and worst < best[0]:
                best[0] = worst
    if best[0] is INFINITY:
        return Verdict(feasible=False, optimum=INFINITY)
    return Verdict(feasible=True, optimum=best[0])


def naive_team_tables(line: LineInstance, k_max: int) -> dict:
    """Reference DP for free-placement teams: split on every index, O(k n^3).

    Returns tables[r][i][j] = optimal time for r freely placed robots to
    explore [i, j], built by peeling one robot off the right side.
    """
    from .single_robot import interval_table  # local import: oracle stays the checker

    n = line.n
    base = interval_table(line, range(n))
    t1 = [[base.get(i, j) if j >= i else 0 for j in range(n)] for i in range(n)]
    tables = {1: t1}
    for r in range(2, k_max + 1):
        prev = tables[r - 1]
        cur = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                if j - i + 1 <= r:
                    cur[i][j] = 0
                    continue
                best = INFINITY
                for m in range(i, j + 1):
                    left = prev[i][m]
                    right = t1[m + 1][j] if m + 1 <= j else 0
                    cand = max(left, right)
                    if cand < best:
                        best = cand
                cur[i][j] = best
        tables[r] = cur
    return tables


# --------------------------------------------------------------------------
# schedule verification
# --------------------------------------------------------------------------


def _check_track_shape(ridx: int, track: RobotTrack, coordinate_kind: bool):
    wps = track.waypoints
    t0 = wps[0][0]
    if t0 != 0:
        raise ScheduleError(ridx, "first waypoint must be at time 0")
    for widx in range(1, len(wps)):
        t_prev, x_prev = wps[widx - 1]
        t_cur, x_cur = wps[widx]
        if t_cur <= t_prev:
            raise ScheduleError(ridx, f"waypoint {widx}: times must strictly increase")
        if coordinate_kind:
            dist = x_cur - x_prev
            if dist < 0:
                dist = -dist
            if dist > t_cur - t_prev:
                raise ScheduleError(ridx, f"waypoint {widx}: exceeds unit speed")


def _line_visits(nodes: Sequence, track: RobotTrack) -> dict:
    first: dict = {}

    def note(v, t):
        if v not in first or t < first[v]:
            first[v] = t

    wps = track.waypoints
    for v, c in enumerate(nodes):
        if c == wps[0][1]:
            note(v, 0)
    for (t1, x1), (t2, x2) in zip(wps, wps[1:]):
        lo, hi = (x1, x2) if x1 <= x2 else (x2, x1)
        for v, c in enumerate(nodes):
            if lo <= c <= hi:
                note(v, t1 + (c - x1 if c >= x1 else x1 - c))
    return first


def _ring_visits(nodes: Sequence, total, track: RobotTrack) -> dict:
    import math

    first: dict = {}

    def note(v, t):
        if v not in first or t < first[v]:
            first[v] = t

    wps = track.waypoints
    for (t1, x1), (t2, x2) in itertools.chain(
        [((0, wps[0][1]), (0, wps[0][1]))], zip(wps, wps[1:])
    ):
        lo, hi = (x1, x2) if x1 <= x2 else (x2, x1)
        for v, c in enumerate(nodes):
            # lifts c + m*total inside [lo, hi]
            m_lo = math.ceil((lo - c) / total)
            m_hi = math.floor((hi - c) / total)
            for m in range(m_lo, m_hi + 1):
                y = c + m * total
                note(v, t1 + (y - x1 if y >= x1 else x1 - y))
    return first


def _star_visits(star: StarInstance, ridx: int, track: RobotTrack) -> dict:
    first: dict = {}

    def note(v, t):
        if v not in first or t < first[v]:
            first[v] = t

    w = star.leaf_weights
    center = star.center
    wps = track.waypoints
    note(wps[0][1], 0)
    for (t1, a), (t2, b) in zip(wps, wps[1:]):
        if a == b:
            continue
        if a == center or b == center:
            leaf = b if a == center else a
            if not 0 <= leaf < star.q:
                raise ScheduleError(ridx, f"unknown node {leaf}")
            length = w[leaf]
            mid = None
        else:
            if not (0 <= a < star.q and 0 <= b < star.q):
                raise ScheduleError(ridx, f"unknown node {a} or {b}")
            length = w[a] + w[b]
            mid = (center, t1 + w[a])
        if t2 - t1 < length:
            raise ScheduleError(ridx, f"segment to waypoint at t={t2} exceeds unit speed")
        if mid is not None:
            note(mid[0], mid[1])
        note(b, t1 + length)
    return first


def verify_schedule(spec: ProblemSpec, schedule: Schedule) -> VerificationReport:
    """Simulate the motion and check f+1 distinct on-time visitors per node.

    A visit counts if its time is at or before min(node deadline, global
    bound).  The makespan is the last moment any robot is in motion.
    Malformed schedules raise ScheduleError rather than failing checks.
    """
    top = spec.topology
    need = spec.faults + 1
    bound = spec.bound

    if isinstance(top, LineInstance):
        nodes = top.coordinates
        deadline_of = top.deadlines
        expected_kind = "line"
    elif isinstance(top, RingInstance):
        nodes = top.arc_positions()
        deadline_of = top.deadlines
        expected_kind = "ring"
    else:
        nodes = tuple(range(top.q + 1))
        deadline_of = top.leaf_deadlines + (top.center_deadline,)
        expected_kind = "star"
    if schedule.kind != expected_kind:
        raise ScheduleError(None, f"schedule kind {schedule.kind!r} does not match the instance")
    if expected_kind == "ring" and schedule.circumference != top.total:
        raise ScheduleError(None, "declared circumference does not match the ring")
    if len(schedule.tracks) != spec.k:
        raise ScheduleError(None, f"expected {spec.k} robot tracks, got {len(schedule.tracks)}")

    makespan = 0
    per_robot_visits = []
    for ridx, track in enumerate(schedule.tracks):
        _check_track_shape(ridx, track, coordinate_kind=expected_kind != "star")
        if expected_kind == "line":
            visits = _line_visits(nodes, track)
        elif expected_kind == "ring":
            visits = _ring_visits(nodes, top.total, track)
        else:
            visits = _star_visits(top, ridx, track)
        per_robot_visits.append(visits)
        last_move = 0
        wps = track.waypoints
        for (t1, x1), (t2, x2) in zip(wps, wps[1:]):
            if x1 == x2:
                continue
            if expected_kind == "star":
                a, b = x1, x2
                length = (
                    top.leaf_weights[b if a == top.center else a]
                    if top.center in (a, b)
                    else top.leaf_weights[a] + top.leaf_weights[b]
                )
                arrive = t1 + length
            else:
                arrive = t1 + (x2 - x1 if x2 >= x1 else x1 - x2)
            if arrive > last_move:
                last_move = arrive
        if last_move > makespan:
            makespan = last_move

    checks = []
    failures = []
    for v in range(len(nodes)):
        cutoff = deadline_of[v] if bound is None else min(deadline_of[v], bound)
        on_time = []
        for ridx, visits in enumerate(per_robot_visits):
            t = visits.get(v)
            if t is not None and t <= cutoff:
                on_time.append((ridx, t))
        on_time.sort(key=lambda rt: (rt[1], rt[0]))
        check = NodeCheck(node=v, required=need, covered=len(on_time), visits=tuple(on_time))
        checks.append(check)
        if len(on_time) < need:
            failures.append(check)
    return VerificationReport(
        passed=not failures,
        makespan=makespan,
        nodes=tuple(checks),
        failures=tuple(failures),
    )
