"""Line exploration when up to f robots may crash.

With f possible crashes every node must collect f+1 distinct on-time
visitors, so free placement reduces to a reliable solve with
floor(k / (f+1)) robots replicated across f+1 groups.  Fixed placement
is genuinely hard; it is decided exactly by a branch-and-bound over
per-robot coverage plans driven by the leftmost under-covered node:

* the node 0 start forces every feasible assignment through a small set
  of canonical plans (cover the deficient node, reach as far right as
  possible), which is exhaustive by an exchange argument when deadlines
  are absent;
* with finite node deadlines coverage profiles may have holes, so the
  canonical choices fall back to the dominance antichain of enumerated
  turning-point walks.

Robots may legally pass nodes after their deadlines (visited or not,
nodes never block passage); such visits simply do not count as coverage.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence

from .exact import ExactNumber, INFINITY, is_finite
from .instance import FIXED, FREE, LineInstance, ProblemSpec, RingInstance, StarInstance
from .multi_line import solve_free
from .oracle import Caps, CapExceeded, enumerate_walks, verify_schedule, walk_track
from .schedule import RobotTrack, Schedule, Verdict

FIXED_SEARCH_CAPS = Caps(max_n=40, max_k=8, max_f=7)


def solve_free_faulty(
    line: LineInstance, k: int, f: int, collect_candidates: bool = False
) -> Verdict:
    """Group-replication solve for k freely placed robots, up to f crashes.

    Every node needs f+1 distinct on-time visitors; the returned value is
    the reliable optimum for floor(k/(f+1)) robots and the schedule
    replicates that group's trajectories across f+1 groups (surplus
    robots double up on the first group).  Without finite node deadlines
    this is exactly optimal: interval covers split into f+1 full covers,
    the smallest of which is no larger than the group.  Finite deadlines
    can punch holes in coverage profiles, and then a non-replicated
    schedule may finish sooner; the returned schedule remains valid
    either way.
    """
    if not 0 <= f < k:
        raise ValueError("need 0 <= f < k")
    group = k // (f + 1)
    base = solve_free(line, group, collect_candidates=collect_candidates)
    if not base.feasible:
        return Verdict(feasible=False, optimum=INFINITY, candidates=base.candidates)
    group_tracks = base.schedule.tracks
    tracks = list(group_tracks * (f + 1))
    for i in range(k - group * (f + 1)):
        tracks.append(group_tracks[i % group])
    schedule = Schedule(kind="line", tracks=tuple(tracks))
    report = verify_schedule(_check_spec(line, k, f), schedule)
    if not report.passed:
        raise RuntimeError("internal error: replicated schedule failed verification")
    witness = {c.node: c.visits for c in report.nodes}
    return Verdict(
        feasible=True,
        optimum=base.optimum,
        schedule=schedule,
        witness=witness,
        candidates=base.candidates,
    )


def _check_spec(topology, k: int, f: int, bound=None) -> ProblemSpec:
    """Spec used only to drive the verifier (placement mode is irrelevant there)."""
    from .instance import RobotPlacement

    return ProblemSpec(
        topology=topology,
        placement=RobotPlacement(FREE, count=k),
        faults=f,
        bound=bound,
    )


# --------------------------------------------------------------------------
# fixed positions: exact search
# --------------------------------------------------------------------------


def _cover_cost(xa, xb, p):
    """Time for a robot at p to first-visit all of [xa, xb] (xa <= p <= xb)."""
    near = p - xa if p - xa <= xb - p else xb - p
    return (xb - xa) + near


@dataclass(frozen=True)
class _Plan:
    mask: int              # bitmask of nodes covered on time
    track: RobotTrack


def _interval_plan(line: LineInstance, p_idx: int, a: int, b: int, delta) -> _Plan:
    x = line.coordinates
    p = x[p_idx]
    mask = ((1 << (b - a + 1)) - 1) << a
    left_first = (p - x[a]) + (x[b] - x[a])
    wps: List[tuple] = [(0, p)]
    if left_first <= delta:
        if x[a] < p:
            wps.append((p - x[a], x[a]))
        if x[b] > x[a]:
            wps.append((left_first if x[a] < p else x[b] - p, x[b]))
    else:
        if x[b] > p:
            wps.append((x[b] - p, x[b]))
        if x[a] < x[b]:
            wps.append(((x[b] - p) + (x[b] - x[a]), x[a]))
    return _Plan(mask=mask, track=RobotTrack(tuple(wps)))


class _FixedSearch:
    """Leftmost-deficit branch and bound over per-robot coverage plans."""

    def __init__(self, line: LineInstance, positions: Sequence[int], f: int, delta):
        self.line = line
        self.positions = tuple(sorted(positions))
        self.f = f
        self.delta = delta
        self.n = line.n
        self.k = len(self.positions)
        self.need = f + 1
        self.x = line.coordinates
        self.plain = all(d is INFINITY for d in line.deadlines)
        self.assigned: List[Optional[_Plan]] = [None] * self.k
        self.cover = [0] * self.n
        if not self.plain:
            self._walk_plans = [self._profile_plans(p) for p in self.positions]

    # ---- plan generation -------------------------------------------------

    def _profile_plans(self, p_idx: int) -> List[_Plan]:
        """Deadline-aware plans: antichain of on-time coverage profiles."""
        n = self.n
        inf_deadlines = (INFINITY,) * n
        plans: List[_Plan] = []
        for walk in enumerate_walks(self.line, p_idx, self.delta, inf_deadlines):
            mask = 0
            for v in range(n):
                t = walk.first_visit[v]
                if t is not None and t <= self.line.deadlines[v] and t <= self.delta:
                    mask |= 1 << v
            plans.append(_Plan(mask=mask, track=walk_track(walk)))
        plans.sort(key=lambda pl: (-pl.mask.bit_count(), pl.track.waypoints))
        kept: List[_Plan] = []
        for pl in plans:
            if not any(kp.mask | pl.mask == kp.mask for kp in kept):
                kept.append(pl)
        return kept

    def _canonical_options(self, r: int, v: int) -> List[_Plan]:
        """Plans for robot r that cover node v, maximal on the nodes >= v."""
        p_idx = self.positions[r]
        x = self.x
        delta = self.delta
        if self.plain:
            if v <= p_idx:
                if x[p_idx] - x[v] > delta:
                    return []
                lo, hi = p_idx, self.n - 1
                while lo < hi:
                    mid = (lo + hi + 1) >> 1
                    if _cover_cost(x[v], x[mid], x[p_idx]) <= delta:
                        lo = mid
                    else:
                        hi = mid - 1
                return [_interval_plan(self.line, p_idx, v, lo, delta)]
            if x[v] - x[p_idx] > delta:
                return []
            lo, hi = v, self.n - 1
            while lo < hi:
                mid = (lo + hi + 1) >> 1
                if x[mid] - x[p_idx] <= delta:
                    lo = mid
                else:
                    hi = mid - 1
            return [_interval_plan(self.line, p_idx, p_idx, lo, delta)]
        options: List[_Plan] = []
        bit = 1 << v
        tail = ~((1 << v) - 1)
        for pl in self._walk_plans[r]:
            if not pl.mask & bit:
                continue
            rest = pl.mask & tail
            if not any((opt.mask & tail) | rest == (opt.mask & tail) for opt in options):
                options = [
                    opt for opt in options if (rest | (opt.mask & tail)) != rest
                ] + [pl]
        return options

    # ---- search ----------------------------------------------------------

    def run(self) -> Optional[List[Optional[_Plan]]]:
        if self._rec():
            return list(self.assigned)
        return None

    def _leftmost_deficient(self) -> Optional[int]:
        need = self.need
        for v in range(self.n):
            if self.cover[v] < need:
                return v
        return None

    def _rec(self) -> bool:
        v = self._leftmost_deficient()
        if v is None:
            return True
        missing = self.need - self.cover[v]
        cand = []
        for r in range(self.k):
            if self.assigned[r] is None:
                opts = self._canonical_options(r, v)
                if opts:
                    cand.append((r, opts))
        if len(cand) < missing:
            return False
        for subset in itertools.combinations(cand, missing):
            for combo in itertools.product(*(opts for _, opts in subset)):
                robots = [r for r, _ in subset]
                for r, pl in zip(robots, combo):
                    self.assigned[r] = pl
                    self._apply(pl.mask, +1)
                if self._rec():
                    return True
                for r, pl in zip(robots, combo):
                    self.assigned[r] = None
                    self._apply(pl.mask, -1)
        return False

    def _apply(self, mask: int, sign: int):
        cover = self.cover
        while mask:
            low = mask & -mask
            cover[low.bit_length() - 1] += sign
            mask ^= low


def _check_caps(line: LineInstance, k: int, caps: Caps):
    if line.n > caps.max_n or k > caps.max_k:
        raise CapExceeded(
            f"exact search refused: n={line.n}, k={k} exceeds caps "
            f"(max_n={caps.max_n}, max_k={caps.max_k}); raise the caps to force it"
        )


def decide_fixed_faulty(
    line: LineInstance,
    positions: Iterable[int],
    f: int,
    delta: ExactNumber,
    caps: Caps = FIXED_SEARCH_CAPS,
) -> Verdict:
    """Exact decision: can the fixed multiset of robots, up to f of which
    may crash, visit every node by min(deadline, delta)?

    Returns a full schedule witness on YES.  Never guesses: instances
    beyond the caps raise CapExceeded instead.
    """
    positions = tuple(sorted(positions))
    if not is_finite(delta):
        raise ValueError("the decision needs a finite time bound")
    if not 0 <= f < len(positions):
        raise ValueError("need 0 <= f < k")
    _check_caps(line, len(positions), caps)

    search = _FixedSearch(line, positions, f, delta)
    result = search.run()
    if result is None:
        return Verdict(feasible=False, optimum=None)
    tracks = []
    for r, plan in enumerate(result):
        if plan is None:
            tracks.append(RobotTrack(((0, line.coordinates[positions[r]]),)))
        else:
            tracks.append(plan.track)
    schedule = Schedule(kind="line", tracks=tuple(tracks))
    report = verify_schedule(_check_spec(line, len(positions), f, delta), schedule)
    if not report.passed:
        raise RuntimeError("internal error: witness schedule failed verification")
    witness = {c.node: c.visits for c in report.nodes}
    return Verdict(feasible=True, optimum=None, schedule=schedule, witness=witness)


def fixed_faulty_candidates(line: LineInstance, positions: Iterable[int]) -> tuple:
    """All times at which the fixed-position decision can change."""
    positions = tuple(sorted(set(positions)))
    x = line.coordinates
    n = line.n
    values = {0}
    if all(d is INFINITY for d in line.deadlines):
        for p in positions:
            for a in range(0, p + 1):
                for b in range(p, n):
                    values.add(_cover_cost(x[a], x[b], x[p]))
    else:
        inf_deadlines = (INFINITY,) * n
        for p in positions:
            for walk in enumerate_walks(line, p, INFINITY, inf_deadlines):
                values.update(t for t in walk.first_visit if t is not None)
    return tuple(sorted(values))


def solve_fixed_faulty(
    line: LineInstance,
    positions: Iterable[int],
    f: int,
    caps: Caps = FIXED_SEARCH_CAPS,
) -> Verdict:
    """Minimal delta admitting an f-reliable schedule from fixed positions.

    Feasibility is monotone in delta and can only change at a plan
    completion time, so a binary search over that finite candidate set
    with the exact decision procedure yields the optimum.
    """
    positions = tuple(sorted(positions))
    if not 0 <= f < len(positions):
        raise ValueError("need 0 <= f < k")
    _check_caps(line, len(positions), caps)
    candidates = fixed_faulty_candidates(line, positions)
    lo, hi = 0, len(candidates) - 1
    if not decide_fixed_faulty(line, positions, f, candidates[hi], caps).feasible:
        return Verdict(feasible=False, optimum=INFINITY)
    while lo < hi:
        mid = (lo + hi) >> 1
        if decide_fixed_faulty(line, positions, f, candidates[mid], caps).feasible:
            hi = mid
        else:
            lo = mid + 1
    final = decide_fixed_faulty(line, positions, f, candidates[lo], caps)
    return Verdict(
        feasible=True,
        optimum=candidates[lo],
        schedule=final.schedule,
        witness=final.witness,
        candidates=candidates,
    )


# --------------------------------------------------------------------------
# resilience
# --------------------------------------------------------------------------


def resilience(spec: ProblemSpec, delta: ExactNumber, caps: Caps = FIXED_SEARCH_CAPS) -> Optional[int]:
    """Largest f < k for which an f-reliable schedule within delta exists.

    Returns None when even f = 0 is impossible.  Any ``faults`` value on
    the spec itself is ignored; the placement and topology route the
    appropriate decision procedure.
    """
    if not is_finite(delta):
        raise ValueError("resilience needs a finite time bound")
    k = spec.k
    top = spec.topology
    mode = spec.placement.mode

    def decide(f: int) -> bool:
        if isinstance(top, LineInstance):
            if mode == FREE:
                return solve_free(top, k // (f + 1)).optimum <= delta
            if mode == FIXED:
                return decide_fixed_faulty(top, spec.placement.positions, f, delta, caps).feasible
        if isinstance(top, RingInstance):
            from . import ring as ring_mod

            if mode == FREE:
                v = ring_mod.solve_ring_free_faulty(top, k, f)
                return v.feasible and v.optimum <= delta
            if mode == FIXED:
                return ring_mod.decide_ring_fixed_faulty(
                    top, spec.placement.positions, f, delta
                ).feasible
        if isinstance(top, StarInstance):
            from .reductions import star_exact

            return star_exact(top, spec.placement, k, f, delta).feasible
        raise ValueError("resilience supports fixed and free placements")

    for f in range(k - 1, -1, -1):
        if decide(f):
            return f
    return None
