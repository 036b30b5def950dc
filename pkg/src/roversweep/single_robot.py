"""Single-robot exploration on a line by label propagation.

One ascending pass over the state graph computes, for every explored
stretch and robot end, the fastest deadline-respecting way to reach that
state from any permitted starting node.  Labels that would arrive after
the newly visited node's deadline stay at INFINITY.  The recorded parent
links form a forest from which optimal trajectories are read back.

Ties are broken by keeping the first-found parent under the graph's
fixed relaxation order (layer-major, left index ascending, L before R),
which makes extracted trajectories deterministic.
"""

from __future__ import annotations

from array import array
from typing import Iterable, Optional, Sequence

from .exact import ExactNumber, INFINITY, is_finite
from .instance import LineInstance, prune_dominated
from .schedule import RobotTrack, Schedule, Verdict
from .state_graph import LEFT, RIGHT, StateGraph


class TimeLabels:
    """Per-state earliest feasible times plus parent links (a forest)."""

    __slots__ = ("graph", "time", "parent")

    def __init__(self, graph: StateGraph):
        self.graph = graph
        self.time = [INFINITY] * graph.node_count
        self.parent = array("q", [-1]) * graph.node_count

    def finite_count(self) -> int:
        return sum(1 for t in self.time if t is not INFINITY)

    def finite_values(self) -> list:
        return [t for t in self.time if t is not INFINITY]


def init_start(graph: StateGraph, starts: Iterable[int]) -> TimeLabels:
    """Zero the counters of the permitted starting states (layer 0)."""
    starts = sorted(set(starts))
    if not starts:
        raise ValueError("at least one starting node is required")
    labels = TimeLabels(graph)
    for s in starts:
        if not 0 <= s < graph.n:
            raise ValueError(f"start {s} outside node range 0..{graph.n - 1}")
        labels.time[s] = 0
    return labels


def propagate(
    graph: StateGraph,
    labels: TimeLabels,
    deadlines: Sequence[ExactNumber],
    window: Optional[tuple] = None,
) -> TimeLabels:
    """Relax every arc once, in layer order.

    ``deadlines`` is indexed by instance node; a label is only accepted
    if its time is at or before the deadline of the node first visited on
    arrival (a visit exactly at the deadline is on time).  ``window``
    optionally restricts the pass to states strictly inside the open node
    interval (lo, hi) -- on rings the interval is read counterclockwise.
    """
    time = labels.time
    parent = labels.parent
    out_start = graph.out_start
    out_to = graph.out_to
    out_w = graph.out_w
    new_node = graph.new_node
    inf = INFINITY

    if window is None:
        node_iter = range(graph.node_count)
    else:
        node_iter = _window_ids(graph, window)

    for u in node_iter:
        tu = time[u]
        if tu is inf:
            continue
        for a in range(out_start[u], out_start[u + 1]):
            v = out_to[a]
            t = tu + out_w[a]
            dl = deadlines[new_node[v]]
            if (dl is inf or t <= dl):
                tv = time[v]
                if tv is inf or t < tv:
                    time[v] = t
                    parent[v] = u
    return labels


def _window_ids(graph: StateGraph, window: tuple):
    """Ids of states whose stretch lies strictly inside the open interval."""
    lo, hi = window
    n = graph.n
    if graph.kind == "line":
        for layer in range(n):
            base = graph._layer_offsets[layer]
            first = max(lo + 1, 0)
            last = min(hi - 1 - layer, n - 1 - layer)
            if layer == 0:
                for i in range(first, last + 1):
                    yield base + i
            else:
                for i in range(first, last + 1):
                    yield base + 2 * i
                    yield base + 2 * i + 1
    else:
        room = (hi - lo - 1) % n  # nodes strictly inside the ccw interval
        for layer in range(n - 1):  # windows never include full coverage
            if layer + 1 > room:
                break
            base = graph._layer_offsets[layer]
            for off in range(1, room - layer + 1):
                i = (lo + off) % n
                if layer == 0:
                    yield base + i
                else:
                    yield base + 2 * i
                    yield base + 2 * i + 1


def state_time(labels: TimeLabels, i: int, j: int, side: int) -> ExactNumber:
    return labels.time[labels.graph.id_of(i, j, side)]


def best_target(labels: TimeLabels, i: int, j: int) -> Optional[int]:
    """Cheaper of the two writings of stretch [i, j]; None if unreachable."""
    graph = labels.graph
    uid_l = graph.id_of(i, j, LEFT)
    uid_r = graph.id_of(i, j, RIGHT)
    if uid_l == uid_r:
        return uid_l if is_finite(labels.time[uid_l]) else None
    tl, tr = labels.time[uid_l], labels.time[uid_r]
    if tl is INFINITY and tr is INFINITY:
        return None
    return uid_l if tl <= tr else uid_r


def optimal_time(labels: TimeLabels, i: int, j: int) -> ExactNumber:
    """Fastest deadline-respecting exploration of stretch [i, j]."""
    uid = best_target(labels, i, j)
    return INFINITY if uid is None else labels.time[uid]


class TimeTable:
    """Optimal exploration times of every stretch, from one label pass."""

    __slots__ = ("labels", "n", "kind")

    def __init__(self, labels: TimeLabels):
        self.labels = labels
        self.n = labels.graph.n
        self.kind = labels.graph.kind

    def get(self, i: int, j: int) -> ExactNumber:
        return optimal_time(self.labels, i, j)

    def pairs(self):
        if self.kind == "line":
            return ((i, j) for i in range(self.n) for j in range(i, self.n))
        return ((i, j) for i in range(self.n) for j in range(self.n))


def interval_table(line: LineInstance, allowed_starts: Iterable[int]) -> TimeTable:
    """Times to explore every sub-interval from the best start inside it.

    A single pass with all permitted starts zeroed yields, at each state
    [i, j], the optimum over starting nodes within [i, j] that are
    allowed.  Stretches containing no allowed start stay at INFINITY.
    """
    graph = StateGraph.from_line(line)
    labels = init_start(graph, allowed_starts)
    propagate(graph, labels, line.deadlines)
    return TimeTable(labels)


def extract_trajectory(labels: TimeLabels, target: int) -> tuple:
    """Timed waypoints of the optimal trajectory reaching ``target``.

    Walks the parent links back to a source and emits (time, coordinate)
    at the start and at every turning point; the final waypoint time is
    the target's label.  Raises if the target was never reached.
    """
    graph = labels.graph
    if labels.time[target] is INFINITY:
        raise ValueError("target state is unreachable within the deadlines")
    chain = []
    uid = target
    while uid >= 0:
        chain.append(uid)
        uid = labels.parent[uid]
    chain.reverse()

    waypoints = [(labels.time[chain[0]], graph.position(chain[0]))]
    prev_dir = 0
    for prev, cur in zip(chain, chain[1:]):
        # recover the arc taken (two parallel arcs may join a ring pair)
        step = labels.time[cur] - labels.time[prev]
        direction = None
        for v, w, d in graph.arcs_from(prev):
            if v == cur and w == step:
                direction = d
                break
        if direction is None:  # fall back to any connecting arc
            for v, w, d in graph.arcs_from(prev):
                if v == cur:
                    direction = d
                    break
        new_pos = waypoints[-1][1] + direction * step
        if direction == prev_dir:
            waypoints[-1] = (labels.time[cur], new_pos)
        else:
            waypoints.append((labels.time[cur], new_pos))
        prev_dir = direction
    return tuple(waypoints)


def solve_fixed_start(line: LineInstance, start: int, collect_candidates: bool = False) -> Verdict:
    """Optimal full-line exploration for one robot at a given node.

    Dominated nodes are dropped up front (their deadlines are implied by
    farther ones), which never changes feasibility or the optimum.
    """
    pruned, remap = prune_dominated(line, start)
    new_start = remap.index(start)
    graph = StateGraph.from_line(pruned)
    labels = init_start(graph, [new_start])
    propagate(graph, labels, pruned.deadlines)
    uid = best_target(labels, 0, pruned.n - 1)
    candidates = tuple(sorted(set(labels.finite_values()))) if collect_candidates else None
    if uid is None:
        return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)
    optimum = labels.time[uid]
    track = RobotTrack(extract_trajectory(labels, uid))
    return Verdict(
        feasible=True,
        optimum=optimum,
        schedule=Schedule(kind="line", tracks=(track,)),
        candidates=candidates,
    )


def solve_free_start(
    line: LineInstance,
    allowed: Optional[Iterable[int]] = None,
    collect_candidates: bool = False,
) -> Verdict:
    """Optimal full-line exploration with the start chosen from ``allowed``."""
    if allowed is None:
        allowed = range(line.n)
    table = interval_table(line, allowed)
    labels = table.labels
    uid = best_target(labels, 0, line.n - 1)
    candidates = tuple(sorted(set(labels.finite_values()))) if collect_candidates else None
    if uid is None:
        return Verdict(feasible=False, optimum=INFINITY, candidates=candidates)
    track = RobotTrack(extract_trajectory(labels, uid))
    return Verdict(
        feasible=True,
        optimum=labels.time[uid],
        schedule=Schedule(kind="line", tracks=(track,)),
        candidates=candidates,
    )
