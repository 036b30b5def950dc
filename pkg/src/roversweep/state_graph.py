"""Layered DAG of exploration states for lines and rings.

A state records the contiguous stretch of nodes a single robot has
visited so far plus which end of the stretch the robot currently
occupies.  Each arc visits one new node, either adjacent to the robot's
end (weight: one edge) or on the far end of the stretch (weight: the
whole traverse plus one edge).  States with j - i = layer sit in layer
order, so a single ascending pass relaxes every arc exactly once.

States are packed into dense integer ids laid out layer-major with the
left index ascending and L before R, which fixes the deterministic
relaxation order used throughout the solvers.  Arcs are materialized
once (CSR arrays); the built graph is immutable and may be shared by
concurrently running label computations.
"""

from __future__ import annotations

from array import array
from bisect import bisect_right
from typing import Iterator, NamedTuple

from .exact import ExactNumber, format_number
from .instance import LineInstance, RingInstance

LEFT = 0   # robot at the left / clockwise end of the explored stretch
RIGHT = 1  # robot at the right / counterclockwise end


class State(NamedTuple):
    left: int
    right: int
    side: int

    def __str__(self):
        return f"({self.left},{self.right},{'L' if self.side == LEFT else 'R'})"


class StateGraph:
    """Immutable layered graph; build via ``from_line`` or ``from_ring``."""

    __slots__ = (
        "kind", "n", "node_count", "_layer_offsets",
        "out_start", "out_to", "out_w", "out_dir", "new_node",
        "_positions",
    )

    def __init__(self):
        raise TypeError("use StateGraph.from_line or StateGraph.from_ring")

    # ------------------------------------------------------------------
    # construction
    # ------------------------------------------------------------------

    @classmethod
    def _blank(cls) -> "StateGraph":
        self = object.__new__(cls)
        return self

    @classmethod
    def from_line(cls, line: LineInstance) -> "StateGraph":
        self = cls._blank()
        n = line.n
        x = line.coordinates
        self.kind = "line"
        self.n = n
        # layer 0 holds n single-node states; layer j >= 1 holds 2(n-j).
        offsets = [0, n]
        for layer in range(1, n):
            offsets.append(offsets[-1] + 2 * (n - layer))
        self._layer_offsets = offsets
        self.node_count = offsets[-1]
        self._positions = x

        new_node = array("q", bytes(8 * self.node_count))
        out_start = array("q", bytes(8 * (self.node_count + 1)))
        total = 0
        uid = 0
        for layer in range(n):
            for i in range(n - layer):
                j = i + layer
                sides = (RIGHT,) if layer == 0 else (LEFT, RIGHT)
                for side in sides:
                    new_node[uid] = i if (layer > 0 and side == LEFT) else j
                    out_start[uid] = total
                    total += (1 if i > 0 else 0) + (1 if j < n - 1 else 0)
                    uid += 1
        out_start[self.node_count] = total

        out_to = array("q", bytes(8 * total))
        out_dir = array("b", bytes(total))
        out_w: list = [0] * total
        pos = 0
        for layer in range(n):
            base_next = offsets[layer + 1] if layer + 1 < n + 1 else None
            for i in range(n - layer):
                j = i + layer
                sides = (RIGHT,) if layer == 0 else (LEFT, RIGHT)
                for side in sides:
                    here = x[i] if (layer > 0 and side == LEFT) else x[j]
                    # extend left first, then right (canonical arc order)
                    if i > 0:
                        out_to[pos] = base_next + 2 * (i - 1) + LEFT
                        out_w[pos] = here - x[i - 1]
                        out_dir[pos] = -1
                        pos += 1
                    if j < n - 1:
                        out_to[pos] = base_next + 2 * i + RIGHT
                        out_w[pos] = x[j + 1] - here
                        out_dir[pos] = 1
                        pos += 1
        self.out_start = out_start
        self.out_to = out_to
        self.out_w = out_w
        self.out_dir = out_dir
        self.new_node = new_node
        return self

    @classmethod
    def from_ring(cls, ring: RingInstance) -> "StateGraph":
        self = cls._blank()
        n = ring.n
        w = ring.edge_weights
        self.kind = "ring"
        self.n = n
        self._positions = ring.arc_positions()
        # layer 0: n single-node states; layers 1..n-2: 2n states each;
        # layer n-1: n full-coverage states, one per final robot position
        # (the L and R writings of a full stretch describe the same
        # physical state and are merged).
        offsets = [0, n]
        for layer in range(1, n - 1):
            offsets.append(offsets[-1] + 2 * n)
        offsets.append(offsets[-1] + n)
        self._layer_offsets = offsets
        self.node_count = offsets[-1]

        total_len = ring.total
        pos_of = self._positions

        def ccw(a: int, b: int) -> ExactNumber:
            if b >= a:
                return pos_of[b] - pos_of[a]
            return total_len - (pos_of[a] - pos_of[b])

        new_node = array("q", bytes(8 * self.node_count))
        arcs_to: list = []
        arcs_w: list = []
        arcs_dir: list = []
        out_start = array("q", bytes(8 * (self.node_count + 1)))

        def terminal_id(robot_at: int) -> int:
            return offsets[n - 1] + robot_at

        uid = 0
        for layer in range(n):
            for i in range(n):
                if layer == 0:
                    states = ((i, i, RIGHT),)
                elif layer == n - 1:
                    # canonical full state with robot at node i
                    states = (((i + 1) % n, i, RIGHT),)
                else:
                    j = (i + layer) % n
                    states = ((i, j, LEFT), (i, j, RIGHT))
                for (si, sj, side) in states:
                    out_start[uid] = len(arcs_to)
                    if layer == 0:
                        new_node[uid] = i
                    elif layer == n - 1:
                        new_node[uid] = sj
                    else:
                        new_node[uid] = si if side == LEFT else sj
                    if layer < n - 1:
                        here = pos_of[si] if side == LEFT else pos_of[sj]
                        here_idx = si if side == LEFT else sj
                        # clockwise extension: visit (si - 1) mod n
                        tgt = (si - 1) % n
                        dist = ccw(si, here_idx) + w[tgt]
                        if layer + 1 == n - 1:
                            arcs_to.append(terminal_id(tgt))
                        else:
                            arcs_to.append(offsets[layer + 1] + 2 * tgt + LEFT)
                        arcs_w.append(dist)
                        arcs_dir.append(-1)
                        # counterclockwise extension: visit (sj + 1) mod n
                        tgt = (sj + 1) % n
                        dist = ccw(here_idx, sj) + w[sj]
                        if layer + 1 == n - 1:
                            arcs_to.append(terminal_id(tgt))
                        else:
                            arcs_to.append(offsets[layer + 1] + 2 * si + RIGHT)
                        arcs_w.append(dist)
                        arcs_dir.append(1)
                    uid += 1
        out_start[self.node_count] = len(arcs_to)
        self.out_start = out_start
        self.out_to = array("q", arcs_to)
        self.out_w = arcs_w
        self.out_dir = array("b", arcs_dir)
        self.new_node = new_node
        return self

    # ------------------------------------------------------------------
    # id <-> state mapping
    # ------------------------------------------------------------------

    def id_of(self, left: int, right: int, side: int = RIGHT) -> int:
        n = self.n
        if self.kind == "line":
            layer = right - left
            if layer == 0:
                return left
            return self._layer_offsets[layer] + 2 * left + side
        layer = (right - left) % n
        if layer == 0:
            return left
        if layer == n - 1:
            return self._layer_offsets[n - 1] + (right if side == RIGHT else left)
        return self._layer_offsets[layer] + 2 * left + side

    def state_of(self, uid: int) -> State:
        n = self.n
        if uid < n:
            return State(uid, uid, RIGHT)
        if self.kind == "line":
            layer = bisect_right(self._layer_offsets, uid) - 1
            rem = uid - self._layer_offsets[layer]
            return State(rem // 2, rem // 2 + layer, rem % 2)
        if uid >= self._layer_offsets[n - 1]:
            p = uid - self._layer_offsets[n - 1]
            return State((p + 1) % n, p, RIGHT)
        layer = 1 + (uid - n) // (2 * n)
        rem = uid - self._layer_offsets[layer]
        i = rem // 2
        return State(i, (i + layer) % n, rem % 2)

    def layer_of(self, uid: int) -> int:
        st = self.state_of(uid)
        if self.kind == "line":
            return st.right - st.left
        return (st.right - st.left) % self.n

    def layer_ids(self, layer: int) -> range:
        return range(self._layer_offsets[layer], self._layer_offsets[layer + 1])

    @property
    def layers(self) -> int:
        return self.n

    def sources(self) -> range:
        return range(self.n)

    def terminal_ids(self) -> range:
        """States in which every node of the instance has been visited."""
        if self.n == 1:
            return range(0, 1)
        return self.layer_ids(self.n - 1)

    def position(self, uid: int) -> ExactNumber:
        st = self.state_of(uid)
        return self._positions[st.left if st.side == LEFT else st.right]

    def position_index(self, uid: int) -> int:
        st = self.state_of(uid)
        return st.left if st.side == LEFT else st.right

    def arcs_from(self, uid: int) -> Iterator[tuple]:
        for a in range(self.out_start[uid], self.out_start[uid + 1]):
            yield self.out_to[a], self.out_w[a], self.out_dir[a]

    @property
    def arc_count(self) -> int:
        return len(self.out_to)

    def dump(self) -> str:
        """One arc per line, for golden-file comparisons."""
        lines = []
        for u in range(self.node_count):
            su = self.state_of(u)
            for v, weight, _ in self.arcs_from(u):
                lines.append(f"{su} -> {self.state_of(v)} w={format_number(weight)}")
        return "\n".join(lines)
