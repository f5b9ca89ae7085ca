"""Pure-Python order-statistic tree over a two-colored bead sequence.

Implicit-key treap stored in parallel arrays (slot 0 is the shared nil).
Keys are list positions, so inserting or deleting a bead renumbers nothing;
subtree size and per-color counts support rank, select and prefix counting
in logarithmic expected time.  Priorities come from a deterministic 64-bit
mix of the insertion counter, keeping tree shapes reproducible.

The compiled module ``_ordertree_cy`` mirrors this API; callers import
through ``necksplit.ordertree`` which picks the fastest available backend.
"""

from __future__ import annotations

from typing import Iterable

_MASK = (1 << 64) - 1


def _mix(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class OrderStatTree:
    """Sequence of colors (0 or 1) with positional insert/delete and
    per-color rank/select.  Positions are 1-based."""

    __slots__ = (
        "_left",
        "_right",
        "_pri",
        "_size",
        "_ones",
        "_color",
        "_root",
        "_free",
        "_counter",
        "touched",
    )

    def __init__(self) -> None:
        self._left = [0]
        self._right = [0]
        self._pri = [0]
        self._size = [0]
        self._ones = [0]
        self._color = [0]
        self._root = 0
        self._free: list[int] = []
        self._counter = 0
        self.touched = 0

    @classmethod
    def from_colors(cls, colors: Iterable[int]) -> "OrderStatTree":
        """Bulk build in linear time via a rightmost-spine stack."""
        tree = cls()
        left, right, pri, size, ones, col = (
            tree._left,
            tree._right,
            tree._pri,
            tree._size,
            tree._ones,
            tree._color,
        )
        stack: list[int] = []
        for c in colors:
            x = tree._new_node(c)
            last = 0
            while stack and pri[stack[-1]] < pri[x]:
                last = stack.pop()
            left[x] = last
            if stack:
                right[stack[-1]] = x
            stack.append(x)
        if stack:
            tree._root = stack[0]
            tree._pull_all(tree._root)
        return tree

    def _pull_all(self, t: int) -> None:
        if t == 0:
            return
        self._pull_all(self._left[t])
        self._pull_all(self._right[t])
        self._pull(t)

    def __len__(self) -> int:
        return self._size[self._root]

    def total(self, color: int) -> int:
        ones = self._ones[self._root]
        return ones if color == 1 else self._size[self._root] - ones

    def reset_touched(self) -> None:
        self.touched = 0

    # ------------------------------------------------------------------

    def _new_node(self, color: int) -> int:
        self._counter += 1
        pri = _mix(self._counter)
        if self._free:
            x = self._free.pop()
            self._left[x] = 0
            self._right[x] = 0
            self._pri[x] = pri
            self._size[x] = 1
            self._ones[x] = color
            self._color[x] = color
        else:
            self._left.append(0)
            self._right.append(0)
            self._pri.append(pri)
            self._size.append(1)
            self._ones.append(color)
            self._color.append(color)
            x = len(self._pri) - 1
        return x

    def _pull(self, t: int) -> None:
        l, r = self._left[t], self._right[t]
        self._size[t] = self._size[l] + self._size[r] + 1
        self._ones[t] = self._ones[l] + self._ones[r] + self._color[t]

    def _split(self, t: int, k: int) -> tuple[int, int]:
        """First k nodes into the left part."""
        if t == 0:
            return 0, 0
        self.touched += 1
        if self._size[self._left[t]] >= k:
            a, b = self._split(self._left[t], k)
            self._left[t] = b
            self._pull(t)
            return a, t
        a, b = self._split(self._right[t], k - self._size[self._left[t]] - 1)
        self._right[t] = a
        self._pull(t)
        return t, b

    def _merge(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return a or b
        self.touched += 1
        if self._pri[a] > self._pri[b]:
            self._right[a] = self._merge(self._right[a], b)
            self._pull(a)
            return a
        self._left[b] = self._merge(a, self._left[b])
        self._pull(b)
        return b

    # ------------------------------------------------------------------

    def insert(self, pos: int, color: int) -> None:
        """Insert so the new bead sits at 1-based position ``pos``."""
        if not 1 <= pos <= len(self) + 1:
            raise IndexError(f"insert position {pos} outside [1, {len(self) + 1}]")
        a, b = self._split(self._root, pos - 1)
        x = self._new_node(color)
        self._root = self._merge(self._merge(a, x), b)

    def delete(self, pos: int) -> int:
        """Remove the bead at ``pos``; returns its color."""
        if not 1 <= pos <= len(self):
            raise IndexError(f"delete position {pos} outside [1, {len(self)}]")
        a, rest = self._split(self._root, pos - 1)
        mid, b = self._split(rest, 1)
        color = self._color[mid]
        self._free.append(mid)
        self._root = self._merge(a, b)
        return color

    def color_at(self, pos: int) -> int:
        if not 1 <= pos <= len(self):
            raise IndexError(f"position {pos} outside [1, {len(self)}]")
        t = self._root
        while True:
            self.touched += 1
            lsz = self._size[self._left[t]]
            if pos <= lsz:
                t = self._left[t]
            elif pos == lsz + 1:
                return self._color[t]
            else:
                pos -= lsz + 1
                t = self._right[t]

    def prefix_count(self, pos: int, color: int) -> int:
        """Beads of ``color`` among positions 1..pos (pos 0 gives 0)."""
        if pos <= 0:
            return 0
        pos = min(pos, len(self))
        t = self._root
        acc = 0
        while pos > 0 and t != 0:
            self.touched += 1
            l = self._left[t]
            lsz = self._size[l]
            if pos <= lsz:
                t = l
            else:
                acc += self._ones[l] if color == 1 else lsz - self._ones[l]
                if self._color[t] == color:
                    acc += 1
                pos -= lsz + 1
                t = self._right[t]
        return acc

    def select_color(self, rank: int, color: int) -> int:
        """Position of the rank-th bead (1-based) of ``color``."""
        if not 1 <= rank <= self.total(color):
            raise IndexError(f"rank {rank} outside [1, {self.total(color)}]")
        t = self._root
        pos = 0
        while True:
            self.touched += 1
            l = self._left[t]
            in_left = self._ones[l] if color == 1 else self._size[l] - self._ones[l]
            if rank <= in_left:
                t = l
                continue
            rank -= in_left
            if self._color[t] == color and rank == 1:
                return pos + self._size[l] + 1
            if self._color[t] == color:
                rank -= 1
            pos += self._size[l] + 1
            t = self._right[t]

    def to_list(self) -> list[int]:
        out: list[int] = []
        stack: list[tuple[int, bool]] = [(self._root, False)]
        while stack:
            t, visited = stack.pop()
            if t == 0:
                continue
            if visited:
                out.append(self._color[t])
                stack.append((self._right[t], False))
            else:
                stack.append((t, True))
                stack.append((self._left[t], False))
        return out

    backend = "python"
