"""Marked permutations, the Rauzy moves ``a``/``b`` and extended Rauzy diagrams.

A marked permutation is a pair ``(nu0, nu1)`` of orderings of the alphabet
``{1..m}``: ``nu0[j-1]`` names the j-th interval before the exchange and
``nu1[j-1]`` the j-th interval after it.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field


class ReducibleError(ValueError):
    pass


# test hook for `rauzylab verify --inject-fault`; never set in normal use
_FAULTS: set[str] = set()


@dataclass(frozen=True, order=True)
class MarkedPermutation:
    nu0: tuple[int, ...]
    nu1: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nu0", tuple(int(x) for x in self.nu0))
        object.__setattr__(self, "nu1", tuple(int(x) for x in self.nu1))
        m = len(self.nu0)
        if m < 2 or len(self.nu1) != m:
            raise ValueError(f"need two orderings of equal length >= 2, got {self.nu0}|{self.nu1}")
        names = set(range(1, m + 1))
        if set(self.nu0) != names or set(self.nu1) != names:
            raise ValueError(f"orderings must be bijections of 1..{m}")

    @property
    def m(self) -> int:
        return len(self.nu0)

    @classmethod
    def parse(cls, text: str) -> "MarkedPermutation":
        """Parse ``"1234|4321"`` (digits, m <= 9) or ``"[1,2,...]|[...]"`` (JSON arrays)."""
        left, sep, right = text.strip().partition("|")
        if not sep:
            raise ValueError(f"expected 'nu0|nu1', got {text!r}")

        def side(s):
            s = s.strip()
            if s.startswith("["):
                return tuple(json.loads(s))
            return tuple(int(c) for c in s)

        return cls(side(left), side(right))

    @classmethod
    def standard(cls, m: int) -> "MarkedPermutation":
        """The symmetric marked permutation ``nu0 = id, nu1(j) = m+1-j``."""
        return cls(tuple(range(1, m + 1)), tuple(range(m, 0, -1)))

    def label(self) -> str:
        if self.m <= 9:
            return "".join(map(str, self.nu0)) + "|" + "".join(map(str, self.nu1))
        return json.dumps(list(self.nu0)) + "|" + json.dumps(list(self.nu1))

    def __str__(self):
        return self.label()

    def pi(self) -> tuple[int, ...]:
        return derived_permutation(self)

    def is_irreducible(self) -> bool:
        return is_irreducible(self.pi())

    def position0(self, name: int) -> int:
        """1-based position of ``name`` in the ``nu0`` ordering."""
        return self.nu0.index(name) + 1

    def position1(self, name: int) -> int:
        return self.nu1.index(name) + 1


def derived_permutation(mp: MarkedPermutation) -> tuple[int, ...]:
    """Return ``pi`` (1-based, as a tuple with ``pi[j-1] = pi(j)``) with ``nu1 = nu0 o pi^-1``.

    ``pi(j)`` is the position, after the exchange, of the interval sitting at
    position ``j`` before it.
    """
    where1 = {name: j for j, name in enumerate(mp.nu1, start=1)}
    return tuple(where1[name] for name in mp.nu0)


def inverse(p):
    inv = [0] * len(p)
    for i, v in enumerate(p, start=1):
        inv[v - 1] = i
    return tuple(inv)


def is_irreducible(p) -> bool:
    m = len(p)
    seen_max = 0
    for k in range(1, m):
        seen_max = max(seen_max, p[k - 1])
        if seen_max == k:
            return False
    return True


def _insert_after(order: tuple[int, ...], k: int) -> tuple[int, ...]:
    # order o c_k: keep the first k names, then the last name, then the rest shifted
    return order[:k] + (order[-1],) + order[k:-1]


def op_a(mp: MarkedPermutation) -> MarkedPermutation:
    """Move ``nu0(m)`` to just after ``nu1(m)`` in the ``nu0`` ordering; ``nu1`` fixed."""
    k = mp.position0(mp.nu1[-1])
    if "op_a" in _FAULTS:
        k -= 1
    return MarkedPermutation(_insert_after(mp.nu0, k), mp.nu1)


def op_b(mp: MarkedPermutation) -> MarkedPermutation:
    """Move ``nu1(m)`` to just after ``nu0(m)`` in the ``nu1`` ordering; ``nu0`` fixed."""
    l = mp.position1(mp.nu0[-1])
    return MarkedPermutation(mp.nu0, _insert_after(mp.nu1, l))


def apply_letter(mp: MarkedPermutation, letter: str) -> MarkedPermutation:
    if letter == "a":
        return op_a(mp)
    if letter == "b":
        return op_b(mp)
    raise ValueError(f"path letters are 'a' or 'b', got {letter!r}")


def follow(mp: MarkedPermutation, word: str) -> MarkedPermutation:
    for letter in word:
        mp = apply_letter(mp, letter)
    return mp


@dataclass(frozen=True)
class RauzyDiagram:
    vertices: tuple[MarkedPermutation, ...]
    edges: tuple[tuple[MarkedPermutation, str, MarkedPermutation], ...]
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    def __len__(self):
        return len(self.vertices)

    def successor(self, v: MarkedPermutation, letter: str) -> MarkedPermutation:
        for src, lab, dst in self.edges:
            if src == v and lab == letter:
                return dst
        raise KeyError((v, letter))

    def to_dot(self) -> str:
        lines = ["digraph rauzy {"]
        for i, v in enumerate(self.vertices):
            lines.append(f'  v{i} [label="{v.label()}"];')
        for src, lab, dst in self.edges:
            lines.append(f'  v{self._index[src]} -> v{self._index[dst]} [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "vertices": [{"nu0": list(v.nu0), "nu1": list(v.nu1), "label": v.label()}
                         for v in self.vertices],
            "edges": [{"source": self._index[s], "label": lab, "target": self._index[t]}
                      for s, lab, t in self.edges],
        }


def extended_rauzy_class(start: MarkedPermutation) -> RauzyDiagram:
    """Breadth-first closure of ``start`` under ``op_a`` and ``op_b``.

    Vertices come back sorted lexicographically on ``(nu0, nu1)``; edges are
    listed per vertex in that order, ``a`` before ``b``.
    """
    if not start.is_irreducible():
        raise ReducibleError(f"{start.label()} is reducible")
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in (op_a(v), op_b(v)):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    vertices = tuple(sorted(seen))
    edges = tuple((v, lab, op(v)) for v in vertices for lab, op in (("a", op_a), ("b", op_b)))
    return RauzyDiagram(vertices, edges)
