"""Reduction gadget generators.

Each generator returns the constructed automaton together with provenance and,
when the instance is small enough to certify by brute force, the expected
optimum for the oracle to confirm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Optional

from .automaton import PartialAutomaton, classify, is_synchronizing

CERTIFY_MAX_SETS = 16


@dataclass(frozen=True)
class SetCoverInstance:
    """A universe {1..p} and a family of subsets whose union covers it."""

    p: int
    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ValueError("the universe must be nonempty")
        if not self.sets:
            raise ValueError("the set family must be nonempty")
        universe = set(range(1, self.p + 1))
        for s in self.sets:
            if not s <= universe:
                raise ValueError(f"set {sorted(s)} is not a subset of 1..{self.p}")
        covered = set().union(*self.sets)
        if covered != universe:
            raise ValueError(
                f"the family does not cover the universe; missing {sorted(universe - covered)}"
            )

    @classmethod
    def of(cls, p: int, sets) -> "SetCoverInstance":
        return cls(p, tuple(frozenset(s) for s in sets))


@dataclass(frozen=True)
class GadgetInstance:
    automaton: PartialAutomaton
    kind: str
    expected_opt: Optional[int]
    provenance: dict[str, Any] = field(default_factory=dict)


def brute_force_min_cover(instance: SetCoverInstance) -> int:
    """Minimum size of a covering subfamily, by exhaustive enumeration."""
    universe = frozenset(range(1, instance.p + 1))
    m = len(instance.sets)
    for r in range(1, m + 1):
        for combo in combinations(range(m), r):
            if frozenset().union(*(instance.sets[i] for i in combo)) == universe:
                return r
    raise AssertionError("unreachable: instance invariant guarantees coverage")


def set_cover_gadget(instance: SetCoverInstance) -> GadgetInstance:
    """Strongly acyclic automaton whose shortest synchronizing word length is
    min(minimum cover size, p).

    Element j gets a pipe of p states; letter k advances along the pipe except
    where set k covers element j, in which case it drops to the sink f.  The
    end of every pipe and f itself always map to f, so the automaton is
    complete and any word of length p synchronizes.
    """
    p = instance.p
    m = len(instance.sets)
    n = p * p + 1
    f = p * p
    rows: list[list[int]] = [[0] * m for _ in range(n)]
    for j in range(p):  # pipe for element j+1
        for i in range(p):  # position i+1 along the pipe
            state = j * p + i
            for a, cover in enumerate(instance.sets):
                if (j + 1) in cover or i == p - 1:
                    rows[state][a] = f
                else:
                    rows[state][a] = state + 1
    rows[f] = [f] * m
    alphabet = tuple(f"s{a + 1}" for a in range(m))
    automaton = PartialAutomaton.of(alphabet, rows)

    expected = None
    if m <= CERTIFY_MAX_SETS:
        expected = min(brute_force_min_cover(instance), p)
    return GadgetInstance(
        automaton,
        "set_cover",
        expected,
        {"p": p, "sets": [sorted(s) for s in instance.sets]},
    )


def _full_binary_tree(leaves: list[int], next_id: int) -> tuple[int, dict[int, tuple[int, int]], int]:
    """Left-packed full binary tree over the given leaves.

    Returns (root, children map, next unused id); internal nodes other than
    the root get fresh ids starting at next_id.  The caller re-roots the tree
    at an existing state.
    """
    children: dict[int, tuple[int, int]] = {}

    def build(slice_: list[int]) -> int:
        nonlocal next_id
        if len(slice_) == 1:
            return slice_[0]
        h = 1
        while (1 << h) < len(slice_):
            h += 1
        half = 1 << (h - 1)
        left = build(slice_[:half])
        right = build(slice_[half:])
        node = next_id
        next_id += 1
        children[node] = (left, right)
        return node

    root = build(leaves)
    return root, children, next_id


def huffmanize(
    A: PartialAutomaton, expected_opt: Optional[int] = None
) -> GadgetInstance:
    """Lift a synchronizing strongly acyclic complete automaton to a Huffman
    decoder over two extra letters, preserving the shortest-sync length.

    A full binary tree rooted at the unique sink hangs the source states that
    have no incoming transitions as its leaves; the two new letters walk down
    the tree and act like letter 0 elsewhere.
    """
    cls = classify(A)
    if not cls.complete:
        raise ValueError("huffmanize requires a complete automaton")
    if not cls.strongly_acyclic:
        raise ValueError("huffmanize requires a strongly acyclic automaton")
    sinks = [
        q
        for q in range(A.n)
        if all(t == q for t in A.delta[q])
    ]
    if len(sinks) != 1:
        raise ValueError(f"expected a unique sink, found {len(sinks)}")
    f = sinks[0]
    if not is_synchronizing(A):
        raise ValueError("huffmanize requires a synchronizing automaton")

    has_incoming = [False] * A.n
    for row in A.delta:
        for t in row:
            has_incoming[t] = True
    sources = [q for q in range(A.n) if not has_incoming[q]]

    children: dict[int, tuple[int, int]] = {}
    total = A.n
    if not sources:
        # Degenerate single-state automaton: the new letters loop on f.
        children[f] = (f, f)
    elif len(sources) == 1:
        children[f] = (sources[0], sources[0])
    else:
        root, children, total = _full_binary_tree(sources, A.n)
        # Re-root at f: the synthetic root id is replaced by the sink.
        children[f] = children.pop(root)
        total -= 1
        remap = {root: f}
        children = {
            remap.get(node, node): tuple(remap.get(c, c) for c in pair)
            for node, pair in children.items()
        }

    def b_target(q: int, side: int) -> int:
        if q in children:
            return children[q][side]
        if q < A.n:
            return A.delta[q][0]  # the fixed original letter
        raise AssertionError("unreachable")

    base = tuple(A.alphabet)
    b1, b2 = _fresh_symbols(base, ("b1", "b2"))
    rows = []
    for q in range(total):
        if q < A.n:
            row = list(A.delta[q])
        else:
            row = [f] * A.k  # tree-internal states: original letters go to the sink
        row.append(b_target(q, 0))
        row.append(b_target(q, 1))
        rows.append(row)
    automaton = PartialAutomaton.of(base + (b1, b2), rows)
    return GadgetInstance(
        automaton,
        "huffmanize",
        expected_opt,
        {"source_states": A.n, "tree_leaves": len(sources), "sink": f},
    )


def _fresh_symbols(taken: tuple[str, ...], wanted: tuple[str, ...]) -> tuple[str, ...]:
    out = []
    used = set(taken)
    for name in wanted:
        candidate = name
        while candidate in used:
            candidate += "_"
        used.add(candidate)
        out.append(candidate)
    return tuple(out)


def mortalize(
    A: PartialAutomaton, s: int, expected_opt: Optional[int] = None
) -> GadgetInstance:
    """Redirect state s through a fresh twin so mortal words must pass it.

    The twin s' inherits all of s's transitions; s keeps a single transition,
    letter 0 to s'.  Words must now funnel every state through s and then hit
    one of s's freshly undefined letters to leave the automaton.
    """
    if not 0 <= s < A.n:
        raise ValueError(f"state {s} is out of range")
    twin = A.n
    rows = [list(row) for row in A.delta]
    rows.append(list(A.delta[s]))
    rows[s] = [None] * A.k
    rows[s][0] = twin
    automaton = PartialAutomaton.of(A.alphabet, rows)
    return GadgetInstance(
        automaton,
        "mortalize",
        expected_opt,
        {"s": s, "twin": twin},
    )
