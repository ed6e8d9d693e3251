"""Partial deterministic finite automata.

States are dense integer indices 0..n-1, the alphabet is an ordered list of
symbol names, and words are tuples of letter indices.  Applying a word to a
set of states kills every state whose transition is undefined along the way.
All search routines break ties by ascending letter index, then ascending
state index, so outputs are reproducible across runs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

StateSet = frozenset[int]


@dataclass(frozen=True)
class PartialAutomaton:
    """A possibly-incomplete deterministic transition table.

    ``delta[q][a]`` is the target of letter ``a`` in state ``q``, or ``None``
    where the transition is undefined.
    """

    n: int
    alphabet: tuple[str, ...]
    delta: tuple[tuple[Optional[int], ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("automaton needs at least one state")
        if len(self.alphabet) < 1:
            raise ValueError("automaton needs at least one letter")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet symbols must be pairwise distinct")
        if len(self.delta) != self.n:
            raise ValueError(f"delta has {len(self.delta)} rows, expected {self.n}")
        for q, row in enumerate(self.delta):
            if len(row) != len(self.alphabet):
                raise ValueError(
                    f"delta row {q} has {len(row)} entries, expected {len(self.alphabet)}"
                )
            for a, t in enumerate(row):
                if t is not None and not 0 <= t < self.n:
                    raise ValueError(f"delta[{q}][{a}] = {t} is not a state index")

    @classmethod
    def of(
        cls,
        alphabet: Iterable[str],
        rows: Iterable[Iterable[Optional[int]]],
    ) -> "PartialAutomaton":
        table = tuple(tuple(row) for row in rows)
        return cls(len(table), tuple(alphabet), table)

    @property
    def k(self) -> int:
        return len(self.alphabet)

    def step(self, q: int, a: int) -> Optional[int]:
        return self.delta[q][a]

    def is_complete(self) -> bool:
        return all(t is not None for row in self.delta for t in row)

    def full_set(self) -> StateSet:
        return frozenset(range(self.n))

    def undefined_cells(self) -> list[tuple[int, int]]:
        return [
            (q, a)
            for q, row in enumerate(self.delta)
            for a, t in enumerate(row)
            if t is None
        ]


@dataclass(frozen=True)
class StructureClass:
    complete: bool
    strongly_connected: bool
    weakly_acyclic: bool
    strongly_acyclic: bool


@dataclass(frozen=True)
class Sync:
    """Goal: the image of the full state set has size exactly one."""


@dataclass(frozen=True)
class Mortal:
    """Goal: the image of the full state set is empty."""


@dataclass(frozen=True)
class Avoid:
    """Goal: state ``q`` is absent from the image of the full state set."""

    q: int


Goal = Sync | Mortal | Avoid


@dataclass(frozen=True)
class WordWitness:
    """A word together with the verified property it achieves.

    ``survivor`` is the single image state for synchronizing words.  ``bound``
    is a human-readable statement of the guarantee the producing algorithm
    gives for the word length, if any.
    """

    word: tuple[int, ...]
    goal: "Sync | Mortal | Avoid"
    survivor: Optional[int]
    method: str
    bound: Optional[str] = None


def _check_word(A: PartialAutomaton, word: Iterable[int]) -> tuple[int, ...]:
    w = tuple(word)
    for a in w:
        if not 0 <= a < A.k:
            raise ValueError(f"letter index {a} is not in the alphabet of size {A.k}")
    return w


def _check_states(A: PartialAutomaton, states: Iterable[int]) -> frozenset[int]:
    S = frozenset(states)
    for q in S:
        if not 0 <= q < A.n:
            raise ValueError(f"state index {q} is out of range for n = {A.n}")
    return S


def image_of_word(
    A: PartialAutomaton, S: Iterable[int], word: Iterable[int]
) -> StateSet:
    """Image of a state set under a word; undefined transitions drop states."""
    current = _check_states(A, S)
    for a in _check_word(A, word):
        row_at = A.delta
        nxt = set()
        for q in current:
            t = row_at[q][a]
            if t is not None:
                nxt.add(t)
        current = frozenset(nxt)
        if not current:
            break
    return current


def rank(A: PartialAutomaton, word: Iterable[int]) -> int:
    """Size of the image of the full state set under the word."""
    return len(image_of_word(A, range(A.n), word))


def verify_word(
    A: PartialAutomaton, word: Iterable[int], goal: "Sync | Mortal | Avoid"
) -> bool:
    """Check whether a word is synchronizing, mortal, or avoiding for A."""
    img = image_of_word(A, range(A.n), word)
    if isinstance(goal, Sync):
        return len(img) == 1
    if isinstance(goal, Mortal):
        return len(img) == 0
    if isinstance(goal, Avoid):
        if not 0 <= goal.q < A.n:
            raise ValueError(f"avoided state {goal.q} is out of range")
        return goal.q not in img
    raise TypeError(f"unknown goal {goal!r}")


def verify_witness(A: PartialAutomaton, witness: WordWitness) -> bool:
    ok = verify_word(A, witness.word, witness.goal)
    if ok and isinstance(witness.goal, Sync) and witness.survivor is not None:
        return image_of_word(A, range(A.n), witness.word) == frozenset(
            [witness.survivor]
        )
    return ok


def _reachable(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        q = stack.pop()
        for t in adj[q]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def classify(A: PartialAutomaton) -> StructureClass:
    """Compute completeness, strong connectivity and the acyclicity flags."""
    complete = A.is_complete()

    fwd: list[list[int]] = [[] for _ in range(A.n)]
    rev: list[list[int]] = [[] for _ in range(A.n)]
    for q, row in enumerate(A.delta):
        for t in row:
            if t is not None:
                fwd[q].append(t)
                rev[t].append(q)
    strongly_connected = (
        len(_reachable(fwd, 0)) == A.n and len(_reachable(rev, 0)) == A.n
    )

    # Weak acyclicity: the transition digraph with self-loops removed is a DAG.
    color = [0] * A.n  # 0 unvisited, 1 on stack, 2 done
    weakly_acyclic = True
    for root in range(A.n):
        if color[root] or not weakly_acyclic:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        color[root] = 1
        while stack and weakly_acyclic:
            q, i = stack.pop()
            if i < len(fwd[q]):
                stack.append((q, i + 1))
                t = fwd[q][i]
                if t == q:
                    continue
                if color[t] == 1:
                    weakly_acyclic = False
                elif color[t] == 0:
                    color[t] = 1
                    stack.append((t, 0))
            else:
                color[q] = 2

    strongly_acyclic = weakly_acyclic
    if weakly_acyclic:
        for q, row in enumerate(A.delta):
            if any(t == q for t in row):
                # A state with a self-loop must be a sink.
                if not all(t is None or t == q for t in row):
                    strongly_acyclic = False
                    break

    return StructureClass(complete, strongly_connected, weakly_acyclic, strongly_acyclic)


def _pair_key(p: int, q: int) -> tuple[int, int]:
    return (p, q) if p <= q else (q, p)


def merge_distances(
    A: PartialAutomaton,
) -> dict[tuple[int, int], int]:
    """Shortest merging-word lengths for every unordered pair of states.

    A pair merges under a letter when the image of the two states has size
    exactly one, either by mapping to a common target or by one state dying
    while the other survives.  Pairs missing from the result have no merging
    word.  Computed by one backward breadth-first search over the pair graph.
    """
    n, kk = A.n, A.k
    dist: dict[tuple[int, int], int] = {}
    preds: dict[tuple[int, int], list[tuple[int, int]]] = {}
    frontier: list[tuple[int, int]] = []
    for p in range(n):
        for q in range(p + 1, n):
            merged = False
            for a in range(kk):
                tp, tq = A.delta[p][a], A.delta[q][a]
                if tp is None and tq is None:
                    continue
                if tp is None or tq is None or tp == tq:
                    merged = True
                else:
                    preds.setdefault(_pair_key(tp, tq), []).append((p, q))
            if merged:
                dist[(p, q)] = 1
                frontier.append((p, q))
    while frontier:
        nxt: list[tuple[int, int]] = []
        for pair in frontier:
            for pred in preds.get(pair, ()):
                if pred not in dist:
                    dist[pred] = dist[pair] + 1
                    nxt.append(pred)
        frontier = nxt
    return dist


def _descend_merge_word(
    A: PartialAutomaton, dist: dict[tuple[int, int], int], p: int, q: int
) -> tuple[int, ...]:
    """Lexicographically least shortest merging word, following the distance map."""
    word: list[int] = []
    cur = _pair_key(p, q)
    d = dist[cur]
    while True:
        for a in range(A.k):
            tp, tq = A.delta[cur[0]][a], A.delta[cur[1]][a]
            if tp is None and tq is None:
                continue
            if tp is None or tq is None or tp == tq:
                if d == 1:
                    word.append(a)
                    return tuple(word)
                continue
            nxt = _pair_key(tp, tq)
            if d > 1 and dist.get(nxt) == d - 1:
                word.append(a)
                cur, d = nxt, d - 1
                break
        else:
            raise RuntimeError("internal: merge distance map is inconsistent")


def pair_shortest_merge(
    A: PartialAutomaton, p: int, q: int
) -> Optional[tuple[int, ...]]:
    """Shortest word whose image of {p, q} is a singleton, or None.

    Ties between equally short words are broken lexicographically by letter
    index.
    """
    _check_states(A, (p, q))
    if p == q:
        return ()
    dist = merge_distances(A)
    if _pair_key(p, q) not in dist:
        return None
    return _descend_merge_word(A, dist, p, q)


def is_synchronizing(A: PartialAutomaton) -> bool:
    """Whether some word maps the full state set to a single state.

    Complete automata and strongly connected partial automata use the
    polynomial pairwise-merge criterion; other partial automata fall back to
    the exponential subset search.
    """
    cls = classify(A)
    if cls.complete or cls.strongly_connected:
        dist = merge_distances(A)
        return len(dist) == A.n * (A.n - 1) // 2
    from .search import DEFAULT_BUDGET, shortest_word_exact

    return shortest_word_exact(A, Sync(), DEFAULT_BUDGET) is not None


def shortest_transfer_word(
    A: PartialAutomaton, src: int, dst: int
) -> Optional[tuple[int, ...]]:
    """Shortest word mapping one state to another, or None if unreachable."""
    _check_states(A, (src, dst))
    if src == dst:
        return ()
    parent: dict[int, tuple[int, int]] = {}
    seen = {src}
    queue: deque[int] = deque([src])
    while queue:
        q = queue.popleft()
        for a in range(A.k):
            t = A.delta[q][a]
            if t is None or t in seen:
                continue
            parent[t] = (q, a)
            if t == dst:
                word: list[int] = []
                cur = t
                while cur != src:
                    pq, pa = parent[cur]
                    word.append(pa)
                    cur = pq
                return tuple(reversed(word))
            seen.add(t)
            queue.append(t)
    return None


def minimize(A: PartialAutomaton) -> PartialAutomaton:
    """Quotient by behavioral equivalence observed at the root state 0.

    Two states are equivalent when every word drives them through the same
    pattern of root visits (and, for partial automata, the same pattern of
    undefined transitions).  For a decoder this is classical Moore reduction
    with state 0 as the distinguished root; the minimized decoder of a prefix
    code comes out of it.  State numbering of the result is by smallest
    member of each class, so the root class stays state 0.
    """
    n, kk = A.n, A.k
    block = [0 if q == 0 else 1 for q in range(n)]
    if n == 1:
        block = [0]
    while True:
        sig: dict[tuple, int] = {}
        new_block = [0] * n
        for q in range(n):
            key = (
                block[q],
                tuple(-1 if t is None else block[t] for t in A.delta[q]),
            )
            if key not in sig:
                sig[key] = len(sig)
            new_block[q] = sig[key]
        if new_block == block:
            break
        block = new_block

    classes: dict[int, list[int]] = {}
    for q in range(n):
        classes.setdefault(block[q], []).append(q)
    ordered = sorted(classes.values(), key=min)
    renum = {}
    for new_idx, members in enumerate(ordered):
        for q in members:
            renum[q] = new_idx
    rows = []
    for members in ordered:
        rep = min(members)
        rows.append(
            tuple(None if t is None else renum[t] for t in A.delta[rep])
        )
    return PartialAutomaton(len(ordered), A.alphabet, tuple(rows))
