"""Shortest-word search: the exact subset oracle and approximation algorithms.

The oracle is a breadth-first search over reachable subsets of states,
represented as bit masks.  It is exponential in the worst case, so every
entry point takes an explicit budget and fails loudly when it is exceeded.
Words are always produced in length-then-lexicographic order, so the first
word found is both shortest and lexicographically least.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .automaton import (
    Avoid,
    Goal,
    Mortal,
    PartialAutomaton,
    Sync,
    WordWitness,
    _descend_merge_word,
    classify,
    image_of_word,
    merge_distances,
    rank,
    verify_word,
)


@dataclass(frozen=True)
class SearchBudget:
    """Caps on the subset search: visited subsets and returned word length."""

    max_subset_nodes: int = 1_000_000
    max_word_len: int = 100_000

    def __post_init__(self) -> None:
        if self.max_subset_nodes < 1 or self.max_word_len < 1:
            raise ValueError("budget caps must be positive")


DEFAULT_BUDGET = SearchBudget()


class BudgetExceededError(RuntimeError):
    """The search hit its node or length cap before the answer was certain."""


class NotSynchronizingError(ValueError):
    """The input automaton admits no synchronizing word."""


class NoMortalWordError(ValueError):
    """The input automaton admits no mortal word."""


class NoAvoidingWordError(ValueError):
    """The requested state cannot be avoided."""


def ceil_log(k: int, n: int) -> int:
    """Smallest t with k**t >= n.

    For a unary alphabet the quantity is meaningless; n itself is returned as
    a sentinel and callers route such inputs to the exact oracle.
    """
    if k < 1 or n < 1:
        raise ValueError("k and n must be positive")
    if k == 1:
        return n
    t = 0
    p = 1
    while p < n:
        p *= k
        t += 1
    return t


def _mask_of(states: Iterable[int]) -> int:
    m = 0
    for q in states:
        m |= 1 << q
    return m


def _set_of(mask: int) -> frozenset[int]:
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def _apply_letter(delta, mask: int, a: int) -> int:
    out = 0
    while mask:
        low = mask & -mask
        t = delta[low.bit_length() - 1][a]
        if t is not None:
            out |= 1 << t
        mask ^= low
    return out


def _goal_test(A: PartialAutomaton, goal: Goal) -> Callable[[int], bool]:
    if isinstance(goal, Sync):
        return lambda m: m != 0 and m & (m - 1) == 0
    if isinstance(goal, Mortal):
        return lambda m: m == 0
    if isinstance(goal, Avoid):
        if not 0 <= goal.q < A.n:
            raise ValueError(f"avoided state {goal.q} is out of range")
        bit = 1 << goal.q
        return lambda m: not m & bit
    raise TypeError(f"unknown goal {goal!r}")


def _subset_search(
    A: PartialAutomaton,
    start_mask: int,
    accept: Callable[[int], bool],
    max_nodes: int,
    max_len: int,
) -> tuple[Optional[tuple[tuple[int, ...], int]], bool]:
    """BFS over subsets reachable from start_mask.

    Returns ((word, final_mask), _) for the first accepted subset in
    length-then-lex order, or (None, exhausted) where ``exhausted`` tells
    whether the whole reachable subset graph was explored (False means the
    length cap cut the search short).  Raises BudgetExceededError when the
    node cap is hit.
    """
    if accept(start_mask):
        return ((), start_mask), True
    delta = A.delta
    kk = A.k
    visited: dict[int, tuple[int, int]] = {start_mask: (-1, -1)}
    frontier = [start_mask]
    depth = 0
    while frontier:
        if depth >= max_len:
            return None, False
        nxt: list[int] = []
        for mask in frontier:
            for a in range(kk):
                new = _apply_letter(delta, mask, a)
                if new in visited:
                    continue
                if len(visited) >= max_nodes:
                    raise BudgetExceededError(
                        f"subset search exceeded {max_nodes} visited subsets"
                    )
                visited[new] = (mask, a)
                if accept(new):
                    word: list[int] = []
                    cur = new
                    while cur != start_mask:
                        parent, letter = visited[cur]
                        word.append(letter)
                        cur = parent
                    return (tuple(reversed(word)), new), True
                nxt.append(new)
        frontier = nxt
        depth += 1
    return None, True


def _survivor(goal: Goal, mask: int) -> Optional[int]:
    if isinstance(goal, Sync):
        return mask.bit_length() - 1
    return None


def shortest_word_exact(
    A: PartialAutomaton, goal: Goal, budget: SearchBudget = DEFAULT_BUDGET
) -> Optional[WordWitness]:
    """Exact shortest word achieving the goal from the full state set.

    Returns None when the reachable subset graph is exhausted without a hit
    (no such word exists); raises BudgetExceededError when a cap is reached
    first.
    """
    accept = _goal_test(A, goal)
    res, exhausted = _subset_search(
        A, (1 << A.n) - 1, accept, budget.max_subset_nodes, budget.max_word_len
    )
    if res is None:
        if exhausted:
            return None
        raise BudgetExceededError(
            f"word length cap {budget.max_word_len} hit before exhausting subsets"
        )
    word, mask = res
    return WordWitness(word, goal, _survivor(goal, mask), "subset-bfs", "exact shortest")


def shortest_word_from(
    A: PartialAutomaton,
    start: Iterable[int],
    goal: Goal,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> Optional[WordWitness]:
    """Exact shortest word achieving the goal from an arbitrary start set."""
    accept = _goal_test(A, goal)
    res, exhausted = _subset_search(
        A, _mask_of(start), accept, budget.max_subset_nodes, budget.max_word_len
    )
    if res is None:
        if exhausted:
            return None
        raise BudgetExceededError(
            f"word length cap {budget.max_word_len} hit before exhausting subsets"
        )
    word, mask = res
    return WordWitness(word, goal, _survivor(goal, mask), "subset-bfs", "exact shortest")


def _greedy_merge(A: PartialAutomaton, start: Iterable[int]) -> tuple[list[int], int]:
    """Repeatedly merge the cheapest pair of the active set; returns (word, survivor)."""
    dist = merge_distances(A)
    current = set(start)
    word: list[int] = []
    while len(current) > 1:
        ordered = sorted(current)
        best: Optional[tuple[int, int, int]] = None
        for i, p in enumerate(ordered):
            for q in ordered[i + 1 :]:
                d = dist.get((p, q))
                if d is not None and (best is None or (d, p, q) < best):
                    best = (d, p, q)
        if best is None:
            raise RuntimeError(
                "internal inconsistency: no mergeable pair in the active set of a "
                "claimed-synchronizing automaton"
            )
        piece = _descend_merge_word(A, dist, best[1], best[2])
        word.extend(piece)
        current = set(image_of_word(A, current, piece))
        if not current:
            raise RuntimeError("internal inconsistency: active set died during merging")
    return word, current.pop()


def greedy_sync(A: PartialAutomaton) -> WordWitness:
    """Pair-merging greedy synchronization with the cubic length guarantee.

    Valid for complete automata and strongly connected partial automata; the
    output length never exceeds (n^3 - n) / 6.
    """
    cls = classify(A)
    if not (cls.complete or cls.strongly_connected):
        raise ValueError(
            "greedy merging requires a complete or strongly connected automaton"
        )
    dist = merge_distances(A)
    if len(dist) != A.n * (A.n - 1) // 2:
        raise NotSynchronizingError("input automaton is not synchronizing")
    word, survivor = _greedy_merge(A, range(A.n))
    cap = (A.n**3 - A.n) // 6
    if len(word) > cap:
        raise RuntimeError(
            f"internal: greedy produced length {len(word)} above the bound {cap}"
        )
    return WordWitness(
        tuple(word),
        Sync(),
        survivor,
        "greedy-pair-merge",
        f"length <= (n^3 - n)/6 = {cap}",
    )


def low_rank_word(A: PartialAutomaton, allow_partial: bool = False) -> tuple[int, ...]:
    """Minimum-rank word of length ceil(log_k n) over a literal decoder.

    All k**t candidate words are enumerated with their images computed
    incrementally; ties go to the lexicographically least word.  On a
    complete literal decoder with n >= 2 the returned rank is at most t; a
    violation would falsify the low-rank guarantee, so it raises.
    """
    if not A.is_complete() and not allow_partial:
        raise ValueError("partial input: the low-rank guarantee is void, "
                         "pass allow_partial=True to search anyway")
    n, kk = A.n, A.k
    t = ceil_log(kk, n)
    delta = A.delta
    full = (1 << n) - 1
    floor_rank = 0 if not A.is_complete() else 1

    best_word: Optional[tuple[int, ...]] = None
    best_rank = n + 1

    def explore(depth: int, mask: int, word: tuple[int, ...]) -> None:
        nonlocal best_word, best_rank
        if best_rank <= floor_rank:
            return
        if depth == t:
            r = bin(mask).count("1")
            if r < best_rank:
                best_rank, best_word = r, word
            return
        for a in range(kk):
            explore(depth + 1, _apply_letter(delta, mask, a), word + (a,))

    explore(0, full, ())
    assert best_word is not None
    if A.is_complete() and kk >= 2 and n >= 2 and best_rank > t:
        raise RuntimeError(
            f"low-rank guarantee violated: best rank {best_rank} > {t} on a "
            "complete literal decoder"
        )
    return best_word


def _oracle_fallback(A: PartialAutomaton, goal: Goal, budget: SearchBudget,
                     reason: str) -> WordWitness:
    witness = shortest_word_exact(A, goal, budget)
    if witness is None:
        if isinstance(goal, Sync):
            raise NotSynchronizingError("input automaton is not synchronizing")
        if isinstance(goal, Mortal):
            raise NoMortalWordError("no mortal word exists")
        raise NoAvoidingWordError(f"state {goal.q} admits no avoiding word")
    return WordWitness(witness.word, goal, witness.survivor,
                       f"subset-bfs ({reason})", "exact shortest")


def approx_sync_log(
    A: PartialAutomaton, budget: SearchBudget = DEFAULT_BUDGET
) -> WordWitness:
    """Logarithmic-factor synchronization for complete literal decoders.

    Stage 0 exhausts all words up to length t = ceil(log_k n) and is exact
    when it hits.  Otherwise a minimum-rank word of length t is extended by
    greedy pair merging of its image, giving length at most t + (t-1) * OPT.
    """
    if not A.is_complete():
        raise ValueError("approx_sync_log requires a complete literal decoder")
    if A.k == 1:
        return _oracle_fallback(A, Sync(), budget, "unary alphabet")
    dist = merge_distances(A)
    if len(dist) != A.n * (A.n - 1) // 2:
        raise NotSynchronizingError("input automaton is not synchronizing")
    t = ceil_log(A.k, A.n)
    accept = _goal_test(A, Sync())
    res, _ = _subset_search(A, (1 << A.n) - 1, accept, budget.max_subset_nodes, t)
    if res is not None:
        word, mask = res
        return WordWitness(word, Sync(), _survivor(Sync(), mask),
                           "exhaustive-short", "exact shortest")
    w = low_rank_word(A)
    image = image_of_word(A, range(A.n), w)
    tail, survivor = _greedy_merge(A, image)
    word = w + tuple(tail)
    if not verify_word(A, word, Sync()):
        raise RuntimeError("internal: produced word failed verification")
    return WordWitness(
        word,
        Sync(),
        survivor,
        "low-rank-then-merge",
        f"length <= {t} + {t - 1} * OPT",
    )


def approx_sync_eps(
    A: PartialAutomaton,
    eps,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> WordWitness:
    """(1 + eps)-approximate synchronization for complete literal decoders.

    Stage 1 exhausts all words of length at most (1/eps) * ceil(log_k n) and
    is exact when it hits.  Otherwise a minimum-rank word w is completed by a
    shortest word synchronizing its image, found in the power automaton
    restricted to small subsets (expanded lazily by the BFS).
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not A.is_complete():
        raise ValueError("approx_sync_eps requires a complete literal decoder")
    if A.k == 1:
        return _oracle_fallback(A, Sync(), budget, "unary alphabet")
    dist = merge_distances(A)
    if len(dist) != A.n * (A.n - 1) // 2:
        raise NotSynchronizingError("input automaton is not synchronizing")
    t = ceil_log(A.k, A.n)
    stage1_len = min(math.floor(Fraction(t) / eps), budget.max_word_len)
    accept = _goal_test(A, Sync())
    res, exhausted = _subset_search(
        A, (1 << A.n) - 1, accept, budget.max_subset_nodes, max(stage1_len, 1)
    )
    if res is not None:
        word, mask = res
        return WordWitness(word, Sync(), _survivor(Sync(), mask),
                           "exhaustive-short", "exact shortest")
    if exhausted:
        raise RuntimeError("internal: synchronizing automaton exhausted without a word")
    w = low_rank_word(A)
    image = image_of_word(A, range(A.n), w)
    res2, exhausted2 = _subset_search(
        A, _mask_of(image), accept, budget.max_subset_nodes, budget.max_word_len
    )
    if res2 is None:
        if exhausted2:
            raise RuntimeError("internal: image of the low-rank word cannot synchronize")
        raise BudgetExceededError("restricted power-automaton search hit the length cap")
    tail, mask = res2
    word = w + tail
    if not verify_word(A, word, Sync()):
        raise RuntimeError("internal: produced word failed verification")
    return WordWitness(
        word,
        Sync(),
        _survivor(Sync(), mask),
        "low-rank-then-restricted-power",
        f"length <= (1 + {eps}) * OPT",
    )


def _shortest_killing_word(A: PartialAutomaton, src: int) -> Optional[tuple[int, ...]]:
    """Shortest word undefined at the end of the run from a single state."""
    parent: dict[int, tuple[int, int]] = {}
    seen = {src}
    order = [src]
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for a in range(A.k):
            if A.delta[q][a] is None:
                word = [a]
                cur = q
                while cur != src:
                    pq, pa = parent[cur]
                    word.append(pa)
                    cur = pq
                return tuple(reversed(word))
        for a in range(A.k):
            t = A.delta[q][a]
            if t is not None and t not in seen:
                seen.add(t)
                parent[t] = (q, a)
                order.append(t)
    return None


def approx_mortal_log(
    A: PartialAutomaton, budget: SearchBudget = DEFAULT_BUDGET
) -> WordWitness:
    """Logarithmic-factor mortal word for partial literal decoders.

    Stage 0 exhausts all words up to length t = ceil(log_k n).  Otherwise the
    image of a minimum-rank word (at most t states for a literal decoder) is
    killed one state at a time by shortest killing words, giving total length
    at most t * (n + 1) and ratio at most t + 1 against the optimum.
    """
    if A.is_complete():
        raise NoMortalWordError("a complete automaton has no mortal word")
    if A.k == 1:
        return _oracle_fallback(A, Mortal(), budget, "unary alphabet")
    t = ceil_log(A.k, A.n)
    accept = _goal_test(A, Mortal())
    res, exhausted = _subset_search(A, (1 << A.n) - 1, accept,
                                    budget.max_subset_nodes, t)
    if res is not None:
        word, _ = res
        return WordWitness(word, Mortal(), None, "exhaustive-short", "exact shortest")
    if exhausted:
        raise NoMortalWordError("no mortal word exists")
    w = low_rank_word(A, allow_partial=True)
    survivors = image_of_word(A, range(A.n), w)
    word_parts = list(w)
    current = set(survivors)
    while current:
        s = min(current)
        kill = _shortest_killing_word(A, s)
        if kill is None:
            raise NoMortalWordError(f"state {s} cannot reach an undefined transition")
        word_parts.extend(kill)
        current = set(image_of_word(A, current, kill))
    word = tuple(word_parts)
    if not verify_word(A, word, Mortal()):
        raise RuntimeError("internal: produced word failed verification")
    return WordWitness(
        word,
        Mortal(),
        None,
        "low-rank-then-kill",
        f"length <= {t} * (n + 1) = {t * (A.n + 1)}",
    )


def approx_avoiding_eps(
    A: PartialAutomaton,
    q: int,
    eps,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> WordWitness:
    """(1 + eps)-approximate avoiding word for complete literal decoders.

    For a non-root state of a literal decoder a single letter suffices and is
    returned directly.  For the root the two-stage search of the epsilon
    synchronizer runs with the avoidance test instead.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not A.is_complete():
        raise ValueError("approx_avoiding_eps requires a complete literal decoder")
    if not 0 <= q < A.n:
        raise ValueError(f"state {q} is out of range")
    goal = Avoid(q)
    if q != 0:
        for a in range(A.k):
            if all(A.delta[s][a] != q for s in range(A.n)):
                return WordWitness((a,), goal, None, "single-letter", "exact shortest")
        # Falls through for inputs that are not literal decoders.
    if A.k == 1:
        return _oracle_fallback(A, goal, budget, "unary alphabet")
    t = ceil_log(A.k, A.n)
    stage1_len = min(math.floor(Fraction(t) / eps), budget.max_word_len)
    accept = _goal_test(A, goal)
    res, exhausted = _subset_search(
        A, (1 << A.n) - 1, accept, budget.max_subset_nodes, max(stage1_len, 1)
    )
    if res is not None:
        word, _ = res
        return WordWitness(word, goal, None, "exhaustive-short", "exact shortest")
    if exhausted:
        raise NoAvoidingWordError(f"state {q} admits no avoiding word")
    w = low_rank_word(A)
    image = image_of_word(A, range(A.n), w)
    res2, exhausted2 = _subset_search(
        A, _mask_of(image), accept, budget.max_subset_nodes, budget.max_word_len
    )
    if res2 is None:
        if exhausted2:
            # Avoidance from the full set implies avoidance from any subset of
            # it, so exhausting from the image certifies global absence.
            raise NoAvoidingWordError(f"state {q} admits no avoiding word")
        raise BudgetExceededError("restricted power-automaton search hit the length cap")
    tail, _ = res2
    word = w + tail
    if not verify_word(A, word, goal):
        raise RuntimeError("internal: produced word failed verification")
    return WordWitness(
        word,
        goal,
        None,
        "low-rank-then-restricted-power",
        f"length <= (1 + {eps}) * OPT",
    )
