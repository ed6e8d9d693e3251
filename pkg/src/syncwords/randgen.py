"""Seeded random instances for tests and benchmark sweeps."""

from __future__ import annotations

import random
from typing import Optional

from .automaton import PartialAutomaton, classify, is_synchronizing
from .codes import PrefixCode, literal_decoder
from .gadgets import SetCoverInstance


def random_maximal_code(rng: random.Random, k: int, n_states: int) -> PrefixCode:
    """Maximal prefix code whose literal decoder has exactly n_states states.

    Grows a full k-ary tree by expanding a random leaf n_states - 1 times;
    the leaves are the codewords, so the Kraft sum is exactly 1.
    """
    if k < 2:
        raise ValueError("need at least two letters")
    if n_states < 1:
        raise ValueError("need at least one internal node")
    alphabet = tuple(str(i) for i in range(k)) if k <= 10 else tuple(
        f"c{i}" for i in range(k)
    )
    leaves: list[tuple[int, ...]] = [(a,) for a in range(k)]
    for _ in range(n_states - 1):
        idx = rng.randrange(len(leaves))
        leaf = leaves.pop(idx)
        leaves.extend(leaf + (a,) for a in range(k))
    return PrefixCode.of(alphabet, leaves)


def random_nonmaximal_code(
    rng: random.Random, k: int, n_states: int, min_decoder_states: int = 2
) -> PrefixCode:
    """Non-maximal prefix code whose literal decoder is partial.

    Drops a random nonempty proper subset of leaves from a random maximal
    code, retrying until the surviving decoder has at least
    min_decoder_states states.
    """
    while True:
        base = random_maximal_code(rng, k, max(n_states, 2))
        words = list(base.words)
        drop = rng.randrange(1, len(words))
        rng.shuffle(words)
        kept = sorted(words[drop:], key=lambda w: (len(w), w))
        if not kept:
            continue
        code = PrefixCode.of(base.alphabet, kept)
        if literal_decoder(code).n >= min_decoder_states:
            return code


def random_synchronizing_decoder(
    rng: random.Random, k: int, n_states: int, max_tries: int = 200
) -> tuple[PrefixCode, PartialAutomaton]:
    """Random maximal code whose literal decoder is synchronizing."""
    for _ in range(max_tries):
        code = random_maximal_code(rng, k, n_states)
        A = literal_decoder(code)
        if is_synchronizing(A):
            return code, A
    raise RuntimeError(f"no synchronizing decoder found in {max_tries} tries")


def random_strongly_connected_partial(
    rng: random.Random,
    n: int,
    k: int,
    density: float = 0.8,
    max_tries: int = 500,
) -> PartialAutomaton:
    """Random strongly connected partial automaton.

    A random cycle through all states guarantees connectivity; the remaining
    cells are defined with the given probability.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    alphabet = tuple(chr(ord("a") + i) for i in range(k)) if k <= 26 else tuple(
        f"x{i}" for i in range(k)
    )
    for _ in range(max_tries):
        rows: list[list[Optional[int]]] = [
            [rng.randrange(n) if rng.random() < density else None for _ in range(k)]
            for _ in range(n)
        ]
        order = list(range(n))
        rng.shuffle(order)
        for i, q in enumerate(order):
            rows[q][rng.randrange(k)] = order[(i + 1) % n]
        A = PartialAutomaton.of(alphabet, rows)
        if classify(A).strongly_connected:
            return A
    raise RuntimeError(f"no strongly connected automaton found in {max_tries} tries")


def random_set_cover(rng: random.Random, p: int, m: int) -> SetCoverInstance:
    """Random covering Set Cover instance with p elements and m sets."""
    if p < 1 or m < 1:
        raise ValueError("p and m must be positive")
    sets = [
        {e for e in range(1, p + 1) if rng.random() < 0.4} for _ in range(m)
    ]
    for e in range(1, p + 1):
        if not any(e in s for s in sets):
            sets[rng.randrange(m)].add(e)
    return SetCoverInstance.of(p, sets)
