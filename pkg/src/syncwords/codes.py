"""Prefix codes and their decoders.

Codewords are tuples of letter indices into an ordered alphabet.  The literal
decoder of a code has one state per distinct proper prefix of the codewords,
with state 0 the empty-prefix root; it is complete exactly when the code is
maximal (Kraft sum 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .automaton import PartialAutomaton

Word = tuple[int, ...]

MAX_GENERATED_WORDS = 1 << 16
MAX_GENERATED_SYMBOLS = 1 << 21


class PrefixViolationError(ValueError):
    """One codeword is a prefix of another."""

    def __init__(self, shorter: Word, longer: Word):
        self.shorter = shorter
        self.longer = longer
        super().__init__(f"codeword {shorter} is a prefix of {longer}")


def _coerce_word(alphabet: tuple[str, ...], word) -> Word:
    if isinstance(word, str):
        index = {s: i for i, s in enumerate(alphabet)}
        if any(len(s) != 1 for s in alphabet):
            raise ValueError("string codewords need a single-character alphabet")
        try:
            return tuple(index[ch] for ch in word)
        except KeyError as exc:
            raise ValueError(f"unknown symbol {exc.args[0]!r} in codeword {word!r}")
    w = tuple(word)
    for a in w:
        if not 0 <= a < len(alphabet):
            raise ValueError(f"letter index {a} out of range in codeword {w}")
    return w


@dataclass(frozen=True)
class PrefixCode:
    """A finite set of nonempty words, none a prefix of another.

    ``words`` is stored sorted by length then lexicographically.
    """

    alphabet: tuple[str, ...]
    words: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet symbols must be pairwise distinct")
        if not self.words:
            raise ValueError("a prefix code needs at least one codeword")
        seen = set()
        for w in self.words:
            if len(w) == 0:
                raise ValueError("the empty word is not a valid codeword")
            if w in seen:
                raise ValueError(f"duplicate codeword {w}")
            seen.add(w)
        by_lex = sorted(self.words)
        for u, v in zip(by_lex, by_lex[1:]):
            if v[: len(u)] == u:
                raise PrefixViolationError(u, v)

    @classmethod
    def of(cls, alphabet: Iterable[str], words: Iterable) -> "PrefixCode":
        alpha = tuple(alphabet)
        coerced = [_coerce_word(alpha, w) for w in words]
        coerced.sort(key=lambda w: (len(w), w))
        return cls(alpha, tuple(coerced))

    @property
    def k(self) -> int:
        return len(self.alphabet)


@dataclass(frozen=True)
class CodeMetadata:
    kraft_sum: Fraction
    is_maximal: bool
    min_len: int
    max_len: int


@dataclass(frozen=True)
class CompositionMap:
    """Bijection from the letters of an outer code to the words of an inner one.

    ``targets[i]`` is the inner codeword substituted for outer letter i.
    """

    targets: tuple[Word, ...]


@dataclass(frozen=True)
class NotFiniteWithinBound:
    """First-return enumeration hit the length cap on a live branch."""

    live_branch: Word


def code_metadata(code: PrefixCode) -> CodeMetadata:
    """Exact Kraft sum and the derived maximality flag.

    The Kraft sum is kept as a rational so the maximality test (sum equal to
    one) is sharp; floating point is never involved.
    """
    k = code.k
    kraft = sum((Fraction(1, k ** len(w)) for w in code.words), Fraction(0))
    lengths = [len(w) for w in code.words]
    return CodeMetadata(kraft, kraft == 1, min(lengths), max(lengths))


def validate_code(
    alphabet: Iterable[str], words: Iterable
) -> tuple[PrefixCode, CodeMetadata]:
    """Validate a word set as a prefix code and compute its metadata.

    Raises PrefixViolationError naming the offending pair, or ValueError for
    empty or duplicate words.
    """
    code = PrefixCode.of(alphabet, words)
    return code, code_metadata(code)


def proper_prefixes(code: PrefixCode) -> list[Word]:
    """All distinct proper prefixes of the codewords, in shortlex order."""
    seen: set[Word] = set()
    for w in code.words:
        for i in range(len(w)):
            seen.add(w[:i])
    return sorted(seen, key=lambda p: (len(p), p))


def literal_decoder(code: PrefixCode) -> PartialAutomaton:
    """The literal automaton of a prefix code.

    States are the proper prefixes of the codewords (state 0 is the empty
    prefix).  Reading a letter extends the current prefix; completing a
    codeword returns to the root; an extension that is neither a prefix nor a
    codeword is undefined.
    """
    prefixes = proper_prefixes(code)
    index = {p: i for i, p in enumerate(prefixes)}
    words = set(code.words)
    rows = []
    for p in prefixes:
        row: list[Optional[int]] = []
        for a in range(code.k):
            ext = p + (a,)
            if ext in words:
                row.append(0)
            elif ext in index:
                row.append(index[ext])
            else:
                row.append(None)
        rows.append(tuple(row))
    return PartialAutomaton(len(prefixes), code.alphabet, tuple(rows))


def first_return_code(
    A: PartialAutomaton, r: int, max_len: int
) -> Union[PrefixCode, NotFiniteWithinBound]:
    """Enumerate the first-return words of state r up to a length cap.

    A first-return word maps r to itself while no nonempty proper prefix of
    it does.  If some defined path of length ``max_len`` has not yet returned,
    the set cannot be certified finite within the cap and a
    NotFiniteWithinBound marker holding that branch is returned instead.
    """
    if not 0 <= r < A.n:
        raise ValueError(f"state {r} out of range")
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    words: list[Word] = []
    stack: list[tuple[int, Word]] = [(r, ())]
    while stack:
        q, w = stack.pop()
        for a in range(A.k - 1, -1, -1):
            t = A.delta[q][a]
            if t is None:
                continue
            ext = w + (a,)
            if t == r:
                words.append(ext)
            elif len(ext) < max_len:
                stack.append((t, ext))
            else:
                return NotFiniteWithinBound(ext)
    if not words:
        raise ValueError(f"state {r} has no return words within length {max_len}")
    return PrefixCode.of(A.alphabet, words)


def compose_decoders(
    H_Y: PartialAutomaton, Z: PrefixCode, beta: CompositionMap
) -> PartialAutomaton:
    """Decoder of the composed code: rewrite each letter of H_Y as a Z-codeword.

    Every state of H_Y becomes the root of a grafted copy of the code tree of
    Z; reading a complete Z-codeword from a root jumps to the H_Y-target of
    the letter that maps to that codeword.  Z must be maximal so the tree is
    full.  The result has one state per (H_Y state, proper prefix of Z) pair.
    """
    meta = code_metadata(Z)
    if len(Z.words) != H_Y.k:
        raise ValueError(
            f"composition needs |alphabet| = |Z|: {H_Y.k} letters vs {len(Z.words)} codewords"
        )
    if not meta.is_maximal:
        raise ValueError("composition requires a maximal inner code")
    if len(beta.targets) != H_Y.k or set(beta.targets) != set(Z.words):
        raise ValueError("beta must be a bijection from the outer alphabet onto Z")
    inv = {w: y for y, w in enumerate(beta.targets)}

    internal = proper_prefixes(Z)
    tree_index = {p: i for i, p in enumerate(internal)}
    n_y = H_Y.n
    per_copy = len(internal) - 1  # non-root tree states per H_Y state

    def state_id(q: int, prefix: Word) -> int:
        if not prefix:
            return q
        return n_y + q * per_copy + (tree_index[prefix] - 1)

    zwords = set(Z.words)
    rows: list[tuple[Optional[int], ...]] = [()] * (n_y + n_y * per_copy)
    for q in range(n_y):
        for prefix in internal:
            row: list[Optional[int]] = []
            for a in range(Z.k):
                ext = prefix + (a,)
                if ext in zwords:
                    target = H_Y.delta[q][inv[ext]]
                    row.append(None if target is None else state_id(target, ()))
                else:
                    # Z maximal: every non-codeword extension is a proper prefix.
                    row.append(state_id(q, ext))
            rows[state_id(q, prefix)] = tuple(row)
    return PartialAutomaton(len(rows), Z.alphabet, tuple(rows))


def canonical_composition_map(H_Y: PartialAutomaton, Z: PrefixCode) -> CompositionMap:
    """Pair outer letter i with the i-th codeword of Z in shortlex order."""
    if H_Y.k != len(Z.words):
        raise ValueError(
            f"composition needs |alphabet| = |Z|: {H_Y.k} letters vs {len(Z.words)} codewords"
        )
    return CompositionMap(tuple(Z.words))


def _guard_size(count: int, total_symbols: int) -> None:
    if count > MAX_GENERATED_WORDS:
        raise ValueError(f"refusing to generate {count} codewords (cap {MAX_GENERATED_WORDS})")
    if total_symbols > MAX_GENERATED_SYMBOLS:
        raise ValueError(
            f"refusing to generate {total_symbols} total symbols (cap {MAX_GENERATED_SYMBOLS})"
        )


def wielandt_code(n: int) -> PrefixCode:
    """The binary code 0{0,1}^(n-1) + 1{0,1}^n whose minimized decoder has n+1 states."""
    if n < 1:
        raise ValueError("n must be at least 1")
    count = (1 << (n - 1)) + (1 << n)
    _guard_size(count, count * (n + 1))
    words = []
    for tail in range(1 << (n - 1)):
        words.append((0,) + tuple((tail >> (n - 2 - i)) & 1 for i in range(n - 1)))
    for tail in range(1 << n):
        words.append((1,) + tuple((tail >> (n - 1 - i)) & 1 for i in range(n)))
    return PrefixCode.of(("0", "1"), words)


def uniform_code(k: int, length: int) -> PrefixCode:
    """All k^L words of a fixed length L."""
    if k < 1 or length < 1:
        raise ValueError("k and L must be at least 1")
    count = k ** length
    _guard_size(count, count * length)
    alphabet = tuple(str(i) for i in range(k))
    words: list[Word] = [()]
    for _ in range(length):
        words = [w + (a,) for w in words for a in range(k)]
    return PrefixCode.of(alphabet, words)


def two_word_code(n: int) -> PrefixCode:
    """The two-word binary code {(0^n 1^n)^n, (1^n 0^n)^n}."""
    if n < 1:
        raise ValueError("n must be at least 1")
    _guard_size(2, 4 * n * n)
    block01 = (0,) * n + (1,) * n
    block10 = (1,) * n + (0,) * n
    return PrefixCode.of(("0", "1"), [block01 * n, block10 * n])


def generate_code(family: str, **params: int) -> PrefixCode:
    """Dispatch to a named code family: wielandt(n), uniform(k, length), two_word(n)."""
    if family == "wielandt":
        return wielandt_code(params["n"])
    if family == "uniform":
        return uniform_code(params["k"], params["length"])
    if family in ("two_word", "twoword"):
        return two_word_code(params["n"])
    raise ValueError(f"unknown code family {family!r}")
