"""Text formats for automata and prefix codes, DOT export, word rendering.

Automaton files::

    # comment lines start with '#'
    dfa <n> <k>
    <symbol_1> ... <symbol_k>
    <row for state 0: k fields, a target state index or '-'>
    ...

Code files::

    code <symbol_1> ... <symbol_k>
    <one codeword per line>

Codewords (and words in reports) are the concatenated symbol names when every
symbol is a single character, and '.'-separated symbol names otherwise.
"""

from __future__ import annotations

import re
from typing import Optional, Union

from .automaton import PartialAutomaton
from .codes import PrefixCode, PrefixViolationError

_TOKEN = re.compile(r"\S+")


class ParseError(ValueError):
    """Input file error with a 1-based line and column location."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


def _content_lines(text: str) -> list[tuple[int, str]]:
    """Non-comment lines with their original 1-based numbers.

    Trailing blank lines are dropped; interior blanks are kept so that an
    empty codeword line can be reported.
    """
    raw = text.split("\n")
    while raw and raw[-1].strip() == "":
        raw.pop()
    out = []
    for i, line in enumerate(raw, start=1):
        if line.lstrip().startswith("#"):
            continue
        out.append((i, line))
    return out


def _tokens(line: str) -> list[tuple[int, str]]:
    return [(m.start() + 1, m.group()) for m in _TOKEN.finditer(line)]


def _decode(data: Union[bytes, str]) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_automaton_file(data: Union[bytes, str]) -> PartialAutomaton:
    lines = _content_lines(_decode(data))
    if not lines:
        raise ParseError("empty automaton file", 1)
    lineno, header = lines[0]
    toks = _tokens(header)
    if len(toks) != 3 or toks[0][1] != "dfa":
        raise ParseError("expected header 'dfa <n> <k>'", lineno)
    try:
        n, k = int(toks[1][1]), int(toks[2][1])
    except ValueError:
        raise ParseError("state and letter counts must be integers", lineno, toks[1][0])
    if n < 1 or k < 1:
        raise ParseError("state and letter counts must be positive", lineno)
    if len(lines) < 2:
        raise ParseError("missing symbol line", lineno)
    symno, symline = lines[1]
    symtoks = _tokens(symline)
    if len(symtoks) != k:
        raise ParseError(f"expected {k} symbols, found {len(symtoks)}", symno)
    seen: dict[str, int] = {}
    for col, sym in symtoks:
        if sym in seen:
            raise ParseError(f"duplicate symbol {sym!r}", symno, col)
        seen[sym] = col
    alphabet = tuple(sym for _, sym in symtoks)
    body = lines[2:]
    if len(body) != n:
        raise ParseError(
            f"expected {n} transition rows, found {len(body)}",
            body[-1][0] if body else symno,
        )
    rows: list[tuple[Optional[int], ...]] = []
    for q, (rowno, rowline) in enumerate(body):
        rowtoks = _tokens(rowline)
        if len(rowtoks) != k:
            raise ParseError(
                f"row {q} needs {k} fields, found {len(rowtoks)}", rowno
            )
        row: list[Optional[int]] = []
        for col, tok in rowtoks:
            if tok == "-":
                row.append(None)
                continue
            try:
                t = int(tok)
            except ValueError:
                raise ParseError(f"expected a state index or '-', got {tok!r}", rowno, col)
            if not 0 <= t < n:
                raise ParseError(f"state index {t} out of range 0..{n - 1}", rowno, col)
            row.append(t)
        rows.append(tuple(row))
    return PartialAutomaton(n, alphabet, tuple(rows))


def serialize_automaton(A: PartialAutomaton, comments: tuple[str, ...] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"dfa {A.n} {A.k}")
    out.append(" ".join(A.alphabet))
    for row in A.delta:
        out.append(" ".join("-" if t is None else str(t) for t in row))
    return "\n".join(out) + "\n"


def render_word(alphabet: tuple[str, ...], word: tuple[int, ...]) -> str:
    if not word:
        return ""
    parts = [alphabet[a] for a in word]
    if all(len(s) == 1 for s in alphabet):
        return "".join(parts)
    return ".".join(parts)


def parse_word(alphabet: tuple[str, ...], text: str) -> tuple[int, ...]:
    index = {s: i for i, s in enumerate(alphabet)}
    if text == "":
        return ()
    if "." in text:
        parts = text.split(".")
    elif all(len(s) == 1 for s in alphabet):
        parts = list(text)
    else:
        raise ValueError(
            "words over a multi-character alphabet must be '.'-separated"
        )
    out = []
    for part in parts:
        if part not in index:
            raise ValueError(f"unknown symbol {part!r}")
        out.append(index[part])
    return tuple(out)


def parse_code_file(data: Union[bytes, str]) -> PrefixCode:
    lines = _content_lines(_decode(data))
    if not lines:
        raise ParseError("empty code file", 1)
    lineno, header = lines[0]
    toks = _tokens(header)
    if not toks or toks[0][1] != "code":
        raise ParseError("expected header 'code <symbols...>'", lineno)
    if len(toks) < 2:
        raise ParseError("the alphabet must contain at least one symbol", lineno)
    seen = set()
    for col, sym in toks[1:]:
        if sym in seen:
            raise ParseError(f"duplicate symbol {sym!r}", lineno, col)
        seen.add(sym)
    alphabet = tuple(sym for _, sym in toks[1:])
    words: list[tuple[int, ...]] = []
    word_lines: list[int] = []
    for wordno, line in lines[1:]:
        text = line.strip()
        if text == "":
            raise ParseError("empty codeword", wordno)
        try:
            words.append(parse_word(alphabet, text))
        except ValueError as exc:
            raise ParseError(str(exc), wordno)
        word_lines.append(wordno)
    if not words:
        raise ParseError("the code must contain at least one codeword", lineno)
    try:
        return PrefixCode.of(alphabet, words)
    except PrefixViolationError as exc:
        where = {w: word_lines[i] for i, w in enumerate(words)}
        raise ParseError(
            f"codeword {render_word(alphabet, exc.shorter)!r} (line "
            f"{where[exc.shorter]}) is a prefix of "
            f"{render_word(alphabet, exc.longer)!r} (line {where[exc.longer]})",
            where[exc.longer],
        )
    except ValueError as exc:
        raise ParseError(str(exc), lineno)


def serialize_code(code: PrefixCode, comments: tuple[str, ...] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out.append("code " + " ".join(code.alphabet))
    for w in code.words:
        out.append(render_word(code.alphabet, w))
    return "\n".join(out) + "\n"


def export_dot(A: PartialAutomaton) -> str:
    """DOT digraph with one labeled edge per defined transition."""
    lines = ["digraph automaton {", "  rankdir=LR;", "  node [shape=circle];"]
    for q in range(A.n):
        lines.append(f'  q{q} [label="{q}"];')
    for q in range(A.n):
        for a in range(A.k):
            t = A.delta[q][a]
            if t is not None:
                label = A.alphabet[a].replace('"', '\\"')
                lines.append(f'  q{q} -> q{t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
