"""graph6 reader/writer (simple undirected graphs, n < 2**36)."""

from __future__ import annotations

from typing import Iterator, List, Tuple, Union

from .graphs import Graph

HEADER = ">>graph6<<"


class Graph6Error(ValueError):
    """Malformed graph6 text; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


def _encode_n(n: int) -> str:
    if n < 0:
        raise ValueError("negative vertex count")
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n < 2**36:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise ValueError(f"n={n} too large for graph6")


def _decode_n(s: str, base: int) -> Tuple[int, int]:
    """Return ``(n, header_length)``."""

    def sextets(start, count):
        if len(s) < start + count:
            raise Graph6Error("truncated size header", base + len(s))
        value = 0
        for k in range(start, start + count):
            b = ord(s[k]) - 63
            if not 0 <= b <= 63:
                raise Graph6Error(f"invalid byte {s[k]!r} in size header", base + k)
            value = (value << 6) | b
        return value

    if not s:
        raise Graph6Error("empty graph6 string", base)
    first = ord(s[0]) - 63
    if not 0 <= first <= 63:
        raise Graph6Error(f"invalid byte {s[0]!r} in size header", base)
    if first < 63:
        return first, 1
    if len(s) > 1 and s[1] == "~":
        n = sextets(2, 6)
        if n <= 258047:
            raise Graph6Error(f"non-minimal size header for n={n}", base)
        return n, 8
    n = sextets(1, 3)
    if n <= 62:
        raise Graph6Error(f"non-minimal size header for n={n}", base)
    return n, 4


def parse_graph6(text: Union[str, bytes]) -> Graph:
    """Decode one graph6 line (optional ``>>graph6<<`` prefix, surrounding whitespace ignored)."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lead = len(text) - len(text.lstrip())
    s = text.strip()
    if s.startswith(HEADER):
        s = s[len(HEADER):]
        lead += len(HEADER)
    n, h = _decode_n(s, lead)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = s[h:]
    if len(body) < nbytes:
        raise Graph6Error(f"truncated bit stream: need {nbytes} bytes, got {len(body)}", lead + len(s))
    if len(body) > nbytes:
        raise Graph6Error("trailing bytes after bit stream", lead + h + nbytes)
    edges = []
    pos = 0
    i, j = 0, 1
    for k, ch in enumerate(body):
        b = ord(ch) - 63
        if not 0 <= b <= 63:
            raise Graph6Error(f"invalid byte {ch!r}", lead + h + k)
        for shift in range(5, -1, -1):
            bit = (b >> shift) & 1
            if pos >= nbits:
                if bit:
                    raise Graph6Error("nonzero padding bits", lead + h + k)
                continue
            if bit:
                edges.append((i, j))
            pos += 1
            i += 1
            if i == j:
                i, j = 0, j + 1
    return Graph(n, frozenset(edges))


def write_graph6(G: Graph) -> str:
    """Encode without header or newline."""
    out = [_encode_n(G.n)]
    acc = 0
    filled = 0
    for j in range(1, G.n):
        for i in range(j):
            acc = (acc << 1) | ((i, j) in G.edges)
            filled += 1
            if filled == 6:
                out.append(chr(acc + 63))
                acc = filled = 0
    if filled:
        out.append(chr((acc << (6 - filled)) + 63))
    return "".join(out)


def iter_graph6_lines(lines) -> Iterator[Tuple[int, str, Union[Graph, Graph6Error]]]:
    """Yield ``(line_number, stripped_text, graph_or_error)`` for each non-blank line."""
    for lineno, raw in enumerate(lines, start=1):
        s = raw.strip()
        if not s:
            continue
        if s.startswith(HEADER):
            s = s[len(HEADER):]
            if not s:
                continue
        try:
            yield lineno, s, parse_graph6(s)
        except Graph6Error as exc:
            yield lineno, s, exc


def read_graph6_file(path) -> List[Graph]:
    """All graphs in a graph6 file; the first malformed line raises."""
    with open(path, encoding="ascii") as fh:
        out = []
        for lineno, _, g in iter_graph6_lines(fh):
            if isinstance(g, Graph6Error):
                raise Graph6Error(f"line {lineno}: {g}", g.offset)
            out.append(g)
        return out
