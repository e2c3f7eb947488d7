"""Instance files and DOT export.

The text format::

    c any comment
    p mwss <n> <m>
    v <id> <weight>      ids 1..n; missing lines mean weight 1
    e <u> <v>            u < v, each edge once

"""

from __future__ import annotations

from pathlib import Path

from .composition import Decomposition
from .graph import WeightedGraph, iter_bits


class ParseError(ValueError):
    """Malformed instance text; ``line`` is 1-based, 0 for whole-file errors."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _ints(parts: list[str], count: int, lineno: int) -> list[int]:
    if len(parts) != count:
        raise ParseError(lineno, f"expected {count} fields, got {len(parts)}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise ParseError(lineno, f"non-integer field in {' '.join(parts)!r}") from None


def parse(text: str) -> WeightedGraph:
    """Read an instance; nodes get tags ``1..n``.

    Raises
    ------
    ParseError
        On a missing or repeated header, an id out of range, a negative
        weight, a repeated weight line, a loop, an unordered or duplicate
        edge, or an edge count that disagrees with the header.
    """
    n = m = -1
    weights: list[int] = []
    seen_v: set[int] = set()
    edges: set[tuple[int, int]] = set()
    order: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        kind, rest = parts[0], parts[1:]
        if kind == "p":
            if n >= 0:
                raise ParseError(lineno, "repeated header")
            if len(rest) != 3 or rest[0] != "mwss":
                raise ParseError(lineno, "header must read 'p mwss <n> <m>'")
            n, m = _ints(rest[1:], 2, lineno)
            if n < 0 or m < 0:
                raise ParseError(lineno, "negative count in header")
            weights = [1] * n
            continue
        if n < 0:
            raise ParseError(lineno, "data before the header")
        if kind == "v":
            vid, w = _ints(rest, 2, lineno)
            if not 1 <= vid <= n:
                raise ParseError(lineno, f"node id {vid} out of range 1..{n}")
            if w < 0:
                raise ParseError(lineno, f"negative weight {w}")
            if vid in seen_v:
                raise ParseError(lineno, f"repeated weight for node {vid}")
            seen_v.add(vid)
            weights[vid - 1] = w
        elif kind == "e":
            u, v = _ints(rest, 2, lineno)
            for x in (u, v):
                if not 1 <= x <= n:
                    raise ParseError(lineno, f"node id {x} out of range 1..{n}")
            if u == v:
                raise ParseError(lineno, f"loop at node {u}")
            if u > v:
                raise ParseError(lineno, f"edge {u} {v} must list the smaller id first")
            if (u, v) in edges:
                raise ParseError(lineno, f"duplicate edge {u} {v}")
            edges.add((u, v))
            order.append((u - 1, v - 1))
        else:
            raise ParseError(lineno, f"unknown line type {kind!r}")
    if n < 0:
        raise ParseError(0, "missing 'p mwss' header")
    if len(edges) != m:
        raise ParseError(0, f"header announces {m} edges, found {len(edges)}")
    return WeightedGraph(weights, order, tags=list(range(1, n + 1)))


def render(g: WeightedGraph, comment: str | None = None) -> str:
    """Write the live nodes in index order as ids ``1..n``, edges sorted."""
    live = list(iter_bits(g.alive))
    pos = {v: i + 1 for i, v in enumerate(live)}
    edges = sorted((pos[u], pos[v]) for u, v in g.edges())
    lines = []
    if comment:
        lines += [f"c {row}" for row in comment.splitlines()]
    lines.append(f"p mwss {len(live)} {len(edges)}")
    lines += [f"v {pos[v]} {g.weight[v]}" for v in live]
    lines += [f"e {u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def read_instance(path: str | Path) -> WeightedGraph:
    return parse(Path(path).read_text())


def write_instance(g: WeightedGraph, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(render(g, comment))


_KIND_STYLE = {
    "clique": 'color="firebrick"',
    "strip": 'color="steelblue"',
    "isolated": 'color="gray40"',
}


def to_dot(g: WeightedGraph, dec: Decomposition, name: str = "basic") -> str:
    """DOT drawing of a basic graph: one cluster per component, matching edges bold."""
    out = [f"graph {name} {{", "  node [shape=circle fontsize=10];"]
    for i, comp in enumerate(dec.components):
        out.append(f"  subgraph cluster_{i} {{")
        out.append(f'    label="{comp.kind} {i}"; {_KIND_STYLE[comp.kind]};')
        for v in iter_bits(comp.nodes):
            out.append(f'    n{v} [label="{g.tag[v]}\\n{g.weight[v]}"];')
        out.append("  }")
    for u, v in g.edges():
        style = " [style=bold penwidth=2.5]" if dec.mate.get(u) == v else ""
        out.append(f"  n{u} -- n{v}{style};")
    out.append("}")
    return "\n".join(out) + "\n"
