"""Text dump of T-graph strategies.

    graph <u>
    <id> LEAF <0|1|*>
    <id> IF <x> <hi> <lo>
    <id> HASH <a> <b>
    end

Nodes are listed children first; the last node of a block is the root.
`extract-strategy` writes this format and `verify-countermodel` reads it.
"""

from collections.abc import Mapping

from core.errors import ParseError, TGraphError
from mrest.tgraph import TGraph, THash, TIfElse, TLeaf, TNode
from strategy.values import TriVal


def dump_strategies(strategies: Mapping[int, TGraph]) -> str:
    out: list[str] = []
    for u in sorted(strategies):
        graph = strategies[u]
        out.append(f"graph {u}")
        for node_id in graph.topological_order:
            out.append(f"{node_id} {_render(graph.nodes[node_id])}")
        out.append("end")
    return "\n".join(out) + "\n"


def parse_strategies(text: str | bytes) -> dict[int, TGraph]:
    """Parse a strategy dump.

    Raises:
        ParseError: On malformed lines, nodes outside a graph block, empty
            or unterminated blocks, and graphs with dangling ids or cycles.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    graphs: dict[int, TGraph] = {}
    current: int | None = None
    nodes: dict[int, TNode] = {}
    last_id: int | None = None
    start_line = 0

    for line_no, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        if tokens[0] == "graph":
            if current is not None:
                raise ParseError("graph block not closed with 'end'", raw, line_no)
            if len(tokens) != 2:
                raise ParseError("expected 'graph <u>'", raw, line_no)
            current = _int(tokens[1], raw, line_no)
            if current in graphs:
                raise ParseError(f"second graph for {current}", raw, line_no)
            nodes, last_id, start_line = {}, None, line_no
            continue
        if tokens[0] == "end":
            if current is None or last_id is None:
                raise ParseError("'end' without a non-empty graph block", raw, line_no)
            try:
                graphs[current] = TGraph(current, nodes, last_id)
            except TGraphError as exc:
                raise ParseError(str(exc), raw, start_line) from None
            current = None
            continue
        if current is None:
            raise ParseError("node outside a graph block", raw, line_no)
        node_id = _int(tokens[0], raw, line_no)
        if node_id in nodes:
            raise ParseError(f"node {node_id} defined twice", raw, line_no)
        nodes[node_id] = _parse_node(tokens[1:], raw, line_no)
        last_id = node_id

    if current is not None:
        raise ParseError("graph block not closed with 'end'", "", start_line)
    return graphs


# ── Private helpers ───────────────────────────────────────────────────────────

def _render(node: TNode) -> str:
    if isinstance(node, TLeaf):
        return f"LEAF {node.value.value}"
    if isinstance(node, TIfElse):
        return f"IF {node.var} {node.hi} {node.lo}"
    return f"HASH {node.a} {node.b}"


def _int(token: str, raw: str, line_no: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", raw, line_no) from None


def _parse_node(tokens: list[str], raw: str, line_no: int) -> TNode:
    if tokens[:1] == ["LEAF"] and len(tokens) == 2:
        try:
            return TLeaf(TriVal.parse(tokens[1]))
        except ValueError as exc:
            raise ParseError(str(exc), raw, line_no) from None
    if tokens[:1] == ["IF"] and len(tokens) == 4:
        return TIfElse(*(_int(t, raw, line_no) for t in tokens[1:]))
    if tokens[:1] == ["HASH"] and len(tokens) == 3:
        return THash(*(_int(t, raw, line_no) for t in tokens[1:]))
    raise ParseError("expected 'LEAF v', 'IF x hi lo' or 'HASH a b'", raw, line_no)
