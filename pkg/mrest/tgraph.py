"""T-graphs: the strategy representation of MRes-T.

A T-graph for universal u is a DAG of three node kinds:

    Leaf(v)           constant v in {0, 1, *}
    IfElse(x, hi, lo) follow hi when x = 1, lo when x = 0
    Hash(a, b)        union of the two inputs (0 against 1 is an error)

Node ids are plain integers. Graphs built by the MRes-T checker use the
index of the proof line that created a node as its id, so every node
appears once however many later lines reuse it.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property

from core.errors import AssignmentError, GraphEvalError, TGraphError
from strategy.table import StrategyTable, check_support_cap
from strategy.values import TriVal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TLeaf:
    value: TriVal


@dataclass(frozen=True)
class TIfElse:
    var: int
    hi: int
    lo: int


@dataclass(frozen=True)
class THash:
    a: int
    b: int


TNode = TLeaf | TIfElse | THash


def children(node: TNode) -> tuple[int, ...]:
    if isinstance(node, TIfElse):
        return (node.hi, node.lo)
    if isinstance(node, THash):
        return (node.a, node.b)
    return ()


@dataclass(frozen=True)
class TGraph:
    """A T-graph for universal u.

    Unreachable nodes are dropped on construction.

    Raises:
        TGraphError: Dangling child ids or a cycle.
    """

    u: int
    nodes: Mapping[int, TNode]
    root: int

    def __post_init__(self) -> None:
        order = _topological(self.nodes, self.root)
        object.__setattr__(self, "nodes", {i: self.nodes[i] for i in order})

    # ── Constructors ─────────────────────────────────────────────────────────

    @classmethod
    def leaf(cls, u: int, value: TriVal | str, node_id: int = 0) -> TGraph:
        return cls(u, {node_id: TLeaf(TriVal(value))}, node_id)

    @classmethod
    def ifelse(cls, x: int, hi: TGraph, lo: TGraph, node_id: int) -> TGraph:
        """New IfElse root on x over two existing graphs."""
        nodes = merge_nodes(hi, lo)
        _claim(nodes, node_id)
        nodes[node_id] = TIfElse(x, hi.root, lo.root)
        return cls(hi.u, nodes, node_id)

    @classmethod
    def hash(cls, a: TGraph, b: TGraph, node_id: int) -> TGraph:
        """New Hash root over two existing graphs (consistency is not checked here)."""
        nodes = merge_nodes(a, b)
        _claim(nodes, node_id)
        nodes[node_id] = THash(a.root, b.root)
        return cls(a.u, nodes, node_id)

    # ── Queries ──────────────────────────────────────────────────────────────

    @property
    def root_node(self) -> TNode:
        return self.nodes[self.root]

    @property
    def is_trivial(self) -> bool:
        node = self.root_node
        return isinstance(node, TLeaf) and node.value is TriVal.STAR

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        """Node ids with children before parents; the root is last."""
        return tuple(self.nodes)

    @cached_property
    def support(self) -> tuple[int, ...]:
        """Sorted IfElse variables."""
        return tuple(sorted({n.var for n in self.nodes.values() if isinstance(n, TIfElse)}))

    def subgraph(self, node_id: int) -> TGraph:
        """The graph rooted at one of this graph's nodes."""
        if node_id not in self.nodes:
            raise TGraphError(f"graph for {self.u} has no node {node_id}")
        return TGraph(self.u, self.nodes, node_id)

    def node_support(self, node_id: int) -> tuple[int, ...]:
        return self.subgraph(node_id).support


def merge_nodes(*graphs: TGraph) -> dict[int, TNode]:
    """Union of node maps; the same id must mean the same node everywhere.

    Raises:
        TGraphError: On graphs for different universals or conflicting ids.
    """
    nodes: dict[int, TNode] = {}
    u = graphs[0].u
    for graph in graphs:
        if graph.u != u:
            raise TGraphError(f"graphs are for different universals ({u} and {graph.u})")
        for node_id, node in graph.nodes.items():
            if nodes.setdefault(node_id, node) != node:
                raise TGraphError(f"conflicting definitions of node {node_id}")
    return nodes


def _claim(nodes: Mapping[int, TNode], node_id: int) -> None:
    if node_id in nodes:
        raise TGraphError(f"node id {node_id} is already in use")


def _topological(nodes: Mapping[int, TNode], root: int) -> list[int]:
    state: dict[int, int] = {}
    order: list[int] = []
    stack: list[tuple[int, bool]] = [(root, False)]
    while stack:
        node_id, expanded = stack.pop()
        if expanded:
            state[node_id] = 2
            order.append(node_id)
            continue
        if state.get(node_id) == 2:
            continue
        if state.get(node_id) == 1:
            raise TGraphError(f"cycle through node {node_id}")
        if node_id not in nodes:
            raise TGraphError(f"dangling node id {node_id}")
        state[node_id] = 1
        stack.append((node_id, True))
        for child in children(nodes[node_id]):
            if state.get(child) == 1:
                raise TGraphError(f"cycle through node {child}")
            if state.get(child) != 2:
                stack.append((child, False))
    return order


# ── Semantics ─────────────────────────────────────────────────────────────────

def tg_eval(t: TGraph, eps: Mapping[int, bool], node_id: int | None = None) -> TriVal:
    """Evaluate t (or one of its nodes) under a complete assignment of its support.

    IfElse nodes only evaluate the selected branch; Hash nodes join both
    inputs.

    Raises:
        AssignmentError: If a visited IfElse variable is unassigned.
        GraphEvalError: If a Hash node sees 0 and 1.
    """
    start = t.root if node_id is None else node_id
    memo: dict[int, TriVal] = {}
    stack = [start]
    while stack:
        current = stack[-1]
        if current in memo:
            stack.pop()
            continue
        node = t.nodes[current]
        if isinstance(node, TLeaf):
            memo[current] = node.value
            stack.pop()
        elif isinstance(node, TIfElse):
            try:
                branch = node.hi if eps[node.var] else node.lo
            except KeyError:
                raise AssignmentError(f"variable {node.var} unassigned") from None
            if branch in memo:
                memo[current] = memo[branch]
                stack.pop()
            else:
                stack.append(branch)
        else:
            pending = [c for c in (node.a, node.b) if c not in memo]
            if pending:
                stack.extend(pending)
                continue
            left, right = memo[node.a], memo[node.b]
            if not left.consistent_with(right):
                raise GraphEvalError(
                    f"hash node {current} of the graph for {t.u} joins {left.value} with {right.value}"
                )
            memo[current] = left.join(right)
            stack.pop()
    return memo[start]


def tg_table(t: TGraph, u: int | None = None) -> StrategyTable:
    """Compile t to its function table over its IfElse variables.

    Raises:
        ResourceCapError: If the support exceeds the table cap.
        GraphEvalError: If some assignment makes a Hash node clash.
    """
    if u is not None and u != t.u:
        raise ValueError(f"graph is for {t.u}, not {u}")
    check_support_cap(len(t.support))
    return StrategyTable.from_function(t.u, t.support, lambda a: tg_eval(t, a))


def tgraph_from_table(table: StrategyTable, first_id: int = 1) -> TGraph:
    """A decision-tree T-graph computing table; identical subtrees are shared.

    Node ids are allocated from first_id upwards.
    """
    nodes: dict[int, TNode] = {}
    memo: dict[tuple[int, tuple[TriVal, ...]], int] = {}
    next_id = first_id

    def build(level: int, rows: tuple[TriVal, ...]) -> int:
        nonlocal next_id
        key = (level, rows)
        if len(set(rows)) == 1:
            key = (-1, rows[:1])
        if key in memo:
            return memo[key]
        if key[0] == -1:
            node: TNode = TLeaf(rows[0])
        else:
            half = len(rows) // 2
            lo = build(level + 1, rows[:half])
            hi = build(level + 1, rows[half:])
            node = TIfElse(table.support[level], hi, lo)
        node_id = next_id
        next_id += 1
        nodes[node_id] = node
        memo[key] = node_id
        return node_id

    root = build(0, table.rows)
    return TGraph(table.u, nodes, root)
