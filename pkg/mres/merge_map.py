"""Merge maps: the deterministic branching programs of MRes strategies.

A merge map for universal u is a DAG of leaves (values in {0, 1, *}) and
branch nodes on existential variables left of u. Branch nodes are created
by merge steps and keyed by the proof line that created them, so two maps
that both contain the node of line t share it when merged. Leaves are keyed
by value (ids -1, -2, -3), so equal leaves are always shared.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass

from core.errors import AssignmentError, MergeMapError, PrefixError, SelectBlockedError
from qbf.model import Qbf
from strategy.table import StrategyTable
from strategy.values import TriVal

logger = logging.getLogger(__name__)

LEAF_IDS: dict[TriVal, int] = {TriVal.ZERO: -1, TriVal.ONE: -2, TriVal.STAR: -3}


@dataclass(frozen=True)
class MMLeaf:
    value: TriVal


@dataclass(frozen=True)
class MMBranch:
    """Branch on var: the x̄-edge leads to lo, the x-edge to hi.

    Attributes:
        line_tag: The proof line whose merge step created the node. Also
            the node's id.
    """

    var: int
    lo: int
    hi: int
    line_tag: int


MMNode = MMLeaf | MMBranch


@dataclass(frozen=True)
class MergeMap:
    """A merge map for universal u.

    Unreachable nodes are dropped on construction.

    Raises:
        MergeMapError: Dangling child ids, mis-keyed nodes, or a cycle.
    """

    u: int
    nodes: Mapping[int, MMNode]
    root: int

    def __post_init__(self) -> None:
        for node_id, node in self.nodes.items():
            if isinstance(node, MMLeaf) and node_id != LEAF_IDS[node.value]:
                raise MergeMapError(f"leaf {node.value.value} must have id {LEAF_IDS[node.value]}")
            if isinstance(node, MMBranch) and node_id != node.line_tag:
                raise MergeMapError(f"branch node {node_id} carries line tag {node.line_tag}")
        reachable = _reachable(self.nodes, self.root)
        object.__setattr__(self, "nodes", {i: self.nodes[i] for i in reachable})

    @classmethod
    def leaf(cls, u: int, value: TriVal | str) -> MergeMap:
        value = TriVal(value)
        return cls(u, {LEAF_IDS[value]: MMLeaf(value)}, LEAF_IDS[value])

    @property
    def root_node(self) -> MMNode:
        return self.nodes[self.root]

    @property
    def is_trivial(self) -> bool:
        node = self.root_node
        return isinstance(node, MMLeaf) and node.value is TriVal.STAR

    @property
    def branch_vars(self) -> tuple[int, ...]:
        return tuple(sorted({n.var for n in self.nodes.values() if isinstance(n, MMBranch)}))


def _reachable(nodes: Mapping[int, MMNode], root: int) -> list[int]:
    """Ids reachable from root; raises on dangling ids or cycles."""
    state: dict[int, int] = {}  # 1 = on stack, 2 = done
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
            raise MergeMapError(f"cycle through node {node_id}")
        if node_id not in nodes:
            raise MergeMapError(f"dangling node id {node_id}")
        state[node_id] = 1
        stack.append((node_id, True))
        node = nodes[node_id]
        if isinstance(node, MMBranch):
            for child in (node.hi, node.lo):
                if state.get(child) == 1:
                    raise MergeMapError(f"cycle through node {child}")
                if state.get(child) != 2:
                    stack.append((child, False))
    return order


# ── Operations ────────────────────────────────────────────────────────────────

def mm_eval(m: MergeMap, eps: Mapping[int, bool]) -> TriVal:
    """Follow the edges selected by eps from the root to a leaf.

    Raises:
        AssignmentError: If a branch variable on the path is unassigned.
    """
    node = m.root_node
    while isinstance(node, MMBranch):
        try:
            bit = eps[node.var]
        except KeyError:
            raise AssignmentError(f"variable {node.var} unassigned") from None
        node = m.nodes[node.hi if bit else node.lo]
    return node.value


def canonical_id(m: MergeMap, intern: dict[tuple, int]) -> int:
    """Structural hash of m's root, interned in `intern`.

    Two maps hashed with the same intern table get the same id iff they are
    isomorphic.
    """
    memo: dict[int, int] = {}

    def canon(node_id: int) -> int:
        if node_id in memo:
            return memo[node_id]
        node = m.nodes[node_id]
        if isinstance(node, MMLeaf):
            key: tuple = ("leaf", node.value)
        else:
            key = ("branch", node.var, canon(node.lo), canon(node.hi))
        memo[node_id] = intern.setdefault(key, len(intern))
        return memo[node_id]

    return canon(m.root)


def mm_isomorphic(m: MergeMap, m2: MergeMap) -> bool:
    """True iff the maps are the same labelled DAG up to node identity."""
    if m.u != m2.u:
        return False
    intern: dict[tuple, int] = {}
    return canonical_id(m, intern) == canonical_id(m2, intern)


def mm_select(m: MergeMap, m2: MergeMap) -> MergeMap:
    """The non-trivial operand, or the first one when both qualify.

    Raises:
        SelectBlockedError: If neither operand is trivial and they are not
            isomorphic.
    """
    if m2.is_trivial:
        return m
    if m.is_trivial:
        return m2
    if mm_isomorphic(m, m2):
        return m
    raise SelectBlockedError(f"merge maps for {m.u} are neither isomorphic nor trivial")


def mm_merge(ma: MergeMap, mb: MergeMap, i: int, x: int, q: Qbf | None = None) -> MergeMap:
    """New root on x tagged i: x̄ leads to ma, x leads to mb.

    Nodes with equal line tags are shared. Without q the maps are treated as
    plain branching programs and x is not checked against a prefix; the MRes
    checker always passes its formula.

    Raises:
        PrefixError: If q is given and x is not an existential left of u.
        MergeMapError: If the operands disagree on a shared line tag, or
            already contain a node tagged i.
    """
    if ma.u != mb.u:
        raise MergeMapError(f"maps are for different universals ({ma.u} and {mb.u})")
    if q is not None and not (q.is_existential(x) and q.order.left_of(x, ma.u)):
        raise PrefixError(f"variable {x} is not an existential left of {ma.u}")
    nodes: dict[int, MMNode] = dict(ma.nodes)
    for node_id, node in mb.nodes.items():
        if nodes.setdefault(node_id, node) != node:
            raise MergeMapError(f"operands disagree on the node of line {node_id}")
    if i in nodes:
        raise MergeMapError(f"a node tagged {i} already exists")
    nodes[i] = MMBranch(var=x, lo=ma.root, hi=mb.root, line_tag=i)
    return MergeMap(ma.u, nodes, i)


def mm_table(m: MergeMap) -> StrategyTable:
    """Compile m to its function table over its branch variables."""
    return StrategyTable.from_function(m.u, m.branch_vars, lambda a: mm_eval(m, a))
