"""Extension variables for T-graph nodes.

Every node t of T^u_i (the strategy of universal u at proof line i) gets
two extension variables:

    v_<i>_<u>_<t>   the node's value
    d_<i>_<u>_<t>   whether the node is defined (not *)

so the three values of a node are (v, d) = (1, 1), (0, 1) and (0, 0) for 1,
0 and *. The definitions follow the node kinds:

    Leaf 1 / 0 / *     v ↔ T / F / F,   d ↔ T / T / F
    IfElse(y, b, c)    v ↔ (y ∧ v_b) ∨ (¬y ∧ v_c), likewise d
    Hash(b, c)         d ↔ d_b ∨ d_c,   v ↔ (d_b ∧ v_b) ∨ (d_c ∧ v_c)

Extension variables of u sit immediately left of u's quantifier block.
Prefix levels are kept as integers: a QBF variable in block k has level 2k
and an extension variable of a universal in block k has level 2k - 1.
"""

import logging
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from core.errors import EmissionError
from efrege.certificate import EFregeLine, ExtDef
from efrege.formula import FALSE, TRUE, And, Formula, Not, Or, Var, disj, evaluate, lit
from mrest.checker import MResTChecker, MResTLine
from mrest.tgraph import TGraph, TIfElse, TLeaf
from qbf.model import Clause, Qbf, lit_sign, lit_var
from strategy.values import TriVal

logger = logging.getLogger(__name__)

_EXT_RE = re.compile(r"([vd])_(\d+)_(\d+)_(\d+)")


def qvar(var: int) -> Var:
    """The certificate variable of a QBF variable: its id as a name."""
    return Var(str(var))


def clause_formula(clause: Clause) -> Formula:
    """Disjunction of the clause's literals in clause order; F when empty."""
    return disj(lit(str(lit_var(x)), lit_sign(x)) for x in clause.literals)


def ext_name(kind: str, line: int, u: int, node: int) -> str:
    return f"{kind}_{line}_{u}_{node}"


def parse_ext_name(name: str) -> tuple[str, int, int, int] | None:
    """(kind, line, u, node) for an extension variable name, None otherwise."""
    match = _EXT_RE.fullmatch(name)
    if match is None:
        return None
    kind, line, u, node = match.groups()
    return kind, int(line), int(u), int(node)


def node_pair(graph: TGraph, node_id: int, eps: Mapping[int, bool]) -> tuple[bool, bool]:
    """(v, d) of a node under the extension semantics.

    Unlike tg_eval this is total: a Hash node over 0 and 1 gets the value
    of its first input.
    """
    pairs: dict[int, tuple[bool, bool]] = {}
    for t in graph.subgraph(node_id).topological_order:
        node = graph.nodes[t]
        if isinstance(node, TLeaf):
            pairs[t] = (node.value is TriVal.ONE, node.value.is_set)
        elif isinstance(node, TIfElse):
            pairs[t] = pairs[node.hi] if eps[node.var] else pairs[node.lo]
        else:
            (va, da), (vb, db) = pairs[node.a], pairs[node.b]
            pairs[t] = ((da and va) or (db and vb), da or db)
    return pairs[node_id]


@dataclass
class ExtensionEnv:
    """Extension variables of one completed MRes-T proof.

    Attributes:
        q: The formula.
        graphs: Completed graphs per proof line (1-based) and universal.
        def_lines: Certificate index of the defining line of each extension
            variable.
    """

    q: Qbf
    graphs: dict[int, dict[int, TGraph]]
    def_lines: dict[str, int] = field(default_factory=dict)

    def v(self, line: int, u: int, node: int) -> Var:
        return Var(ext_name("v", line, u, node))

    def d(self, line: int, u: int, node: int) -> Var:
        return Var(ext_name("d", line, u, node))

    def graph(self, line: int, u: int) -> TGraph:
        return self.graphs[line][u]

    def root(self, line: int, u: int) -> int:
        return self.graphs[line][u].root

    def active(self, line: int) -> tuple[int, ...]:
        """Universals whose strategy at this line is not the constant *, in prefix order."""
        return tuple(u for u in self.q.universals if not self.graphs[line][u].is_trivial)

    def definitions(self, line: int, u: int, node: int) -> tuple[Formula, Formula]:
        """Defining formulas (for v, for d) of one node copy."""
        t = self.graphs[line][u].nodes[node]
        if isinstance(t, TLeaf):
            return (TRUE if t.value is TriVal.ONE else FALSE), (TRUE if t.value.is_set else FALSE)
        if isinstance(t, TIfElse):
            y = qvar(t.var)
            return (
                Or(And(y, self.v(line, u, t.hi)), And(Not(y), self.v(line, u, t.lo))),
                Or(And(y, self.d(line, u, t.hi)), And(Not(y), self.d(line, u, t.lo))),
            )
        da, db = self.d(line, u, t.a), self.d(line, u, t.b)
        return (
            Or(And(da, self.v(line, u, t.a)), And(db, self.v(line, u, t.b))),
            Or(da, db),
        )

    def def_v(self, line: int, u: int, node: int) -> int:
        return self.def_lines[ext_name("v", line, u, node)]

    def def_d(self, line: int, u: int, node: int) -> int:
        return self.def_lines[ext_name("d", line, u, node)]

    def build_definitions(self, first_index: int = 1) -> list[EFregeLine]:
        """ExtDef lines for every node of every graph, children before parents."""
        out: list[EFregeLine] = []
        index = first_index
        for line in sorted(self.graphs):
            for u in self.q.universals:
                graph = self.graphs[line][u]
                for node in graph.topological_order:
                    if node < 0:
                        raise EmissionError(f"node id {node} cannot name an extension variable")
                    for var, definition in zip(
                        (self.v(line, u, node), self.d(line, u, node)),
                        self.definitions(line, u, node),
                    ):
                        out.append(EFregeLine.extension(index, var.name, definition))
                        self.def_lines[var.name] = index
                        index += 1
        logger.debug("Defined %d extension variables", len(out))
        return out

    @classmethod
    def from_lines(cls, q: Qbf, lines: Sequence[MResTLine]) -> "ExtensionEnv":
        return cls(q, {i: dict(line.graphs) for i, line in enumerate(lines, 1)})


def define_extensions(q: Qbf, proof: Sequence[MResTLine]) -> tuple[ExtensionEnv, list[EFregeLine]]:
    """Extension variables and their ExtDef lines for a valid MRes-T proof.

    Raises:
        EmissionError: If the proof does not check.
    """
    checked = MResTChecker(q).run(proof)
    if not checked.report.valid:
        raise EmissionError(
            f"proof is invalid at line {checked.report.failing_line}", checked.report
        )
    env = ExtensionEnv.from_lines(q, checked.lines)
    return env, env.build_definitions()


def evaluate_definitions(lines: Sequence[EFregeLine], assignment: Mapping[str, bool]) -> dict[str, bool]:
    """Extend an assignment of QBF variables through ExtDef lines, in order."""
    values = dict(assignment)
    for line in lines:
        if isinstance(line.rule, ExtDef):
            values[line.rule.var] = evaluate(line.rule.definition, values)
    return values


class ExtendedPrefix:
    """Prefix levels of QBF variables and of the extension variables defined so far."""

    def __init__(self, q: Qbf) -> None:
        self.q = q
        self._defined: dict[str, int] = {}

    def qbf_var(self, name: str) -> int | None:
        if not name.isdigit():
            return None
        var = int(name)
        return var if var in self.q.order.level else None

    def placement(self, name: str) -> int | None:
        """Level an extension variable with this name would get, or None."""
        parsed = parse_ext_name(name)
        if parsed is None or parsed[2] not in self.q.order.level or not self.q.is_universal(parsed[2]):
            return None
        return 2 * self.q.order.block_of(parsed[2]) - 1

    def level(self, name: str) -> int | None:
        """Level of a known variable; None for names not in the prefix."""
        var = self.qbf_var(name)
        if var is not None:
            return 2 * self.q.order.block_of(var)
        return self._defined.get(name)

    def is_defined(self, name: str) -> bool:
        return name in self._defined

    def define(self, name: str, level: int) -> None:
        self._defined[name] = level
