"""eFrege+∀red certificates from MRes-T refutations.

For every proof line i with clause C_i the certificate derives

    Ind(i) := (⋀_{u ∈ U_i} A(i, u)) → C_i,   A(i, u) := d_r → (u ↔ v_r)

where r is the root of T^u_i and U_i the universals whose strategy at line
i is not the constant *. Without the d guard a root that is * on some
assignment would force u to 0 there, which the proof does not justify.

Axiom lines unfold the matrix clause one universal literal at a time.
Resolution lines rewrite Ind(j) and Ind(k) so their antecedents talk about
line i's variables, then resolve on the pivot. The rewrite per universal:

  * u ∉ U_j: weakening.
  * IfElse root: under ¬x (resp. x) the root equals its lo (hi) child; the
    child's line-i copy equals line j's copy by a node-by-node equality
    chain. Under x the clause C_j is true anyway.
  * Hash root: when the j-side input is defined the root equals it. This
    needs the two inputs to agree wherever both are defined, which is
    derived pair by pair while walking both inputs in step.

Once Ind(m) = ¬⋀ A(m, u) is reached the universals are reduced from the
right: each u ⊕ v term is reduced with u = 0 and u = 1, simplified to v and
¬v, and the two are resolved away, ending in F.
"""

import logging
from collections.abc import Sequence

from core.errors import EmissionError
from efrege.certificate import AxiomRef, CertRule, EFregeLine, ForallRed, Infer
from efrege.extensions import ExtensionEnv, clause_formula, qvar
from efrege.formula import (
    FALSE,
    TRUE,
    And,
    Formula,
    Iff,
    Implies,
    Not,
    Xor,
    conj,
    disj,
    guarded,
    lit,
    substitute,
)
from mrest.checker import MResTChecker, MResTLine
from mrest.tgraph import THash, TIfElse, TLeaf, children
from proofs.rules import Axiom
from qbf.model import Qbf, lit_sign, lit_var

logger = logging.getLogger(__name__)


def emit_efrege(q: Qbf, proof: Sequence[MResTLine], force: bool = False) -> list[EFregeLine]:
    """Certificate for an MRes-T refutation.

    Args:
        q: The formula.
        proof: The refutation (clauses and graphs may be omitted).
        force: Emit even when the proof does not check, working from the
            lines as the checker rebuilt them. The result may or may not
            check.

    Raises:
        EmissionError: If the proof does not check and force is False, or
            it cannot be rebuilt into a derivation of the empty clause.
    """
    checked = MResTChecker(q).run(proof)
    report = checked.report
    if not report.valid:
        if not force:
            raise EmissionError(
                f"proof is invalid at line {report.failing_line}: "
                f"{report.reason.value if report.reason else 'unknown'}",
                report,
            )
        if not checked.complete or not checked.lines or not checked.lines[-1].clause.is_empty:
            raise EmissionError("proof cannot be rebuilt into a refutation", report)
        logger.warning("Emitting a certificate for a proof that fails at line %s", report.failing_line)

    env = ExtensionEnv.from_lines(q, checked.lines)
    cert = env.build_definitions()
    emitter = _Emitter(q, env, checked.lines, cert)
    emitter.unfold_lines()
    emitter.reduce_universals()
    logger.info("Emitted %d certificate lines for %d proof lines", len(cert), len(checked.lines))
    return cert


class _Emitter:
    def __init__(self, q: Qbf, env: ExtensionEnv, lines: Sequence[MResTLine], cert: list[EFregeLine]) -> None:
        self.q = q
        self.env = env
        self.lines = lines
        self.cert = cert
        self.ind: dict[int, int] = {}
        self._eq: dict[tuple[int, int, int, int], int] = {}
        self._agreed: dict[tuple[int, int, int, int, tuple[tuple[int, bool], ...]], int] = {}
        self._supports: dict[tuple[int, int, int], frozenset[int]] = {}

    # ── Line bookkeeping ──────────────────────────────────────────────────────

    def add(self, formula: Formula, rule: CertRule) -> int:
        index = len(self.cert) + 1
        self.cert.append(EFregeLine(index, formula, rule))
        return index

    def infer(self, formula: Formula, *premises: int) -> int:
        return self.add(formula, Infer(tuple(dict.fromkeys(premises))))

    def formula(self, index: int) -> Formula:
        return self.cert[index - 1].formula

    # ── Shorthands ────────────────────────────────────────────────────────────

    def antecedent(self, line: int, u: int) -> Formula:
        r = self.env.root(line, u)
        return Implies(self.env.d(line, u, r), Iff(qvar(u), self.env.v(line, u, r)))

    def clause(self, line: int) -> Formula:
        return clause_formula(self.lines[line - 1].clause)

    def induction(self, line: int) -> Formula:
        return guarded([self.antecedent(line, u) for u in self.env.active(line)], self.clause(line))

    # ── Per-line inductions ───────────────────────────────────────────────────

    def unfold_lines(self) -> None:
        for index, line in enumerate(self.lines, 1):
            if isinstance(line.rule, Axiom):
                self._axiom(index, line.rule.index)
            else:
                self._resolution(index, line.rule.j, line.rule.k)
            logger.debug("Proof line %d: induction at certificate line %d", index, self.ind[index])

    def _axiom(self, i: int, clause_index: int) -> None:
        matrix_clause = self.q.clause(clause_index)
        prev = self.add(clause_formula(matrix_clause), AxiomRef(clause_index))
        active = self.env.active(i)
        existential = [x for x in self.lines[i - 1].clause.literals]
        for k, u in enumerate(active, 1):
            pending = set(active[k:])
            rest = existential + [x for x in matrix_clause.literals if lit_var(x) in pending]
            formula = Implies(
                conj(self.antecedent(i, w) for w in active[:k]),
                disj(lit(str(lit_var(x)), lit_sign(x)) for x in rest),
            )
            r = self.env.root(i, u)
            prev = self.infer(formula, prev, self.env.def_v(i, u, r), self.env.def_d(i, u, r))
        self.ind[i] = prev

    def _resolution(self, i: int, j: int, k: int) -> None:
        from_j = self._adjust(i, j, first=True)
        from_k = self._adjust(i, k, first=False)
        self.ind[i] = self.infer(self.induction(i), from_j, from_k)

    def _adjust(self, i: int, j: int, first: bool) -> int:
        """Ind(j) with every antecedent rewritten to line i's variables."""
        active_i, active_j = self.env.active(i), set(self.env.active(j))
        lost = active_j - set(active_i)
        if lost:
            raise EmissionError(f"line {i} drops the strategies of {sorted(lost)} from line {j}")
        prev = self.ind[j]
        done: set[int] = set()
        for u in active_i:
            done.add(u)
            antecedents = [
                self.antecedent(i if w in done else j, w)
                for w in self.q.universals
                if w in done or w in active_j
            ]
            formula = Implies(conj(antecedents), self.clause(j))
            if u not in active_j:
                prev = self.infer(formula, prev)
                continue
            child, lemma = self._root_lemma(i, u, first)
            prev = self.infer(formula, prev, self._equality(i, j, u, child), lemma)
        return prev

    def _root_lemma(self, i: int, u: int, first: bool) -> tuple[int, int]:
        """The child that stands in for the root, and the lemma saying when it does."""
        env = self.env
        r = env.root(i, u)
        node = env.graph(i, u).nodes[r]
        if isinstance(node, TIfElse):
            child = node.lo if first else node.hi
            y = qvar(node.var)
            formula = Implies(
                Not(y) if first else y,
                And(Iff(env.d(i, u, r), env.d(i, u, child)), Iff(env.v(i, u, r), env.v(i, u, child))),
            )
            return child, self.infer(formula, env.def_v(i, u, r), env.def_d(i, u, r))
        if isinstance(node, THash):
            child = node.a if first else node.b
            formula = Implies(
                env.d(i, u, child),
                And(env.d(i, u, r), Iff(env.v(i, u, r), env.v(i, u, child))),
            )
            return child, self.infer(
                formula, env.def_v(i, u, r), env.def_d(i, u, r), self._consistency(i, u, node)
            )
        raise EmissionError(f"line {i}: the strategy for {u} is a leaf where a resolution builds a node")

    # ── Lemmas over graph nodes ───────────────────────────────────────────────

    def _equality(self, i: int, j: int, u: int, t: int) -> int:
        """(v_i,t ↔ v_j,t) ∧ (d_i,t ↔ d_j,t), built children first."""
        env = self.env
        gi, gj = env.graph(i, u), env.graph(j, u)
        if t not in gj.nodes:
            raise EmissionError(f"node {t} is not part of the strategy for {u} at line {j}")
        below = gj.subgraph(t)
        for n in below.topological_order:
            if gi.nodes.get(n) != gj.nodes[n]:
                raise EmissionError(f"node {n} differs between lines {i} and {j}")
            key = (i, j, u, n)
            if key in self._eq:
                continue
            vi, vj, di, dj = env.v(i, u, n), env.v(j, u, n), env.d(i, u, n), env.d(j, u, n)
            both = And(Iff(vi, vj), Iff(di, dj))
            node = gj.nodes[n]
            if isinstance(node, TLeaf):
                self._eq[key] = self.infer(
                    both, env.def_v(i, u, n), env.def_d(i, u, n), env.def_v(j, u, n), env.def_d(j, u, n)
                )
                continue
            below_eqs = [self._eq[(i, j, u, c)] for c in children(node)]
            v_part = self.infer(Iff(vi, vj), env.def_v(i, u, n), env.def_v(j, u, n), *below_eqs)
            d_part = self.infer(Iff(di, dj), env.def_d(i, u, n), env.def_d(j, u, n), *below_eqs)
            self._eq[key] = self.infer(both, v_part, d_part)
        return self._eq[(i, j, u, t)]

    def _consistency(self, i: int, u: int, node: THash) -> int:
        """(d_a ∧ d_b) → (v_a ↔ v_b) for the inputs of a Hash root."""
        return self._agree(i, u, node.a, node.b, {})

    def _agree(self, i: int, u: int, p: int, q: int, sigma: dict[int, bool]) -> int:
        """σ → ((d_p ∧ d_q) → (v_p ↔ v_q)), σ cut down to the pair's IfElse variables.

        Walks both nodes in step. A Hash node splits into its inputs, an
        IfElse node whose variable σ fixes steps to that child, and otherwise
        σ is extended both ways on the next IfElse variable. Pairs are
        memoized with their cut-down σ.
        """
        env = self.env
        if p == q:
            context: tuple[tuple[int, bool], ...] = ()
        else:
            relevant = self._support(i, u, p) | self._support(i, u, q)
            context = tuple((x, b) for x, b in sorted(sigma.items()) if x in relevant)
        key = (i, u, p, q, context)
        if key in self._agreed:
            return self._agreed[key]

        local = dict(context)
        graph = env.graph(i, u)
        left, right = graph.nodes[p], graph.nodes[q]
        if p == q:
            premises: list[int] = []
        elif isinstance(left, THash):
            premises = [
                env.def_v(i, u, p),
                env.def_d(i, u, p),
                self._agree(i, u, left.a, q, local),
                self._agree(i, u, left.b, q, local),
            ]
        elif isinstance(right, THash):
            premises = [
                env.def_v(i, u, q),
                env.def_d(i, u, q),
                self._agree(i, u, p, right.a, local),
                self._agree(i, u, p, right.b, local),
            ]
        elif isinstance(left, TIfElse) and left.var in local:
            child = left.hi if local[left.var] else left.lo
            premises = [env.def_v(i, u, p), env.def_d(i, u, p), self._agree(i, u, child, q, local)]
        elif isinstance(right, TIfElse) and right.var in local:
            child = right.hi if local[right.var] else right.lo
            premises = [env.def_v(i, u, q), env.def_d(i, u, q), self._agree(i, u, p, child, local)]
        elif isinstance(left, TLeaf) and isinstance(right, TLeaf):
            premises = [env.def_v(i, u, p), env.def_d(i, u, p), env.def_v(i, u, q), env.def_d(i, u, q)]
        else:
            y = left.var if isinstance(left, TIfElse) else right.var
            premises = [
                self._agree(i, u, p, q, {**local, y: True}),
                self._agree(i, u, p, q, {**local, y: False}),
            ]

        body = Implies(And(env.d(i, u, p), env.d(i, u, q)), Iff(env.v(i, u, p), env.v(i, u, q)))
        formula = guarded([lit(str(x), b) for x, b in context], body)
        self._agreed[key] = self.infer(formula, *premises)
        return self._agreed[key]

    def _support(self, i: int, u: int, p: int) -> frozenset[int]:
        key = (i, u, p)
        if key not in self._supports:
            self._supports[key] = frozenset(self.env.graph(i, u).node_support(p))
        return self._supports[key]

    # ── Universal reduction ───────────────────────────────────────────────────

    def reduce_universals(self) -> None:
        m = len(self.lines)
        last = self.ind[m]
        active = list(self.env.active(m))
        if not active:
            if self.formula(last) != FALSE:
                self.infer(FALSE, last)
            return
        env = self.env
        terms = {u: Xor(qvar(u), env.v(m, u, env.root(m, u))) for u in active}
        current = self.infer(disj(terms.values()), last)
        while active:
            u = active.pop()
            rest = [terms[w] for w in active]
            v = env.v(m, u, env.root(m, u))
            before = self.formula(current)
            zero = self.add(substitute(before, str(u), FALSE), ForallRed(current, u, False))
            one = self.add(substitute(before, str(u), TRUE), ForallRed(current, u, True))
            with_v = self.infer(disj([*rest, v]), zero)
            with_not_v = self.infer(disj([*rest, Not(v)]), one)
            current = self.infer(disj(rest), with_v, with_not_v)
            logger.debug("Reduced universal %d at certificate line %d", u, current)
