"""Completion-principle formulas CR_n.

    ∃ x_11..x_nn  ∀ z  ∃ a_1..a_n b_1..b_n

    A_ij = x_ij ∨ z ∨ a_i         B_ij = ¬x_ij ∨ ¬z ∨ b_j
    L_A  = ¬a_1 ∨ ... ∨ ¬a_n      L_B  = ¬b_1 ∨ ... ∨ ¬b_n

Variable ids: x_ij = (i-1)n + j, z = n² + 1, a_i = n² + 1 + i,
b_j = n² + n + 1 + j. Clauses come in the order A_11..A_nn, B_11..B_nn,
L_A, L_B.

The universal player wins by setting z = 1 iff some row of the x grid is
all ones: then every column has a 1, every b_j is forced and L_B fails;
otherwise every row has a 0, every a_i is forced and L_A fails.
"""

import itertools
import logging
from collections.abc import Mapping
from dataclasses import dataclass

from qbf.model import Qbf, matrix_eval
from strategy.table import StrategyTable
from strategy.values import TriVal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CrInstance:
    n: int
    qbf: Qbf

    def x(self, i: int, j: int) -> int:
        return (i - 1) * self.n + j

    @property
    def z(self) -> int:
        return self.n * self.n + 1

    def a(self, i: int) -> int:
        return self.n * self.n + 1 + i

    def b(self, j: int) -> int:
        return self.n * self.n + self.n + 1 + j

    @property
    def grid_vars(self) -> tuple[int, ...]:
        return tuple(range(1, self.n * self.n + 1))


def gen_cr(n: int) -> CrInstance:
    """Build CR_n.

    Raises:
        ValueError: If n < 1.
    """
    if n < 1:
        raise ValueError(f"CR_n needs n >= 1, got {n}")
    sep = "_" if n >= 10 else ""
    shell = CrInstance(n, Qbf.build([("e", [1])], []))
    cells = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]

    names = {shell.x(i, j): f"x{i}{sep}{j}" for i, j in cells}
    names[shell.z] = "z"
    names.update({shell.a(i): f"a{i}" for i in range(1, n + 1)})
    names.update({shell.b(j): f"b{j}" for j in range(1, n + 1)})

    clauses = [[shell.x(i, j), shell.z, shell.a(i)] for i, j in cells]
    clauses += [[-shell.x(i, j), -shell.z, shell.b(j)] for i, j in cells]
    clauses.append([-shell.a(i) for i in range(1, n + 1)])
    clauses.append([-shell.b(j) for j in range(1, n + 1)])

    prefix = [
        ("e", list(shell.grid_vars)),
        ("a", [shell.z]),
        ("e", [shell.a(i) for i in range(1, n + 1)] + [shell.b(j) for j in range(1, n + 1)]),
    ]
    q = Qbf.build(prefix, clauses, names)
    logger.debug("Generated CR_%d: %d clauses, %d variables", n, len(q.matrix), len(q.variables))
    return CrInstance(n, q)


def cr_z_rule(instance: CrInstance, grid: Mapping[int, bool]) -> bool:
    """z = 1 iff some row of the grid is all ones."""
    n = instance.n
    return any(all(grid[instance.x(i, j)] for j in range(1, n + 1)) for i in range(1, n + 1))


def cr_z_table(instance: CrInstance) -> StrategyTable:
    """The row rule as a strategy table over the grid variables."""
    return StrategyTable.from_function(
        instance.z, instance.grid_vars, lambda grid: TriVal.from_bool(cr_z_rule(instance, grid))
    )


def cr_rule_refutes(instance: CrInstance) -> bool:
    """True iff the row rule falsifies the matrix for every grid and every a, b."""
    q = instance.qbf
    inner = [v for v in q.existentials if v not in instance.grid_vars]
    for grid_bits in itertools.product((False, True), repeat=len(instance.grid_vars)):
        grid = dict(zip(instance.grid_vars, grid_bits))
        grid[instance.z] = cr_z_rule(instance, grid)
        for bits in itertools.product((False, True), repeat=len(inner)):
            if matrix_eval(q, {**grid, **dict(zip(inner, bits))}):
                logger.info("Row rule fails on grid %s", grid)
                return False
    return True
