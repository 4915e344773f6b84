"""Seeded random QBFs for soundness experiments."""

import random

from qbf.model import Qbf


def random_qbf(
    seed: int,
    existentials: int = 4,
    universals: int = 2,
    clauses: int = 6,
    max_width: int = 3,
) -> Qbf:
    """A random closed prenex CNF.

    Variables 1..existentials+universals are shuffled into the prefix and cut
    into alternating blocks; clauses get 1..max_width distinct variables with
    random signs. The same arguments always give the same formula.
    """
    rng = random.Random(seed)
    total = existentials + universals
    kinds = ["e"] * existentials + ["a"] * universals
    rng.shuffle(kinds)
    prefix = [(kind, [var]) for var, kind in enumerate(kinds, 1)]

    matrix: list[list[int]] = []
    for _ in range(clauses):
        width = rng.randint(1, min(max_width, total))
        chosen = rng.sample(range(1, total + 1), width)
        matrix.append([var if rng.random() < 0.5 else -var for var in chosen])
    return Qbf.build(prefix, matrix)
