"""Seeded random theories for the order-invariance and property suites.

Bodies only mention atoms strictly below every head atom in a fixed
ordering, so the dependency graph is acyclic no matter where negation
lands; every draw validates and every execution run resolves each law.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from cplogic.core import Atom, CPLaw, HeadAlternative, Literal, Theory, validate_theory

SEED = 20250810
ATOM_NAMES = ("a", "b", "c", "d", "e", "f")
_SIZES = (1, 2, 3, 4, 5)
_SIZE_WEIGHTS = (15, 25, 25, 20, 15)


def random_theory(rng: random.Random) -> tuple[Theory, frozenset]:
    """One validated theory with at most 5 laws and 6 atoms, plus a context."""
    n_atoms = rng.randint(2, 6)
    atoms = [Atom(name) for name in ATOM_NAMES[:n_atoms]]
    n_exo = rng.randint(0, min(2, n_atoms - 1))
    exogenous = atoms[:n_exo]
    endogenous = atoms[n_exo:]

    laws = []
    for _ in range(rng.choices(_SIZES, weights=_SIZE_WEIGHTS)[0]):
        if len(endogenous) >= 2 and rng.random() < 0.3:
            pair = rng.sample(endogenous, 2)
            k1 = rng.randint(1, 4)
            k2 = rng.randint(1, 6 - k1)
            head = (
                HeadAlternative(pair[0], Fraction(k1, 6)),
                HeadAlternative(pair[1], Fraction(k2, 6)),
            )
        else:
            target = rng.choice(endogenous)
            head = (HeadAlternative(target, Fraction(rng.randint(1, 6), 6)),)
        floor = min(atoms.index(alt.atom) for alt in head)
        body = tuple(
            Literal(atoms[i], rng.random() < 0.65)
            for i in range(floor)
            if rng.random() < 0.5
        )
        laws.append(CPLaw(head, body))

    context = frozenset(a for a in exogenous if rng.random() < 0.7)
    return validate_theory(Theory(tuple(laws), frozenset(exogenous))), context


def random_cases(count: int, seed: int = SEED) -> list[tuple[Theory, frozenset]]:
    rng = random.Random(seed)
    return [random_theory(rng) for _ in range(count)]


def all_policies(theory: Theory):
    return itertools.permutations(law.label for law in theory.laws)
