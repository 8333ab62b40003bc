"""Finite measurable spaces: atoms of a generated σ-algebra and dense rational families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .intervals import RationalLike, as_fraction
from .rational import Q, floor


@dataclass(frozen=True)
class FiniteSigmaAlgebra:
    ground_size: int
    generators: tuple[frozenset[int], ...]
    atoms: tuple[tuple[int, ...], ...]

    def atom_index(self, element: int) -> int:
        for i, atom in enumerate(self.atoms):
            if element in atom:
                return i
        raise ValueError(f"{element} is not in the ground set")

    def atoms_in(self, subset: Iterable[int]) -> tuple[int, ...]:
        """Indices of the atoms making up ``subset``; raises if it is not measurable."""
        subset = frozenset(subset)
        idx = tuple(i for i, atom in enumerate(self.atoms) if subset & set(atom))
        covered = {x for i in idx for x in self.atoms[i]}
        if covered != subset:
            raise ValueError(f"{sorted(subset)} is not a union of atoms")
        return idx


def _check(ground_size: int, generators: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    if ground_size < 1:
        raise ValueError("ground set must be nonempty")
    gens = [frozenset(g) for g in generators]
    for g in gens:
        bad = [x for x in g if not 1 <= x <= ground_size]
        if bad:
            raise ValueError(f"generator element(s) {bad} outside 1..{ground_size}")
    return gens


def atoms_of(ground_size: int, generators: Iterable[Iterable[int]]) -> list[tuple[int, ...]]:
    """Atoms of the σ-algebra generated on ``{1..m}``, by partition refinement.

    Each generator splits every current block into its inside and outside
    parts. Blocks are returned sorted, each as a sorted tuple.
    """
    gens = _check(ground_size, generators)
    blocks = [frozenset(range(1, ground_size + 1))]
    for g in gens:
        nxt = []
        for b in blocks:
            inside, outside = b & g, b - g
            nxt.extend(part for part in (inside, outside) if part)
        blocks = nxt
    return sorted(tuple(sorted(b)) for b in blocks)


def brute_force_atoms(ground_size: int, generators: Iterable[Iterable[int]]) -> list[tuple[int, ...]]:
    """Generate the whole algebra as bitmasks, then keep its minimal nonempty members."""
    gens = _check(ground_size, generators)
    full = (1 << ground_size) - 1
    algebra = {0, full}
    for g in gens:
        algebra.add(sum(1 << (x - 1) for x in g))
    while True:
        new = {full ^ s for s in algebra}
        items = list(algebra | new)
        new |= {s | t for i, s in enumerate(items) for t in items[i + 1:]}
        if new <= algebra:
            break
        algebra |= new
    nonempty = [s for s in algebra if s]
    minimal = [s for s in nonempty if not any(t != s and t & s == t for t in nonempty)]
    return sorted(tuple(x + 1 for x in range(ground_size) if s >> x & 1) for s in minimal)


def sigma_algebra(ground_size: int, generators: Iterable[Iterable[int]]) -> FiniteSigmaAlgebra:
    gens = tuple(_check(ground_size, generators))
    return FiniteSigmaAlgebra(ground_size, gens, tuple(atoms_of(ground_size, gens)))


@dataclass(frozen=True)
class AtomMeasure:
    weights: tuple[Q, ...]

    def __post_init__(self) -> None:
        w = tuple(as_fraction(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if any(x < 0 for x in w):
            raise ValueError("atom weights must be nonnegative")
        if sum(w) != 1:
            raise ValueError(f"atom weights sum to {sum(w)}, not 1")

    @classmethod
    def uniform(cls, n: int) -> AtomMeasure:
        return cls(tuple(Q(1, n) for _ in range(n)))

    def mass(self, atom_indices: Iterable[int]) -> Q:
        return sum((self.weights[i] for i in atom_indices), Q(0))


def elementary_count_verdict(fsa: FiniteSigmaAlgebra) -> dict:
    """Separability/metrizability report for the measures on a finite σ-algebra.

    With finitely many elementary events the space of probability measures
    is the simplex over the atoms: always separable and metrizable.
    """
    n = len(fsa.atoms)
    if n == 1:
        dense = "M(X) is a single point (the unique probability measure)"
    else:
        dense = (f"rational points of the {n - 1}-simplex; enumerated by dyadic grids "
                 f"with denominators 2^j, j = 0, 1, 2, ...")
    return {
        "ground_size": fsa.ground_size,
        "atom_count": n,
        "atoms": [list(a) for a in fsa.atoms],
        "separable": True,
        "metrizable": True,
        "dense_family": dense,
        "finite_union_family": (
            "measures with rational masses on finite unions of atoms plus the remainder on one atom; "
            "at finite scale this is contained in the full rational simplex grid"
        ),
        "uncountable_branch": (
            "not reachable with finitely many atoms; there, the neighbourhoods "
            "W(δ_A, A, 1/2) of distinct Dirac measures are pairwise disjoint"
        ),
    }


@dataclass(frozen=True)
class DenseWitness:
    rho: AtomMeasure
    denominator: int
    deviation: Q
    margin: Q


def grid_denominator(eps: Q) -> int:
    """Smallest ``2**j`` with ``2**-j < eps``."""
    d = 1
    while Q(1, d) >= eps:
        d *= 2
    return d


def dense_family_member(fsa: FiniteSigmaAlgebra, nu: AtomMeasure, atom_set: Sequence[int],
                        epsilon: RationalLike) -> DenseWitness:
    """A dyadic-grid measure ``ρ`` with ``|ρ(A) - ν(A)| < ε`` for the union ``A`` of atoms.

    ``atom_set`` lists atom indices. The grid denominator is the first
    ``2**j`` below which rounding cannot miss ``ε``; ``ρ(A)`` is ``ν(A)``
    rounded down on that grid and the rest is spread by largest remainders,
    so a ``ν`` already on the grid comes back unchanged.
    """
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if len(nu.weights) != len(fsa.atoms):
        raise ValueError("one weight per atom required")
    inside = sorted(set(atom_set))
    if any(not 0 <= i < len(fsa.atoms) for i in inside):
        raise ValueError("atom index out of range")
    outside = [i for i in range(len(fsa.atoms)) if i not in inside]
    d = grid_denominator(eps)
    units = [floor(w * d) for w in nu.weights]
    target_in = floor(nu.mass(inside) * d)
    for group, target in ((inside, target_in), (outside, d - target_in)):
        deficit = target - sum(units[i] for i in group)
        by_remainder = sorted(group, key=lambda i: (-(nu.weights[i] * d - units[i]), i))
        for i in by_remainder[:deficit]:
            units[i] += 1
    rho = AtomMeasure(tuple(Q(u, d) for u in units))
    dev = abs(rho.mass(inside) - nu.mass(inside))
    return DenseWitness(rho, d, dev, eps - dev)


__all__ = [
    "AtomMeasure",
    "DenseWitness",
    "FiniteSigmaAlgebra",
    "atoms_of",
    "brute_force_atoms",
    "dense_family_member",
    "elementary_count_verdict",
    "grid_denominator",
    "sigma_algebra",
]
