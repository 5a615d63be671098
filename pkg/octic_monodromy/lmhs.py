"""
Nilpotent logarithms, weight filtrations and limiting mixed Hodge structure types for
Hodge numbers (1, 2, 2, 1).

Types are read from the Jordan partition of N. The partition (2, 2, 1, 1) is shared by
I2 and II0; the two are told apart by the polarized relations with the neighbouring
types of a cone (I1 < I2 but I1 does not precede II0; II0 < II1 but I2 does not
precede II1).
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

from .errors import Ambiguous, NonCommuting, NotQuasiUnipotent, NotUnipotent

logger = logging.getLogger(__name__)

DIM = 6
CENTER = 3
MAX_QUASI_ORDER = 24
# weight 3: (T - I)^4 = 0 for every unipotent monodromy
MAX_UNIPOTENT_ORDER = CENTER + 1

Partition = Tuple[int, ...]
Subspace = List[sympy.Matrix]

PARTITION_TYPES: Dict[Partition, Tuple[str, ...]] = {
    (1, 1, 1, 1, 1, 1): ("I0",),
    (2, 1, 1, 1, 1): ("I1",),
    (2, 2, 1, 1): ("I2", "II0"),
    (2, 2, 2): ("II1",),
    (3, 3): ("III0",),
    (4, 1, 1): ("IV1",),
    (4, 2): ("IV2",),
}

# (a, b) -> whether a < b holds; pairs not listed are not used to exclude a type.
POLARIZED_RELATIONS: Dict[Tuple[str, str], bool] = {
    ("I1", "I2"): True,
    ("II0", "II1"): True,
    ("I2", "II1"): False,
    ("I1", "II0"): False,
    ("I1", "II1"): True,
    ("I1", "IV2"): True,
    ("II1", "IV2"): True,
}

HODGE_NUMBERS: Dict[str, Dict[Tuple[int, int], int]] = {
    "I0": {(3, 0): 1, (2, 1): 2, (1, 2): 2, (0, 3): 1},
    "I1": {(0, 3): 1, (1, 2): 1, (2, 2): 1, (1, 1): 1, (2, 1): 1, (3, 0): 1},
    "I2": {(0, 3): 1, (2, 2): 2, (1, 1): 2, (3, 0): 1},
    "II0": {(0, 2): 1, (1, 3): 1, (1, 2): 1, (2, 1): 1, (2, 0): 1, (3, 1): 1},
    "II1": {(3, 1): 1, (2, 2): 1, (1, 3): 1, (2, 0): 1, (1, 1): 1, (0, 2): 1},
    "III0": {(3, 2): 1, (2, 3): 1, (2, 1): 1, (1, 2): 1, (1, 0): 1, (0, 1): 1},
    "IV1": {(3, 3): 1, (2, 2): 1, (2, 1): 1, (1, 2): 1, (1, 1): 1, (0, 0): 1},
    "IV2": {(0, 0): 1, (1, 1): 2, (2, 2): 2, (3, 3): 1},
}


def _matrix(m) -> sympy.Matrix:
    return sympy.Matrix(m)


def _is_zero(m: sympy.Matrix) -> bool:
    return all(entry == 0 for entry in m)


def nilpotency_order(m) -> Optional[int]:
    """Smallest k <= DIM with m^k = 0, or None."""
    m = _matrix(m)
    power = sympy.eye(DIM)
    for k in range(1, DIM + 1):
        power = power * m
        if _is_zero(power):
            return k
    return None


def log_unipotent(t) -> sympy.Matrix:
    """N = log T for unipotent T with (T - I)^4 = 0, as the finite series in X = T - I."""
    x = _matrix(t) - sympy.eye(DIM)
    order = nilpotency_order(x)
    if order is None:
        raise NotUnipotent("Matrix is not unipotent")
    if order > MAX_UNIPOTENT_ORDER:
        raise NotUnipotent(f"(T - I)^{MAX_UNIPOTENT_ORDER} != 0 (nilpotency order {order})")
    result = sympy.zeros(DIM, DIM)
    power = sympy.eye(DIM)
    for k in range(1, MAX_UNIPOTENT_ORDER):
        power = power * x
        result += sympy.Rational((-1) ** (k + 1), k) * power
    return result


def exp_nilpotent(n) -> sympy.Matrix:
    n = _matrix(n)
    if nilpotency_order(n) is None:
        raise NotUnipotent("Matrix is not nilpotent")
    result = sympy.eye(DIM)
    power = sympy.eye(DIM)
    for k in range(1, DIM + 1):
        power = power * n / k
        result += power
    return result


def quasi_unipotent_indices(t) -> Tuple[int, int]:
    """Smallest m with (T^m - I)^n = 0, and that n."""
    t = _matrix(t)
    power = sympy.eye(DIM)
    for m in range(1, MAX_QUASI_ORDER + 1):
        power = power * t
        order = nilpotency_order(power - sympy.eye(DIM))
        if order is not None:
            return m, order
    raise NotQuasiUnipotent(f"No power T^m with m <= {MAX_QUASI_ORDER} is unipotent")


def jordan_partition(n) -> Partition:
    n = _matrix(n)
    if nilpotency_order(n) is None:
        raise NotUnipotent("Jordan partition requested for a non-nilpotent matrix")
    ranks = [DIM]
    power = sympy.eye(DIM)
    while ranks[-1] > 0:
        power = power * n
        ranks.append(power.rank())
    # at_least[k] = number of blocks of size > k
    at_least = [ranks[k] - ranks[k + 1] for k in range(len(ranks) - 1)]
    parts = []
    for size in range(len(at_least), 0, -1):
        exact = at_least[size - 1] - (at_least[size] if size < len(at_least) else 0)
        parts.extend([size] * exact)
    return tuple(parts)


def _span(vectors: Sequence[sympy.Matrix]) -> Subspace:
    vectors = [v for v in vectors if not _is_zero(v)]
    if not vectors:
        return []
    return sympy.Matrix.hstack(*vectors).columnspace()


def _kernel(m: sympy.Matrix) -> Subspace:
    return m.nullspace()


def _image(m: sympy.Matrix) -> Subspace:
    return _span([m[:, c] for c in range(m.cols)])


def _intersect(u: Subspace, w: Subspace) -> Subspace:
    if not u or not w:
        return []
    system = sympy.Matrix.hstack(*u, *[-v for v in w])
    basis_u = sympy.Matrix.hstack(*u)
    return _span([basis_u * null[:len(u), :] for null in system.nullspace()])


def canonical(space: Subspace) -> sympy.ImmutableMatrix:
    """Reduced row echelon basis, one row per basis vector; equal spaces compare equal."""
    if not space:
        return sympy.ImmutableMatrix(sympy.zeros(0, DIM))
    reduced, pivots = sympy.Matrix.hstack(*space).T.rref()
    return sympy.ImmutableMatrix(reduced[:len(pivots), :])


@dataclass
class WeightFiltration:
    """W_0 subset ... subset W_6, centered at weight 3."""

    spaces: Dict[int, Subspace]

    def dims(self) -> Tuple[int, ...]:
        return tuple(len(self.spaces[k]) for k in range(2 * CENTER + 1))

    def key(self) -> Tuple[sympy.ImmutableMatrix, ...]:
        return tuple(canonical(self.spaces[k]) for k in range(2 * CENTER + 1))

    def graded_dims(self) -> Dict[int, int]:
        dims = (0,) + self.dims()
        return {k: dims[k + 1] - dims[k] for k in range(2 * CENTER + 1)}

    def __eq__(self, other):
        return isinstance(other, WeightFiltration) and self.key() == other.key()


def weight_filtration(n) -> WeightFiltration:
    """
    Monodromy weight filtration of a nilpotent N:
    W_{3+k} = sum over j >= max(0, k) of ker N^(j+1) intersected with im N^(j-k).
    """
    n = _matrix(n)
    if nilpotency_order(n) is None:
        raise NotUnipotent("Weight filtration requested for a non-nilpotent matrix")
    powers = [sympy.eye(DIM)]
    for _ in range(2 * DIM + 1):
        powers.append(powers[-1] * n)
    kernels = [_kernel(p) for p in powers]
    images = [_image(p) for p in powers]
    spaces = {}
    for weight in range(2 * CENTER + 1):
        k = weight - CENTER
        pieces: Subspace = []
        for j in range(max(0, k), k + DIM + 1):
            pieces.extend(_intersect(kernels[j + 1], images[j - k]))
        spaces[weight] = _span(pieces)
    return WeightFiltration(spaces)


@dataclass(frozen=True)
class ClassifyContext:
    """Types known to precede (below) or to be preceded by (above) the operator's type."""

    below: Tuple[str, ...] = ()
    above: Tuple[str, ...] = ()


def _compatible(candidate: str, context: ClassifyContext) -> bool:
    for lower in context.below:
        if POLARIZED_RELATIONS.get((lower, candidate)) is False:
            return False
    for upper in context.above:
        if POLARIZED_RELATIONS.get((candidate, upper)) is False:
            return False
    return True


def candidate_types(n) -> Tuple[str, ...]:
    partition = jordan_partition(n)
    if partition not in PARTITION_TYPES:
        raise Ambiguous(f"Jordan partition {partition} is not realised for Hodge numbers (1,2,2,1)",
                        partition=partition)
    return PARTITION_TYPES[partition]


def classify(n, context: Optional[ClassifyContext] = None) -> str:
    candidates = candidate_types(n)
    if len(candidates) == 1:
        return candidates[0]
    if context is not None:
        candidates = tuple(c for c in candidates if _compatible(c, context))
    if len(candidates) != 1:
        raise Ambiguous(f"Cannot decide between {candidates} without more context",
                        candidates=candidates)
    return candidates[0]


def hodge_diamond(lmhs_type: str) -> str:
    """Text rendering of the limiting Hodge diamond, top row h^{3,3}."""
    numbers = HODGE_NUMBERS[lmhs_type]
    width = 4 * (CENTER + 1)
    lines = []
    for total in range(2 * CENTER, -1, -1):
        row = [str(numbers.get((p, total - p), 0))
               for p in range(CENTER, -1, -1) if 0 <= total - p <= CENTER]
        lines.append("   ".join(row).center(width).rstrip())
    return "\n".join(lines)


@dataclass
class Cone:
    name: str
    left: str
    right: str
    types: Tuple[str, str, str]
    filtration: WeightFiltration = field(repr=False)

    def label(self) -> str:
        return f"<{self.types[0]}|{self.types[1]}|{self.types[2]}>"


INTERIOR_SAMPLES = ((1, 1), (1, 2), (2, 1), (3, 5), (5, 3))


def interior_filtration(ni, nj, samples=INTERIOR_SAMPLES) -> WeightFiltration:
    """Weight filtration of s Ni + t Nj, checked to agree at every sample point."""
    ni, nj = _matrix(ni), _matrix(nj)
    first = None
    for s, t in samples:
        current = weight_filtration(s * ni + t * nj)
        if first is None:
            first = current
        elif current != first:
            raise Ambiguous(f"Weight filtration changes inside the cone at ({s}, {t})",
                            sample=(s, t))
    return first


def build_cones(nilpotents: Mapping[str, sympy.Matrix],
                generators: Mapping[str, Tuple[str, str]]) -> Dict[str, Cone]:
    """Two-dimensional cones with their <edge|interior|edge> type triples."""
    for name, (left, right) in generators.items():
        a, b = _matrix(nilpotents[left]), _matrix(nilpotents[right])
        if not _is_zero(a * b - b * a):
            raise NonCommuting(left, right)

    edge_types: Dict[str, Optional[str]] = {}
    for label in sorted({g for pair in generators.values() for g in pair}):
        candidates = candidate_types(nilpotents[label])
        edge_types[label] = candidates[0] if len(candidates) == 1 else None

    filtrations = {}
    interiors: Dict[str, str] = {}
    for name, (left, right) in generators.items():
        filtrations[name] = interior_filtration(nilpotents[left], nilpotents[right])
        below = tuple(t for t in (edge_types[left], edge_types[right]) if t is not None)
        interiors[name] = classify(_matrix(nilpotents[left]) + _matrix(nilpotents[right]),
                                   ClassifyContext(below=below))

    for label, known in edge_types.items():
        if known is not None:
            continue
        above = tuple(interiors[name] for name, pair in generators.items() if label in pair)
        edge_types[label] = classify(nilpotents[label], ClassifyContext(above=above))

    cones = {}
    for name, (left, right) in generators.items():
        types = (edge_types[left], interiors[name], edge_types[right])
        cones[name] = Cone(name, left, right, types, filtrations[name])
        logger.info(f"Cone {name}: {cones[name].label()}")
    return cones
