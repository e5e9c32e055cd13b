"""
Tensorial Central Function Oracle

Builds rank-3 central functions directly from Clebsch-Gordan injections and
symmetric-power matrices, independently of the loop recurrences. The result
is a polynomial in matrix entries, converted to trace coordinates by exact
interpolation. Used to cross-check the combinatorial engine.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Sequence, Tuple, Union

from core.algebra.exactmath import ENTRY_ALPHABET, Polynomial
from core.algebra.reptheory import InadmissibleError, is_admissible
from core.algebra.tracecoords import SL2Rational, interpolate_to_traces
from core.services.recurrence_service import Rank3Label

logger = logging.getLogger(__name__)

Index3 = Tuple[int, int, int]
Entry = Union[Fraction, Polynomial]


# ============================================================================
# Symmetric powers
# ============================================================================

@dataclass(frozen=True)
class SymMatrix:
    """Pairing matrix of generator k acting on V_n.

    Entry [i][j] is the coefficient of x^(n-i) y^i in the image of
    x^(n-j) y^j, divided by binom(n, i). The underlying action matrix is
    diag(binom(n, i)) times this one.
    """
    k: int
    n: int
    entries: Tuple[Tuple[Polynomial, ...], ...]

    def __getitem__(self, i: int) -> Tuple[Polynomial, ...]:
        return self.entries[i]


def _action_entry(n: int, i: int, j: int, x11, x12, x21, x22):
    total = 0
    for p in range(max(0, i - j), min(i, n - j) + 1):
        q = i - p
        total = total + (comb(n - j, p) * comb(j, q)
                         * x11 ** (n - j - p) * x12 ** (j - q) * x21 ** p * x22 ** q)
    return total


@lru_cache(maxsize=None)
def sym_power_matrix(k: int, n: int) -> SymMatrix:
    if k not in (1, 2, 3) or n < 0:
        raise ValueError(f"Invalid generator {k} or degree {n}")
    x11, x12, x21, x22 = (Polynomial.variable(ENTRY_ALPHABET, f"x{k}_{i}{j}") for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)))
    rows = []
    for i in range(n + 1):
        scale = Fraction(1, comb(n, i))
        row = []
        for j in range(n + 1):
            entry = _action_entry(n, i, j, x11, x12, x21, x22)
            if not isinstance(entry, Polynomial):
                entry = Polynomial.constant(ENTRY_ALPHABET, entry)
            row.append(entry.scale(scale))
        rows.append(tuple(row))
    return SymMatrix(k, n, tuple(rows))


def action_matrix(x: SL2Rational, n: int) -> List[List[Fraction]]:
    """Matrix of x acting on V_n in the basis x^(n-k) y^k; multiplicative in x"""
    return [[Fraction(_action_entry(n, i, j, x.a, x.b, x.c, x.d)) for j in range(n + 1)] for i in range(n + 1)]


def sym_power_values(x: SL2Rational, n: int) -> List[List[Fraction]]:
    """Numeric counterpart of sym_power_matrix"""
    return [[value / comb(n, i) for value in row] for i, row in enumerate(action_matrix(x, n))]


# ============================================================================
# Clebsch-Gordan injections
# ============================================================================

@dataclass(frozen=True)
class CGMap:
    """Injection V_c -> V_a (x) V_b; images[k] maps (i, j) to a coefficient"""
    a: int
    b: int
    c: int
    images: Tuple[Dict[Tuple[int, int], Fraction], ...]


@lru_cache(maxsize=None)
def cg_injection(a: int, b: int, c: int) -> CGMap:
    if not is_admissible(a, b, c):
        raise InadmissibleError(f"Triple ({a}, {b}, {c}) is not admissible")
    alpha, beta, gamma = (b + c - a) // 2, (a - b + c) // 2, (a + b - c) // 2
    images = []
    for k in range(c + 1):
        image: Dict[Tuple[int, int], Fraction] = {}
        for i in range(max(0, k - alpha), min(beta, k) + 1):
            j = k - i
            for m in range(gamma + 1):
                coeff = Fraction((-1) ** m * comb(beta, i) * comb(alpha, j) * comb(gamma, m), comb(c, k))
                key = (i + gamma - m, j + m)
                image[key] = image.get(key, Fraction(0)) + coeff
        images.append({key: value for key, value in image.items() if value})
    return CGMap(a, b, c, tuple(images))


@lru_cache(maxsize=None)
def left_assoc_injection(i: Index3, e: int, d: int) -> Tuple[Dict[Index3, Fraction], ...]:
    """(iota^{i1 i2}_e (x) 1) after iota^{e i3}_d, as images of each basis vector of V_d"""
    i1, i2, i3 = i
    outer = cg_injection(e, i3, d)
    inner = cg_injection(i1, i2, e)
    images = []
    for image in outer.images:
        composed: Dict[Index3, Fraction] = {}
        for (m, l), coeff in image.items():
            for (p, q), coeff2 in inner.images[m].items():
                key = (p, q, l)
                composed[key] = composed.get(key, Fraction(0)) + coeff * coeff2
        images.append({key: value for key, value in composed.items() if value})
    return tuple(images)


# ============================================================================
# Central tensor and contraction
# ============================================================================

@dataclass(frozen=True)
class CentralTensor:
    """Invariant element of (V_a (x) V_b (x) V_c)^* (x) (V_a (x) V_b (x) V_c)"""
    label: Rank3Label
    terms: Dict[Tuple[Index3, Index3], Fraction]


def _require(label: Rank3Label) -> Rank3Label:
    label.require_admissible()
    return label


def central_tensor(label: Rank3Label) -> CentralTensor:
    _require(label)
    slots = (label.a, label.b, label.c)
    from_f = left_assoc_injection(slots, label.f, label.d)
    from_e = left_assoc_injection(slots, label.e, label.d)
    terms: Dict[Tuple[Index3, Index3], Fraction] = {}
    for k in range(label.d + 1):
        weight = comb(label.d, k)
        for dual, u in from_f[k].items():
            for vec, v in from_e[k].items():
                key = (dual, vec)
                terms[key] = terms.get(key, Fraction(0)) + weight * u * v
    return CentralTensor(label, {key: value for key, value in terms.items() if value})


def contract(tensor: CentralTensor) -> Polynomial:
    """Sum of coeff * M1[i1][j1] * M2[i2][j2] * M3[i3][j3] over the tensor terms"""
    label = tensor.label
    matrices = [sym_power_matrix(k, n) for k, n in zip((1, 2, 3), (label.a, label.b, label.c))]

    # Group by slot so each inner sum is built once.
    nested: Dict[Tuple[int, int], Dict[Tuple[int, int], Dict[Tuple[int, int], Fraction]]] = {}
    for (dual, vec), coeff in tensor.terms.items():
        level2 = nested.setdefault((dual[0], vec[0]), {})
        level3 = level2.setdefault((dual[1], vec[1]), {})
        level3[(dual[2], vec[2])] = coeff

    m1, m2, m3 = matrices
    result = Polynomial.zero(ENTRY_ALPHABET)
    for (i1, j1), level2 in nested.items():
        outer = Polynomial.zero(ENTRY_ALPHABET)
        for (i2, j2), level3 in level2.items():
            inner = Polynomial.zero(ENTRY_ALPHABET)
            for (i3, j3), coeff in level3.items():
                inner = inner + m3[i3][j3].scale(coeff)
            outer = outer + m2[i2][j2] * inner
        result = result + m1[i1][j1] * outer
    return result


def tensorial_central_function(label: Rank3Label) -> Polynomial:
    """The central function of `label` in trace coordinates, by interpolation"""
    _require(label)
    entries = contract(central_tensor(label))
    logger.debug(f"Contracted {label.as_tuple()} to {len(entries)} entry monomials")
    return interpolate_to_traces(entries, order=label.order())


# ============================================================================
# Numeric evaluation
# ============================================================================

def _apply_slot(tensor: Dict[Index3, Entry], matrix: Sequence[Sequence[Entry]], slot: int) -> Dict[Index3, Entry]:
    result: Dict[Index3, Entry] = {}
    for index, value in tensor.items():
        column = index[slot]
        for row in range(len(matrix)):
            entry = matrix[row][column]
            if not entry:
                continue
            key = index[:slot] + (row,) + index[slot + 1:]
            result[key] = result.get(key, 0) + value * entry
    return result


def evaluate_tensorial(label: Rank3Label, x1: SL2Rational, x2: SL2Rational, x3: SL2Rational) -> Fraction:
    """Exact value of the central function at (x1, x2, x3), without interpolation"""
    _require(label)
    slots = (label.a, label.b, label.c)
    matrices = [sym_power_values(x, n) for x, n in zip((x1, x2, x3), slots)]
    from_f = left_assoc_injection(slots, label.f, label.d)
    from_e = left_assoc_injection(slots, label.e, label.d)

    total = Fraction(0)
    for k in range(label.d + 1):
        image: Dict[Index3, Entry] = dict(from_e[k])
        for slot, matrix in enumerate(matrices):
            image = _apply_slot(image, matrix, slot)
        paired = sum((u * image.get(dual, 0) for dual, u in from_f[k].items()), Fraction(0))
        total += comb(label.d, k) * paired
    return total
