"""
Representation-Theory Constants

Admissibility of edge labels, closed spin-network values (Delta, Theta),
bubble and fusion constants, spin-1 6j symbols and fusion coefficients,
i-admissible weight enumeration, and the strand-vertex gluing factors used
by the loop recurrences.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import List, Optional, Sequence, Tuple

from core.algebra.exactmath import RadExact

logger = logging.getLogger(__name__)


class InadmissibleError(ValueError):
    """Raised when an edge-label triple violates parity or the triangle inequality"""
    pass


# ============================================================================
# Admissibility and edge counts
# ============================================================================

@dataclass(frozen=True)
class Triple:
    a: int
    b: int
    c: int

    def is_admissible(self) -> bool:
        return is_admissible(self.a, self.b, self.c)


@dataclass(frozen=True)
class EdgeCounts:
    """Strand counts at a trivalent vertex: e_a joins b and c, and so on"""
    e_a: int
    e_b: int
    e_c: int
    e_total: int


def is_admissible(a: int, b: int, c: int) -> bool:
    if min(a, b, c) < 0:
        return False
    if (a + b + c) % 2:
        return False
    return abs(a - b) <= c <= a + b


def admissible_range(a: int, b: int) -> List[int]:
    """Labels c with V_c in V_a (x) V_b, largest first"""
    if a < 0 or b < 0:
        return []
    return [a + b - 2 * j for j in range(min(a, b) + 1)]


def _require(a: int, b: int, c: int) -> None:
    if not is_admissible(a, b, c):
        raise InadmissibleError(f"Triple ({a}, {b}, {c}) is not admissible")


def edge_counts(a: int, b: int, c: int) -> EdgeCounts:
    _require(a, b, c)
    return EdgeCounts(
        e_a=(b + c - a) // 2,
        e_b=(a + c - b) // 2,
        e_c=(a + b - c) // 2,
        e_total=(a + b + c) // 2,
    )


def edge_count(x: int, y: int, z: int) -> int:
    """e_x(y, z): strands shared by the two edges other than x"""
    return (y + z - x) // 2


def sign_s(a: int, b: int, c: int) -> int:
    """(-1)^{e_a(b,c)}"""
    _require(a, b, c)
    return -1 if edge_count(a, b, c) % 2 else 1


# ============================================================================
# Closed networks, bubbles and fusion
# ============================================================================

def delta(c: int) -> int:
    return c + 1


@lru_cache(maxsize=None)
def theta(a: int, b: int, c: int) -> Fraction:
    counts = edge_counts(a, b, c)
    numerator = (factorial(counts.e_a) * factorial(counts.e_b) * factorial(counts.e_c)
                 * factorial(counts.e_total + 1))
    return Fraction(numerator, factorial(a) * factorial(b) * factorial(c))


def bubble_const(c: int, a: int, b: int) -> Fraction:
    """Theta(a,b,c) / Delta(c)"""
    return theta(a, b, c) / delta(c)


def fusion_const(c: int, a: int, b: int) -> Fraction:
    """Delta(c) / Theta(a,b,c), the reciprocal of the bubble constant"""
    return delta(c) / theta(a, b, c)


# ============================================================================
# Spin-1 recoupling
# ============================================================================

@dataclass(frozen=True)
class FusionCoeffKey:
    b: int
    a: int
    a2: int
    c: int
    c2: int

    def is_valid(self) -> bool:
        return (abs(self.a2 - self.a) == 1 and abs(self.c2 - self.c) == 1
                and is_admissible(self.a, self.b, self.c)
                and is_admissible(self.a2, self.b, self.c2))


def six_j_spin1(a2: int, c2: int, a: int, b: int, c: int) -> Fraction:
    key = FusionCoeffKey(b, a, a2, c, c2)
    if not key.is_valid():
        raise InadmissibleError(f"No spin-1 6j symbol for {key}")
    total = (a + b + c) // 2
    if a2 == a + 1 and c2 == c + 1:
        return Fraction(1)
    if a2 == a - 1 and c2 == c + 1:
        return Fraction(edge_count(c, a, b), a)
    if a2 == a + 1 and c2 == c - 1:
        return Fraction(-edge_count(a, c, b), c + 1)
    return Fraction(edge_count(b, a, c) * (total + 1), a * (c + 1))


def fusion_coeff(key: FusionCoeffKey) -> Optional[Fraction]:
    """The fusion coefficient F(b; a->a2; c->c2), or None when absent.

    F = (a2 - a) * f_{a2}(1, a) * {spin-1 6j symbol}, which gives the table

        a2   c2   F
        a+1  c+1  1
        a-1  c+1  -e_c(a,b) / (a+1)
        a+1  c-1  -e_a(c,b) / (c+1)
        a-1  c-1  -e_b(a,c) (E+1) / ((a+1)(c+1))
    """
    if not key.is_valid():
        return None
    return ((key.a2 - key.a) * fusion_const(key.a2, 1, key.a)
            * six_j_spin1(key.a2, key.c2, key.a, key.b, key.c))


def fusion_normalizer(key: FusionCoeffKey) -> RadExact:
    """sqrt(f_{a2}(1,a) f_{c2}(1,c))"""
    return RadExact.sqrt_of(fusion_const(key.a2, 1, key.a) * fusion_const(key.c2, 1, key.c))


def norm_fusion_coeff(key: FusionCoeffKey) -> Optional[RadExact]:
    value = fusion_coeff(key)
    if value is None:
        return None
    return RadExact.from_rational(value) / fusion_normalizer(key)


# ============================================================================
# Weight vectors and multiplicities
# ============================================================================

def is_i_admissible(i: Sequence[int], j: Sequence[int]) -> bool:
    if len(j) != max(len(i) - 1, 0):
        return False
    running = i[0] if i else 0
    for level, jl in enumerate(j):
        if not 0 <= jl <= min(running, i[level + 1]):
            return False
        running = running + i[level + 1] - 2 * jl
    return True


def enumerate_i_admissible(i: Sequence[int]) -> List[Tuple[int, ...]]:
    """All i-admissible j vectors in lexicographic order"""
    i = list(i)
    if len(i) <= 1:
        return [()]
    found: List[Tuple[int, ...]] = []

    def walk(level: int, running: int, prefix: Tuple[int, ...]) -> None:
        if level == len(i) - 1:
            found.append(prefix)
            return
        for jl in range(min(running, i[level + 1]) + 1):
            walk(level + 1, running + i[level + 1] - 2 * jl, prefix + (jl,))

    walk(0, i[0], ())
    return found


def multiplicity_intermediates(a: int, b: int, c: int, d: int) -> List[int]:
    """Intermediate labels e, largest first, through which V_d sits in V_a (x) V_b (x) V_c"""
    return [e for e in admissible_range(a, b) if is_admissible(e, c, d)]


# ============================================================================
# Strand-vertex gluing
# ============================================================================
#
# A spin-1 strand running alongside two edges of the vertex (p, q -> r)
# relabels them by +-1. Each gluing is a signed fusion coefficient on the two
# relabeled edges, and a strand leaving through the output r also carries the
# bubble of r. Factors are evaluated at the labels before relabeling; with
# gamma = e_r(p,q), beta = e_q(p,r), alpha = e_p(q,r) and E = (p+q+r)/2:
#
#   output_left   r+1,p+1: 1   r+1,p-1: gamma/(p+1)   r-1,p+1: -alpha/r   r-1,p-1: beta(E+1)/(r(p+1))
#   output_right  r+1,q+1: 1   r+1,q-1: -gamma/(q+1)  r-1,q+1: beta/r     r-1,q-1: alpha(E+1)/(r(q+1))
#   inputs        p+1,q+1: -1  p+1,q-1: -alpha/(q+1)  p-1,q+1: beta/(p+1) p-1,q-1: -gamma(E+1)/((p+1)(q+1))

GluingFusion = Tuple[int, FusionCoeffKey]


def strand_bubble(p: int, p2: int) -> Fraction:
    """Theta(p,1,p2) / Delta(p2): 1 when raising, (p+1)/p when lowering"""
    return bubble_const(p2, 1, p)


def output_left_fusion(p: int, q: int, r: int, r2: int, p2: int) -> GluingFusion:
    return p2 - p, FusionCoeffKey(b=q, a=p, a2=p2, c=r, c2=r2)


def output_right_fusion(p: int, q: int, r: int, r2: int, q2: int) -> GluingFusion:
    return r2 - r, FusionCoeffKey(b=p, a=q, a2=q2, c=r, c2=r2)


def inputs_fusion(p: int, q: int, r: int, p2: int, q2: int) -> GluingFusion:
    return q - q2, FusionCoeffKey(b=r, a=p, a2=p2, c=q, c2=q2)


def _signed_fusion(fusion: GluingFusion) -> Fraction:
    sign, key = fusion
    value = fusion_coeff(key)
    if value is None:
        raise InadmissibleError(f"No gluing across {key}")
    return sign * value


def glue_output_left(p: int, q: int, r: int, r2: int, p2: int) -> Fraction:
    """Strand entering at output r and leaving through left input p"""
    return _signed_fusion(output_left_fusion(p, q, r, r2, p2)) * strand_bubble(r, r2)


def glue_output_right(p: int, q: int, r: int, r2: int, q2: int) -> Fraction:
    """Strand entering at output r and leaving through right input q"""
    return _signed_fusion(output_right_fusion(p, q, r, r2, q2)) * strand_bubble(r, r2)


def glue_inputs(p: int, q: int, r: int, p2: int, q2: int) -> Fraction:
    """Strand turning between the two inputs p and q"""
    return _signed_fusion(inputs_fusion(p, q, r, p2, q2))
