"""
Rank-3 Trace Coordinates

The seven trace generators t1, t2, t3, t12, t13, t23, t123, trace-word
reduction by Cayley-Hamilton identities, the P/Q relation for t123, exact
SL(2) sampling, the Goldman slice and interpolation of invariant entry
polynomials into trace coordinates.
"""

import itertools
import logging
import re
from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from core.algebra.exactmath import ENTRY_ALPHABET, RANK3_ALPHABET, Polynomial
from core.config import get_settings

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]


class SliceSingularError(ValueError):
    """Raised when a trace tuple lies on the branch locus of the slice"""
    pass


class InterpolationError(RuntimeError):
    """Raised when an entry polynomial cannot be written in trace coordinates"""
    pass


def _t(name: str) -> Polynomial:
    return Polynomial.variable(RANK3_ALPHABET, name)


def _const(value) -> Polynomial:
    return Polynomial.constant(RANK3_ALPHABET, value)


# ============================================================================
# P, Q and the second root of t123
# ============================================================================

@lru_cache(maxsize=1)
def pq_polys() -> Tuple[Polynomial, Polynomial]:
    """(P, Q) with t123 + t132 = P and t123 * t132 = Q"""
    t1, t2, t3 = _t("t1"), _t("t2"), _t("t3")
    t12, t13, t23 = _t("t12"), _t("t13"), _t("t23")
    p = sum_formula(*GENERATOR_WORDS)
    q = (t1 * t1 + t2 * t2 + t3 * t3
         + t12 * t12 + t23 * t23 + t13 * t13
         - (t1 * t2 * t12 + t2 * t3 * t23 + t3 * t1 * t13)
         + t12 * t23 * t13 - 4)
    return p, q


def t132_poly() -> Polynomial:
    """tr(X1 X3 X2) = P - t123"""
    p, _ = pq_polys()
    return p - _t("t123")


@lru_cache(maxsize=None)
def _t123_power(k: int) -> Tuple[Polynomial, Polynomial]:
    """(A_k, B_k) with t123^k = A_k*t123 + B_k modulo the defining quadratic"""
    if k == 0:
        return _const(0), _const(1)
    if k == 1:
        return _const(1), _const(0)
    p, q = pq_polys()
    a, b = _t123_power(k - 1)
    return p * a + b, -(q * a)


def reduce_t123(poly: Polynomial) -> Polynomial:
    """Rewrite so that t123 occurs at most linearly"""
    if poly.alphabet != RANK3_ALPHABET:
        raise ValueError("reduce_t123 needs a rank-3 trace polynomial")
    if poly.degree_in("t123") <= 1:
        return poly
    t123 = _t("t123")
    buckets: Dict[int, Dict[Tuple[int, ...], Fraction]] = {}
    for exps, coeff in poly.items():
        buckets.setdefault(exps[6], {})[exps[:6] + (0,)] = coeff
    result = _const(0)
    for k, terms in buckets.items():
        rest = Polynomial(RANK3_ALPHABET, terms)
        a, b = _t123_power(k)
        result = result + rest * (a * t123 + b)
    return result


# ============================================================================
# Trace words
# ============================================================================

@dataclass(frozen=True)
class TraceWord:
    """A word in X1, X2, X3 and their inverses"""
    letters: Tuple[Letter, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("A trace word must be nonempty")
        for gen, exp in self.letters:
            if gen not in (1, 2, 3) or exp not in (1, -1):
                raise ValueError(f"Invalid letter ({gen}, {exp})")
        reduced = _cyclic_reduce(_free_reduce(self.letters))
        object.__setattr__(self, "letters", reduced or self.letters)

    @classmethod
    def parse(cls, text: str) -> "TraceWord":
        """Read a word such as 'X1 X2^-1 X3'"""
        letters = []
        for gen, inv in re.findall(r"X([123])(\^-1)?", text):
            letters.append((int(gen), -1 if inv else 1))
        return cls(tuple(letters))

    def inverse(self) -> "TraceWord":
        return TraceWord(tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: "TraceWord") -> "TraceWord":
        return TraceWord(self.letters + other.letters)

    def __str__(self) -> str:
        return " ".join(f"X{g}" if e == 1 else f"X{g}^-1" for g, e in self.letters)


def _free_reduce(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    stack: List[Letter] = []
    for gen, exp in letters:
        if stack and stack[-1] == (gen, -exp):
            stack.pop()
        else:
            stack.append((gen, exp))
    return tuple(stack)


def _cyclic_reduce(letters: Tuple[Letter, ...]) -> Tuple[Letter, ...]:
    while len(letters) >= 2 and letters[0] == (letters[-1][0], -letters[-1][1]):
        letters = letters[1:-1]
    return letters


def _canonical(letters: Sequence[Letter]) -> Tuple[Letter, ...]:
    word = _cyclic_reduce(_free_reduce(letters))
    if not word:
        return ()
    inverse = tuple((g, -e) for g, e in reversed(word))
    candidates = []
    for form in (word, inverse):
        inverses = sum(1 for _, e in form if e < 0)
        for shift in range(len(form)):
            candidates.append((inverses, form[shift:] + form[:shift]))
    return min(candidates)[1]


_PAIR_NAMES = {(1, 2): "t12", (1, 3): "t13", (2, 3): "t23"}
_CYCLIC_123 = {(1, 2, 3), (2, 3, 1), (3, 1, 2)}


@lru_cache(maxsize=None)
def _reduce_letters(letters: Tuple[Letter, ...]) -> Polynomial:
    word = _canonical(letters)
    if not word:
        return _const(2)
    n = len(word)

    # tr(U X^-1) = tr(U) tr(X) - tr(U X)
    for idx, (gen, exp) in enumerate(word):
        if exp < 0:
            rotated = word[idx + 1:] + word[:idx + 1]
            rest = rotated[:-1]
            t_gen = _t(f"t{gen}")
            if not rest:
                return t_gen
            return _reduce_letters(rest) * t_gen - _reduce_letters(rest + ((gen, 1),))

    gens = [g for g, _ in word]

    # tr(X X U) = tr(X) tr(X U) - tr(U)
    if n > 1:
        for idx in range(n):
            if gens[idx] == gens[(idx + 1) % n]:
                rotated = word[idx:] + word[:idx]
                x, rest = rotated[:1], rotated[2:]
                return (_t(f"t{gens[idx]}") * _reduce_letters(x + rest)
                        - (_reduce_letters(rest) if rest else _const(2)))

    # tr(X U X V) = tr(X U) tr(X V) - tr(U^-1 V)
    for idx in range(n):
        later = [k for k in range(1, n) if gens[(idx + k) % n] == gens[idx]]
        if later:
            rotated = word[idx:] + word[:idx]
            k = later[0]
            x, u, v = rotated[:1], rotated[1:k], rotated[k + 1:]
            u_inverse = tuple((g, -e) for g, e in reversed(u))
            return (_reduce_letters(x + u) * _reduce_letters(x + v)
                    - _reduce_letters(u_inverse + v))

    if n == 1:
        return _t(f"t{gens[0]}")
    if n == 2:
        return _t(_PAIR_NAMES[tuple(sorted(gens))])
    if tuple(gens) in _CYCLIC_123:
        return _t("t123")
    return t132_poly()


def reduce_trace_word(word: TraceWord) -> Polynomial:
    """The trace of a word as a rank-3 trace polynomial, linear in t123"""
    return reduce_t123(_reduce_letters(word.letters))


GENERATOR_WORDS = (TraceWord(((1, 1),)), TraceWord(((2, 1),)), TraceWord(((3, 1),)))


def sum_formula(x: TraceWord, y: TraceWord, z: TraceWord) -> Polynomial:
    """tr(XYZ) + tr(XZY) written through traces of shorter words:

        tr(XY) tr(Z) + tr(XZ) tr(Y) + tr(ZY) tr(X) - tr(X) tr(Y) tr(Z)
    """
    tr = reduce_trace_word
    return reduce_t123(tr(x * y) * tr(z) + tr(x * z) * tr(y) + tr(z * y) * tr(x) - tr(x) * tr(y) * tr(z))


# ============================================================================
# Minimal generators
# ============================================================================

def minimal_generator_count(r: int) -> int:
    """r(r^2 + 5)/6: r single traces, C(r,2) pairs and C(r,3) triples"""
    if r < 1:
        raise ValueError(f"Rank must be positive, got {r}")
    return r * (r * r + 5) // 6


def minimal_generators(r: int) -> List[Tuple[int, ...]]:
    """Index words of tr(X_i), tr(X_i X_j) and tr(X_i X_j X_k) with increasing indices"""
    if r < 1:
        raise ValueError(f"Rank must be positive, got {r}")
    return [
        word
        for length in (1, 2, 3)
        for word in itertools.combinations(range(1, r + 1), length)
    ]


def generator_name(word: Sequence[int]) -> str:
    return "t" + "".join(str(k) for k in word)


# ============================================================================
# Exact SL(2) matrices
# ============================================================================

@dataclass(frozen=True)
class SL2Rational:
    """2x2 rational matrix [[a, b], [c, d]] with determinant exactly 1"""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, Fraction(getattr(self, f.name)))
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"Determinant is not 1: {self}")

    @classmethod
    def identity(cls) -> "SL2Rational":
        return cls(1, 0, 0, 1)

    def __matmul__(self, other: "SL2Rational") -> "SL2Rational":
        return SL2Rational(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "SL2Rational":
        return SL2Rational(self.d, -self.b, -self.c, self.a)

    def trace(self) -> Fraction:
        return self.a + self.d

    def rows(self) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
        return ((self.a, self.b), (self.c, self.d))

    def entry_assignment(self, k: int) -> Dict[str, Fraction]:
        """Values for the entry variables xk_11 ... xk_22"""
        return {f"x{k}_11": self.a, f"x{k}_12": self.b, f"x{k}_21": self.c, f"x{k}_22": self.d}


def random_sl2(seed: int, steps: Optional[int] = None) -> SL2Rational:
    """Product of alternating upper and lower shears with small rational parameters"""
    settings = get_settings()
    steps = settings.sl2_steps if steps is None else steps
    bound = settings.shear_bound
    rng = np.random.default_rng(seed)
    result = SL2Rational.identity()
    for step in range(steps):
        num = int(rng.integers(-bound, bound + 1))
        den = int(rng.integers(1, bound + 1))
        shear = Fraction(num, den)
        factor = SL2Rational(1, shear, 0, 1) if step % 2 == 0 else SL2Rational(1, 0, shear, 1)
        result = result @ factor
    return result


def random_triple(seed: int, steps: Optional[int] = None) -> Tuple[SL2Rational, SL2Rational, SL2Rational]:
    return tuple(random_sl2(seed * 3 + k, steps) for k in range(3))


def entry_assignment(x1: SL2Rational, x2: SL2Rational, x3: SL2Rational) -> Dict[str, Fraction]:
    values = {}
    for k, matrix in enumerate((x1, x2, x3), start=1):
        values.update(matrix.entry_assignment(k))
    return values


@dataclass(frozen=True)
class TraceTuple:
    t1: Fraction
    t2: Fraction
    t3: Fraction
    t12: Fraction
    t13: Fraction
    t23: Fraction
    t123: Fraction

    def as_assignment(self) -> Dict[str, Fraction]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def evaluate_traces(x1: SL2Rational, x2: SL2Rational, x3: SL2Rational) -> TraceTuple:
    return TraceTuple(
        t1=x1.trace(),
        t2=x2.trace(),
        t3=x3.trace(),
        t12=(x1 @ x2).trace(),
        t13=(x1 @ x3).trace(),
        t23=(x2 @ x3).trace(),
        t123=(x1 @ x2 @ x3).trace(),
    )


# ============================================================================
# Goldman slice (floating point)
# ============================================================================

def _pick_root(roots) -> complex:
    # Non-negative imaginary part first, then larger real part.
    return max(roots, key=lambda z: (z.imag >= -1e-12, round(z.real, 12)))


def goldman_slice(t: TraceTuple) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Complex matrices (X1, X2, X3) whose seven traces reproduce `t`"""
    t1, t2, t3, t12, t13, t23, t123 = (complex(getattr(t, f.name)) for f in fields(t))

    w = _pick_root(np.roots([1.0, -t12, 1.0]).astype(complex))
    if abs(w * w - 1) < 1e-6:
        raise SliceSingularError(f"w^2 = 1 at t12 = {t.t12}; the slice is singular here")

    x1 = np.array([[t1, -1], [1, 0]], dtype=complex)
    x2 = np.array([[0, w], [-1 / w, t2]], dtype=complex)

    def x3_at(s: complex) -> np.ndarray:
        return np.array([
            [s * (1 / w - w) + t3,
             s * (w * t1 - t2) + w * (w * (t13 - t1 * t3) + t23) / (w * w - 1)],
            [s * (t1 / w - t2) + (-t1 * t3 + t13 + w * t23) / (w * w - 1),
             s * (w - 1 / w)],
        ], dtype=complex)

    def excess(s: complex) -> complex:
        return np.linalg.det(x3_at(s)) - 1

    c0 = excess(0)
    c1 = (excess(1) - excess(-1)) / 2
    c2 = (excess(1) + excess(-1)) / 2 - c0
    if abs(c2) < 1e-14:
        if abs(c1) < 1e-14:
            raise SliceSingularError("det(X3(s)) does not depend on s")
        roots = [-c0 / c1]
    else:
        roots = list(np.roots([c2, c1, c0]).astype(complex))

    def mismatch(s: complex) -> float:
        return abs(np.trace(x1 @ x2 @ x3_at(s)) - t123)

    best = min(mismatch(s) for s in roots)
    matching = [s for s in roots if mismatch(s) - best < 1e-9]
    s = _pick_root(matching)
    return x1, x2, x3_at(s)


def slice_traces(x1: np.ndarray, x2: np.ndarray, x3: np.ndarray) -> Tuple[complex, ...]:
    return (
        np.trace(x1), np.trace(x2), np.trace(x3),
        np.trace(x1 @ x2), np.trace(x1 @ x3), np.trace(x2 @ x3),
        np.trace(x1 @ x2 @ x3),
    )


# ============================================================================
# Interpolation into trace coordinates
# ============================================================================

# Generators containing X1, X2, X3 respectively, by alphabet position.
_GENERATOR_SUPPORT = {
    k: tuple(RANK3_ALPHABET.index(generator_name(word)) for word in minimal_generators(3) if k in word)
    for k in (1, 2, 3)
}


def _entry_degrees(p: Polynomial) -> Tuple[List[int], List[bool]]:
    """Per-generator degree in the matrix entries, and whether it is homogeneous"""
    degrees, homogeneous = [], []
    for k in range(3):
        weights = {sum(exps[4 * k:4 * k + 4]) for exps, _ in p.items()} or {0}
        degrees.append(max(weights))
        homogeneous.append(len(weights) == 1)
    return degrees, homogeneous


def trace_basis(degrees: Sequence[int], parity: Sequence[Optional[int]]) -> List[Tuple[int, ...]]:
    """Monomials in the seven generators, linear in t123, under X_k-weight bounds"""
    d1, d2, d3 = degrees
    basis = []
    for r in (0, 1):
        for q12 in range(min(d1, d2) - r + 1):
            for q13 in range(min(d1 - q12, d3) - r + 1):
                for q23 in range(min(d2 - q12, d3 - q13) - r + 1):
                    room = (d1 - q12 - q13 - r, d2 - q12 - q23 - r, d3 - q13 - q23 - r)
                    if min(room) < 0:
                        continue
                    for p1, p2, p3 in itertools.product(*(range(x + 1) for x in room)):
                        full = (p1, p2, p3, q12, q13, q23, r)
                        if all(par is None or (sum(full[i] for i in _GENERATOR_SUPPORT[k]) - par) % 2 == 0
                               for k, par in zip((1, 2, 3), parity)):
                            basis.append(full)
    return basis


def _monomial_value(exps: Tuple[int, ...], values: Sequence[Fraction]) -> Fraction:
    result = Fraction(1)
    for value, power in zip(values, exps):
        if power:
            result *= value ** power
    return result


def interpolate_to_traces(p: Polynomial, order: Optional[int] = None, seed: Optional[int] = None) -> Polynomial:
    """Write a conjugation-invariant entry polynomial in the seven trace generators.

    The polynomial is sampled at exact random SL(2) triples and the
    coefficients are found by an exact rational linear solve. Extra sample
    points check the result.
    """
    if p.alphabet != ENTRY_ALPHABET:
        raise ValueError("interpolate_to_traces expects a polynomial in matrix entries")
    settings = get_settings()
    seed = settings.default_seed if seed is None else seed

    degrees, homogeneous = _entry_degrees(p)
    parity = [d % 2 if h else None for d, h in zip(degrees, homogeneous)]
    if order is not None:
        degrees = [min(d, order) for d in degrees]
    basis = trace_basis(degrees, parity)
    size = len(basis)
    extra = settings.interpolation_extra_points
    logger.debug(f"Interpolating with {size} basis monomials (degrees {degrees})")

    for attempt in range(settings.interpolation_max_attempts):
        rows, rhs, checks = [], [], []
        for i in range(size + extra):
            triple = random_triple(seed * 7919 + attempt * 104729 + i)
            traces = evaluate_traces(*triple).as_assignment()
            values = [traces[name] for name in RANK3_ALPHABET.names]
            target = p.evaluate(entry_assignment(*triple))
            if i < size:
                rows.append([_monomial_value(exps, values) for exps in basis])
                rhs.append(target)
            else:
                checks.append((values, target))

        matrix = DomainMatrix([[QQ(v.numerator, v.denominator) for v in row] for row in rows], (size, size), QQ)
        vector = DomainMatrix([[QQ(v.numerator, v.denominator)] for v in rhs], (size, 1), QQ)
        try:
            solution = matrix.lu_solve(vector)
        except DMNonInvertibleMatrixError:
            logger.warning(f"Singular interpolation system on attempt {attempt + 1}; resampling")
            continue

        coeffs = [Fraction(int(v.p), int(v.q)) for v in solution.to_Matrix()]
        result = Polynomial(RANK3_ALPHABET, dict(zip(basis, coeffs)))
        for values, target in checks:
            if result.evaluate(dict(zip(RANK3_ALPHABET.names, values))) != target:
                raise InterpolationError(
                    f"Residual check failed with {size} basis monomials; "
                    f"the polynomial is not expressible under degree bounds {degrees}"
                )
        return result

    raise InterpolationError(f"Interpolation system stayed singular after "
                             f"{settings.interpolation_max_attempts} attempts")
