"""
Combinatorial Central Function Engine

Computes rank-1, rank-2 and rank-3 central functions and barbell functions
by loop-multiplication recurrences. A loop labelled 1 laid along a simple
cycle of the diagram multiplies the function by a trace; expanding the
product as a sum over +-1 relabelings of the cycle and isolating the
all-raising term expresses each function through lower ones.
"""

import logging
import threading
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple, Union

from core.algebra.exactmath import (
    RANK1_ALPHABET,
    RANK2_ALPHABET,
    RANK3_ALPHABET,
    Polynomial,
    RadExact,
    rad_mul,
    rad_to_rational,
)
from core.algebra.reptheory import (
    GluingFusion,
    InadmissibleError,
    edge_count,
    glue_inputs,
    glue_output_left,
    glue_output_right,
    inputs_fusion,
    is_admissible,
    multiplicity_intermediates,
    norm_fusion_coeff,
    output_left_fusion,
    output_right_fusion,
    strand_bubble,
)
from core.algebra.tracecoords import TraceWord, reduce_t123, reduce_trace_word

logger = logging.getLogger(__name__)


class InadmissibleLabelError(InadmissibleError):
    """Raised when a diagram label has an inadmissible vertex"""

    def __init__(self, message: str, triple: Optional[Tuple[int, int, int]] = None):
        super().__init__(message)
        self.triple = triple


class IndexOutOfRangeError(InadmissibleError):
    """Raised when a multiplicity index exceeds the multiplicity of V_d"""
    pass


class ReductionError(RuntimeError):
    """Raised when no reduction case applies or the reduction revisits a label"""
    pass


# ============================================================================
# Labels
# ============================================================================

EDGE_NAMES = ("a", "b", "c", "d", "e", "f")

# Vertex triples of the left-associative rank-3 diagram, as (input, input, output).
VERTICES = (("a", "b", "e"), ("e", "c", "d"), ("a", "b", "f"), ("f", "c", "d"))


@dataclass(frozen=True, order=True)
class Rank3Label:
    a: int
    b: int
    c: int
    d: int
    e: int
    f: int

    def __iter__(self) -> Iterator[int]:
        return iter(self.as_tuple())

    def as_tuple(self) -> Tuple[int, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def get(self, edge: str) -> int:
        return getattr(self, edge)

    def replace(self, **changes: int) -> "Rank3Label":
        values = dict(zip(EDGE_NAMES, self.as_tuple()))
        values.update(changes)
        return Rank3Label(**values)

    def order(self) -> int:
        return self.a + self.b + self.c

    def violated_vertex(self) -> Optional[Tuple[int, int, int]]:
        for vertex in VERTICES:
            triple = tuple(self.get(edge) for edge in vertex)
            if not is_admissible(*triple):
                return triple
        return None

    def is_admissible(self) -> bool:
        return self.violated_vertex() is None

    def require_admissible(self) -> "Rank3Label":
        triple = self.violated_vertex()
        if triple is not None:
            raise InadmissibleLabelError(f"Label {self.as_tuple()} has inadmissible vertex {triple}", triple)
        return self


BASE_LABEL = Rank3Label(0, 0, 0, 0, 0, 0)


@dataclass(frozen=True, order=True)
class BarbellLabel:
    """Two loops a and c joined by a bar b"""
    a: int
    c: int
    b: int

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.c, self.b)

    def violated_vertex(self) -> Optional[Tuple[int, int, int]]:
        for triple in ((self.a, self.a, self.b), (self.c, self.c, self.b)):
            if not is_admissible(*triple):
                return triple
        return None

    def is_admissible(self) -> bool:
        return self.violated_vertex() is None

    def require_admissible(self) -> "BarbellLabel":
        triple = self.violated_vertex()
        if triple is not None:
            raise InadmissibleLabelError(f"Barbell {self.as_tuple()} has inadmissible vertex {triple}", triple)
        return self


AnyLabel = Union[Rank3Label, BarbellLabel]


def rank1_label(n: int) -> Rank3Label:
    return Rank3Label(n, 0, 0, n, n, n)


def rank2_label(a: int, b: int, c: int) -> Rank3Label:
    return Rank3Label(a, b, 0, c, c, c)


def _collapse_third(chi: Polynomial) -> Polynomial:
    # X3 = I
    t = {name: Polynomial.variable(RANK3_ALPHABET, name) for name in RANK3_ALPHABET.names}
    return chi.substitute({
        "t3": Polynomial.constant(RANK3_ALPHABET, 2),
        "t13": t["t1"], "t23": t["t2"], "t123": t["t12"],
    }, RANK3_ALPHABET)


def to_rank2_coordinates(chi: Polynomial) -> Polynomial:
    """Rewrite a function independent of X3 in (x, y, z) = (t1, t2, tr(X1 X2^-1))"""
    zero = Polynomial.zero(RANK2_ALPHABET)
    x, y, z = _x("x"), _x("y"), _x("z")
    return _collapse_third(chi).substitute({
        "t1": x, "t2": y, "t12": x * y - z,
        "t3": zero, "t13": zero, "t23": zero, "t123": zero,
    }, RANK2_ALPHABET)


def to_rank1_coordinates(chi: Polynomial) -> Polynomial:
    """Rewrite a function of X1 alone in x = t1"""
    # X2 = X3 = I
    x = Polynomial.variable(RANK1_ALPHABET, "x")
    two = Polynomial.constant(RANK1_ALPHABET, 2)
    return chi.substitute({
        "t1": x, "t2": two, "t3": two, "t12": x, "t13": x, "t23": two, "t123": x,
    }, RANK1_ALPHABET)


class FormalSum:
    """Linear combination of admissible labels with merged, nonzero coefficients"""

    def __init__(self):
        self._terms: Dict[AnyLabel, Fraction] = {}

    def add(self, coeff: Fraction, label: AnyLabel) -> None:
        label.require_admissible()
        value = self._terms.get(label, Fraction(0)) + coeff
        if value:
            self._terms[label] = value
        else:
            self._terms.pop(label, None)

    def items(self) -> List[Tuple[Fraction, AnyLabel]]:
        return [(coeff, label) for label, coeff in sorted(self._terms.items())]

    def coefficient(self, label: AnyLabel) -> Fraction:
        return self._terms.get(label, Fraction(0))

    def without(self, label: AnyLabel) -> "FormalSum":
        rest = FormalSum()
        rest._terms = {k: v for k, v in self._terms.items() if k != label}
        return rest

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, label: AnyLabel) -> bool:
        return label in self._terms

    def __repr__(self) -> str:
        body = ", ".join(f"{coeff}*{label.as_tuple()}" for coeff, label in self.items())
        return f"FormalSum({body})"


# ============================================================================
# Loops
# ============================================================================

class Loop(str, Enum):
    AB = "ab"
    CD = "cd"
    AEDF = "aedf"
    BEDF = "bedf"
    BECF = "becf"
    AECF = "aecf"
    BARBELL_X = "barbell_x"
    BARBELL_Y = "barbell_y"


class Gluing(str, Enum):
    OUTPUT_LEFT = "output_left"
    OUTPUT_RIGHT = "output_right"
    INPUTS = "inputs"


@dataclass(frozen=True)
class VertexGluing:
    vertex: Tuple[str, str, str]
    kind: Gluing

    def factor(self, old: Rank3Label, new: Rank3Label) -> Fraction:
        p, q, r = (old.get(edge) for edge in self.vertex)
        p2, q2, r2 = (new.get(edge) for edge in self.vertex)
        if self.kind is Gluing.OUTPUT_LEFT:
            return glue_output_left(p, q, r, r2, p2)
        if self.kind is Gluing.OUTPUT_RIGHT:
            return glue_output_right(p, q, r, r2, q2)
        return glue_inputs(p, q, r, p2, q2)

    def fusion(self, old: Rank3Label, new: Rank3Label) -> GluingFusion:
        """Sign and fusion key of this gluing"""
        p, q, r = (old.get(edge) for edge in self.vertex)
        p2, q2, r2 = (new.get(edge) for edge in self.vertex)
        if self.kind is Gluing.OUTPUT_LEFT:
            return output_left_fusion(p, q, r, r2, p2)
        if self.kind is Gluing.OUTPUT_RIGHT:
            return output_right_fusion(p, q, r, r2, q2)
        return inputs_fusion(p, q, r, p2, q2)


@dataclass(frozen=True)
class LoopSpec:
    loop: Loop
    edges: Tuple[str, ...]
    word: Optional[TraceWord] = None
    gluings: Tuple[VertexGluing, ...] = ()
    bubbles_up: Tuple[str, ...] = ()
    bubbles_down: Tuple[str, ...] = ()


def _g(vertex: Tuple[str, str, str], kind: Gluing) -> VertexGluing:
    return VertexGluing(vertex, kind)


_ABE, _ECD, _ABF, _FCD = VERTICES

LOOPS: Dict[Loop, LoopSpec] = {
    Loop.AB: LoopSpec(
        Loop.AB, ("a", "b"), TraceWord.parse("X1 X2^-1"),
        (_g(_ABE, Gluing.INPUTS), _g(_ABF, Gluing.INPUTS)),
        bubbles_up=("a", "b"),
    ),
    Loop.CD: LoopSpec(
        Loop.CD, ("c", "d"), TraceWord.parse("X3"),
        (_g(_ECD, Gluing.OUTPUT_RIGHT), _g(_FCD, Gluing.OUTPUT_RIGHT)),
        bubbles_up=("c",), bubbles_down=("d",),
    ),
    Loop.AEDF: LoopSpec(
        Loop.AEDF, ("a", "e", "d", "f"), TraceWord.parse("X1"),
        (_g(_ECD, Gluing.OUTPUT_LEFT), _g(_ABE, Gluing.OUTPUT_LEFT),
         _g(_FCD, Gluing.OUTPUT_LEFT), _g(_ABF, Gluing.OUTPUT_LEFT)),
        bubbles_up=("a",), bubbles_down=("d",),
    ),
    Loop.BEDF: LoopSpec(
        Loop.BEDF, ("b", "e", "d", "f"), TraceWord.parse("X2"),
        (_g(_ECD, Gluing.OUTPUT_LEFT), _g(_ABE, Gluing.OUTPUT_RIGHT),
         _g(_FCD, Gluing.OUTPUT_LEFT), _g(_ABF, Gluing.OUTPUT_RIGHT)),
        bubbles_up=("b",), bubbles_down=("d",),
    ),
    Loop.BECF: LoopSpec(
        Loop.BECF, ("b", "e", "c", "f"), TraceWord.parse("X2 X3^-1"),
        (_g(_ECD, Gluing.INPUTS), _g(_ABE, Gluing.OUTPUT_RIGHT),
         _g(_FCD, Gluing.INPUTS), _g(_ABF, Gluing.OUTPUT_RIGHT)),
        bubbles_up=("b", "c"),
    ),
    Loop.AECF: LoopSpec(
        Loop.AECF, ("a", "e", "c", "f"), TraceWord.parse("X1 X3^-1"),
        (_g(_ECD, Gluing.INPUTS), _g(_ABE, Gluing.OUTPUT_LEFT),
         _g(_FCD, Gluing.INPUTS), _g(_ABF, Gluing.OUTPUT_LEFT)),
        bubbles_up=("a", "c"),
    ),
    Loop.BARBELL_X: LoopSpec(Loop.BARBELL_X, ("a",)),
    Loop.BARBELL_Y: LoopSpec(Loop.BARBELL_Y, ("c",)),
}


def _barbell_lowering(p: int, b: int) -> Fraction:
    """Coefficient of the lowered loop when a barbell loop p meets a strand"""
    half = b // 2
    return Fraction((p - half) * (p + half + 1), p * (p + 1))


def loop_coefficient(loop: LoopSpec, old: AnyLabel, new: AnyLabel) -> Optional[Fraction]:
    """Weight of `new` in (loop trace) x chi(old); None when the relabeling is absent"""
    if not new.is_admissible() or not old.is_admissible():
        return None

    if loop.loop in (Loop.BARBELL_X, Loop.BARBELL_Y):
        edge = loop.edges[0]
        before, after = getattr(old, edge), getattr(new, edge)
        others_equal = all(getattr(old, k) == getattr(new, k) for k in ("a", "c", "b") if k != edge)
        if not others_equal or abs(after - before) != 1:
            return None
        return Fraction(1) if after == before + 1 else _barbell_lowering(before, old.b)

    for edge in EDGE_NAMES:
        delta = new.get(edge) - old.get(edge)
        if edge in loop.edges:
            if abs(delta) != 1:
                return None
        elif delta:
            return None

    coeff = Fraction(1)
    for edge in loop.bubbles_up:
        coeff *= strand_bubble(old.get(edge), new.get(edge))
    for edge in loop.bubbles_down:
        coeff /= strand_bubble(old.get(edge), new.get(edge))
    for gluing in loop.gluings:
        coeff *= gluing.factor(old, new)
    return coeff


def cycle_product(loop: LoopSpec, old: Rank3Label, new: Rank3Label) -> Optional[Fraction]:
    """The rank-3 loop coefficient as a signed product of normalized fusion coefficients.

    The normalizers are square roots; around a closed loop every edge meets two
    gluings, so the radicals cancel and the product is rational. It agrees with
    loop_coefficient, which stays radical-free.
    """
    if not loop.gluings:
        raise ValueError(f"Loop {loop.loop.value} has no vertex gluings")
    if loop_coefficient(loop, old, new) is None:
        return None
    product_value = RadExact.from_rational(1)
    for gluing in loop.gluings:
        sign, key = gluing.fusion(old, new)
        normalized = norm_fusion_coeff(key)
        if normalized is None:
            return None
        product_value = rad_mul(product_value, rad_mul(RadExact.from_rational(sign), normalized))
    return rad_to_rational(product_value)


def relabelings(label: AnyLabel, loop: LoopSpec) -> Iterator[AnyLabel]:
    """Every +-1 change of the loop edges with no negative label"""
    for signs in product((1, -1), repeat=len(loop.edges)):
        changes = {edge: getattr(label, edge) + s for edge, s in zip(loop.edges, signs)}
        if min(changes.values()) < 0:
            continue
        if isinstance(label, BarbellLabel):
            values = {"a": label.a, "c": label.c, "b": label.b, **changes}
            yield BarbellLabel(**values)
        else:
            yield label.replace(**changes)


def raised(label: AnyLabel, loop: LoopSpec) -> AnyLabel:
    changes = {edge: getattr(label, edge) + 1 for edge in loop.edges}
    if isinstance(label, BarbellLabel):
        return BarbellLabel(**{"a": label.a, "c": label.c, "b": label.b, **changes})
    return label.replace(**changes)


def lowered(label: AnyLabel, loop: LoopSpec) -> AnyLabel:
    changes = {edge: getattr(label, edge) - 1 for edge in loop.edges}
    if isinstance(label, BarbellLabel):
        return BarbellLabel(**{"a": label.a, "c": label.c, "b": label.b, **changes})
    return label.replace(**changes)


def multiply_simple_loop(label: AnyLabel, loop: LoopSpec) -> FormalSum:
    label.require_admissible()
    result = FormalSum()
    for candidate in relabelings(label, loop):
        coeff = loop_coefficient(loop, label, candidate)
        if coeff:
            result.add(coeff, candidate)
    return result


# ============================================================================
# Reduction cases
# ============================================================================

# Each case lists edge counts e_x(y, z) that must be positive.
_CASES: Tuple[Tuple[int, Loop, Tuple[Tuple[str, str, str], ...]], ...] = (
    (1, Loop.AB, (("e", "a", "b"), ("f", "a", "b"))),
    (2, Loop.CD, (("e", "c", "d"), ("f", "c", "d"))),
    (3, Loop.AEDF, (("b", "a", "e"), ("b", "a", "f"), ("c", "d", "e"), ("c", "d", "f"))),
    (4, Loop.BEDF, (("a", "b", "e"), ("a", "b", "f"), ("c", "d", "e"), ("c", "d", "f"))),
    (5, Loop.BECF, (("a", "b", "e"), ("a", "b", "f"), ("d", "c", "e"), ("d", "c", "f"))),
    (6, Loop.AECF, (("b", "a", "e"), ("b", "a", "f"), ("d", "c", "e"), ("d", "c", "f"))),
)


@dataclass(frozen=True)
class ReductionStep:
    """chi(label) = tr(multiplier) * chi(base) - sum(coeff * chi(term) for corrections)"""
    case: int
    loop: LoopSpec
    multiplier: TraceWord
    base: Rank3Label
    corrections: FormalSum = field(compare=False)


@dataclass(frozen=True)
class BarbellCase:
    """chi(label) = sign * barbell(x, y, z) under the trace-word substitution"""
    case: int
    barbell: BarbellLabel
    sign: int
    substitution: Tuple[Tuple[str, TraceWord], ...]


def reduce_step(label: Rank3Label) -> Union[ReductionStep, BarbellCase]:
    label.require_admissible()
    if label == BASE_LABEL:
        raise ReductionError("The base label has no reduction")

    for case, loop_id, conditions in _CASES:
        if all(edge_count(*(label.get(edge) for edge in cond)) > 0 for cond in conditions):
            loop = LOOPS[loop_id]
            base = lowered(label, loop)
            expansion = multiply_simple_loop(base, loop)
            top = expansion.coefficient(label)
            if top != 1:
                raise ReductionError(f"Leading coefficient {top} for {label.as_tuple()} along {loop_id.value}")
            logger.debug(f"Label {label.as_tuple()} reduces by case {case} along {loop_id.value}")
            return ReductionStep(case, loop, loop.word, base, expansion.without(label))

    if label.e == 0:
        return BarbellCase(7, BarbellLabel(label.a, label.c, label.f), -1 if (label.f // 2) % 2 else 1, (
            ("x", TraceWord.parse("X1 X2^-1")),
            ("y", TraceWord.parse("X3")),
            ("z", TraceWord.parse("X3 X1 X2^-1")),
        ))
    if label.f == 0:
        return BarbellCase(8, BarbellLabel(label.c, label.a, label.e), -1 if (label.e // 2) % 2 else 1, (
            ("x", TraceWord.parse("X3")),
            ("y", TraceWord.parse("X1 X2^-1")),
            ("z", TraceWord.parse("X3 X2^-1 X1")),
        ))
    raise ReductionError(f"No reduction case applies to {label.as_tuple()}")


# ============================================================================
# Engine
# ============================================================================

def _x(name: str, alphabet=RANK2_ALPHABET) -> Polynomial:
    return Polynomial.variable(alphabet, name)


class RecurrenceEngine:
    """Memoizing evaluator for rank-3 and barbell central functions.

    Cache writes are idempotent, so concurrent threads computing the same
    label store identical values.
    """

    def __init__(self):
        self._rank3: Dict[Rank3Label, Polynomial] = {}
        self._barbell: Dict[BarbellLabel, Polynomial] = {}
        self._rank1: List[Polynomial] = [
            Polynomial.constant(RANK1_ALPHABET, 1),
            Polynomial.variable(RANK1_ALPHABET, "x"),
        ]
        self._lock = threading.RLock()
        self._active = threading.local()

    # ------------------------------------------------------------------
    # Cache management
    # ------------------------------------------------------------------

    def _store(self, cache: dict, key, value: Polynomial) -> Polynomial:
        with self._lock:
            return cache.setdefault(key, value)

    def export_cache(self) -> Dict[Tuple[str, Tuple[int, ...]], Polynomial]:
        with self._lock:
            entries = {("rank3", k.as_tuple()): v for k, v in self._rank3.items()}
            entries.update({("barbell", k.as_tuple()): v for k, v in self._barbell.items()})
        return entries

    def import_cache(self, entries: Dict[Tuple[str, Tuple[int, ...]], Polynomial]) -> int:
        count = 0
        with self._lock:
            for (kind, label), poly in entries.items():
                if kind == "rank3" and poly.alphabet == RANK3_ALPHABET:
                    self._rank3.setdefault(Rank3Label(*label), poly)
                    count += 1
                elif kind == "barbell" and poly.alphabet == RANK2_ALPHABET:
                    self._barbell.setdefault(BarbellLabel(*label), poly)
                    count += 1
        return count

    def cache_size(self) -> int:
        with self._lock:
            return len(self._rank3) + len(self._barbell)

    def clear(self) -> None:
        with self._lock:
            self._rank3.clear()
            self._barbell.clear()

    # ------------------------------------------------------------------
    # Rank 1 and rank 2
    # ------------------------------------------------------------------

    def rank1_cf(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("Rank-1 label must be non-negative")
        x = Polynomial.variable(RANK1_ALPHABET, "x")
        with self._lock:
            while len(self._rank1) <= n:
                self._rank1.append(x * self._rank1[-1] - self._rank1[-2])
            return self._rank1[n]

    def rank2_cf(self, a: int, b: int, c: int) -> Polynomial:
        if not is_admissible(a, b, c):
            raise InadmissibleLabelError(f"Triple ({a}, {b}, {c}) is not admissible", (a, b, c))
        return to_rank2_coordinates(self.rank3_cf(rank2_label(a, b, c)))

    # ------------------------------------------------------------------
    # Barbells
    # ------------------------------------------------------------------

    def barbell(self, label: BarbellLabel) -> Polynomial:
        label.require_admissible()
        cached = self._barbell.get(label)
        if cached is not None:
            return cached
        return self._store(self._barbell, label, self._compute_barbell(label))

    def _compute_barbell(self, label: BarbellLabel) -> Polynomial:
        a, c, b = label.as_tuple()
        x, y, z = _x("x"), _x("y"), _x("z")
        half = b // 2
        if b == 0:
            first = self.rank1_cf(a).substitute({"x": x}, RANK2_ALPHABET)
            second = self.rank1_cf(c).substitute({"x": y}, RANK2_ALPHABET)
            return first * second
        if a > half:
            return self._loop_reduce(label, LOOPS[Loop.BARBELL_X], x)
        if c > half:
            return self._loop_reduce(label, LOOPS[Loop.BARBELL_Y], y)

        # Diagonal family a = c = b/2.
        leading = z - x * y * Fraction(1, 2)
        spread = (x * x - 4) * (y * y - 4) * Fraction(1, 4)
        previous = Polynomial.constant(RANK2_ALPHABET, 1)
        current = leading
        for m in range(1, half):
            previous, current = current, leading * current - spread * Fraction(m * m, 4 * m * m - 1) * previous
        return current

    def _loop_reduce(self, label: BarbellLabel, loop: LoopSpec, variable: Polynomial) -> Polynomial:
        base = lowered(label, loop)
        expansion = multiply_simple_loop(base, loop)
        result = variable * self.barbell(base)
        for coeff, term in expansion.without(label).items():
            result = result - self.barbell(term) * coeff
        return result

    # ------------------------------------------------------------------
    # Rank 3
    # ------------------------------------------------------------------

    def rank3_cf(self, label: Rank3Label) -> Polynomial:
        label.require_admissible()
        cached = self._rank3.get(label)
        if cached is not None:
            return cached
        if label == BASE_LABEL:
            return self._store(self._rank3, label, Polynomial.constant(RANK3_ALPHABET, 1))

        active = getattr(self._active, "labels", None)
        if active is None:
            active = self._active.labels = set()
        if label in active:
            raise ReductionError(f"Reduction of {label.as_tuple()} revisits itself")
        active.add(label)
        try:
            value = self._compute_rank3(label)
        finally:
            active.discard(label)
        return self._store(self._rank3, label, value)

    def _compute_rank3(self, label: Rank3Label) -> Polynomial:
        step = reduce_step(label)
        if isinstance(step, BarbellCase):
            images = {name: reduce_trace_word(word) for name, word in step.substitution}
            value = self.barbell(step.barbell).substitute(images, RANK3_ALPHABET)
            return reduce_t123(value).scale(step.sign)

        result = reduce_trace_word(step.multiplier) * self.rank3_cf(step.base)
        for coeff, term in step.corrections.items():
            result = result - self.rank3_cf(term) * coeff
        return reduce_t123(result)


_default_engine = RecurrenceEngine()


def get_default_engine() -> RecurrenceEngine:
    return _default_engine


# ============================================================================
# Module-level operations
# ============================================================================

def rank1_cf(n: int) -> Polynomial:
    return _default_engine.rank1_cf(n)


def rank2_cf(a: int, b: int, c: int) -> Polynomial:
    return _default_engine.rank2_cf(a, b, c)


def barbell(label: BarbellLabel) -> Polynomial:
    return _default_engine.barbell(label)


def rank3_cf(label: Rank3Label) -> Polynomial:
    return _default_engine.rank3_cf(label)


def cfindex_to_label(a: int, b: int, c: int, d: int, i: int, j: int) -> Rank3Label:
    intermediates = multiplicity_intermediates(a, b, c, d)
    if not intermediates:
        raise IndexOutOfRangeError(
            f"V_{d} does not occur in V_{a} x V_{b} x V_{c}: no e in {a}x{b} makes ({{e}}, {c}, {d}) admissible"
        )
    m = len(intermediates)
    if not (1 <= i <= m and 1 <= j <= m):
        raise IndexOutOfRangeError(f"Indices ({i}, {j}) out of range 1..{m} for ({a}, {b}, {c}, {d})")
    return Rank3Label(a, b, c, d, intermediates[i - 1], intermediates[j - 1])


def enumerate_order(s: int) -> List[Tuple[int, int, int, int, int, int]]:
    """All admissible index tuples (a, b, c, d, i, j) with a + b + c = s"""
    found = []
    for a in range(s + 1):
        for b in range(s - a + 1):
            c = s - a - b
            for d in range(s % 2, s + 1, 2):
                m = len(multiplicity_intermediates(a, b, c, d))
                for i in range(1, m + 1):
                    for j in range(1, m + 1):
                        found.append((a, b, c, d, i, j))
    return sorted(found)
