#!/usr/bin/env python3
"""
Tests for the combinatorial engine: golden tables, barbells, counts and properties
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from fractions import Fraction
from itertools import permutations

import pytest

from core.algebra.exactmath import RANK1_ALPHABET, RANK2_ALPHABET, RANK3_ALPHABET, Polynomial, poly_parse
from core.algebra.reptheory import admissible_range, edge_count, is_admissible, sign_s
from core.algebra.tracecoords import TraceWord, evaluate_traces, random_triple, reduce_trace_word
from core.services.recurrence_service import (
    LOOPS,
    BarbellCase,
    BarbellLabel,
    IndexOutOfRangeError,
    InadmissibleLabelError,
    Loop,
    Rank3Label,
    RecurrenceEngine,
    ReductionError,
    ReductionStep,
    barbell,
    cfindex_to_label,
    cycle_product,
    enumerate_order,
    get_default_engine,
    loop_coefficient,
    multiply_simple_loop,
    rank1_cf,
    rank1_label,
    rank2_cf,
    rank3_cf,
    reduce_step,
    relabelings,
    to_rank1_coordinates,
)
from core.services.tensorial_service import evaluate_tensorial
from core.services.verification_service import GOLDEN_ORDER_0_TO_3, RANK3_LOOPS, admissible_labels, golden_polynomial

from test_exactmath import LARGE_EXAMPLE


def rank1(text: str) -> Polynomial:
    return poly_parse(text, RANK1_ALPHABET)


def rank2(text: str) -> Polynomial:
    return poly_parse(text, RANK2_ALPHABET)


def swap_xy(p: Polynomial) -> Polynomial:
    x, y, z = (Polynomial.variable(RANK2_ALPHABET, name) for name in ("x", "y", "z"))
    return p.substitute({"x": y, "y": x, "z": z}, RANK2_ALPHABET)


# ============================================================================
# Rank 1 and rank 2
# ============================================================================

@pytest.mark.parametrize("n, expected", [
    (0, "1"), (1, "x"), (2, "x^2 - 1"), (3, "x^3 - 2*x"),
    (4, "x^4 - 3*x^2 + 1"), (5, "x^5 - 4*x^3 + 3*x"),
])
def test_rank1_table(n, expected):
    """Chebyshev-type rank-1 functions"""
    assert rank1_cf(n) == rank1(expected)


def test_rank1_product_formula():
    """chi_a chi_b = sum of chi_c over the Clebsch-Gordan range"""
    for a in range(9):
        for b in range(9):
            total = Polynomial.zero(RANK1_ALPHABET)
            for c in admissible_range(a, b):
                total = total + rank1_cf(c)
            assert rank1_cf(a) * rank1_cf(b) == total


def test_rank1_as_degenerate_rank3():
    """The label (n,0,0,n,n,n) reproduces the rank-1 function"""
    for n in range(6):
        assert to_rank1_coordinates(rank3_cf(rank1_label(n))) == rank1_cf(n)


@pytest.mark.parametrize("label, expected", [
    ((1, 0, 1), "x"),
    ((0, 1, 1), "y"),
    ((1, 1, 0), "z"),
    ((1, 1, 2), "x*y - 1/2*z"),
    ((2, 1, 1), "x*z - 1/2*y"),
    ((0, 0, 0), "1"),
])
def test_rank2_anchors(label, expected):
    """Low-order rank-2 functions in (x, y, z)"""
    assert rank2_cf(*label) == rank2(expected)


def test_rank2_swap_symmetry():
    """Exchanging the generators swaps x and y"""
    for a in range(5):
        for b in range(5):
            for c in range(5):
                if is_admissible(a, b, c):
                    assert rank2_cf(b, a, c) == swap_xy(rank2_cf(a, b, c))


# Edges of the rank-2 theta graph carry X1, X2 and I; each coordinate is
# tr(M N^-1) over a pair of edges.
PAIR_VARIABLES = {frozenset({0, 2}): "x", frozenset({1, 2}): "y", frozenset({0, 1}): "z"}


def permute_edges(p: Polynomial, sigma) -> Polynomial:
    """Coordinates of the theta graph whose edge i carries old edge sigma[i]"""
    inverse = {sigma[i]: i for i in range(3)}
    mapping = {
        name: Polynomial.variable(RANK2_ALPHABET, PAIR_VARIABLES[frozenset(inverse[k] for k in pair)])
        for pair, name in PAIR_VARIABLES.items()
    }
    return p.substitute(mapping, RANK2_ALPHABET)


RANK2_TRIPLES_UP_TO_4 = [
    (a, b, c) for a in range(5) for b in range(5) for c in range(5) if is_admissible(a, b, c)
]


@pytest.mark.parametrize("sigma", list(permutations(range(3))))
def test_rank2_permutation_symmetry(sigma):
    """Permuting the three labels permutes the pair coordinates accordingly"""
    for label in RANK2_TRIPLES_UP_TO_4:
        permuted = tuple(label[s] for s in sigma)
        assert rank2_cf(*permuted) == permute_edges(rank2_cf(*label), sigma), (label, sigma)


def four_term_expansion(a: int, b: int, c: int) -> Polynomial:
    """z * chi(a,b,c) through the (a+-1, b+-1) neighbours"""
    total = (a + b + c) // 2
    candidates = [
        ((a + 1, b + 1), Fraction(1)),
        ((a + 1, b - 1), Fraction(edge_count(a, b, c) ** 2, b * (b + 1)) if b else None),
        ((a - 1, b + 1), Fraction(edge_count(b, a, c) ** 2, a * (a + 1)) if a else None),
        ((a - 1, b - 1), Fraction((edge_count(c, a, b) * (total + 1)) ** 2, a * (a + 1) * b * (b + 1))
         if a and b else None),
    ]
    result = Polynomial.zero(RANK2_ALPHABET)
    for (a2, b2), coeff in candidates:
        if coeff is not None and is_admissible(a2, b2, c):
            result = result + rank2_cf(a2, b2, c).scale(coeff)
    return result


@pytest.mark.parametrize("c", range(6))
def test_rank2_four_term_relation(c):
    """z * chi(a,b,c) as a sum of four neighbouring functions, labels up to 5"""
    z = Polynomial.variable(RANK2_ALPHABET, "z")
    for a in range(6):
        for b in range(6):
            if is_admissible(a, b, c):
                assert z * rank2_cf(a, b, c) == four_term_expansion(a, b, c), (a, b, c)


@pytest.mark.parametrize("eigenvalue", [Fraction(2), Fraction(3, 7), Fraction(-5, 2), Fraction(11, 13)])
def test_rank1_eigenvalue_sums(eigenvalue):
    """At X = diag(l, 1/l), chi_n is the sum of l^(n-2k) for k = 0..n"""
    trace = eigenvalue + 1 / eigenvalue
    for n in range(11):
        expected = sum(eigenvalue ** (n - 2 * k) for k in range(n + 1))
        assert rank1_cf(n).evaluate({"x": trace}) == expected


def test_rank2_inadmissible():
    """Odd triples report the offending triple"""
    with pytest.raises(InadmissibleLabelError) as info:
        rank2_cf(1, 1, 1)
    assert info.value.triple == (1, 1, 1)


# ============================================================================
# Rank 3
# ============================================================================

@pytest.mark.parametrize("index", sorted(GOLDEN_ORDER_0_TO_3))
def test_golden_table(index):
    """Every function of order at most three"""
    assert rank3_cf(cfindex_to_label(*index)) == golden_polynomial(index)


def test_large_example():
    """The multiplicity (2,1) function of (3,2,2,3)"""
    label = cfindex_to_label(3, 2, 2, 3, 2, 1)
    assert label == Rank3Label(3, 2, 2, 3, 3, 5)
    assert rank3_cf(label) == poly_parse(LARGE_EXAMPLE, RANK3_ALPHABET)


def test_golden_table_is_complete():
    """The table covers exactly the enumerated indices of orders 0 to 3"""
    indices = [index for order in range(4) for index in enumerate_order(order)]
    assert sorted(indices) == sorted(GOLDEN_ORDER_0_TO_3)


def test_counts():
    """1, 3, 9, 20 functions of orders 0-3 and 2254 up to order 10"""
    assert [len(enumerate_order(s)) for s in range(4)] == [1, 3, 9, 20]
    assert sum(len(enumerate_order(s)) for s in range(11)) == 2254


def test_enumeration_order():
    """Index tuples come out sorted"""
    indices = enumerate_order(3)
    assert indices == sorted(indices)
    assert indices[0] == (0, 0, 3, 3, 1, 1)


def test_cfindex_to_label():
    """Multiplicity indices pick intermediates largest first"""
    assert cfindex_to_label(1, 1, 1, 1, 1, 2) == Rank3Label(1, 1, 1, 1, 2, 0)
    assert cfindex_to_label(1, 1, 1, 1, 2, 1) == Rank3Label(1, 1, 1, 1, 0, 2)
    with pytest.raises(IndexOutOfRangeError):
        cfindex_to_label(1, 1, 1, 2, 1, 1)
    with pytest.raises(IndexOutOfRangeError):
        cfindex_to_label(1, 1, 1, 1, 3, 1)


@pytest.mark.slow
def test_t123_degree_at_most_one():
    """Every function of order at most six is linear in t123"""
    for order in range(7):
        for index in enumerate_order(order):
            assert rank3_cf(cfindex_to_label(*index)).degree_in("t123") <= 1


def test_t123_degree_small_orders():
    """Linear in t123 through order four"""
    for order in range(5):
        for index in enumerate_order(order):
            assert rank3_cf(cfindex_to_label(*index)).degree_in("t123") <= 1


# ============================================================================
# Loops and reduction steps
# ============================================================================

@pytest.mark.parametrize("loop", [Loop.AB, Loop.CD, Loop.AEDF, Loop.BEDF, Loop.BECF, Loop.AECF])
def test_all_raising_coefficient_is_one(loop):
    """The top relabeling always has weight one"""
    spec = LOOPS[loop]
    base = Rank3Label(2, 2, 2, 2, 2, 2)
    top = base.replace(**{edge: base.get(edge) + 1 for edge in spec.edges})
    assert loop_coefficient(spec, base, top) == 1


def test_edge_pair_loops_are_non_negative():
    """(a,b) and (c,d) loop coefficients are never negative"""
    for order in range(1, 5):
        for index in enumerate_order(order):
            label = cfindex_to_label(*index)
            for loop in (Loop.AB, Loop.CD):
                for coeff, _ in multiply_simple_loop(label, LOOPS[loop]).items():
                    assert coeff > 0


def test_absent_relabeling():
    """Inadmissible targets and non-loop edges give no coefficient"""
    base = Rank3Label(1, 1, 0, 2, 2, 2)
    spec = LOOPS[Loop.AB]
    assert loop_coefficient(spec, base, Rank3Label(2, 2, 0, 2, 2, 2)) is not None
    assert loop_coefficient(spec, base, Rank3Label(2, 2, 1, 2, 2, 2)) is None
    assert loop_coefficient(spec, base, Rank3Label(1, 1, 0, 2, 2, 2)) is None


@pytest.mark.slow
@pytest.mark.parametrize("loop", RANK3_LOOPS)
def test_loop_coefficient_equals_cycle_product(loop):
    """Rational coefficients match the signed product of normalized fusion coefficients, labels up to 5"""
    spec = LOOPS[loop]
    checked = 0
    for label in admissible_labels(5):
        for candidate in relabelings(label, spec):
            coeff = loop_coefficient(spec, label, candidate)
            assert coeff == cycle_product(spec, label, candidate), (label, candidate)
            checked += coeff is not None
    assert checked > 0


def test_cycle_product_examples():
    """Known (a,b) loop values and the absent and barbell cases"""
    spec = LOOPS[Loop.AB]
    label = Rank3Label(2, 2, 2, 2, 2, 2)
    assert cycle_product(spec, label, label.replace(a=3, b=3)) == 1
    lowered_both = label.replace(a=1, b=1)
    assert cycle_product(spec, label, lowered_both) == loop_coefficient(spec, label, lowered_both) == Fraction(4, 9)
    assert cycle_product(spec, label, label.replace(a=3, b=1, c=3)) is None
    with pytest.raises(ValueError):
        cycle_product(LOOPS[Loop.BARBELL_X], BarbellLabel(1, 1, 2), BarbellLabel(2, 1, 2))


def test_mixed_ab_terms_carry_no_sign():
    """Mixed (a+1, b-1) and (a-1, b+1) terms of the (a,b) loop are unsigned.

    At (2,2,2,2,4,2) the vertex signs s_e(a,b) s_f(a,b) multiply to -1, so a
    signed expansion would give -1/3 for both mixed terms. The coefficients
    are +1/3, and the expansion agrees with the tensor contraction.
    """
    label = Rank3Label(2, 2, 2, 2, 4, 2)
    assert sign_s(label.e, label.a, label.b) * sign_s(label.f, label.a, label.b) == -1

    spec = LOOPS[Loop.AB]
    expansion = multiply_simple_loop(label, spec)
    assert expansion.coefficient(Rank3Label(3, 1, 2, 2, 4, 2)) == Fraction(1, 3)
    assert expansion.coefficient(Rank3Label(1, 3, 2, 2, 4, 2)) == Fraction(1, 3)

    for seed in (1, 2):
        triple = random_triple(seed)
        loop_trace = reduce_trace_word(spec.word).evaluate(evaluate_traces(*triple).as_assignment())
        expected = loop_trace * evaluate_tensorial(label, *triple)
        assert sum(coeff * evaluate_tensorial(term, *triple) for coeff, term in expansion.items()) == expected


@pytest.mark.parametrize("label, case, base", [
    ((1, 1, 0, 0, 0, 0), 1, (0, 0, 0, 0, 0, 0)),
    ((1, 1, 0, 2, 2, 2), 3, (0, 1, 0, 1, 1, 1)),
    ((0, 0, 1, 1, 0, 0), 2, (0, 0, 0, 0, 0, 0)),
])
def test_reduce_step_cases(label, case, base):
    """Case selection and base label"""
    step = reduce_step(Rank3Label(*label))
    assert isinstance(step, ReductionStep)
    assert step.case == case
    assert step.base == Rank3Label(*base)
    assert step.multiplier == LOOPS[step.loop.loop].word


def test_reduce_step_barbell_cases():
    """e = 0 and f = 0 fall through to barbells"""
    step = reduce_step(Rank3Label(1, 1, 1, 1, 0, 2))
    assert isinstance(step, BarbellCase)
    assert (step.case, step.barbell, step.sign) == (7, BarbellLabel(1, 1, 2), -1)
    assert dict(step.substitution)["x"] == TraceWord.parse("X1 X2^-1")

    step = reduce_step(Rank3Label(1, 1, 1, 1, 2, 0))
    assert isinstance(step, BarbellCase)
    assert (step.case, step.barbell, step.sign) == (8, BarbellLabel(1, 1, 2), -1)


def test_base_label_has_no_reduction():
    """The empty diagram is the recursion floor"""
    with pytest.raises(ReductionError):
        reduce_step(Rank3Label(0, 0, 0, 0, 0, 0))
    assert rank3_cf(Rank3Label(0, 0, 0, 0, 0, 0)) == 1


def test_inadmissible_rank3_label():
    """The violated vertex is named"""
    with pytest.raises(InadmissibleLabelError) as info:
        rank3_cf(Rank3Label(1, 1, 1, 1, 2, 1))
    assert info.value.triple == (1, 1, 1)


# ============================================================================
# Barbells
# ============================================================================

@pytest.mark.parametrize("label, expected", [
    ((1, 1, 2), "z - 1/2*x*y"),
    ((2, 1, 2), "x*z - 1/2*x^2*y"),
    ((1, 2, 2), "y*z - 1/2*x*y^2"),
    ((3, 1, 2), "x^2*z - 1/2*x^3*y + 1/3*x*y - 2/3*z"),
    ((2, 2, 2), "x*y*z - 1/2*x^2*y^2"),
    ((1, 3, 2), "y^2*z - 1/2*x*y^3 + 1/3*x*y - 2/3*z"),
    ((2, 2, 4), "z^2 - x*y*z + 1/6*x^2*y^2 + 1/3*x^2 + 1/3*y^2 - 4/3"),
])
def test_barbell_table(label, expected):
    """Barbell functions with a nonzero bar"""
    assert barbell(BarbellLabel(*label)) == rank2(expected)


def test_barbell_without_bar():
    """b = 0 is a product of rank-1 functions"""
    assert barbell(BarbellLabel(2, 1, 0)) == rank2("x^2*y - y")


def test_barbell_loop_expansion():
    """x * chi(p, c) = chi(p+1, c) + K(p) chi(p-1, c)"""
    terms = multiply_simple_loop(BarbellLabel(2, 1, 2), LOOPS[Loop.BARBELL_X]).items()
    assert terms == [(Fraction(2, 3), BarbellLabel(1, 1, 2)), (Fraction(1), BarbellLabel(3, 1, 2))]
    terms = multiply_simple_loop(BarbellLabel(1, 1, 2), LOOPS[Loop.BARBELL_X]).items()
    assert terms == [(Fraction(1), BarbellLabel(2, 1, 2))]


def test_barbell_inadmissible():
    """A bar wider than twice a loop is rejected"""
    with pytest.raises(InadmissibleLabelError):
        barbell(BarbellLabel(1, 2, 4))


# ============================================================================
# Engine cache
# ============================================================================

def test_engine_cache_export_import():
    """A fresh engine primed from an export answers without recomputing"""
    label = cfindex_to_label(2, 1, 0, 3, 1, 1)
    value = rank3_cf(label)
    fresh = RecurrenceEngine()
    assert fresh.import_cache(get_default_engine().export_cache()) == get_default_engine().cache_size()
    assert fresh.export_cache()[("rank3", label.as_tuple())] == value
    assert fresh.rank3_cf(label) == value
    fresh.clear()
    assert fresh.cache_size() == 0
