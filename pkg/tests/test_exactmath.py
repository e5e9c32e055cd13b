#!/usr/bin/env python3
"""
Tests for exact polynomial arithmetic, serialization and signed radicals
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import json
from fractions import Fraction

import numpy as np
import pytest

from core.algebra.exactmath import (
    ENTRY_ALPHABET,
    RANK1_ALPHABET,
    RANK2_ALPHABET,
    RANK3_ALPHABET,
    AlphabetMismatchError,
    MissingVariableError,
    NotRationalError,
    Polynomial,
    PolynomialParseError,
    RadExact,
    poly_arith,
    poly_eval,
    poly_parse,
    poly_serialize,
    rad_mul,
    rad_to_rational,
)

LARGE_EXAMPLE = (
    "1/30*t2^2*t1^3 + 4/15*t2^2*t3^2*t1^3 - 1/5*t3^2*t1^3 - 1/5*t2*t3*t23*t1^3 + 2/15*t1^3"
    " - 2/15*t2*t3^2*t12*t1^2 - 7/10*t2^2*t3*t13*t1^2 + 7/15*t3*t13*t1^2 + 1/5*t3*t12*t23*t1^2"
    " + 3/10*t2*t13*t23*t1^2 + 2/3*t2*t3*t123*t1^2 - 1/3*t23*t123*t1^2 - 1/6*t2^2*t1"
    " + 2/15*t2^2*t3^2*t1 + 1/15*t3^2*t1 - 2/15*t3^2*t12^2*t1 - 1/30*t12^2*t1 + 2/5*t2^2*t13^2*t1"
    " - 4/15*t13^2*t1 + 7/30*t23^2*t1 - 1/3*t2*t3*t12*t13*t1 - 1/2*t2*t3*t23*t1"
    " + 1/30*t12*t13*t23*t1 + 1/3*t3*t12*t123*t1 - 1/2*t2*t13*t123*t1 - 1/15*t1"
    " + 4/15*t2*t12*t13^2 + 4/15*t2*t3^2*t12 - 1/10*t2*t12 + 1/30*t3*t12^2*t13"
    " + 2/15*t2^2*t3*t13 - 1/10*t3*t13 - 7/30*t3*t12*t23 + 2/15*t2*t13*t23"
    " - 1/3*t2*t3*t123 - 1/6*t12*t13*t123 + 1/6*t23*t123"
)


def x() -> Polynomial:
    return Polynomial.variable(RANK1_ALPHABET, "x")


def test_coefficients_are_reduced_and_zero_terms_dropped():
    """Coefficients are stored in lowest terms and cancelling terms vanish"""
    p = Polynomial(RANK1_ALPHABET, {(1,): Fraction(2, 4), (0,): 0})
    assert p.terms == {(1,): Fraction(1, 2)}
    assert (x() - x()).is_zero()
    assert str(x() - x()) == "0"


@pytest.mark.parametrize("text, canonical", [
    ("t12 + t1*t2", "t1*t2 + t12"),
    ("t2 + t1", "t1 + t2"),
    ("1/2*t12 + 1/2*t1*t2", "1/2*t1*t2 + 1/2*t12"),
    ("-1 + t1^2", "t1^2 - 1"),
    ("t3*t12 - t1*t2*t3", "-t1*t2*t3 + t3*t12"),
])
def test_text_is_graded_lex(text, canonical):
    """Higher total degree first, then lexicographically larger exponents"""
    assert str(poly_parse(text, RANK3_ALPHABET)) == canonical


def test_large_example_serialization_round_trips():
    """Both formats reproduce the identical polynomial"""
    p = poly_parse(LARGE_EXAMPLE, RANK3_ALPHABET)
    assert len(p) == 37
    assert poly_parse(poly_serialize(p, "text"), RANK3_ALPHABET) == p
    assert poly_parse(poly_serialize(p, "json")) == p
    assert poly_serialize(p, "text") == poly_serialize(poly_parse(poly_serialize(p, "text"), RANK3_ALPHABET), "text")


def test_json_schema():
    """Alphabet list and terms with decimal-string numerators and denominators"""
    p = poly_parse("1/2*t1*t2 + 1/2*t12", RANK3_ALPHABET)
    payload = json.loads(poly_serialize(p, "json"))
    assert payload["alphabet"] == list(RANK3_ALPHABET.names)
    assert payload["terms"][0] == {"coeff": {"num": "1", "den": "2"}, "exps": [1, 1, 0, 0, 0, 0, 0]}
    assert payload["terms"][1]["exps"] == [0, 0, 0, 1, 0, 0, 0]


def test_arithmetic():
    """Sum, difference and product over a shared alphabet"""
    p = poly_parse("x + 1", RANK1_ALPHABET)
    q = poly_parse("x - 1", RANK1_ALPHABET)
    assert poly_arith(p, q, "mul") == poly_parse("x^2 - 1", RANK1_ALPHABET)
    assert poly_arith(p, q, "add") == x() * 2
    assert poly_arith(p, q, "sub") == 2
    assert p ** 3 == poly_parse("x^3 + 3*x^2 + 3*x + 1", RANK1_ALPHABET)


def test_alphabet_mismatch():
    """Polynomials over different alphabets do not combine"""
    with pytest.raises(AlphabetMismatchError):
        poly_arith(x(), Polynomial.variable(RANK2_ALPHABET, "x"), "add")


def test_evaluation():
    """Exact evaluation and missing variables"""
    p = poly_parse("x^2 - 1", RANK1_ALPHABET)
    assert poly_eval(p, {"x": Fraction(5, 2)}) == Fraction(21, 4)
    with pytest.raises(MissingVariableError):
        poly_eval(p, {})


def test_substitution():
    """Composition into another alphabet"""
    p = poly_parse("x^2 - 1", RANK1_ALPHABET)
    y = Polynomial.variable(RANK2_ALPHABET, "y")
    assert p.substitute({"x": y + 1}, RANK2_ALPHABET) == poly_parse("y^2 + 2*y", RANK2_ALPHABET)


@pytest.mark.parametrize("text", ["t1 + + t2", "t1*q9", "", "t1 ^ 2 +"])
def test_parse_errors(text):
    """Malformed text is rejected"""
    with pytest.raises(PolynomialParseError):
        poly_parse(text, RANK3_ALPHABET if text.startswith("t1 ^") else None)


def test_radicals():
    """Products of square roots collapse to rationals when possible"""
    root2 = RadExact.sqrt_of(2)
    root8 = RadExact.sqrt_of(8)
    assert rad_to_rational(rad_mul(root2, root8)) == 4
    assert rad_to_rational(RadExact.from_rational(Fraction(-3, 7))) == Fraction(-3, 7)
    assert rad_to_rational(RadExact.sqrt_of(Fraction(9, 4))) == Fraction(3, 2)
    with pytest.raises(NotRationalError):
        rad_to_rational(root2)


def random_polynomial(rng, alphabet, max_terms=6, max_exp=3):
    """Up to max_terms terms with signed rational coefficients"""
    terms = {}
    for _ in range(int(rng.integers(0, max_terms + 1))):
        exps = tuple(int(e) for e in rng.integers(0, max_exp + 1, size=len(alphabet)))
        num = int(rng.integers(-40, 41))
        den = int(rng.integers(1, 25))
        terms[exps] = Fraction(num, den)
    return Polynomial(alphabet, terms)


ALL_ALPHABETS = [RANK1_ALPHABET, RANK2_ALPHABET, RANK3_ALPHABET, ENTRY_ALPHABET]


@pytest.mark.parametrize("alphabet", ALL_ALPHABETS, ids=lambda a: f"{len(a)}vars")
def test_serialization_round_trips_random_polynomials(alphabet):
    """1000 random polynomials per alphabet through text and JSON"""
    rng = np.random.default_rng(len(alphabet))
    for _ in range(1000):
        p = random_polynomial(rng, alphabet)
        assert poly_parse(poly_serialize(p, "text"), alphabet) == p
        assert poly_parse(poly_serialize(p, "json")) == p


@pytest.mark.parametrize("alphabet", ALL_ALPHABETS, ids=lambda a: f"{len(a)}vars")
def test_ring_axioms_on_random_polynomials(alphabet):
    """Associativity, commutativity and distributivity hold exactly"""
    rng = np.random.default_rng(100 + len(alphabet))
    zero = Polynomial.zero(alphabet)
    one = Polynomial.constant(alphabet, 1)
    for _ in range(50):
        p, q, r = (random_polynomial(rng, alphabet, max_terms=4, max_exp=2) for _ in range(3))
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p + zero == p and p * one == p
        assert (p - p).is_zero()


@pytest.mark.parametrize("text, alphabet", [
    ("0", RANK2_ALPHABET),
    ("0", RANK3_ALPHABET),
    ("3/2", RANK3_ALPHABET),
    ("x^2 - 1", RANK2_ALPHABET),
])
def test_text_without_alphabet_guesses_smallest(text, alphabet):
    """Text parsing without an alphabet falls back to the smallest one that fits"""
    p = poly_parse(text, alphabet)
    guessed = poly_parse(poly_serialize(p, "text"))
    assert guessed.alphabet == RANK1_ALPHABET
    assert guessed != p
    assert poly_parse(poly_serialize(p, "text"), alphabet) == p
    assert poly_parse(poly_serialize(p, "json")) == p
