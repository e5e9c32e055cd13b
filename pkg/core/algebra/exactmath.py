"""
Exact Arithmetic Substrate

Rational scalars, sparse multivariate polynomials over named alphabets,
signed square roots of rationals, and the text/JSON polynomial formats.
"""

import json
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Literal, Mapping, Optional, Tuple, Union

logger = logging.getLogger(__name__)

BigRational = Fraction
Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class AlphabetMismatchError(ValueError):
    """Raised when two polynomials over different alphabets are combined"""
    pass


class MissingVariableError(KeyError):
    """Raised when an evaluation assignment omits a variable that occurs"""
    pass


class PolynomialParseError(ValueError):
    """Raised when serialized polynomial text or JSON cannot be read"""
    pass


class NotRationalError(ArithmeticError):
    """Raised when a radical value is not a rational number"""
    pass


# ============================================================================
# Alphabets
# ============================================================================

@dataclass(frozen=True)
class VarAlphabet:
    """Ordered, immutable list of variable names"""
    names: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Duplicate variable names in alphabet: {self.names}")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"Variable '{name}' not in alphabet {list(self.names)}") from None


RANK1_ALPHABET = VarAlphabet(("x",))
RANK2_ALPHABET = VarAlphabet(("x", "y", "z"))
RANK3_ALPHABET = VarAlphabet(("t1", "t2", "t3", "t12", "t13", "t23", "t123"))
ENTRY_ALPHABET = VarAlphabet(tuple(
    f"x{k}_{i}{j}" for k in (1, 2, 3) for i in (1, 2) for j in (1, 2)
))

KNOWN_ALPHABETS = {
    RANK1_ALPHABET.names: RANK1_ALPHABET,
    RANK2_ALPHABET.names: RANK2_ALPHABET,
    RANK3_ALPHABET.names: RANK3_ALPHABET,
    ENTRY_ALPHABET.names: ENTRY_ALPHABET,
}


def _grlex_key(exps: Exponents):
    # Higher total degree first, then lexicographically larger first.
    return (-sum(exps), tuple(-e for e in exps))


# ============================================================================
# Polynomials
# ============================================================================

class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    Terms map exponent tuples (one entry per alphabet variable) to nonzero
    Fractions and are kept in graded-lex order. Instances are immutable.
    """

    __slots__ = ("alphabet", "_terms", "_hash")

    def __init__(self, alphabet: VarAlphabet, terms: Optional[Mapping[Exponents, Scalar]] = None):
        self.alphabet = alphabet
        cleaned: Dict[Exponents, Fraction] = {}
        if terms:
            width = len(alphabet)
            for exps, coeff in terms.items():
                if len(exps) != width:
                    raise ValueError(f"Exponent vector {exps} does not match alphabet of size {width}")
                if coeff:
                    cleaned[tuple(exps)] = Fraction(coeff)
        self._terms = {e: cleaned[e] for e in sorted(cleaned, key=_grlex_key)}
        self._hash = None

    @classmethod
    def _raw(cls, alphabet: VarAlphabet, terms: Dict[Exponents, Fraction]) -> "Polynomial":
        # Terms already nonzero; only ordering is applied.
        poly = cls.__new__(cls)
        poly.alphabet = alphabet
        poly._terms = {e: terms[e] for e in sorted(terms, key=_grlex_key)}
        poly._hash = None
        return poly

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, alphabet: VarAlphabet) -> "Polynomial":
        return cls._raw(alphabet, {})

    @classmethod
    def constant(cls, alphabet: VarAlphabet, value: Scalar) -> "Polynomial":
        value = Fraction(value)
        if not value:
            return cls.zero(alphabet)
        return cls._raw(alphabet, {(0,) * len(alphabet): value})

    @classmethod
    def variable(cls, alphabet: VarAlphabet, name: str) -> "Polynomial":
        exps = [0] * len(alphabet)
        exps[alphabet.index(name)] = 1
        return cls._raw(alphabet, {tuple(exps): Fraction(1)})

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterable[Tuple[Exponents, Fraction]]:
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self.alphabet), Fraction(0))

    def degree_in(self, name: str) -> int:
        idx = self.alphabet.index(name)
        return max((e[idx] for e in self._terms), default=0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def variables(self) -> List[str]:
        """Names of variables occurring with a nonzero exponent"""
        used = set()
        for exps in self._terms:
            used.update(i for i, e in enumerate(exps) if e)
        return [self.alphabet.names[i] for i in sorted(used)]

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.alphabet == other.alphabet and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.alphabet, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.alphabet, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial({poly_serialize(self, 'text').decode()!r})"

    def __str__(self) -> str:
        return poly_serialize(self, "text").decode()

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.alphabet != self.alphabet:
                raise AlphabetMismatchError(
                    f"Cannot combine polynomials over {list(self.alphabet)} and {list(other.alphabet)}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.alphabet, other)
        raise TypeError(f"Unsupported operand type: {type(other).__name__}")

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        result = dict(self._terms)
        for exps, coeff in other._terms.items():
            value = result.get(exps, 0) + coeff
            if value:
                result[exps] = value
            else:
                result.pop(exps, None)
        return Polynomial._raw(self.alphabet, result)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.alphabet, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        result: Dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                result[exps] = result.get(exps, 0) + c1 * c2
        return Polynomial._raw(self.alphabet, {e: c for e, c in result.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("Negative powers are not polynomials")
        result = Polynomial.constant(self.alphabet, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, factor: Scalar) -> "Polynomial":
        factor = Fraction(factor)
        if not factor:
            return Polynomial.zero(self.alphabet)
        return Polynomial._raw(self.alphabet, {e: c * factor for e, c in self._terms.items()})

    # ------------------------------------------------------------------
    # Evaluation and substitution
    # ------------------------------------------------------------------

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        values = []
        for idx, name in enumerate(self.alphabet.names):
            if name in assignment:
                values.append(Fraction(assignment[name]))
            elif any(exps[idx] for exps in self._terms):
                raise MissingVariableError(f"No value provided for variable '{name}'")
            else:
                values.append(Fraction(0))
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff
            for value, power in zip(values, exps):
                if power:
                    term *= value ** power
            total += term
        return total

    def substitute(self, mapping: Mapping[str, "Polynomial"], target: VarAlphabet) -> "Polynomial":
        """Compose: replace each variable by a polynomial over `target`.

        Variables missing from `mapping` must also exist in `target` and are
        carried over unchanged.
        """
        images = []
        for name in self.alphabet.names:
            if name in mapping:
                image = mapping[name]
                if image.alphabet != target:
                    raise AlphabetMismatchError(f"Image of '{name}' is not over the target alphabet")
                images.append(image)
            else:
                images.append(Polynomial.variable(target, name))
        powers: Dict[Tuple[int, int], Polynomial] = {}

        def power(idx: int, n: int) -> Polynomial:
            key = (idx, n)
            if key not in powers:
                powers[key] = images[idx] ** n
            return powers[key]

        accumulated: Dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            term = Polynomial.constant(target, coeff)
            for idx, n in enumerate(exps):
                if n:
                    term = term * power(idx, n)
            for key, value in term._terms.items():
                accumulated[key] = accumulated.get(key, 0) + value
        return Polynomial._raw(target, {e: c for e, c in accumulated.items() if c})


# ============================================================================
# Module-level polynomial operations
# ============================================================================

def poly_arith(p: Polynomial, q: Polynomial, op: Literal["add", "sub", "mul"]) -> Polynomial:
    if p.alphabet != q.alphabet:
        raise AlphabetMismatchError(f"Alphabets differ: {list(p.alphabet)} vs {list(q.alphabet)}")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"Unknown polynomial operation: '{op}'")


def poly_eval(p: Polynomial, assignment: Mapping[str, Scalar]) -> Fraction:
    return p.evaluate(assignment)


def _format_monomial(alphabet: VarAlphabet, exps: Exponents) -> str:
    factors = []
    for name, power in zip(alphabet.names, exps):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append(f"{name}^{power}")
    return "*".join(factors)


def _format_scalar(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _to_text(p: Polynomial) -> str:
    if p.is_zero():
        return "0"
    pieces = []
    for position, (exps, coeff) in enumerate(p.items()):
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        monomial = _format_monomial(p.alphabet, exps)
        if not monomial:
            body = _format_scalar(magnitude)
        elif magnitude == 1:
            body = monomial
        else:
            body = f"{_format_scalar(magnitude)}*{monomial}"
        if position == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def _to_json(p: Polynomial) -> str:
    payload = {
        "alphabet": list(p.alphabet.names),
        "terms": [
            {
                "coeff": {"num": str(coeff.numerator), "den": str(coeff.denominator)},
                "exps": list(exps),
            }
            for exps, coeff in p.items()
        ],
    }
    return json.dumps(payload, separators=(",", ":"))


def poly_serialize(p: Polynomial, fmt: Literal["text", "json"] = "text") -> bytes:
    if fmt == "text":
        return _to_text(p).encode("utf-8")
    if fmt == "json":
        return _to_json(p).encode("utf-8")
    raise ValueError(f"Unknown serialization format: '{fmt}'")


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\^(\d+))?$")
_SCALAR = re.compile(r"^(\d+)(?:/(\d+))?$")


def _alphabet_for(names: Iterable[str]) -> VarAlphabet:
    names = tuple(names)
    return KNOWN_ALPHABETS.get(names, VarAlphabet(names))


def _guess_alphabet(text: str) -> VarAlphabet:
    symbols = set(re.findall(r"[A-Za-z][A-Za-z0-9_]*", text))
    for alphabet in (RANK1_ALPHABET, RANK2_ALPHABET, RANK3_ALPHABET, ENTRY_ALPHABET):
        if symbols <= set(alphabet.names):
            return alphabet
    raise PolynomialParseError(f"Cannot infer an alphabet for symbols {sorted(symbols)}")


def _parse_text(text: str, alphabet: Optional[VarAlphabet]) -> Polynomial:
    text = text.strip()
    if alphabet is None:
        alphabet = _guess_alphabet(text)
    if not text:
        raise PolynomialParseError("Empty polynomial text")
    if text == "0":
        return Polynomial.zero(alphabet)

    tokens = _TERM_SPLIT.split(text)
    # tokens: [first, sign, term, sign, term, ...]; leading sign gives empty first
    signed_terms = []
    if tokens[0]:
        signed_terms.append(("+", tokens[0]))
    for i in range(1, len(tokens), 2):
        signed_terms.append((tokens[i], tokens[i + 1]))

    terms: Dict[Exponents, Fraction] = {}
    for sign, body in signed_terms:
        body = body.strip()
        if not body:
            raise PolynomialParseError(f"Dangling '{sign}' in '{text}'")
        coeff = Fraction(1)
        exps = [0] * len(alphabet)
        for factor in body.split("*"):
            factor = factor.strip()
            scalar = _SCALAR.match(factor)
            if scalar:
                coeff *= Fraction(int(scalar.group(1)), int(scalar.group(2) or 1))
                continue
            match = _FACTOR.match(factor)
            if not match:
                raise PolynomialParseError(f"Unreadable factor '{factor}' in '{text}'")
            try:
                idx = alphabet.index(match.group(1))
            except KeyError as e:
                raise PolynomialParseError(str(e)) from None
            exps[idx] += int(match.group(2) or 1)
        if sign == "-":
            coeff = -coeff
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return Polynomial(alphabet, terms)


def _parse_json(text: str) -> Polynomial:
    try:
        payload = json.loads(text)
        alphabet = _alphabet_for(payload["alphabet"])
        terms = {}
        for term in payload["terms"]:
            coeff = Fraction(int(term["coeff"]["num"]), int(term["coeff"]["den"]))
            terms[tuple(int(e) for e in term["exps"])] = coeff
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise PolynomialParseError(f"Invalid polynomial JSON: {e}") from e
    return Polynomial(alphabet, terms)


def poly_parse(data: Union[bytes, str], alphabet: Optional[VarAlphabet] = None) -> Polynomial:
    """Read a polynomial from its text or JSON serialization.

    JSON input carries its own alphabet. Text input uses `alphabet`, or the
    smallest predefined alphabet containing every symbol.

    Text does not record its alphabet, so the guess can differ from the one
    the polynomial was serialized over: "0", constants and rank-2 polynomials
    in x alone all come back over RANK1_ALPHABET. Pass `alphabet` (or use
    JSON) whenever text must round-trip to an equal Polynomial.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    stripped = data.strip()
    if stripped.startswith("{"):
        return _parse_json(stripped)
    return _parse_text(stripped, alphabet)


# ============================================================================
# Signed radicals
# ============================================================================

@dataclass(frozen=True)
class RadExact:
    """The exact value sign * sqrt(radicand)"""
    sign: int
    radicand: Fraction

    def __post_init__(self):
        radicand = Fraction(self.radicand)
        object.__setattr__(self, "radicand", radicand)
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"Sign must be -1, 0 or 1, got {self.sign}")
        if radicand < 0:
            raise ValueError("Radicand must be non-negative")
        if (self.sign == 0) != (radicand == 0):
            raise ValueError("Zero value needs sign 0 and radicand 0")

    @classmethod
    def from_rational(cls, value: Scalar) -> "RadExact":
        value = Fraction(value)
        if not value:
            return cls(0, Fraction(0))
        return cls(1 if value > 0 else -1, value * value)

    @classmethod
    def sqrt_of(cls, value: Scalar) -> "RadExact":
        value = Fraction(value)
        return cls(1 if value else 0, value)

    def __mul__(self, other: "RadExact") -> "RadExact":
        return rad_mul(self, other)

    def __truediv__(self, other: "RadExact") -> "RadExact":
        if other.sign == 0:
            raise ZeroDivisionError("Division by a zero radical")
        return RadExact(self.sign * other.sign, self.radicand / other.radicand)


def rad_mul(a: RadExact, b: RadExact) -> RadExact:
    sign = a.sign * b.sign
    if not sign:
        return RadExact(0, Fraction(0))
    return RadExact(sign, a.radicand * b.radicand)


def _exact_isqrt(n: int) -> Optional[int]:
    root = math.isqrt(n)
    return root if root * root == n else None


def rad_to_rational(a: RadExact) -> Fraction:
    if a.sign == 0:
        return Fraction(0)
    num = _exact_isqrt(a.radicand.numerator)
    den = _exact_isqrt(a.radicand.denominator)
    if num is None or den is None:
        raise NotRationalError(f"sqrt({a.radicand}) is not rational")
    return a.sign * Fraction(num, den)
