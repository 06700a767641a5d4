"""Exact Laurent polynomials in a formal q with rational exponents.

Every R-matrix entry, pairing coefficient and knot invariant in this package is
a QLaurent: a finite map exponent -> integer coefficient. Exponents are
``fractions.Fraction`` (A_n entries carry q^{1/(2(n+1))}, B/C/D quarter powers),
coefficients are Python ints.
"""

from __future__ import annotations

import cmath
import json
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Tuple, Union

from .errors import LaurentDivisionError, LaurentParseError

Exponent = Union[Fraction, int]
Scalar = Union["QLaurent", int]


class QLaurent:
    """Immutable Laurent polynomial with rational exponents and int coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Exponent, int]] = None):
        clean = {}
        if terms:
            for exp, coeff in terms.items():
                coeff = int(coeff)
                if coeff == 0:
                    continue
                key = Fraction(exp)
                clean[key] = clean.get(key, 0) + coeff
                if clean[key] == 0:
                    del clean[key]
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, clean: dict) -> "QLaurent":
        obj = cls.__new__(cls)
        obj._terms = clean
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: Exponent, coeff: int = 1) -> "QLaurent":
        if coeff == 0:
            return ZERO
        return cls._wrap({Fraction(exp): int(coeff)})

    @classmethod
    def constant(cls, value: int) -> "QLaurent":
        return cls.monomial(0, value)

    @classmethod
    def coerce(cls, value: Scalar) -> "QLaurent":
        if isinstance(value, QLaurent):
            return value
        if isinstance(value, int):
            return cls.constant(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to QLaurent")

    # -- inspection -----------------------------------------------------------

    def terms(self) -> Iterator[Tuple[Fraction, int]]:
        """(exponent, coefficient) pairs by ascending exponent."""
        for exp in sorted(self._terms):
            yield exp, self._terms[exp]

    def coefficient(self, exp: Exponent) -> int:
        return self._terms.get(Fraction(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for ±q^e, the units of the ring."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def min_exponent(self) -> Fraction:
        return min(self._terms)

    def max_exponent(self) -> Fraction:
        return max(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other: Scalar) -> "QLaurent":
        if isinstance(other, int):
            other = QLaurent.constant(other)
        elif not isinstance(other, QLaurent):
            return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for exp, coeff in other._terms.items():
            total = out.get(exp, 0) + coeff
            if total:
                out[exp] = total
            else:
                out.pop(exp, None)
        return QLaurent._wrap(out)

    __radd__ = __add__

    def __neg__(self) -> "QLaurent":
        return QLaurent._wrap({exp: -coeff for exp, coeff in self._terms.items()})

    def __sub__(self, other: Scalar) -> "QLaurent":
        if isinstance(other, int):
            other = QLaurent.constant(other)
        elif not isinstance(other, QLaurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "QLaurent":
        return QLaurent.coerce(other) - self

    def __mul__(self, other: Scalar) -> "QLaurent":
        if isinstance(other, int):
            if other == 0:
                return ZERO
            return QLaurent._wrap({exp: coeff * other for exp, coeff in self._terms.items()})
        if not isinstance(other, QLaurent):
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        if len(other._terms) == 1:
            (oexp, ocoeff), = other._terms.items()
            return QLaurent._wrap({exp + oexp: coeff * ocoeff for exp, coeff in self._terms.items()})
        if len(self._terms) == 1:
            return other * self
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                key = e1 + e2
                total = out.get(key, 0) + c1 * c2
                if total:
                    out[key] = total
                else:
                    out.pop(key, None)
        return QLaurent._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "QLaurent":
        if power < 0:
            return laurent_unit_inverse(self) ** (-power)
        result = ONE
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def bar(self) -> "QLaurent":
        """Substitute q -> q^{-1} (mirror image of an invariant)."""
        return QLaurent._wrap({-exp: coeff for exp, coeff in self._terms.items()})

    # -- comparison -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = QLaurent.constant(other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            if not self._terms:
                self._hash = hash(0)
            elif len(self._terms) == 1 and 0 in self._terms:
                # constants compare equal to ints
                self._hash = hash(self._terms[Fraction(0)])
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"QLaurent({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exp, coeff in self.terms():
            sign = "-" if coeff < 0 else "+"
            mag = abs(coeff)
            if exp == 0:
                body = str(mag)
            else:
                power = "q" if exp == 1 else f"q^({exp})"
                body = power if mag == 1 else f"{mag}*{power}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


ZERO = QLaurent()
ONE = QLaurent.constant(1)


def q(exp: Exponent, coeff: int = 1) -> QLaurent:
    """Shorthand for the monomial coeff * q^exp."""
    return QLaurent.monomial(exp, coeff)


def laurent_add(a: QLaurent, b: QLaurent) -> QLaurent:
    """Sum of two Laurent polynomials."""
    return a + b


def laurent_mul(a: QLaurent, b: QLaurent) -> QLaurent:
    """Product; exponents add exactly."""
    return a * b


def laurent_sum(values: Iterable[QLaurent]) -> QLaurent:
    """Sum of many values without intermediate objects.

    Args:
        values: any iterable of QLaurent.

    Returns:
        The total, with cancelled terms dropped.
    """
    out: dict = {}
    for value in values:
        for exp, coeff in value._terms.items():
            total = out.get(exp, 0) + coeff
            if total:
                out[exp] = total
            else:
                out.pop(exp, None)
    return QLaurent._wrap(out)


def laurent_eval_numeric(a: QLaurent, q_value: complex) -> complex:
    """Evaluate at a nonzero complex q, rational powers on the principal branch."""
    if q_value == 0:
        raise ValueError("q_value must be nonzero")
    log_q = cmath.log(complex(q_value))
    total = 0j
    for exp, coeff in a.terms():
        total += coeff * cmath.exp(log_q * float(exp))
    return total


def laurent_unit_inverse(a: QLaurent) -> QLaurent:
    if not a.is_unit():
        raise LaurentDivisionError(f"{a} is not a unit monomial")
    (exp, coeff), = a.terms()
    return QLaurent.monomial(-exp, coeff)


def laurent_div_exact(a: QLaurent, b: QLaurent) -> QLaurent:
    """Exact quotient a / b in the Laurent ring.

    Leading-term long division; the quotient exists iff the remainder reaches
    zero before its exponent span drops below the divisor's.

    Raises:
        LaurentDivisionError: b is zero or does not divide a.
    """
    if b.is_zero():
        raise LaurentDivisionError("division by zero")
    if a.is_zero():
        return ZERO
    if b.is_monomial():
        (bexp, bcoeff), = b.terms()
        out = {}
        for exp, coeff in a.terms():
            quot, rem = divmod(coeff, bcoeff)
            if rem:
                raise LaurentDivisionError(f"{b} does not divide {a}")
            out[exp - bexp] = quot
        return QLaurent._wrap(out)

    b_lead = b.max_exponent()
    b_lead_coeff = b.coefficient(b_lead)
    b_span = b_lead - b.min_exponent()
    quotient = ZERO
    remainder = a
    while remainder:
        if remainder.max_exponent() - remainder.min_exponent() < b_span:
            raise LaurentDivisionError(f"{b} does not divide {a}")
        r_lead = remainder.max_exponent()
        coeff, rem = divmod(remainder.coefficient(r_lead), b_lead_coeff)
        if rem:
            raise LaurentDivisionError(f"{b} does not divide {a}")
        step = QLaurent.monomial(r_lead - b_lead, coeff)
        quotient = quotient + step
        remainder = remainder - step * b
    return quotient


# -- serialization ---------------------------------------------------------------


def laurent_to_triples(a: QLaurent) -> list:
    """[[num, den, "coeff"], ...] by ascending exponent; coefficients as decimal strings."""
    return [[exp.numerator, exp.denominator, str(coeff)] for exp, coeff in a.terms()]


def laurent_serialize(a: QLaurent) -> str:
    """Compact JSON text of laurent_to_triples(a)."""
    return json.dumps(laurent_to_triples(a), separators=(",", ":"))


def laurent_from_triples(triples) -> QLaurent:
    """Inverse of laurent_to_triples.

    Args:
        triples: decoded JSON, a list of [num, den, coeff] with coeff an int or
            a decimal string.

    Returns:
        The polynomial.

    Raises:
        LaurentParseError: malformed triple, exponent not in lowest terms,
            zero coefficient or repeated exponent.
    """
    if not isinstance(triples, list):
        raise LaurentParseError(f"expected a list of triples, got {triples!r}")
    out = {}
    for triple in triples:
        if not isinstance(triple, list) or len(triple) != 3:
            raise LaurentParseError(f"malformed triple {triple!r}")
        num, den, coeff = triple
        if isinstance(num, bool) or isinstance(den, bool):
            raise LaurentParseError(f"malformed triple {triple!r}")
        if not isinstance(num, int) or not isinstance(den, int) or den <= 0:
            raise LaurentParseError(f"bad exponent in {triple!r}")
        exp = Fraction(num, den)
        if exp.numerator != num or exp.denominator != den:
            raise LaurentParseError(f"exponent {num}/{den} is not in lowest terms")
        try:
            value = int(coeff) if isinstance(coeff, (str, int)) and not isinstance(coeff, bool) else None
        except ValueError:
            value = None
        if value is None or value == 0:
            raise LaurentParseError(f"bad coefficient in {triple!r}")
        if exp in out:
            raise LaurentParseError(f"duplicate exponent {exp}")
        out[exp] = value
    return QLaurent._wrap(out)


def laurent_parse(text: str) -> QLaurent:
    """Parse the JSON text produced by laurent_serialize."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LaurentParseError(f"not JSON: {exc}") from exc
    return laurent_from_triples(data)


class QFraction:
    """Formal fraction num/den of QLaurent values.

    Used where the ring is not enough: the B_n middle pairing entry and the
    normalized invariants of B/C/D knots. Unit denominators are folded into the
    numerator on construction.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Scalar, den: Scalar = 1):
        num = QLaurent.coerce(num)
        den = QLaurent.coerce(den)
        if den.is_zero():
            raise LaurentDivisionError("zero denominator")
        if den.is_unit():
            num = num * laurent_unit_inverse(den)
            den = ONE
        self.num = num
        self.den = den

    def is_laurent(self) -> bool:
        return self.den == ONE

    def reduced(self) -> "QFraction":
        """Cancel the denominator when it divides the numerator exactly."""
        if self.is_laurent():
            return self
        try:
            return QFraction(laurent_div_exact(self.num, self.den))
        except LaurentDivisionError:
            return self

    def __mul__(self, other) -> "QFraction":
        other = _as_fraction(other)
        return QFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __add__(self, other) -> "QFraction":
        other = _as_fraction(other)
        if self.den == other.den:
            return QFraction(self.num + other.num, self.den)
        return QFraction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "QFraction":
        return QFraction(-self.num, self.den)

    def __sub__(self, other) -> "QFraction":
        return self + (-_as_fraction(other))

    def __truediv__(self, other) -> "QFraction":
        other = _as_fraction(other)
        if other.num.is_zero():
            raise LaurentDivisionError("division by zero")
        return QFraction(self.num * other.den, self.den * other.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, QLaurent)):
            other = QFraction(other)
        if not isinstance(other, QFraction):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        reduced = self.reduced()
        if reduced.is_laurent():
            return hash(reduced.num)
        return hash(("QFraction", reduced.num.max_exponent() - reduced.den.max_exponent()))

    def eval_numeric(self, q_value: complex) -> complex:
        return laurent_eval_numeric(self.num, q_value) / laurent_eval_numeric(self.den, q_value)

    def to_json(self) -> dict:
        return {"num": laurent_to_triples(self.num), "den": laurent_to_triples(self.den)}

    def __repr__(self) -> str:
        if self.is_laurent():
            return f"QFraction({self.num})"
        return f"QFraction(({self.num}) / ({self.den}))"


def _as_fraction(value) -> QFraction:
    if isinstance(value, QFraction):
        return value
    return QFraction(value)
