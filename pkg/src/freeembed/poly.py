"""Exact univariate polynomials and rational functions in the aspect ratio ``y``.

Coefficients are ``int`` where possible and ``fractions.Fraction`` otherwise;
floating point never enters.
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

Coeff = Union[int, Fraction]


def _norm_coeff(c) -> Coeff:
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        c = Fraction(c)
        return int(c) if c.denominator == 1 else c
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class YPolynomial:
    """Polynomial in ``y`` stored as a sparse exponent -> coefficient map."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, Coeff] | Iterable[Coeff] | None = None):
        if coeffs is None:
            items: Iterable = ()
        elif isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        out: dict[int, Coeff] = {}
        for e, c in items:
            e = int(e)
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            c = _norm_coeff(c)
            if c:
                out[e] = out.get(e, 0) + c
                if not out[e]:
                    del out[e]
        self._coeffs = dict(sorted(out.items()))

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, c: Coeff) -> "YPolynomial":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: int, c: Coeff = 1) -> "YPolynomial":
        return cls({exponent: c})

    @classmethod
    def y(cls) -> "YPolynomial":
        return cls({1: 1})

    @classmethod
    def coerce(cls, value) -> "YPolynomial":
        if isinstance(value, YPolynomial):
            return value
        return cls.constant(value)

    # -- inspection -------------------------------------------------------
    @property
    def coeffs(self) -> dict[int, Coeff]:
        return dict(self._coeffs)

    def coeff(self, exponent: int) -> Coeff:
        return self._coeffs.get(exponent, 0)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return max(self._coeffs) if self._coeffs else -1

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_constant(self) -> bool:
        return self.degree <= 0

    def leading(self) -> Coeff:
        return self._coeffs[self.degree] if self._coeffs else 0

    def __call__(self, y):
        return self.evaluate(y)

    def evaluate(self, y):
        """Horner evaluation; exact for int/Fraction ``y``, float otherwise."""
        if not self._coeffs:
            return 0
        acc = 0
        for e in range(self.degree, -1, -1):
            acc = acc * y + self._coeffs.get(e, 0)
        return acc

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = YPolynomial.coerce(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return YPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return YPolynomial({e: -c for e, c in self._coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-YPolynomial.coerce(other))

    def __rsub__(self, other):
        return YPolynomial.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = YPolynomial.coerce(other)
        out: dict[int, Coeff] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return YPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers of a polynomial are supported")
        result = YPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        return RationalFunction(self) / other

    def __rtruediv__(self, other):
        return RationalFunction(YPolynomial.coerce(other)) / self

    def divmod(self, other: "YPolynomial") -> tuple["YPolynomial", "YPolynomial"]:
        """Euclidean division over the rationals."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = dict(self._coeffs)
        quot: dict[int, Coeff] = {}
        d = other.degree
        lead = Fraction(other.leading())
        while rem and max(rem) >= d:
            top = max(rem)
            factor = _norm_coeff(Fraction(rem[top]) / lead)
            shift = top - d
            quot[shift] = factor
            for e, c in other._coeffs.items():
                rem[e + shift] = rem.get(e + shift, 0) - factor * c
                if not rem[e + shift]:
                    del rem[e + shift]
        return YPolynomial(quot), YPolynomial(rem)

    def monic(self) -> "YPolynomial":
        if self.is_zero():
            return self
        lead = Fraction(self.leading())
        return YPolynomial({e: Fraction(c) / lead for e, c in self._coeffs.items()})

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, YPolynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, RationalFunction):
            return other == self
        if isinstance(other, (int, Fraction)):
            return self._coeffs == YPolynomial.constant(other)._coeffs
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    # -- serialization ----------------------------------------------------
    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for e, c in self._coeffs.items():
            neg = c < 0
            mag = -c if neg else c
            if e == 0:
                body = str(mag)
            else:
                var = "y" if e == 1 else f"y^{e}"
                if mag == 1:
                    body = var
                elif isinstance(mag, Fraction):
                    body = f"({mag}){var}"
                else:
                    body = f"{mag}{var}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"YPolynomial({self._coeffs!r})"

    def to_json_obj(self) -> dict:
        return {"coeffs": {str(e): _coeff_to_json(c) for e, c in self._coeffs.items()}}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "YPolynomial":
        return cls({int(e): _coeff_from_json(c) for e, c in obj["coeffs"].items()})

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "YPolynomial":
        return cls.from_json_obj(json.loads(text))


def _coeff_to_json(c: Coeff):
    return c if isinstance(c, int) else str(c)


def _coeff_from_json(c):
    if isinstance(c, int):
        return c
    return Fraction(c)


def poly_gcd(a: YPolynomial, b: YPolynomial) -> YPolynomial:
    """Monic gcd over Q (gcd(0, 0) is 0)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


class RationalFunction:
    """Quotient of two YPolynomials, kept gcd-reduced with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = YPolynomial.coerce(num)
        den = YPolynomial.constant(1) if den is None else YPolynomial.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = num, YPolynomial.constant(1)
            return
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = Fraction(den.leading())
        self.num = YPolynomial({e: Fraction(c) / lead for e, c in num.coeffs.items()})
        self.den = den.monic()

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls(value)

    def is_polynomial(self) -> bool:
        return self.den == YPolynomial.constant(1)

    def to_polynomial(self) -> YPolynomial:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def simplify(self):
        """Return a YPolynomial when the denominator is 1, else self."""
        return self.num if self.is_polynomial() else self

    def evaluate(self, y):
        d = self.den.evaluate(y)
        n = self.num.evaluate(y)
        if isinstance(d, int) and isinstance(n, int):
            return Fraction(n, d)
        return n / d

    __call__ = evaluate

    def __add__(self, other):
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        o = RationalFunction.coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RationalFunction.coerce(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("integer powers only")
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n)

    def __eq__(self, other):
        if isinstance(other, (RationalFunction, YPolynomial, int, Fraction)):
            o = RationalFunction.coerce(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def to_json_obj(self) -> dict:
        return {"numerator": self.num.to_json_obj(), "denominator": self.den.to_json_obj()}

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "RationalFunction":
        return cls(
            YPolynomial.from_json_obj(obj["numerator"]),
            YPolynomial.from_json_obj(obj["denominator"]),
        )


def exact_to_json(value):
    """JSON object for a YPolynomial or RationalFunction (polynomials preferred)."""
    if isinstance(value, RationalFunction):
        value = value.simplify()
    if isinstance(value, YPolynomial):
        return value.to_json_obj()
    if isinstance(value, RationalFunction):
        return value.to_json_obj()
    return YPolynomial.coerce(value).to_json_obj()


Y = YPolynomial.y()
ONE = YPolynomial.constant(1)
ZERO = YPolynomial()
