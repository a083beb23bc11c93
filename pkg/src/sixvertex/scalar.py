"""Exact arithmetic in the eighth cyclotomic field Q(w), w = zeta_8 = e^{i*pi/4}.

Elements are stored as n0 + n1*w + n2*w^2 + n3*w^3 over a common positive
denominator, with w^4 = -1.  The representation is kept gcd-reduced so that
equality and hashing are structural.  This field contains i = w^2,
sqrt(i) = w and sqrt(2) = w - w^3, which covers every constant appearing in
the six-vertex classification, in Pfaffians and in quadratic Gauss sums.

No floating point is used anywhere; ``to_complex`` exists only as a display
helper.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Union

_RatLike = Union[int, Fraction]


def _gcd_many(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, abs(v))
        if g == 1:
            return 1
    return g


class Scalar:
    """An element c0 + c1*w + c2*w^2 + c3*w^3 of Q(zeta_8), exact and immutable."""

    __slots__ = ("n0", "n1", "n2", "n3", "den")

    def __init__(self, n0: int, n1: int = 0, n2: int = 0, n3: int = 0, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            n0, n1, n2, n3, den = -n0, -n1, -n2, -n3, -den
        g = _gcd_many((n0, n1, n2, n3, den))
        if g > 1:
            n0 //= g
            n1 //= g
            n2 //= g
            n3 //= g
            den //= g
        object.__setattr__(self, "n0", n0)
        object.__setattr__(self, "n1", n1)
        object.__setattr__(self, "n2", n2)
        object.__setattr__(self, "n3", n3)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(cls, value: _RatLike) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        f = Fraction(value)
        return cls(f.numerator, 0, 0, 0, f.denominator)

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[_RatLike]) -> "Scalar":
        fs = [Fraction(c) for c in coeffs]
        if len(fs) != 4:
            raise ValueError("need exactly 4 coefficients")
        den = 1
        for f in fs:
            den = den * f.denominator // gcd(den, f.denominator)
        ns = [int(f * den) for f in fs]
        return cls(ns[0], ns[1], ns[2], ns[3], den)

    # -- views ---------------------------------------------------------

    @property
    def coefficients(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        d = self.den
        return (
            Fraction(self.n0, d),
            Fraction(self.n1, d),
            Fraction(self.n2, d),
            Fraction(self.n3, d),
        )

    def is_zero(self) -> bool:
        return self.n0 == 0 and self.n1 == 0 and self.n2 == 0 and self.n3 == 0

    def is_rational(self) -> bool:
        return self.n1 == 0 and self.n2 == 0 and self.n3 == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.n0, self.den)

    def is_real(self) -> bool:
        """True iff the value lies in the real subfield Q(sqrt(2))."""
        return self.n2 == 0 and self.n1 == -self.n3

    def real_parts(self) -> tuple[Fraction, Fraction]:
        """Return (p, q) with value = p + q*sqrt(2); requires a real value."""
        if not self.is_real():
            raise ValueError(f"{self!r} is not in the real subfield")
        return Fraction(self.n0, self.den), Fraction(self.n1, self.den)

    # -- field operations ----------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self, other
        return Scalar(
            a.n0 * b.den + b.n0 * a.den,
            a.n1 * b.den + b.n1 * a.den,
            a.n2 * b.den + b.n2 * a.den,
            a.n3 * b.den + b.n3 * a.den,
            a.den * b.den,
        )

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar(-self.n0, -self.n1, -self.n2, -self.n3, self.den)

    def __sub__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a0, a1, a2, a3 = self.n0, self.n1, self.n2, self.n3
        b0, b1, b2, b3 = other.n0, other.n1, other.n2, other.n3
        # w^4 = -1: degree-k products with k >= 4 wrap with a sign flip.
        c0 = a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1
        c1 = a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2
        c2 = a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3
        c3 = a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0
        return Scalar(c0, c1, c2, c3, self.den * other.den)

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        """Multiplicative inverse: the unique x with self*x = 1.

        Computed through the Galois conjugates sigma_k (w -> w^k, k odd):
        self * sigma_3 * sigma_5 * sigma_7 is the rational field norm.
        """
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_8)")
        t = self.galois(3) * self.galois(5) * self.galois(7)
        norm = self * t
        assert norm.is_rational() and not norm.is_zero()
        r = norm.as_rational()
        return t * Scalar(r.denominator, 0, 0, 0, r.numerator)

    def __truediv__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other) -> "Scalar":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, exponent: int) -> "Scalar":
        if exponent < 0:
            return self.inv() ** (-exponent)
        result = ONE
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- conjugation and norms -------------------------------------------

    def galois(self, k: int) -> "Scalar":
        """Apply the automorphism w -> w^k (k odd mod 8)."""
        k %= 8
        if k == 1:
            return self
        if k == 3:
            return Scalar(self.n0, self.n3, -self.n2, self.n1, self.den)
        if k == 5:
            return Scalar(self.n0, -self.n1, self.n2, -self.n3, self.den)
        if k == 7:
            return Scalar(self.n0, -self.n3, -self.n2, -self.n1, self.den)
        raise ValueError("galois automorphisms need k odd")

    def conjugate(self) -> "Scalar":
        """Complex conjugation: w -> w^7 = -w^3 extended linearly."""
        return self.galois(7)

    def abs_squared(self) -> "Scalar":
        """|self|^2 = self * conjugate(self); lies in the real subfield."""
        return self * self.conjugate()

    # -- structure tests ---------------------------------------------------

    def is_root_of_unity(self) -> Optional[int]:
        """Order of self if self is in mu_8 = {w^k}, else None.

        In Q(zeta_8) the torsion units are exactly mu_8, so the 8-way
        comparison is a complete test.
        """
        for k in range(8):
            if self == W ** k:
                return 1 if k == 0 else 8 // gcd(k, 8)
        return None

    def real_sign(self) -> int:
        """Exact sign (-1, 0, +1) for a value p + q*sqrt(2) in the real subfield."""
        p, q = self.real_parts()
        if q == 0:
            return 0 if p == 0 else (1 if p > 0 else -1)
        if p == 0:
            return 1 if q > 0 else -1
        if p > 0 and q > 0:
            return 1
        if p < 0 and q < 0:
            return -1
        # opposite signs: compare p^2 with 2 q^2 (sqrt(2) irrational, never equal)
        if p * p > 2 * q * q:
            return 1 if p > 0 else -1
        return 1 if q > 0 else -1

    # -- hashing / comparison / display -----------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (
            self.n0 == other.n0
            and self.n1 == other.n1
            and self.n2 == other.n2
            and self.n3 == other.n3
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.n0, self.n1, self.n2, self.n3, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"Scalar({self})"

    def __str__(self) -> str:
        return format_scalar(self)

    def to_complex(self) -> complex:
        """Approximate complex value, for human-facing display only."""
        root = 0.7071067811865476
        c0, c1, c2, c3 = self.coefficients
        return complex(
            float(c0) + root * (float(c1) - float(c3)),
            float(c2) + root * (float(c1) + float(c3)),
        )


def _coerce(value) -> "Scalar":
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction)):
        return Scalar.from_rational(value)
    return NotImplemented


ZERO = Scalar(0)
ONE = Scalar(1)
W = Scalar(0, 1)          # zeta_8 = sqrt(i)
I = Scalar(0, 0, 1)       # w^2
SQRT2 = Scalar(0, 1, 0, -1)  # w + w^-1 = w - w^3
MU8 = tuple(W ** k for k in range(8))


# -- scalar literal grammar ------------------------------------------------
#
#   term     := rational | rational "*" "w" "^" int | "i" | "-" term
#   expr     := term ("+" term)*
#   rational := int | int "/" posint
#
# "a - b" is accepted as shorthand for "a + -b", and a bare "w" or "w^k"
# for "1*w^k".


def parse_scalar(text: str) -> Scalar:
    s = text.strip()
    if not s:
        raise ValueError("empty scalar literal")
    # split on '+' and binary '-' at top level (no parentheses in the grammar)
    terms: list[str] = []
    current = []
    for idx, ch in enumerate(s):
        if ch == "+":
            terms.append("".join(current))
            current = []
        elif ch == "-" and current and "".join(current).strip() and not "".join(current).rstrip().endswith(("*", "^", "/")):
            terms.append("".join(current))
            current = ["-"]
        else:
            current.append(ch)
    terms.append("".join(current))
    total = ZERO
    for term in terms:
        total = total + _parse_term(term.strip())
    return total


def _parse_term(term: str) -> Scalar:
    if not term:
        raise ValueError("empty term in scalar literal")
    if term.startswith("-"):
        return -_parse_term(term[1:].strip())
    if term == "i":
        return I
    if term == "w":
        return W
    if term.startswith("w^"):
        return W ** _parse_int(term[2:])
    if "*" in term:
        coeff_text, _, w_text = term.partition("*")
        w_text = w_text.strip()
        if w_text == "i":
            power = 2
        elif w_text == "w":
            power = 1
        elif w_text.startswith("w^"):
            power = _parse_int(w_text[2:])
        else:
            raise ValueError(f"bad term {term!r} in scalar literal")
        return Scalar.from_rational(_parse_rational(coeff_text)) * W ** power
    return Scalar.from_rational(_parse_rational(term))


def _parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r} in scalar literal") from exc


def _parse_int(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError as exc:
        raise ValueError(f"bad integer {text!r} in scalar literal") from exc


def format_scalar(value: Scalar) -> str:
    """Canonical literal, round-trips through parse_scalar."""
    parts: list[str] = []
    for power, coeff in enumerate(value.coefficients):
        if coeff == 0:
            continue
        if power == 0:
            parts.append(str(coeff))
        else:
            parts.append(f"{coeff}*w^{power}")
    if not parts:
        return "0"
    return " + ".join(parts)


def rational(num: int, den: int = 1) -> Scalar:
    return Scalar.from_rational(Fraction(num, den))
