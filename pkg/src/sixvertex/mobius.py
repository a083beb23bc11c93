"""Moebius transformations over Q(zeta_8) with unit-circle analysis.

A transform z -> (a z + b)/(c z + d) with ad - bc != 0 composes as the
2x2 matrix product; infinity is a first-class point (None).  Circle
preservation is decided by sampling |phi(s)| at three unit points, since a
Moebius map is determined by three points; the preserved maps normalize to
u * (z + alpha)/(1 + conj(alpha) z) with |alpha| != 1, or to u / z.

Orders are decided inside the field: with rho the ratio of the matrix
eigenvalues, trace^2/det = 2 + rho + 1/rho, and the only torsion values
reachable over Q(zeta_8) have order 1, 2, 3, 4, 6 or 8, giving an 8-way
exact comparison.  Elliptic maps whose rho is not a torsion point have
infinite order within the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .scalar import I, ONE, SQRT2, ZERO, Scalar, rational
from .signature import SixVertexSignature

Point = Optional[Scalar]  # None encodes infinity


@dataclass(frozen=True)
class MobiusTransform:
    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar

    def __post_init__(self):
        if self.determinant().is_zero():
            raise ValueError("Moebius transform needs a nonzero determinant")

    def determinant(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def apply(self, z: Point) -> Point:
        if z is None:
            return None if self.c.is_zero() else self.a / self.c
        num = self.a * z + self.b
        den = self.c * z + self.d
        if den.is_zero():
            return None
        return num / den

    def compose(self, other: "MobiusTransform") -> "MobiusTransform":
        """self after other: (self . other)(z) = self(other(z))."""
        return MobiusTransform(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def matrix_power(self, n: int) -> "MobiusTransform":
        result = MobiusTransform(ONE, ZERO, ZERO, ONE)
        base = self
        while n:
            if n & 1:
                result = result.compose(base)
            base = base.compose(base)
            n >>= 1
        return result

    def is_projective_identity(self) -> bool:
        return (
            self.b.is_zero()
            and self.c.is_zero()
            and self.a == self.d
        )

    def proportional_to(self, other: "MobiusTransform") -> bool:
        return (
            self.a * other.b == self.b * other.a
            and self.a * other.c == self.c * other.a
            and self.a * other.d == self.d * other.a
            and self.b * other.c == self.c * other.b
            and self.b * other.d == self.d * other.b
            and self.c * other.d == self.d * other.c
        )


def from_signature(f: SixVertexSignature, which: str = "inner") -> MobiusTransform:
    """The maps attached to a six-vertex signature.

    inner: z -> (z + y*z)/(b + c*z) from the inner matrix (needs by-cz != 0);
    cross: z -> (c + x*z)/(a + z*z)... concretely (x*z + c)/(z*z + a) with
    the signature entries named as usual (needs ax - cz != 0).
    """
    if which == "inner":
        det = f.b * f.y - f.c * f.z
        if det.is_zero():
            raise ValueError("inner matrix is singular")
        return MobiusTransform(f.y, f.z, f.c, f.b)
    if which == "cross":
        det = f.a * f.x - f.c * f.z
        if det.is_zero():
            raise ValueError("cross matrix is singular")
        return MobiusTransform(f.x, f.c, f.z, f.a)
    raise ValueError("which must be 'inner' or 'cross'")


_UNIT_SAMPLES = (ONE, -ONE, I)


def preserves_unit_circle(phi: MobiusTransform) -> bool:
    """Exact test by the three sample points 1, -1, i."""
    for s in _UNIT_SAMPLES:
        image = phi.apply(s)
        if image is None or image.abs_squared() != ONE:
            return False
    return True


@dataclass(frozen=True)
class UnitCircleForm:
    alpha: Optional[Scalar]  # None for the inversion form u/z
    unit: Scalar


def unit_circle_form(phi: MobiusTransform) -> Optional[UnitCircleForm]:
    """Normalize a circle-preserving map to M(alpha, u) or u/z."""
    if not preserves_unit_circle(phi):
        return None
    if phi.a.is_zero() and phi.d.is_zero():
        return UnitCircleForm(None, phi.b / phi.c)
    if phi.a.is_zero() or phi.d.is_zero():
        return None  # cannot preserve the circle with exactly one of a,d zero
    alpha = phi.b / phi.a
    unit = phi.a / phi.d
    if phi.c / phi.d != alpha.conjugate():
        return None
    if unit.abs_squared() != ONE:
        return None
    if alpha.abs_squared() == ONE:
        return None
    return UnitCircleForm(alpha, unit)


# torsion values of 2 + rho + 1/rho for rho of each finite order
_ORDER_TABLE: list[tuple[Scalar, int]] = [
    (rational(4), 1),
    (ZERO, 2),
    (ONE, 3),
    (rational(2), 4),
    (rational(3), 6),
    (rational(2) + SQRT2, 8),
    (rational(2) - SQRT2, 8),
]


def order(phi: MobiusTransform) -> Optional[int]:
    """The order of phi in PGL_2, or None when infinite.

    Uses trace^2/det = 2 + rho + 1/rho for the eigenvalue ratio rho; the
    value determines rho's order whenever rho is a root of unity reachable
    over Q(zeta_8).
    """
    tr = phi.a + phi.d
    value = tr * tr / phi.determinant()
    for target, n in _ORDER_TABLE:
        if value == target:
            return n
    return None


def iterate_distinct(
    phi: MobiusTransform, start: Point, count: int
) -> tuple[list[Point], Optional[int]]:
    """The first `count` iterates phi^k(start), k = 0..count-1, plus the
    period when a repeat appears (poles are recorded as None, not fatal)."""
    seen: dict[Union[tuple, str], int] = {}
    out: list[Point] = []
    z = start
    period = None
    for k in range(count):
        key = "inf" if z is None else (z.n0, z.n1, z.n2, z.n3, z.den)
        if key in seen and period is None:
            period = k - seen[key]
        if key not in seen:
            seen[key] = k
        out.append(z)
        z = phi.apply(z)
    return out, period
