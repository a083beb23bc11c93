"""Six-vertex and general arity-<=4 signatures with their matrix views.

The 4x4 signature matrix convention is M_{x1x2,x4x3}: row index x1x2 and
column index x4x3 in lexicographic order (note the order reversal x4x3,
which makes planar composition a plain matrix product).  A six-vertex
signature (a,b,c,x,y,z) is

    M(f) = [[0,0,0,a],
            [0,b,c,0],
            [0,z,y,0],
            [x,0,0,0]]

with inner pair (c,z) and outer pairs (a,x), (b,y).  Rotating the four
inputs one quarter turn counterclockwise maps (a,b,c,x,y,z) to
(y,a,z,b,x,c); the inner pair stays inner under every rotation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .scalar import ONE, ZERO, Scalar, format_scalar, parse_scalar

# cyclic views: view r reads the variables starting at x_{1+r}, i.e. the
# matrix M_{x1x2,x4x3}(f^{r*pi/2}) = M of the r-times-rotated signature.
_VIEW_VARS = ((1, 2, 3, 4), (2, 3, 4, 1), (3, 4, 1, 2), (4, 1, 2, 3))


@dataclass(frozen=True)
class UnarySignature:
    u0: Scalar
    u1: Scalar

    def value(self, x: int) -> Scalar:
        return self.u1 if x else self.u0

    def values(self) -> tuple[Scalar, Scalar]:
        return (self.u0, self.u1)


@dataclass(frozen=True)
class BinarySignature:
    g00: Scalar
    g01: Scalar
    g10: Scalar
    g11: Scalar

    def value(self, x1: int, x2: int) -> Scalar:
        return (self.g00, self.g01, self.g10, self.g11)[2 * x1 + x2]

    def values(self) -> tuple[Scalar, Scalar, Scalar, Scalar]:
        return (self.g00, self.g01, self.g10, self.g11)

    def matrix(self) -> list[list[Scalar]]:
        return [[self.g00, self.g01], [self.g10, self.g11]]

    def swapped(self) -> "BinarySignature":
        """The same function with its two arguments exchanged."""
        return BinarySignature(self.g00, self.g10, self.g01, self.g11)


class GeneralSignature4:
    """Arity-4 signature as 16 values indexed by (x1,x2,x3,x4) lexicographic."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[Scalar]):
        if len(entries) != 16:
            raise ValueError("GeneralSignature4 needs 16 entries")
        object.__setattr__(self, "entries", tuple(entries))

    def __setattr__(self, name, value):
        raise AttributeError("GeneralSignature4 is immutable")

    def value(self, x1: int, x2: int, x3: int, x4: int) -> Scalar:
        return self.entries[x1 * 8 + x2 * 4 + x3 * 2 + x4]

    def __eq__(self, other) -> bool:
        return isinstance(other, GeneralSignature4) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "GeneralSignature4([" + ", ".join(format_scalar(e) for e in self.entries) + "])"

    def support(self) -> list[tuple[int, int, int, int]]:
        out = []
        for idx, e in enumerate(self.entries):
            if not e.is_zero():
                out.append(((idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1))
        return out

    def matrix(self, view: int = 0) -> list[list[Scalar]]:
        """The 4x4 matrix M_{x_i x_j, x_l x_k} for the cyclic view (i,j,k,l)."""
        i, j, k, l = _VIEW_VARS[view % 4]
        m = [[ZERO] * 4 for _ in range(4)]
        for r1 in range(2):
            for r2 in range(2):
                for c1 in range(2):
                    for c2 in range(2):
                        assign = [0] * 5
                        assign[i], assign[j], assign[l], assign[k] = r1, r2, c1, c2
                        m[2 * r1 + r2][2 * c1 + c2] = self.value(
                            assign[1], assign[2], assign[3], assign[4]
                        )
        return m

    def rotate(self, quarter_turns: int = 1) -> "GeneralSignature4":
        """Cyclic input rotation: result(x1,x2,x3,x4) for view-shifted variables."""
        r = quarter_turns % 4
        entries = []
        for idx in range(16):
            bits = ((idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
            # rotated signature reads old variable r+t at new slot t
            old = [0] * 4
            for t in range(4):
                old[(t + r) % 4] = bits[t]
            entries.append(self.value(*old))
        return GeneralSignature4(entries)

    def flip_variable(self, var: int) -> "GeneralSignature4":
        """Compose one variable with Disequality: negate that input."""
        entries = [ZERO] * 16
        shift = (8, 4, 2, 1)[var - 1]
        for idx in range(16):
            entries[idx] = self.entries[idx ^ shift]
        return GeneralSignature4(entries)

    def scale(self, factor: Scalar) -> "GeneralSignature4":
        return GeneralSignature4([factor * e for e in self.entries])

    def try_six_vertex(self) -> Optional["SixVertexSignature"]:
        """Downcast when supported on the six weight-2 patterns of M(f)."""
        six = {
            (0, 0, 1, 1): "a",
            (0, 1, 1, 0): "b",
            (0, 1, 0, 1): "c",
            (1, 1, 0, 0): "x",
            (1, 0, 0, 1): "y",
            (1, 0, 1, 0): "z",
        }
        vals = {}
        for idx, e in enumerate(self.entries):
            bits = ((idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
            if bits in six:
                vals[six[bits]] = e
            elif not e.is_zero():
                return None
        return SixVertexSignature(
            vals["a"], vals["b"], vals["c"], vals["x"], vals["y"], vals["z"]
        )


@dataclass(frozen=True)
class SixVertexSignature:
    a: Scalar
    b: Scalar
    c: Scalar
    x: Scalar
    y: Scalar
    z: Scalar

    @classmethod
    def from_values(cls, a, b, c, x, y, z) -> "SixVertexSignature":
        conv = Scalar.from_rational
        return cls(conv(a), conv(b), conv(c), conv(x), conv(y), conv(z))

    def tuple(self) -> tuple[Scalar, ...]:
        return (self.a, self.b, self.c, self.x, self.y, self.z)

    def value(self, x1: int, x2: int, x3: int, x4: int) -> Scalar:
        pattern = (x1, x2, x3, x4)
        table = {
            (0, 0, 1, 1): self.a,
            (0, 1, 1, 0): self.b,
            (0, 1, 0, 1): self.c,
            (1, 1, 0, 0): self.x,
            (1, 0, 0, 1): self.y,
            (1, 0, 1, 0): self.z,
        }
        return table.get(pattern, ZERO)

    def to_general(self) -> GeneralSignature4:
        entries = []
        for idx in range(16):
            entries.append(
                self.value((idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
            )
        return GeneralSignature4(entries)

    def rotate(self, quarter_turns: int = 1) -> "SixVertexSignature":
        """One quarter turn maps (a,b,c,x,y,z) to (y,a,z,b,x,c)."""
        f = self
        for _ in range(quarter_turns % 4):
            f = SixVertexSignature(f.y, f.a, f.z, f.b, f.x, f.c)
        return f

    def matrix(self, view: int = 0) -> list[list[Scalar]]:
        return self.to_general().matrix(view)

    def scale(self, factor: Scalar) -> "SixVertexSignature":
        return SixVertexSignature(*(factor * v for v in self.tuple()))

    def scale_on(self, variable: int, t: Scalar) -> "SixVertexSignature":
        """Multiply by t exactly the entries with the chosen variable = 1."""
        if variable not in (1, 2, 3, 4):
            raise ValueError("variable must be 1..4")
        vals = []
        for pattern, v in zip(_SIX_PATTERNS, self.tuple()):
            vals.append(t * v if pattern[variable - 1] else v)
        return SixVertexSignature(*vals)

    def inner_outer_dets(self) -> tuple[Scalar, Scalar]:
        """(det M_In, det M_Out) = (by - cz, -ax)."""
        det_in = self.b * self.y - self.c * self.z
        det_out = -(self.a * self.x)
        return det_in, det_out

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.tuple())

    def nonzero_count(self) -> int:
        return sum(0 if v.is_zero() else 1 for v in self.tuple())


_SIX_PATTERNS = (
    (0, 0, 1, 1),
    (0, 1, 1, 0),
    (0, 1, 0, 1),
    (1, 1, 0, 0),
    (1, 0, 0, 1),
    (1, 0, 1, 0),
)


# -- named constants ---------------------------------------------------------

DISEQ = BinarySignature(ZERO, ONE, ONE, ZERO)
EQ2 = BinarySignature(ONE, ZERO, ZERO, ONE)

# chi_1 and chi_2: the auxiliary interpolation targets with unit entries
CHI1 = SixVertexSignature.from_values(1, 1, 0, 1, 1, 0)
CHI2 = SixVertexSignature.from_values(1, 1, 0, -1, 1, 0)

N_MATRIX = [
    [ONE if r + c == 3 else ZERO for c in range(4)] for r in range(4)
]  # double Disequality (x1 != x4) and (x2 != x3), the 4x4 reversal


def mat_mul(a: list[list[Scalar]], b: list[list[Scalar]]) -> list[list[Scalar]]:
    rows, mid, cols = len(a), len(b), len(b[0])
    out = [[ZERO] * cols for _ in range(rows)]
    for i in range(rows):
        for k in range(mid):
            aik = a[i][k]
            if aik.is_zero():
                continue
            for j in range(cols):
                if not b[k][j].is_zero():
                    out[i][j] = out[i][j] + aik * b[k][j]
    return out


def general_from_matrix(m: list[list[Scalar]]) -> GeneralSignature4:
    """Inverse of GeneralSignature4.matrix(view=0)."""
    entries = [ZERO] * 16
    for r1 in range(2):
        for r2 in range(2):
            for c1 in range(2):
                for c2 in range(2):
                    # row x1x2, column x4x3
                    entries[r1 * 8 + r2 * 4 + c2 * 2 + c1] = m[2 * r1 + r2][2 * c1 + c2]
    return GeneralSignature4(entries)


def compose_n(
    f1: SixVertexSignature | GeneralSignature4,
    f2: SixVertexSignature | GeneralSignature4,
    view1: int = 0,
    view2: int = 0,
) -> GeneralSignature4:
    """Join two arity-4 signatures through the double Disequality N.

    The result has matrix M_view1(f1) * N * M_view2(f2); its own variables
    are the two row variables of the first view followed by the two free
    column variables of the second, which stays planar and counterclockwise.
    """
    m1 = _as_general(f1).matrix(view1)
    m2 = _as_general(f2).matrix(view2)
    return general_from_matrix(mat_mul(mat_mul(m1, N_MATRIX), m2))


def chain_n(f: SixVertexSignature | GeneralSignature4, copies: int) -> GeneralSignature4:
    """A chain of `copies` signatures linked by N: M(f) (N M(f))^{copies-1}."""
    if copies < 1:
        raise ValueError("need at least one copy")
    result = _as_general(f)
    for _ in range(copies - 1):
        result = compose_n(result, f)
    return result


def attach_binary(
    f: SixVertexSignature | GeneralSignature4,
    g: BinarySignature,
    view: int = 0,
) -> BinarySignature:
    """Contract the column pair of M_view(f) with g through N.

    Returns the binary signature on the two row variables of the view:
    the vector M_view(f) * N * (g00,g01,g10,g11)^T.
    """
    m = _as_general(f).matrix(view)
    vec = list(g.values())
    nvec = list(reversed(vec))  # N * g
    out = []
    for r in range(4):
        acc = ZERO
        for k in range(4):
            acc = acc + m[r][k] * nvec[k]
        out.append(acc)
    return BinarySignature(*out)


def hadamard_image(f: GeneralSignature4 | SixVertexSignature) -> GeneralSignature4:
    """Unnormalized Hadamard transform: fhat(y) = sum_x (-1)^{<x,y>} f(x)."""
    g = _as_general(f)
    entries = []
    for yidx in range(16):
        acc = ZERO
        for xidx in range(16):
            term = g.entries[xidx]
            if term.is_zero():
                continue
            if bin(xidx & yidx).count("1") & 1:
                acc = acc - term
            else:
                acc = acc + term
        entries.append(acc)
    return GeneralSignature4(entries)


def _as_general(f) -> GeneralSignature4:
    if isinstance(f, SixVertexSignature):
        return f.to_general()
    if isinstance(f, GeneralSignature4):
        return f
    raise TypeError(f"not an arity-4 signature: {f!r}")


# -- literals ----------------------------------------------------------------


def parse_six_vertex(text: str) -> SixVertexSignature:
    """Comma list "a,b,c,x,y,z" of scalar literals."""
    parts = text.split(",")
    if len(parts) != 6:
        raise ValueError("six-vertex literal needs 6 comma-separated scalars")
    return SixVertexSignature(*(parse_scalar(p) for p in parts))


def parse_signature(text: str):
    """Signature literal with 2, 4, 6 or 16 scalar components."""
    parts = [p for p in text.split(",")]
    vals = [parse_scalar(p) for p in parts]
    if len(vals) == 2:
        return UnarySignature(*vals)
    if len(vals) == 4:
        return BinarySignature(*vals)
    if len(vals) == 6:
        return SixVertexSignature(*vals)
    if len(vals) == 16:
        return GeneralSignature4(vals)
    raise ValueError(f"signature literal needs 2, 4, 6 or 16 scalars, got {len(vals)}")


def format_signature(sig) -> str:
    if isinstance(sig, UnarySignature):
        vals: Iterable[Scalar] = sig.values()
    elif isinstance(sig, BinarySignature):
        vals = sig.values()
    elif isinstance(sig, SixVertexSignature):
        vals = sig.tuple()
    elif isinstance(sig, GeneralSignature4):
        vals = sig.entries
    else:
        raise TypeError(f"not a signature: {sig!r}")
    return ",".join(format_scalar(v) for v in vals)
