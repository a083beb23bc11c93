"""The complexity trichotomy for six-vertex signatures.

A signature is polynomial-time on planar graphs exactly when one of the
four conditions holds:

  C1  f is product-type or affine,
  C2  each pair (a,x), (b,y), (c,z) contains a zero,
  C3  f is a matchgate signature or a Hadamard-transformed one,
  C4  c = z = 0 and either (ax)^2 = (by)^2, or x/a, b/a, y/a are the
      torsion points x = a*i^alpha, b = a*sqrt(i)^beta, y = a*sqrt(i)^gamma
      with beta = gamma (mod 2).

C1 or C2 give polynomial time on all graphs; otherwise the non-planar
problem is #P-hard, and without any condition the planar problem is
#P-hard as well.  The verdict reports every satisfied condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .membership import is_affine, is_matchgate, is_matchgate_hat, is_product
from .signature import SixVertexSignature


class PlanarClass(Enum):
    PTIME_ALL = "PTimeAll"
    PTIME_PLANAR_ONLY = "PTimePlanarOnly"
    SHARP_P_HARD_PLANAR = "SharpPHardPlanar"


class GeneralClass(Enum):
    PTIME = "PTime"
    SHARP_P_HARD = "SharpPHard"


class Condition(Enum):
    C1_P = "C1_P"
    C1_A = "C1_A"
    C2_ZERO_PAIRS = "C2_zero_pairs"
    C3_M = "C3_M"
    C3_MHAT = "C3_Mhat"
    C4I = "C4i"
    C4II = "C4ii"


@dataclass(frozen=True)
class Verdict:
    planar_class: PlanarClass
    general_class: GeneralClass
    witnesses: frozenset[Condition]
    case_tag: str  # "I".."IV"

    def lines(self) -> list[str]:
        """Machine-readable key=value lines."""
        return [
            f"planar_class={self.planar_class.value}",
            f"general_class={self.general_class.value}",
            "witnesses=" + ",".join(sorted(w.value for w in self.witnesses)),
            f"case={self.case_tag}",
        ]


def _zero_in_each_pair(f: SixVertexSignature) -> bool:
    return (
        (f.a.is_zero() or f.x.is_zero())
        and (f.b.is_zero() or f.y.is_zero())
        and (f.c.is_zero() or f.z.is_zero())
    )


def _condition4(f: SixVertexSignature) -> tuple[bool, bool]:
    if not (f.c.is_zero() and f.z.is_zero()):
        return False, False
    ax = f.a * f.x
    by = f.b * f.y
    c4i = ax * ax == by * by
    c4ii = False
    if not f.a.is_zero() and not f.b.is_zero() and not f.y.is_zero():
        rx = (f.x / f.a).is_root_of_unity()
        rb = (f.b / f.a).is_root_of_unity()
        ry = (f.y / f.a).is_root_of_unity()
        rby = (f.b / f.y).is_root_of_unity()
        c4ii = (
            rx is not None
            and rx in (1, 2, 4)
            and rb is not None
            and ry is not None
            and rby is not None
            and rby in (1, 2, 4)
        )
    return c4i, c4ii


def case_of(f: SixVertexSignature) -> str:
    """The Case I-IV partition by zero pattern."""
    zeros = [v.is_zero() for v in f.tuple()]
    count = sum(zeros)
    az, bz, cz, xz, yz, zz = zeros
    pair_zero = (az and xz) or (bz and yz) or (cz and zz)
    one_per_pair = (az != xz) and (bz != yz) and (cz != zz)
    if count == 3 and one_per_pair:
        return "I"
    if pair_zero:
        return "II"
    if count == 2:
        return "III"
    if count == 1:
        inner_zero = cz or zz
        return "IV" if inner_zero else "III"
    return "IV"  # count == 0


def classify(f: SixVertexSignature) -> Verdict:
    witnesses = set()
    if is_product(f) is not None:
        witnesses.add(Condition.C1_P)
    if is_affine(f) is not None:
        witnesses.add(Condition.C1_A)
    if _zero_in_each_pair(f):
        witnesses.add(Condition.C2_ZERO_PAIRS)
    if is_matchgate(f):
        witnesses.add(Condition.C3_M)
    if is_matchgate_hat(f):
        witnesses.add(Condition.C3_MHAT)
    c4i, c4ii = _condition4(f)
    if c4i:
        witnesses.add(Condition.C4I)
    if c4ii:
        witnesses.add(Condition.C4II)

    general_ok = bool(
        witnesses & {Condition.C1_P, Condition.C1_A, Condition.C2_ZERO_PAIRS}
    )
    if general_ok:
        planar = PlanarClass.PTIME_ALL
    elif witnesses:
        planar = PlanarClass.PTIME_PLANAR_ONLY
    else:
        planar = PlanarClass.SHARP_P_HARD_PLANAR
    return Verdict(
        planar_class=planar,
        general_class=GeneralClass.PTIME if general_ok else GeneralClass.SHARP_P_HARD,
        witnesses=frozenset(witnesses),
        case_tag=case_of(f),
    )
