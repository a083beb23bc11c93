import random

from sixvertex.scalar import MU8, W, rational
from sixvertex.classify import (
    Condition,
    GeneralClass,
    PlanarClass,
    case_of,
    classify,
)
from sixvertex.membership import is_matchgate, is_product
from sixvertex.signature import SixVertexSignature


def sv(*vals):
    return SixVertexSignature.from_values(*vals)


def rand_six(rng, span=2):
    return sv(*(rng.randint(-span, span) for _ in range(6)))


class TestFixtures:
    def test_ice_point(self):
        v = classify(sv(1, 1, 1, 1, 1, 1))
        assert v.planar_class is PlanarClass.SHARP_P_HARD_PLANAR
        assert v.case_tag == "IV"
        assert not v.witnesses

    def test_tutte_weights(self):
        v = classify(sv(1, 1, 2, 1, 1, 2))
        assert v.planar_class is PlanarClass.SHARP_P_HARD_PLANAR

    def test_c4ii_point(self):
        f = SixVertexSignature.from_values(1, 0, 0, 1, 0, 0)
        f = sv(1, 1, 0, 1, 1, 0)
        f = SixVertexSignature(
            rational(1), W, rational(0), rational(1), W, rational(0)
        )
        v = classify(f)
        assert v.planar_class is PlanarClass.PTIME_PLANAR_ONLY
        assert Condition.C4II in v.witnesses
        assert v.general_class is GeneralClass.SHARP_P_HARD

    def test_all_zero_is_ptime_all(self):
        v = classify(sv(0, 0, 0, 0, 0, 0))
        assert v.planar_class is PlanarClass.PTIME_ALL

    def test_matchgate_point(self):
        v = classify(sv(1, 1, 2, 1, 1, 1))
        assert Condition.C3_M in v.witnesses
        assert v.planar_class is PlanarClass.PTIME_PLANAR_ONLY

    def test_mhat_point(self):
        v = classify(sv(0, 1, 2, 0, 1, 2))
        assert Condition.C3_MHAT in v.witnesses


class TestCaseTags:
    def test_one_zero_per_pair(self):
        assert case_of(sv(1, 0, 2, 0, 3, 0)) == "I"

    def test_zero_pair(self):
        assert case_of(sv(0, 1, 2, 0, 3, 4)) == "II"

    def test_inner_zero_case_iv(self):
        assert case_of(sv(1, 1, 0, 2, 3, 4)) == "IV"

    def test_outer_single_zero_case_iii(self):
        assert case_of(sv(0, 1, 2, 3, 4, 5)) == "III"

    def test_two_zeros_no_pair(self):
        assert case_of(sv(0, 0, 1, 2, 3, 4)) == "III"

    def test_partition_is_total(self):
        rng = random.Random(31)
        for _ in range(500):
            f = sv(*(rng.choice([0, 0, 1, 2]) for _ in range(6)))
            assert case_of(f) in {"I", "II", "III", "IV"}


class TestInvariance:
    def test_rotation_invariance(self):
        rng = random.Random(32)
        for _ in range(100):
            f = rand_six(rng)
            base = classify(f)
            for k in range(1, 4):
                v = classify(f.rotate(k))
                assert v.planar_class == base.planar_class
                assert v.general_class == base.general_class

    def test_scaling_invariance(self):
        rng = random.Random(33)
        for _ in range(60):
            f = rand_six(rng)
            lam = MU8[rng.randrange(8)] * rational(rng.randint(1, 3))
            v = classify(f.scale(lam))
            base = classify(f)
            assert v.planar_class == base.planar_class
            assert v.witnesses == base.witnesses

    def test_c4i_nonzero_subsumption(self):
        # with all four outer entries nonzero and C4i, either by = ax
        # (product-type) or by = -ax (matchgate)
        rng = random.Random(34)
        found = 0
        for _ in range(200):
            a, b, x = (rational(rng.choice([1, 2, -1, -2, 3])) for _ in range(3))
            sign = rng.choice([1, -1])
            y = rational(sign) * a * x / b
            f = SixVertexSignature(a, b, rational(0), x, y, rational(0))
            v = classify(f)
            assert Condition.C4I in v.witnesses
            if sign == 1:
                assert is_product(f) is not None
            else:
                assert is_matchgate(f)
            found += 1
        assert found == 200
