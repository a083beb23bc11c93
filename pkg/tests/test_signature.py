import random

import pytest

from sixvertex.scalar import I, ONE, W, ZERO, Scalar, rational
from sixvertex.signature import (
    CHI1,
    CHI2,
    DISEQ,
    BinarySignature,
    GeneralSignature4,
    SixVertexSignature,
    attach_binary,
    chain_n,
    compose_n,
    format_signature,
    hadamard_image,
    parse_signature,
    parse_six_vertex,
)


def sv(*vals):
    return SixVertexSignature.from_values(*vals)


def rand_six(rng, span=3):
    return sv(*(rng.randint(-span, span) for _ in range(6)))


SYMS = ["a", "b", "c", "x", "y", "z"]


class TestRotation:
    def test_quarter_turn(self):
        f = sv(1, 2, 3, 4, 5, 6)  # (a,b,c,x,y,z)
        r = f.rotate(1)
        assert r.tuple() == sv(5, 1, 6, 2, 4, 3).tuple()  # (y,a,z,b,x,c)

    def test_zero_turns(self):
        f = sv(1, 2, 3, 4, 5, 6)
        assert f.rotate(0) == f

    def test_half_turn(self):
        f = sv(1, 2, 3, 4, 5, 6)
        assert f.rotate(2) == sv(4, 5, 3, 1, 2, 6)  # (x,y,c,a,b,z)

    def test_four_turns_identity(self):
        rng = random.Random(2)
        for _ in range(20):
            f = rand_six(rng)
            assert f.rotate(4) == f

    def test_inner_pair_preserved(self):
        rng = random.Random(3)
        for _ in range(20):
            f = rand_six(rng)
            for k in range(4):
                r = f.rotate(k)
                assert {r.c, r.z} == {f.c, f.z} or (
                    r.c in (f.c, f.z) and r.z in (f.c, f.z)
                )

    def test_matches_matrix_views(self):
        # M_{x1x2,x4x3}(f^{k pi/2}) must equal the view-k matrix of f
        rng = random.Random(4)
        for _ in range(10):
            f = rand_six(rng)
            g = f.to_general()
            for k in range(4):
                assert f.rotate(k).matrix(0) == g.matrix(k)

    def test_general_rotate_agrees(self):
        rng = random.Random(5)
        for _ in range(10):
            f = rand_six(rng)
            for k in range(4):
                assert f.to_general().rotate(k) == f.rotate(k).to_general()


class TestScaleOn:
    def test_scale_x1(self):
        f = sv(1, 2, 3, 4, 5, 6)
        t = rational(7)
        assert f.scale_on(1, t) == sv(1, 2, 3, 28, 35, 42)  # (a,b,c,tx,ty,tz)

    def test_scale_x4(self):
        f = sv(1, 2, 3, 4, 5, 6)
        t = rational(7)
        assert f.scale_on(4, t) == sv(7, 2, 21, 4, 35, 6)  # (ta,b,tc,x,ty,z)

    def test_identity_scale(self):
        f = sv(1, 2, 3, 4, 5, 6)
        assert f.scale_on(2, ONE) == f


class TestComposeN:
    def test_inner_diagonal_chain(self):
        # (a,x)=(1,1), (b,y)=(b,b), (c,z)=(0,0): chain of 3 has inner diag b^3
        b = rational(5)
        f = SixVertexSignature(ONE, b, ZERO, ONE, b, ZERO)
        g = chain_n(f, 3).try_six_vertex()
        assert g is not None
        assert g.tuple() == (ONE, b ** 3, ZERO, ONE, b ** 3, ZERO)

    def test_chain_of_one(self):
        f = rand_six(random.Random(6))
        assert chain_n(f, 1) == f.to_general()

    def test_chi1_composition_unit_entries(self):
        g = compose_n(CHI1, CHI1).try_six_vertex()
        assert g is not None
        # inner and outer swap roles; entries stay units
        assert g.tuple() == tuple(
            sv(1, 0, 1, 1, 0, 1).tuple()
        )

    def test_zero_absorbs(self):
        f = rand_six(random.Random(7))
        zero = sv(0, 0, 0, 0, 0, 0)
        assert all(e.is_zero() for e in compose_n(f, zero).entries)

    def test_chain_splits(self):
        rng = random.Random(8)
        f = rand_six(rng)
        left = chain_n(f, 2)
        right = chain_n(f, 3)
        assert compose_n(left, right) == chain_n(f, 5)


class TestAttachBinary:
    def test_diseq_on_x4_x3(self):
        f = sv(1, 2, 3, 4, 5, 6)
        g = attach_binary(f, DISEQ, view=0)
        # M(f) N (0,1,1,0)^T = (0, b+c, z+y, 0)
        assert g.values() == (ZERO, rational(5), rational(11), ZERO)

    def test_diseq_on_x1_x2(self):
        f = sv(1, 2, 3, 4, 5, 6)
        g = attach_binary(f, DISEQ, view=2)
        # row side of the standard view: entries (0, b+z, c+y, 0) up to order
        vals = set(g.values())
        assert vals == {ZERO, rational(2 + 6), rational(3 + 5)}

    def test_zero_binary(self):
        f = rand_six(random.Random(9))
        zero = BinarySignature(ZERO, ZERO, ZERO, ZERO)
        assert attach_binary(f, zero).values() == (ZERO, ZERO, ZERO, ZERO)

    def test_symmetric_passthrough_equals_direct(self):
        # for g00 = g11, attaching through N equals direct attachment with
        # the two arguments swapped
        rng = random.Random(10)
        for _ in range(10):
            f = rand_six(rng).to_general()
            g = BinarySignature(
                rational(rng.randint(-3, 3)),
                rational(rng.randint(-3, 3)),
                rational(rng.randint(-3, 3)),
                ZERO,
            )
            g = BinarySignature(g.g00, g.g01, g.g10, g.g00)
            via_n = attach_binary(f, g)
            m = f.matrix(0)
            direct = []
            swapped = g.swapped().values()
            for r in range(4):
                acc = ZERO
                for k in range(4):
                    acc = acc + m[r][k] * swapped[k]
                direct.append(acc)
            assert via_n.values() == tuple(direct)


class TestHadamard:
    def test_diseq_lift(self):
        # arity-2 style check embedded at arity 4 is awkward; check the
        # stated 2-variable identity directly by a 4-term expansion
        vals = [ZERO, ONE, ONE, ZERO]
        image = []
        for y in range(4):
            acc = ZERO
            for x in range(4):
                sign = -ONE if bin(x & y).count("1") & 1 else ONE
                acc = acc + sign * vals[x]
            image.append(acc)
        assert image == [rational(2), ZERO, ZERO, rational(-2)]

    def test_zero(self):
        zero = sv(0, 0, 0, 0, 0, 0)
        assert all(e.is_zero() for e in hadamard_image(zero).entries)

    def test_symmetric_family_even_image(self):
        # a=x, b=y, c=z: all odd-weight entries of the image vanish
        rng = random.Random(11)
        for _ in range(10):
            a, b, c = (rational(rng.randint(-3, 3)) for _ in range(3))
            f = SixVertexSignature(a, b, c, a, b, c)
            img = hadamard_image(f)
            for idx in range(16):
                if bin(idx).count("1") & 1:
                    assert img.entries[idx].is_zero()

    def test_involution(self):
        rng = random.Random(12)
        for _ in range(10):
            f = rand_six(rng).to_general()
            twice = hadamard_image(hadamard_image(f))
            assert twice == f.scale(rational(16))


class TestDets:
    def test_ice(self):
        f = sv(1, 1, 1, 1, 1, 1)
        assert f.inner_outer_dets() == (ZERO, -ONE)

    def test_example(self):
        f = sv(1, 1, 2, 1, 1, 1)
        assert f.inner_outer_dets() == (-ONE, -ONE)

    def test_zero(self):
        f = sv(0, 0, 0, 0, 0, 0)
        assert f.inner_outer_dets() == (ZERO, ZERO)


class TestLiterals:
    def test_round_trip(self):
        f = sv(1, 2, 3, 4, 5, 6)
        assert parse_six_vertex(format_signature(f)) == f

    def test_parse_constants(self):
        g = parse_signature("0,1,1,0")
        assert g == DISEQ

    def test_sixteen(self):
        f = rand_six(random.Random(13)).to_general()
        assert parse_signature(format_signature(f)) == f

    def test_chi2(self):
        assert CHI2.x == -ONE and CHI2.a == ONE

    def test_bad_arity(self):
        with pytest.raises(ValueError):
            parse_signature("1,2,3")
