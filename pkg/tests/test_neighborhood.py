"""Prime selection, lifting, the invariant neighborhood and its invariants."""

import random
from fractions import Fraction

import pytest

from padicdyn.dynamics import find_periodic_point, reduce_map
from padicdyn.errors import (NoGoodPrimeError, NonUnitError,
                             ResidueMismatchError)
from padicdyn.neighborhood import (build_neighborhood, choose_good_prime,
                                   context_for_record, hensel_lift,
                                   reduced_affine_order, validate_prime)
from padicdyn.padics import INFINITY, PadicContext
from padicdyn.polynomials import RationalSelfMap
from tests.conftest import build_pipeline


def quad():
    return RationalSelfMap.from_texts(1, ["x1^2 + 1"])


def test_choose_good_prime_prefers_large_enough_primes():
    rep = choose_good_prime(quad(), (3, 50), e=1)
    assert rep.p == 5 and not rep.fallback
    assert "fallback" in rep.rejections[3]
    ok, reason, fallback = validate_prime(quad(), 3, e=1)
    assert ok and fallback
    ok, reason, fallback = validate_prime(quad(), 5, e=1)
    assert ok and not fallback


def test_choose_good_prime_rejections():
    rep = choose_good_prime(RationalSelfMap.from_texts(1, ["1/6*x1"]),
                            (3, 50))
    assert rep.p == 5
    assert "3-integral" in rep.rejections[3]
    rep2 = choose_good_prime(RationalSelfMap.from_texts(1, ["x1^3"]),
                             (3, 20))
    assert rep2.p == 5                     # 3 is inseparable for x^3
    assert "inseparable" in rep2.rejections[3]
    with pytest.raises(NoGoodPrimeError):
        choose_good_prime(RationalSelfMap.from_texts(1, ["x1^3"]), (3, 3))


def test_choose_good_prime_fallback_when_range_is_small():
    rep = choose_good_prime(quad(), (3, 4), e=1)
    assert rep.p == 3 and rep.fallback


def test_hensel_lift_conventions():
    ctx = PadicContext(3)
    rec = find_periodic_point(reduce_map(quad(), ctx), 1)
    lift_ctx = context_for_record(3, rec)
    naive = hensel_lift(rec, lift_ctx, convention="naive")
    assert naive[0] == lift_ctx.from_int(2)
    teich = hensel_lift(rec, lift_ctx)                 # default teichmuller
    assert teich[0] == lift_ctx.from_int(-1)           # ...222 in 3-adics
    assert lift_ctx.residue(teich[0]) == lift_ctx.residue(naive[0])
    with pytest.raises(ResidueMismatchError):
        hensel_lift(rec, PadicContext(5))


def test_worked_example_series():
    pipe = build_pipeline("quad_p3", lift="naive")
    nbhd = pipe.nbhd
    ctx = pipe.ctx
    H = {idx: c for idx, c in nbhd.H[0].coeffs.items()}
    assert H[(0,)] == ctx.from_int(3)
    assert H[(1,)] == ctx.from_int(4)
    assert H[(2,)] == ctx.from_int(1)
    F = {idx: c for idx, c in nbhd.F[0].coeffs.items()}
    assert F[(0,)] == ctx.from_int(1, F[(0,)].prec)
    assert F[(1,)] == ctx.from_int(4)
    assert F[(2,)] == ctx.from_int(3)
    assert F[(2,)].valuation() == 1        # divisible by r^(2-1)
    assert nbhd.affine_order == 3          # z -> z + 1 on F_3


def test_affine_order_examples():
    pipe = build_pipeline("square_p5")
    assert pipe.nbhd.affine_order == 4     # z -> 2z on F_5, order of 2
    ident = RationalSelfMap.from_texts(1, ["x1"])
    ctx = PadicContext(5)
    rec = find_periodic_point(reduce_map(ident, ctx), 1)
    lctx = context_for_record(5, rec)
    nb = build_neighborhood(ident, rec.period, hensel_lift(rec, lctx), lctx)
    assert nb.affine_order == 1
    rng = random.Random(0)
    assert reduced_affine_order(pipe.nbhd, verify_samples=10, rng=rng) == 4


def test_affine_order_brute_force_oracle():
    # independent oracle: build the permutation of F_q^n and take the lcm of
    # its cycle lengths
    from tests.conftest import brute_force_affine_order
    for name in ("quad_p3", "quad_p5", "square_p5", "cube_p5", "cube_p7",
                 "twodim_p5"):
        pipe = build_pipeline(name)
        assert pipe.ctx.residue_field.order ** pipe.nbhd.n <= 625
        assert brute_force_affine_order(pipe.nbhd) == \
            pipe.nbhd.affine_order, name


def test_affine_order_identity_through_series_route():
    # apply F via truncated-series evaluation (not exact iteration):
    # F^l_ord(z) = z mod r must still hold, and one series step agrees with
    # the exact map modulo r^cap (the truncation tail bound)
    rng = random.Random(8)
    for name in ("quad_p3", "square_p5", "twodim_p5"):
        pipe = build_pipeline(name)
        nbhd = pipe.nbhd
        ctx = pipe.ctx
        phi_exact = nbhd.iterated_local_map(1)

        def f_series(tvec):
            return tuple(s.evaluate(tvec) for s in nbhd.F)

        for _ in range(20):
            z = tuple(ctx.random_element(rng) for _ in range(nbhd.n))
            one_series = f_series(z)
            one_exact = phi_exact(z)
            for a, b in zip(one_series, one_exact):
                v = (a - b).valuation()
                assert v is INFINITY or v >= nbhd.cap, (name, v)
            cur = z
            for _ in range(nbhd.affine_order):
                cur = f_series(cur)
            for a, b in zip(cur, z):
                v = (a - b).valuation()
                assert v is INFINITY or v >= 1, (name, v)


def test_divisibility_invariant_through_cap():
    for name in ("quad_p3", "quad_p5", "square_p5", "twodim_p5"):
        pipe = build_pipeline(name)
        for series in pipe.nbhd.F:
            for idx, coeff in series.coeffs.items():
                deg = sum(idx)
                v = coeff.valuation()
                need = max(deg - 1, 0)
                assert v is INFINITY or v >= need
        for series in pipe.nbhd.H:
            const = series.constant_term().valuation()
            assert const is INFINITY or const >= 1


def test_membership_and_local_coordinates():
    pipe = build_pipeline("quad_p3", lift="naive")
    nbhd = pipe.nbhd
    ctx = pipe.ctx
    y = nbhd.center
    assert nbhd.membership(y)
    assert nbhd.membership([5])
    assert not nbhd.membership([3])
    assert nbhd.membership([Fraction(1, 2)])       # 1/2 = 2 mod 3
    assert not nbhd.membership([Fraction(1, 3)])   # not 3-integral
    rng = random.Random(1)
    for _ in range(50):
        u = [ctx.random_element(rng)]
        z = nbhd.from_local(u)
        assert nbhd.membership(z)
        back = nbhd.to_local(z)
        assert all(a == b for a, b in zip(u, back))
    with pytest.raises(ValueError):
        nbhd.to_local([ctx.from_int(3)])           # v_r(3-2) = 0


def test_invariance_and_injectivity():
    rng = random.Random(2)
    for name in ("quad_p3", "square_p5", "twodim_p5"):
        pipe = build_pipeline(name)
        nbhd = pipe.nbhd
        members = [nbhd.random_member(rng) for _ in range(12)]
        images = [nbhd.apply_fk(z) for z in members]
        for img in images:
            assert nbhd.membership(img)
        keys = set()
        for z in members:
            keys.add(tuple(c.layers for c in z))
        img_keys = set()
        for img in images:
            img_keys.add(tuple(c.layers for c in img))
        assert len(img_keys) == len(keys)


def test_rational_density_for_prime_residue_fields():
    rng = random.Random(3)
    for name in ("quad_p3", "cube_p5"):
        pipe = build_pipeline(name)
        nbhd = pipe.nbhd
        p = pipe.ctx.p
        for _ in range(20):
            z = nbhd.random_member(rng)
            for j in rng.sample(range(1, pipe.ctx.precision), 4):
                approx = [Fraction(c.layers[0][0] % p ** j) for c in z]
                assert nbhd.membership(approx)
                for w, c in zip(approx, z):
                    diff = pipe.ctx.from_rational(w) - c
                    v = diff.valuation()
                    assert v is INFINITY or v >= j


def test_ramified_neighborhood():
    pipe = build_pipeline("square_p5", e=2)
    nbhd = pipe.nbhd
    ctx = pipe.ctx
    assert ctx.e == 2
    assert nbhd.affine_order == 4
    # F = rho*t^2 + 2t: the quadratic coefficient is the uniformizer
    assert nbhd.F[0].coeffs[(2,)].valuation() == 1
    rng = random.Random(4)
    for _ in range(10):
        z = nbhd.random_member(rng)
        assert nbhd.membership(nbhd.apply_fk(z))


def test_unramified_center_neighborhood():
    pipe = build_pipeline("quad_p5")
    assert pipe.ctx.d == 2
    assert pipe.nbhd.affine_order == 12
    rng = random.Random(5)
    phi = pipe.nbhd.iterated_local_map(pipe.nbhd.affine_order)
    for _ in range(5):
        z = [pipe.ctx.random_element(rng)]
        img = phi(z)
        assert (img[0] - z[0]).valuation() >= 1
