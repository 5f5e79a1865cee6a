import flint
import pytest

from tamelambda.errors import HypothesisError, ResourceError
from tamelambda.eisenstein import order_X3
from tamelambda.ffield import make_cyclotomic_ctx
from tamelambda.lambda_engine import lambda_Q
from tamelambda.padic import teichmuller
from tamelambda.ray_class import (
    cyclotomic_unit_image,
    growth_lambda,
    level0_valuation,
    ray_class_group,
    residue_targets,
    unit_power_check,
)


def test_residue_targets_examples():
    assert residue_targets(3, [7], 0).exps == [1]
    assert residue_targets(3, [7], 1).exps == [2]
    assert residue_targets(3, [5], 2).exps == []


@pytest.mark.parametrize("p,ell", [(3, 7), (3, 19), (3, 73), (5, 11), (2, 17), (2, 7)])
def test_prime_counts_and_sylow_growth(p, ell):
    prev = None
    for n in range(3):
        t = residue_targets(p, [ell], n)
        e = t.entries[0]
        assert e.primes == p ** min(n, e.profile.N)
        if p != 2 and ell % p == 1 and prev is not None and n > e.profile.N:
            assert e.a == prev + 1
        prev = e.a


def test_level_cap(monkeypatch):
    with pytest.raises(ResourceError, match="F_7"):
        residue_targets(3, [7], 9)
    monkeypatch.setenv("TAMELAMBDA_MAX_LEVEL_P3", "0")
    with pytest.raises(ResourceError):
        residue_targets(3, [7], 1)


@pytest.mark.parametrize("p,ell,n", [(3, 7, 0), (3, 7, 1), (3, 13, 1), (3, 2, 1),
                                     (2, 3, 0), (2, 7, 1), (2, 17, 2), (5, 11, 0)])
def test_norm_compatibility_of_cyclotomic_units(p, ell, n):
    ctx = make_cyclotomic_ctx(ell, p, n + 1)
    for j in range(p**n):
        prod = ctx.one
        for t in range(p):
            prod = prod * cyclotomic_unit_image(p, n + 1, j + t * p**n, ctx)
        assert prod == cyclotomic_unit_image(p, n, j, ctx, zeta=ctx.zeta**p)


def test_frobenius_commutes_with_unit_image():
    ctx = make_cyclotomic_ctx(7, 3, 2)
    for k in range(3):
        x = cyclotomic_unit_image(3, 2, k, ctx)
        y = cyclotomic_unit_image(3, 2, k, ctx, zeta=ctx.zeta.frobenius())
        assert x.frobenius() == y


def test_level0_unit_is_trivial_symbolically():
    # B_0 = Q has no units of infinite order: xi_0 must be 1 already in Z[zeta_3]
    x = flint.fmpz_poly([0, 1])
    phi3 = flint.fmpz_poly([1, 1, 1])
    omega = teichmuller(2, 3, 1)
    c = 4 * omega % 3
    e = (1 - c) * pow(2, -1, 3) % 3
    num, den = flint.fmpz_poly([1]), flint.fmpz_poly([1])
    for t in (1, omega):
        num *= x ** (t * e % 3) * (1 - x ** (t * c % 3))
        den *= 1 - x**t
    assert (num - den) % phi3 == 0
    ctx = make_cyclotomic_ctx(7, 3, 0)
    assert cyclotomic_unit_image(3, 0, 0, ctx).is_one()
    assert ray_class_group(3, [7], 0).orders == (3,)


@pytest.mark.parametrize("p,S", [(3, [7]), (3, [7, 13]), (3, [2, 5, 19]), (2, [3]),
                                 (2, [5, 7]), (2, [17]), (5, [11, 31])])
def test_level0_closed_form(p, S):
    assert ray_class_group(p, S, 0).valuation == level0_valuation(p, S)


def test_seven_is_stable_at_three():
    assert [ray_class_group(3, [7], n).order for n in range(4)] == [3, 3, 3, 3]


def test_sixty_one_stabilizes_at_nine():
    orders = [ray_class_group(3, [61], n).order for n in range(4)]
    assert orders[-1] == orders[-2] == 9


@pytest.mark.parametrize("ell", [7, 13, 31, 43, 61, 67, 79, 97])
def test_stable_order_matches_eisenstein_formula(ell):
    orders = [ray_class_group(3, [ell], n).order for n in range(4)]
    assert orders[-1] == orders[-2] == order_X3(ell).order


@pytest.mark.parametrize("ell", [3, 7, 11, 19, 23])
def test_p2_vanishing(ell):
    assert all(ray_class_group(2, [ell], n).is_trivial() for n in range(4))


@pytest.mark.parametrize("p,S", [(3, [7, 13]), (3, [7, 13, 19]), (3, [7, 19, 37]),
                                 (2, [3, 11]), (2, [3, 5, 7]), (2, [7, 23])])
def test_growth_matches_closed_form(p, S):
    e = [ray_class_group(p, S, n).valuation for n in range(4)]
    g = growth_lambda(e)
    if g.stabilized:
        assert g.lam == lambda_Q(p, S).value


def test_growth_lambda_examples():
    assert growth_lambda([1, 1, 1, 1]).lam == 0
    g = growth_lambda([1, 2, 3, 4])
    assert (g.lam, g.stabilized, g.n0) == (1, True, 0)
    assert growth_lambda([0]).insufficient
    assert not growth_lambda([0, 1, 3]).stabilized


def test_unit_power_small_levels():
    r0 = unit_power_check(3, 7, 0)
    assert r0.e == 2 and r0.verdicts == [(1, False), (2, True)]
    assert unit_power_check(3, 7, 2).all_pass
    assert unit_power_check(3, 13, 1).all_pass


def test_unit_power_roots_and_inverses_never_both_fail():
    # (1 - zeta^-1)^e = zeta^-e (1 - zeta)^e, so a root and its inverse cannot both fail
    for ell, n in [(7, 1), (43, 1), (7, 2), (13, 1)]:
        r = unit_power_check(3, ell, n)
        M = 3 ** (n + 1)
        v = dict(r.verdicts)
        assert all(v[k] or v[M - k] for k in v)


def test_unit_power_hypotheses():
    with pytest.raises(HypothesisError):
        unit_power_check(3, 19, 1)
    with pytest.raises(HypothesisError):
        unit_power_check(3, 5, 0)
    with pytest.raises(HypothesisError):
        unit_power_check(2, 5, 0)
