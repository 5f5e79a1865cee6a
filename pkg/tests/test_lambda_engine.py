import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

from tamelambda.errors import DomainError, HypothesisError
from tamelambda.lambda_engine import (
    FKind,
    exact_lcm_degree,
    f_poly,
    ferrero_kida,
    lambda_Q,
    lambda_quad,
    lcm_degree,
    quad_profile,
    tame_set_profile,
)

PRIMES = list(primerange(2, 10**4))


def test_f_poly_examples():
    assert f_poly(3, 5).kind is FKind.ONE
    f = f_poly(3, 7)
    assert f.kind is FKind.MINUS_1P and f.coefficients() == [-3, 1]
    g = f_poly(2, 3)
    assert g.kind is FKind.PLUS_5 and g.coefficients() == [6, 1]


def test_f_poly_expansion_matches_kind():
    f = f_poly(2, 31)  # P = 8, ell ≡ 3 mod 4
    coeffs = f.coefficients()
    assert coeffs[0] == 1 + 5**8 and coeffs[-1] == 1 and len(coeffs) == 9


def test_lcm_degree_examples():
    assert lcm_degree([f_poly(3, 7), f_poly(3, 13)]).degree == 1
    assert lcm_degree([f_poly(3, 5)]).degree == 0
    assert lcm_degree([f_poly(2, l) for l in (3, 5, 7, 31, 79)]).degree == 16
    with pytest.raises(DomainError):
        lcm_degree([f_poly(3, 7), f_poly(2, 7)])


def test_five_prime_set_has_lambda_zero():
    rep = lambda_Q(2, [3, 5, 7, 31, 79])
    assert rep.value == 0
    assert [rep.P[l] for l in (3, 5, 7, 31, 79)] == [1, 1, 2, 8, 4]


@pytest.mark.parametrize("p,S,lam", [(3, [7], 0), (3, [7, 13], 1), (2, [3, 11], 1)])
def test_lambda_Q_examples(p, S, lam):
    assert lambda_Q(p, S).value == lam


def test_lambda_Q_rejects_wild():
    with pytest.raises(DomainError):
        lambda_Q(3, [3, 7])


def test_report_terms_sum_to_value():
    rep = lambda_Q(2, [3, 7, 17, 23, 41])
    assert sum(v for _, v in rep.terms) == rep.value
    assert rep.verified


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.lists(st.sampled_from(PRIMES), max_size=5))
def test_closed_form_equals_lcm_route(p, S):
    S = [l for l in S if l != p]
    rep = lambda_Q(p, S)
    polys = [f_poly(p, l) for l in set(S)]
    assert rep.value == sum(f.degree for f in polys) - exact_lcm_degree(polys)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.lists(st.sampled_from(PRIMES[:300]), max_size=4),
       st.sampled_from(PRIMES[:300]))
def test_non_split_primes_do_not_change_lambda(p, S, extra):
    S = [l for l in S if l != p]
    if extra == p or extra % p == 1:
        return
    assert lambda_Q(p, S + [extra]).value == lambda_Q(p, S).value


@settings(max_examples=200)
@given(st.sampled_from([2, 3, 5, 7]), st.sampled_from(PRIMES))
def test_single_prime_has_lambda_zero(p, ell):
    if ell != p:
        assert lambda_Q(p, [ell]).value == 0


def test_pp_is_a_set():
    # 3 and 11 are both ≡ 3 mod 4 with P = 1; the shared factor counts once
    prof = tame_set_profile(2, [3, 11, 19])
    assert prof.PP == frozenset({1})
    assert lambda_Q(2, [3, 11, 19]).value == lambda_Q(2, [3, 11]).value + 1


def test_quad_profile_examples():
    k = quad_profile(-3, 3)
    assert k.S_k == (3,) and k.delta == 1
    assert quad_profile(-4, 2).S_k == () and quad_profile(-4, 2).delta == 0
    assert quad_profile(-20, 2).S_k == (5,)
    with pytest.raises(DomainError):
        quad_profile(-12, 2)
    with pytest.raises(DomainError):
        quad_profile(5, 2)


def test_lambda_quad_examples():
    assert lambda_quad(3, quad_profile(-3, 3), [7], lambda0=0).value == 0
    assert lambda_quad(2, quad_profile(-4, 2), [5]).value == 0
    assert lambda_quad(2, quad_profile(-20, 2), []).value == 0
    assert lambda_quad(2, quad_profile(-15, 2), []).value == 1


def test_lambda_quad_preconditions():
    with pytest.raises(HypothesisError):
        lambda_quad(3, quad_profile(-4, 3), [2], lambda0=0)
    with pytest.raises(DomainError, match="lambda_0"):
        lambda_quad(3, quad_profile(-4, 3), [7])
    with pytest.raises(HypothesisError):
        lambda_quad(2, quad_profile(-4, 2), [])


def test_inert_prime_enters_s_double_prime():
    # 11 ≡ -1 mod 3 and inert in Q(i); P_11 = 1, f_11 = 1
    rep = lambda_quad(3, quad_profile(-4, 3), [11], lambda0=0)
    assert rep.extra["S_dprime"] == [11]
    assert rep.value == 1


@pytest.mark.parametrize("d", [-15, -20, -24, -35, -39, -119, -184])
def test_p2_empty_S_is_ferrero_kida(d):
    assert lambda_quad(2, quad_profile(d, 2), []).value == ferrero_kida(d)


def test_randomized_quadratic_consistency():
    rng = random.Random(5)
    discs = [-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]
    for _ in range(300):
        p = rng.choice([2, 3, 5])
        d = rng.choice(discs)
        S = sorted({rng.choice(PRIMES[:200]) for _ in range(rng.randint(0, 4))} - {p})
        try:
            rep = lambda_quad(p, quad_profile(d, p), S, lambda0=0 if p != 2 else None)
        except HypothesisError:
            continue
        assert rep.verified and rep.value >= 0
