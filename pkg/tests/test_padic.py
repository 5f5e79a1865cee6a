import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

from tamelambda.errors import DomainError, UnsupportedError
from tamelambda.padic import (
    gamma_index,
    is_fundamental_discriminant,
    kronecker,
    kronecker_char,
    mult_order,
    splitting_orbit_count,
    splitting_profile,
    teichmuller,
    vp,
)

SMALL_PRIMES = list(primerange(2, 200))


def test_vp_examples():
    assert vp(27, 3) == 3
    assert vp(1, 5) == 0
    assert vp(5328, 3) == 2
    assert vp(-12, 2) == 2


def test_vp_zero():
    with pytest.raises(DomainError, match="valuation of zero is infinite"):
        vp(0, 3)


def test_mult_order_examples():
    assert mult_order(7, 9) == 3
    assert mult_order(1, 97) == 1
    assert mult_order(2, 3) == 2
    with pytest.raises(DomainError):
        mult_order(3, 9)


@pytest.mark.parametrize("p,ell,N,P", [(3, 2, 0, 1), (3, 73, 1, 3), (2, 31, 3, 8), (3, 7, 0, 1)])
def test_splitting_profile_examples(p, ell, N, P):
    prof = splitting_profile(p, ell)
    assert (prof.N, prof.P) == (N, P)


def test_splitting_profile_rejects_ell_equal_p():
    with pytest.raises(DomainError, match="ℓ must differ from p"):
        splitting_profile(3, 3)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_profile_matches_orbit_count(p):
    for ell in SMALL_PRIMES:
        if ell == p:
            continue
        prof = splitting_profile(p, ell)
        for n in range(5):
            assert splitting_orbit_count(p, ell, n) == prof.primes_at_level(n), (p, ell, n)


def test_profile_agrees_with_square_congruence():
    # where ell ≡ ±1 mod p, N is the largest integer with 4 p^(N+1) | ell^2 - 1
    for p in (3, 5, 7):
        for ell in SMALL_PRIMES:
            if ell in (2, p) or ell % p not in (1, p - 1):
                continue
            N = splitting_profile(p, ell).N
            assert (ell * ell - 1) % (4 * p ** (N + 1)) == 0
            assert (ell * ell - 1) % (4 * p ** (N + 2)) != 0


def test_teichmuller_examples():
    assert teichmuller(1, 3, 5) == 1
    assert teichmuller(2, 3, 2) == 8
    assert teichmuller(2, 5, 2) == 7
    with pytest.raises(UnsupportedError):
        teichmuller(3, 2, 3)


@given(st.sampled_from([3, 5, 7, 11, 13]), st.integers(1, 10**6), st.integers(1, 8))
def test_teichmuller_properties(p, a, k):
    if a % p == 0:
        a += 1
    w = teichmuller(a, p, k)
    assert pow(w, p - 1, p**k) == 1
    assert (w - a) % p == 0


def test_gamma_index_examples():
    assert gamma_index(1, 3, 2) == 0
    assert gamma_index(4, 3, 1) == 1
    assert gamma_index(7, 3, 1) == 2


@settings(max_examples=200)
@given(st.sampled_from([3, 5, 7]), st.integers(1, 10**5), st.integers(1, 10**5),
       st.integers(1, 4))
def test_gamma_index_is_a_homomorphism(p, a, b, n):
    a += a % p == 0
    b += b % p == 0
    lhs = gamma_index(a * b, p, n)
    assert lhs == (gamma_index(a, p, n) + gamma_index(b, p, n)) % p**n


@given(st.sampled_from([3, 5]), st.integers(1, 10**6), st.integers(1, 7))
def test_gamma_table_and_bsgs_agree(p, a, n):
    a += a % p == 0
    assert gamma_index(a, p, n, "table") == gamma_index(a, p, n, "bsgs")


def test_kronecker_examples():
    assert kronecker(-3, 7) == 1
    assert kronecker(-4, 7) == -1
    assert kronecker(-20, 5) == 0
    with pytest.raises(DomainError):
        kronecker(-12, 5)


def test_fundamental_discriminants():
    fund = [d for d in range(-30, 0) if is_fundamental_discriminant(d)]
    assert fund == [-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]


@given(st.sampled_from([-3, -4, -7, -8, -15, -20, -23, -24, -163]),
       st.integers(1, 10**4), st.integers(1, 10**4))
def test_kronecker_char_multiplicative(d, a, b):
    assert kronecker_char(d, a * b) == kronecker_char(d, a) * kronecker_char(d, b)


def test_kronecker_reciprocity_spot_checks():
    # for odd primes q ≡ 3 mod 4, (-q / ell) = (ell / q)
    for q in (3, 7, 11, 19, 23):
        for ell in primerange(5, 200):
            if ell != q:
                assert kronecker(-q, ell) == pow(ell, (q - 1) // 2, q) % q or \
                    kronecker(-q, ell) == pow(ell, (q - 1) // 2, q) - q
