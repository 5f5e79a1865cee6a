"""Integer and p-adic residue primitives.

Everything here works on plain Python integers; p-adic quantities are
represented by residues modulo p**k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from sympy import factorint, isprime
from sympy.ntheory import n_order

from .errors import DomainError, UnsupportedError

# gamma_index switches from a full table to baby-step/giant-step above this
_EXHAUSTIVE_GAMMA_LIMIT = 3**6


def require_prime(n: int, name: str = "p") -> None:
    if not isinstance(n, int) or not isprime(n):
        raise DomainError(f"{name}={n!r} is not a prime")


def vp(x: int, p: int) -> int:
    """Exponent of the prime ``p`` in the nonzero integer ``x``."""
    if x == 0:
        raise DomainError("valuation of zero is infinite")
    x = abs(x)
    e = 0
    # strip large powers first so huge p-power factors stay cheap
    step, pk = 1, p
    while x % pk == 0:
        x //= pk
        e += step
        step, pk = step * 2, pk * pk
    while x % p == 0:
        x //= p
        e += 1
    return e


def mult_order(a: int, m: int) -> int:
    """Least e >= 1 with a**e == 1 (mod m)."""
    if m < 2:
        raise DomainError("modulus must be at least 2")
    if math.gcd(a, m) != 1:
        raise DomainError(f"{a} is not invertible modulo {m}")
    return int(n_order(a % m, m))


def root_order(p: int, n: int) -> int:
    """Order of the canonical root of unity used at level ``n``.

    The n-th layer of the cyclotomic Z_p-extension sits inside Q(zeta_M)
    with M = p**(n+1) for odd p and M = 2**(n+2) for p = 2.
    """
    return 2 ** (n + 2) if p == 2 else p ** (n + 1)


@dataclass(frozen=True)
class SplittingProfile:
    """Splitting data of ``ell`` in the cyclotomic Z_p-extension of Q.

    ``P = p**N`` is the number of primes of the infinite layer above ``ell``;
    ``N`` is the level from which ``ell`` stops splitting.
    """

    p: int
    ell: int
    N: int
    P: int
    ell_mod_p: int
    ell_mod_4: int

    def primes_at_level(self, n: int) -> int:
        return self.p ** min(n, self.N)


@lru_cache(maxsize=None)
def splitting_profile(p: int, ell: int) -> SplittingProfile:
    require_prime(p, "p")
    require_prime(ell, "ell")
    if ell == p:
        raise DomainError("ℓ must differ from p")
    if p == 2:
        N = vp(ell * ell - 1, 2) - 3
    else:
        d = mult_order(ell, p)
        N = vp(ell**d - 1, p) - 1
    return SplittingProfile(p=p, ell=ell, N=N, P=p**N,
                            ell_mod_p=ell % p, ell_mod_4=ell % 4)


def splitting_orbit_count(p: int, ell: int, n: int) -> int:
    """Brute-force number of primes above ``ell`` in the n-th layer.

    Counts orbits of multiplication by ``ell`` on (Z/M)^x modulo its
    torsion subgroup (the Teichmüller lifts for odd p, {±1} for p = 2),
    which is Gal(B_n/Q).  Independent of :func:`splitting_profile`.
    """
    M = root_order(p, n)
    units = [a for a in range(1, M) if a % p]
    if p == 2:
        torsion = {1, M - 1}
    else:
        torsion = {a for a in units if pow(a, p - 1, M) == 1}
    # canonical representative of a torsion coset
    rep = {a: min(a * t % M for t in torsion) for a in units}
    classes = set(rep.values())
    seen: set[int] = set()
    orbits = 0
    for c in sorted(classes):
        if c in seen:
            continue
        orbits += 1
        x = c
        while x not in seen:
            seen.add(x)
            x = rep[x * ell % M]
    return orbits


def teichmuller(a: int, p: int, k: int) -> int:
    """Teichmüller lift of ``a`` modulo p**k (odd p only)."""
    if p == 2:
        raise UnsupportedError("Teichmüller lifts are only provided for odd p")
    if k < 1:
        raise DomainError("precision must be at least 1")
    if a % p == 0:
        raise DomainError(f"{a} is divisible by {p}")
    pk = p**k
    x = a % pk
    while True:
        y = pow(x, p, pk)
        if y == x:
            return x
        x = y


@lru_cache(maxsize=None)
def primitive_root_mod(p: int) -> int:
    """Least primitive root modulo the prime ``p``."""
    if p == 2:
        return 1
    fs = list(factorint(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in fs):
            return g
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def teichmuller_group(p: int, k: int) -> tuple[int, ...]:
    """The p-1 Teichmüller lifts modulo p**k, as powers of a fixed omega."""
    w = teichmuller(primitive_root_mod(p), p, k)
    pk = p**k
    return tuple(pow(w, i, pk) for i in range(p - 1))


@lru_cache(maxsize=64)
def gamma_table(p: int, n: int) -> dict[int, int]:
    """Map every unit residue r mod p**(n+1) to gamma_index(r, p, n)."""
    M = p ** (n + 1)
    mu = teichmuller_group(p, n + 1)
    table = {}
    u = 1
    for g in range(p**n):
        for t in mu:
            table[u * t % M] = g
        u = u * (1 + p) % M
    return table


def _gamma_bsgs(u: int, p: int, n: int) -> int:
    M = p ** (n + 1)
    order = p**n
    m = math.isqrt(order) + 1
    baby = {}
    x = 1
    for j in range(m):
        baby.setdefault(x, j)
        x = x * (1 + p) % M
    giant = pow(pow(1 + p, m, M), -1, M)
    y = u
    for i in range(m + 1):
        if y in baby:
            return (i * m + baby[y]) % order
        y = y * giant % M
    raise DomainError(f"{u} is not a power of {1 + p} modulo {M}")


def gamma_index(a: int, p: int, n: int, method: str = "auto") -> int:
    """Exponent g in [0, p**n) with a/omega(a) == (1+p)**g mod p**(n+1)."""
    if p == 2:
        raise UnsupportedError("gamma_index is only provided for odd p")
    if a % p == 0:
        raise DomainError(f"{a} is divisible by {p}")
    if n == 0:
        return 0
    if method == "auto":
        method = "table" if p**n <= _EXHAUSTIVE_GAMMA_LIMIT else "bsgs"
    M = p ** (n + 1)
    if method == "table":
        return gamma_table(p, n)[a % M]
    u = a * pow(teichmuller(a, p, n + 1), -1, M) % M
    return _gamma_bsgs(u, p, n)


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    r = d % 4
    if r == 1:
        return _squarefree(d)
    if r == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(m: int) -> bool:
    return all(e == 1 for e in factorint(abs(m)).values())


def require_fundamental(d: int, negative: bool = True) -> None:
    if negative and d >= 0:
        raise DomainError(f"discriminant {d} must be negative")
    if not is_fundamental_discriminant(d):
        raise DomainError(f"{d} is not a fundamental discriminant")


def kronecker_char(d: int, a: int) -> int:
    """Kronecker symbol (d/a) for a discriminant d and a positive integer a."""
    if a <= 0:
        raise DomainError("kronecker_char expects a positive argument")
    result = 1
    while a % 2 == 0:
        a //= 2
        if d % 2 == 0:
            return 0
        result *= 1 if d % 8 in (1, 7) else -1
    return result * _jacobi(d % a, a) if a > 1 else result


def _jacobi(x: int, m: int) -> int:
    # m odd positive
    x %= m
    t = 1
    while x:
        while x % 2 == 0:
            x //= 2
            if m % 8 in (3, 5):
                t = -t
        x, m = m, x
        if x % 4 == 3 and m % 4 == 3:
            t = -t
        x %= m
    return t if m == 1 else 0


def kronecker(d: int, ell: int) -> int:
    """Splitting of the prime ``ell`` in Q(sqrt d): 1 split, -1 inert, 0 ramified."""
    require_fundamental(d)
    require_prime(ell, "ell")
    return kronecker_char(d, ell)
