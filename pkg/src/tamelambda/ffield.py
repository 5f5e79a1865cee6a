"""Finite fields F_{ell^d} generated by a canonical root of unity.

A context is built for a level n: its modulus is an irreducible factor of
the cyclotomic polynomial Phi_M over F_ell (M = p**(n+1), or 2**(n+2) for
p = 2), so the class of x is a primitive M-th root of unity.  Picking the
least factor fixes the choice of a prime above ell once and for all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import flint
from sympy import factorint

from . import kernels
from .errors import DomainError
from .padic import mult_order, require_prime, root_order, vp

# exhaustive digit matching in plog up to this prime, baby-step/giant-step above
_DIGIT_TABLE_LIMIT = 3**10


def cyclotomic_prime_power(p: int, k: int) -> list[int]:
    """Coefficients of Phi_{p^k}, constant term first."""
    step = p ** (k - 1)
    coeffs = [0] * ((p - 1) * step + 1)
    for i in range(p):
        coeffs[i * step] = 1
    return coeffs


@dataclass(frozen=True)
class FFCtx:
    ell: int
    p: int
    n: int
    M: int
    d: int
    modulus: tuple[int, ...]  # low coefficients of the monic modulus
    q: int
    sylow_exp: int

    def elem(self, coeffs) -> "FFElem":
        c = [int(x) % self.ell for x in coeffs]
        if len(c) > self.d:
            raise DomainError("too many coefficients for this field")
        return FFElem(self, tuple(c + [0] * (self.d - len(c))))

    def scalar(self, c: int) -> "FFElem":
        return self.elem([c])

    @property
    def one(self) -> "FFElem":
        return self.scalar(1)

    @property
    def zeta(self) -> "FFElem":
        """The canonical primitive M-th root of unity (class of x)."""
        if self.d == 1:
            return self.scalar(-self.modulus[0])
        return self.elem([0, 1])

    def from_index(self, i: int) -> "FFElem":
        """Element whose coefficients are the base-ell digits of i."""
        c = []
        for _ in range(self.d):
            i, r = divmod(i, self.ell)
            c.append(r)
        return FFElem(self, tuple(c))

    def modulus_poly(self) -> list[int]:
        return list(self.modulus) + [1]

    def __repr__(self) -> str:
        return f"FFCtx(ell={self.ell}, p={self.p}, n={self.n}, d={self.d})"


class FFElem:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: FFCtx, c: tuple[int, ...]):
        self.ctx = ctx
        self.c = c

    def _coerce(self, other) -> "FFElem":
        if isinstance(other, FFElem):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise DomainError("elements from different field contexts")
            return other
        if isinstance(other, int):
            return self.ctx.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        ell = self.ctx.ell
        return FFElem(self.ctx, tuple((x + y) % ell for x, y in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self):
        ell = self.ctx.ell
        return FFElem(self.ctx, tuple(-x % ell for x in self.c))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        ctx = self.ctx
        if ctx.d == 1:
            return FFElem(ctx, (self.c[0] * o.c[0] % ctx.ell,))
        return FFElem(ctx, tuple(kernels.mulmod(list(self.c), list(o.c),
                                                list(ctx.modulus), ctx.ell)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __pow__(self, e: int):
        ctx = self.ctx
        if e < 0:
            return self.inv() ** (-e)
        if ctx.d == 1:
            return FFElem(ctx, (pow(self.c[0], e, ctx.ell),))
        return FFElem(ctx, tuple(kernels.powmod(list(self.c), e,
                                                list(ctx.modulus), ctx.ell)))

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_one(self) -> bool:
        return self.c[0] == 1 and not any(self.c[1:])

    def inv(self) -> "FFElem":
        if self.is_zero():
            raise DomainError("inverse of zero")
        ctx = self.ctx
        a = flint.nmod_poly(list(self.c), ctx.ell)
        m = flint.nmod_poly(ctx.modulus_poly(), ctx.ell)
        g, s, _ = a.xgcd(m)
        if g.degree() != 0:
            raise DomainError("element is not invertible (modulus reducible?)")
        scale = pow(int(g[0]), -1, ctx.ell)
        return ctx.elem([int(x) * scale for x in s.coeffs()])

    def frobenius(self, k: int = 1) -> "FFElem":
        return self ** (self.ctx.ell**k)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        if not isinstance(other, FFElem):
            return NotImplemented
        return self.c == other.c and self.ctx == other.ctx

    def __hash__(self):
        return hash(self.c)

    def __repr__(self) -> str:
        return f"FFElem({list(self.c)} mod {self.ctx.ell})"


def _factor_key(coeffs: list[int], ell: int) -> tuple[int, ...]:
    # write f = x^d - (c'_{d-1} x^{d-1} + ... + c'_0) and order by c' from the top,
    # so for d = 1 the least factor x - r has the least root r
    return tuple((-c) % ell for c in reversed(coeffs[:-1]))


@lru_cache(maxsize=256)
def make_cyclotomic_ctx(ell: int, p: int, n: int) -> FFCtx:
    require_prime(ell, "ell")
    require_prime(p, "p")
    if ell == p:
        raise DomainError("ℓ must differ from p")
    if n < 0:
        raise DomainError("level must be nonnegative")
    M = root_order(p, n)
    k = vp(M, p)
    d = mult_order(ell, M)
    phi = flint.nmod_poly(cyclotomic_prime_power(p, k), ell)
    _, factors = phi.factor()
    polys = [[int(c) for c in f.coeffs()] for f, _ in factors]
    if any(len(f) != d + 1 for f in polys):
        raise DomainError("cyclotomic polynomial factors with unexpected degree")
    best = min(polys, key=lambda f: _factor_key(f, ell))
    q = ell**d
    return FFCtx(ell=ell, p=p, n=n, M=M, d=d, modulus=tuple(best[:-1]),
                 q=q, sylow_exp=vp(q - 1, p))


def element_order_divides(x: FFElem, e: int) -> bool:
    return (x**e).is_one()


@lru_cache(maxsize=256)
def sylow_generator(ctx: FFCtx) -> FFElem:
    """Deterministic generator of the p-Sylow subgroup of F_q^x."""
    a = ctx.sylow_exp
    if a == 0:
        raise DomainError("the p-Sylow subgroup is trivial")
    cof = (ctx.q - 1) // ctx.p**a
    i = 1
    while True:
        w = ctx.from_index(i) ** cof
        if not (w ** (ctx.p ** (a - 1))).is_one():
            return w
        i += 1


def plog(ctx: FFCtx, u: FFElem, w: FFElem, a: Optional[int] = None) -> int:
    """Discrete log of u to base w, where w has order p**a (Pohlig-Hellman)."""
    p = ctx.p
    if a is None:
        a = ctx.sylow_exp
    if a == 0:
        if not u.is_one():
            raise DomainError("element not in p-Sylow")
        return 0
    if not (u ** (p**a)).is_one():
        raise DomainError("element not in p-Sylow")
    gamma = w ** (p ** (a - 1))  # order p
    if p <= _DIGIT_TABLE_LIMIT:
        table = {}
        g = ctx.one
        for delta in range(p):
            table[g.c] = delta
            g = g * gamma

        def digit(h: FFElem) -> int:
            return table[h.c]
    else:
        def digit(h: FFElem) -> int:
            return _bsgs(ctx, gamma, h, p)
    winv = w.inv()
    x = 0
    for k in range(a):
        h = (u * winv**x) ** (p ** (a - 1 - k))
        try:
            x += digit(h) * p**k
        except KeyError:
            raise DomainError("element not in the subgroup generated by w") from None
    return x


def _bsgs(ctx: FFCtx, g: FFElem, h: FFElem, order: int) -> int:
    m = math.isqrt(order) + 1
    baby = {}
    x = ctx.one
    for j in range(m):
        baby.setdefault(x.c, j)
        x = x * g
    step = (g**m).inv()
    y = h
    for i in range(m + 1):
        if y.c in baby:
            return (i * m + baby[y.c]) % order
        y = y * step
    raise KeyError("no discrete log")


def generators_of_multiplicative_group(
        ctx: FFCtx, factorization: Optional[dict] = None,
        limit: Optional[int] = None) -> Iterator[FFElem]:
    """Elements of exact order q - 1, in index order."""
    N = ctx.q - 1
    if factorization is None:
        if N.bit_length() > 100:
            raise DomainError(
                f"q - 1 has {N.bit_length()} bits; pass its factorization explicitly")
        factorization = factorint(N)
    check = 1
    for f, e in factorization.items():
        check *= f**e
    if check != N:
        raise DomainError("factorization does not multiply to q - 1")
    primes = sorted(factorization)
    found = 0
    for i in range(1, ctx.q):
        x = ctx.from_index(i)
        if all(not (x ** (N // f)).is_one() for f in primes):
            yield x
            found += 1
            if limit is not None and found >= limit:
                return
