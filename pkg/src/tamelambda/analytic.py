"""Analytic lambda-invariants of the minus part for imaginary quadratic fields.

Two independent routes, for odd p not dividing the discriminant:

* the p-valuation of the minus class numbers h^-(k_n), from generalized
  Bernoulli numbers B_{1, chi_k psi} evaluated as exact norms from
  Z[zeta_{p^j}], whose growth in n is lambda;
* a Stickelberger power series f_n(T) in Z_p[T]/((1+T)^{p^n} - 1), whose
  first unit coefficient (in the T basis) is lambda.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd
from typing import Optional, Sequence

import flint

from .errors import DomainError, InvariantError, UnsupportedError
from .ffield import cyclotomic_prime_power
from .padic import (
    gamma_index,
    kronecker_char,
    require_fundamental,
    require_prime,
    vp,
)
from .ray_class import GrowthResult, growth_lambda

DEFAULT_ANALYTIC_LEVELS = {3: 4, 5: 3, 7: 2}


def default_precision(n: int) -> int:
    return max(12, n + 5)


@dataclass(frozen=True)
class OddCharacter:
    """Odd character chi_d * psi_j with psi_j(a) = zeta_{p^j}^{gamma_j(a)}.

    Values live in Z[zeta_{p^j}] and are encoded as (sign, exponent).
    ``twist`` in {+1, -1} selects psi or its inverse.
    """

    d: int
    p: int
    j: int
    twist: int = 1

    def __post_init__(self):
        require_fundamental(self.d)
        require_prime(self.p, "p")
        if self.p == 2:
            raise UnsupportedError("only odd p is supported")
        if self.j > 0 and self.d % self.p == 0:
            raise DomainError("χ_d ψ is imprimitive or has a different conductor when p | d")

    @property
    def conductor(self) -> int:
        return abs(self.d) * (self.p ** (self.j + 1) if self.j else 1)

    @property
    def root_order(self) -> int:
        return self.p**self.j

    def value(self, a: int) -> Optional[tuple[int, int]]:
        """(sign, exponent) with chi(a) = sign * zeta^exponent, or None when chi(a) = 0."""
        if gcd(a, self.conductor) != 1:
            return None
        s = kronecker_char(self.d, a)
        e = self.twist * gamma_index(a, self.p, self.j) % self.root_order if self.j else 0
        return s, e


@dataclass(frozen=True)
class CycloRational:
    """Element num(zeta)/den of Q(zeta_m), m a power of p; num is a coefficient list."""

    p: int
    j: int
    num: tuple[int, ...]
    den: int

    def norm(self) -> Fraction:
        """Exact field norm down to Q."""
        if self.j == 0:
            return Fraction(sum(self.num), self.den)
        phi = flint.fmpz_poly(cyclotomic_prime_power(self.p, self.j))
        res = int(phi.resultant(flint.fmpz_poly(list(self.num))))
        deg = (self.p - 1) * self.p ** (self.j - 1)
        return Fraction(res, self.den**deg)

    def norm_valuation(self) -> int:
        """vp of the norm, computed without forming the rational."""
        deg = (self.p - 1) * self.p ** (self.j - 1) if self.j else 1
        if self.j == 0:
            top = sum(self.num)
        else:
            phi = flint.fmpz_poly(cyclotomic_prime_power(self.p, self.j))
            top = int(phi.resultant(flint.fmpz_poly(list(self.num))))
        if top == 0:
            raise InvariantError("Bernoulli number vanishes")
        return vp(top, self.p) - deg * vp(self.den, self.p)


def bernoulli_b1(chi: OddCharacter) -> CycloRational:
    """B_{1,chi} = (1/F) sum_{a=1}^{F} chi(a) a for the primitive chi of conductor F."""
    F = chi.conductor
    vec = [0] * chi.root_order
    for a in range(1, F + 1):
        v = chi.value(a)
        if v is not None:
            vec[v[1]] += v[0] * a
    return CycloRational(chi.p, chi.j, tuple(vec), F)


def class_number_forms(d: int) -> int:
    """Number of reduced positive definite forms of discriminant d < 0."""
    if d >= 0 or d % 4 not in (0, 1):
        raise DomainError("discriminant must be negative and ≡ 0, 1 mod 4")
    h = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            h += 1
        a += 1
    return h


def roots_of_unity_count(d: int) -> int:
    return {-3: 6, -4: 4}.get(d, 2)


def _require_in_scope(p: int, d: int) -> None:
    require_prime(p, "p")
    if p == 2:
        raise UnsupportedError("the analytic routes cover odd p only")
    require_fundamental(d)
    if d % p == 0:
        raise UnsupportedError(
            f"p={p} divides d={d}: only (3, -3) is covered, by lambda_empty_quad")


@lru_cache(maxsize=None)
def _bernoulli_level_valuation(p: int, d: int, j: int) -> int:
    return bernoulli_b1(OddCharacter(d, p, j)).norm_valuation()


def minus_h_valuation(p: int, d: int, n: int) -> int:
    """e_n = vp(h^-(k_n)) where k_n = k B_n and k = Q(sqrt d).

    The plus part is the class number of B_n, prime to p, and w and the
    unit index are prime to p once p is odd and does not divide d.
    """
    _require_in_scope(p, d)
    if n < 0:
        raise DomainError("level must be nonnegative")
    return sum(_bernoulli_level_valuation(p, d, j) for j in range(n + 1))


@dataclass(frozen=True)
class IwasawaSeries:
    """f_n(T) modulo ((1+T)^{p^n} - 1, p^K).

    ``coeffs`` are in the T basis; ``group_ring`` holds the exact rational
    coefficients of (1+T)^i, scaled by |d| so they are integers.
    """

    p: int
    n: int
    K: int
    d: int
    coeffs: tuple[int, ...]
    group_ring: tuple[int, ...] = field(repr=False)
    sign: int = -1

    def lambda_mu(self) -> tuple[Optional[int], int]:
        """(index of the first unit coefficient, minimal coefficient valuation)."""
        vals = [vp(c, self.p) if c else self.K for c in self.coeffs]
        mu = min(vals)
        lam = next((i for i, v in enumerate(vals) if v == 0), None)
        return lam, mu

    def constant_term(self) -> Fraction:
        return Fraction(sum(self.group_ring), abs(self.d))

    def project(self, m: int) -> tuple[int, ...]:
        """Group-ring coefficients reduced modulo (1+T)^{p^m} - 1."""
        size = self.p**m
        out = [0] * size
        for i, c in enumerate(self.group_ring):
            out[i % size] += c
        return tuple(out)


def _to_T_basis(gr: Sequence[int], mod: int) -> list[int]:
    size = len(gr)
    return [sum(c * comb(i, m) for i, c in enumerate(gr) if i >= m) % mod
            for m in range(size)]


def stickelberger_series(p: int, d: int, n: int, K: Optional[int] = None,
                         sign: int = -1) -> IwasawaSeries:
    """f_n(T) = -(1/F_n) sum a chi_d(a) (1+T)^{sign * gamma(a)}, F_n = |d| p^(n+1).

    The sum runs over 1 <= a <= F_n prime to F_n.  ``sign`` = +1 gives the
    image under (1+T) -> (1+T)^{-1}, which has the same (lambda, mu).
    """
    _require_in_scope(p, d)
    if sign not in (1, -1):
        raise DomainError("sign must be ±1")
    if K is None:
        K = default_precision(n)
    if K < n + 2:
        raise DomainError("precision must be at least n + 2")
    size = p**n
    pn1 = p ** (n + 1)
    F = abs(d) * pn1
    acc = [0] * size
    for a in range(1, F + 1):
        if a % p == 0:
            continue
        s = kronecker_char(d, a)
        if s == 0:
            continue
        i = sign * gamma_index(a, p, n) % size if n else 0
        acc[i] += s * a
    if any(c % pn1 for c in acc):
        raise InvariantError("Stickelberger sum not divisible by p^(n+1)")
    gr = tuple(-c // pn1 for c in acc)
    mod = p**K
    dinv = pow(abs(d), -1, mod)
    coeffs = _to_T_basis([c * dinv % mod for c in gr], mod)
    return IwasawaSeries(p, n, K, d, tuple(coeffs), gr, sign)


def calibration_constant(p: int, d: int) -> Fraction:
    """-(1 - chi_d(p)) B_{1,chi_d}: the value f_n(0) must take at every level."""
    b1 = bernoulli_b1(OddCharacter(d, p, 0))
    return -(1 - kronecker_char(d, p)) * Fraction(sum(b1.num), b1.den)


@dataclass(frozen=True)
class LambdaMu:
    lam: Optional[int]
    mu: int
    stabilized: bool
    levels: tuple[int, ...]
    precision: int

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "mu": self.mu, "stabilized": self.stabilized,
                "levels": list(self.levels), "precision": self.precision}


def lambda_mu(series: Sequence[IwasawaSeries]) -> LambdaMu:
    """Read (lambda, mu) from series at increasing levels.

    Stabilized once two successive levels give the same lambda and
    lambda < p^(n-1) at the top level.
    """
    if not series:
        raise DomainError("no series supplied")
    reads = []
    for f in series:
        lam, mu = f.lambda_mu()
        if mu > 0:
            raise InvariantError(
                f"μ = {mu} > 0 at level {f.n}, precision {f.K} (d={f.d}, p={f.p})")
        reads.append(lam)
    top = series[-1]
    stabilized = (len(series) >= 2 and reads[-1] is not None
                  and reads[-1] == reads[-2] and series[-1].n == series[-2].n + 1
                  and reads[-1] < top.p ** (top.n - 1))
    return LambdaMu(reads[-1], 0, stabilized, tuple(f.n for f in series),
                    min(f.K for f in series))


def analytic_level_cap(p: int) -> int:
    return DEFAULT_ANALYTIC_LEVELS.get(p, 1)


@dataclass
class AnalyticLambda:
    p: int
    d: int
    value: int
    series: Optional[LambdaMu]
    growth: Optional[GrowthResult]
    valuations: tuple[int, ...]
    source: str

    def to_dict(self) -> dict:
        return {"p": self.p, "d": self.d, "lambda": self.value, "source": self.source,
                "series": self.series.to_dict() if self.series else None,
                "growth": self.growth.to_dict() if self.growth else None,
                "minus_valuations": list(self.valuations)}


def lambda_empty_quad_report(p: int, d: int, top: Optional[int] = None,
                             K: Optional[int] = None) -> AnalyticLambda:
    require_prime(p, "p")
    if p == 2:
        raise UnsupportedError("the analytic routes cover odd p only")
    require_fundamental(d)
    if p == 3 and d == -3:
        return AnalyticLambda(p, d, 0, None, None, (), "known value")
    _require_in_scope(p, d)
    top = analytic_level_cap(p) if top is None else top
    if top < 2:
        raise DomainError("need at least levels 0..2 for a growth estimate")
    vals = tuple(minus_h_valuation(p, d, n) for n in range(top + 1))
    growth = growth_lambda(vals)
    series = [stickelberger_series(p, d, n, K) for n in range(1, top + 1)]
    lm = lambda_mu(series)
    if not lm.stabilized or not growth.stabilized:
        raise InvariantError(
            f"no stable λ by level {top}: series {lm.lam} "
            f"(stable={lm.stabilized}), growth {growth.lam} (stable={growth.stabilized})")
    if lm.lam != growth.lam:
        raise InvariantError(
            f"analytic oracles disagree for p={p}, d={d}: "
            f"series λ={lm.lam}, class-number growth λ={growth.lam}")
    return AnalyticLambda(p, d, lm.lam, lm, growth, vals, "two oracles")


def lambda_empty_quad(p: int, d: int) -> int:
    return lambda_empty_quad_report(p, d).value
