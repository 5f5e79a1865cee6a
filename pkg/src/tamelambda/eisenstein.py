"""Orders of finite tamely ramified Iwasawa modules for p = 3 and p = 2."""

from __future__ import annotations

import math
from dataclasses import dataclass

from sympy.ntheory import sqrt_mod

from .errors import DomainError, HypothesisError, InvariantError
from .padic import require_prime, vp

_EXHAUSTIVE_LIMIT = 10**6


@dataclass(frozen=True, order=True)
class EisensteinInt:
    """a + b*zeta_3 in Z[zeta_3], with zeta_3^2 = -1 - zeta_3."""

    a: int
    b: int

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def trace(self) -> int:
        return 2 * self.a - self.b

    def conjugate(self) -> "EisensteinInt":
        return EisensteinInt(self.a - self.b, -self.b)

    def __neg__(self) -> "EisensteinInt":
        return EisensteinInt(-self.a, -self.b)

    def __mul__(self, other: "EisensteinInt") -> "EisensteinInt":
        a, b, c, d = self.a, self.b, other.a, other.b
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    def times_zeta(self) -> "EisensteinInt":
        return EisensteinInt(-self.b, self.a - self.b)

    def associates(self) -> list["EisensteinInt"]:
        """The 12 elements ±zeta^j * alpha and ±zeta^j * conj(alpha)."""
        out = []
        for base in (self, self.conjugate()):
            x = base
            for _ in range(3):
                out.extend((x, -x))
                x = x.times_zeta()
        return out

    def __str__(self) -> str:
        return f"{self.a} + {self.b}ζ₃" if self.b >= 0 else f"{self.a} - {-self.b}ζ₃"


def _check_split(ell: int) -> None:
    require_prime(ell, "ell")
    if ell % 3 != 1:
        raise DomainError(f"{ell} ≢ 1 mod 3 has no representation 4ℓ = s² + 3t²")


def _solutions_exhaustive(ell: int) -> set[tuple[int, int]]:
    out = set()
    s = 1
    while s * s < 4 * ell:
        r = 4 * ell - s * s
        if r % 3 == 0:
            t = math.isqrt(r // 3)
            if t > 0 and t * t == r // 3:
                out.add((s, t))
        s += 1
    return out


def cornacchia_4p(ell: int) -> tuple[int, int]:
    """One solution of s² + 3t² = 4ℓ via Cornacchia's algorithm."""
    x0 = sqrt_mod(-3 % ell, ell)
    if x0 is None:
        raise DomainError(f"-3 is not a square modulo {ell}")
    if x0 % 2 == 0:  # need x0 ≡ D ≡ 1 (mod 2)
        x0 = ell - x0
    a, b = 2 * ell, x0
    bound = math.isqrt(4 * ell)
    while b > bound:
        a, b = b, a % b
    r = 4 * ell - b * b
    t = math.isqrt(r // 3)
    if r % 3 or t * t * 3 != r:
        raise InvariantError(f"Cornacchia failed for {ell}")
    return b, t


def _orbit_solutions(s: int, t: int) -> set[tuple[int, int]]:
    alpha = EisensteinInt((s + t) // 2, t)
    out = set()
    for x in alpha.associates():
        s2, t2 = abs(x.trace()), abs(x.b)
        if s2 and t2:
            out.add((s2, t2))
    return out


def norm_solutions(ell: int, method: str = "auto") -> set[tuple[int, int]]:
    """All (s, t) with s, t > 0 and 4*ell = s² + 3t²."""
    _check_split(ell)
    if method == "auto":
        method = "exhaustive" if ell < _EXHAUSTIVE_LIMIT else "cornacchia"
    if method == "exhaustive":
        return _solutions_exhaustive(ell)
    return _orbit_solutions(*cornacchia_4p(ell))


def _some_generator(ell: int) -> EisensteinInt:
    if ell < _EXHAUSTIVE_LIMIT:
        s, t = min(_solutions_exhaustive(ell))
    else:
        s, t = cornacchia_4p(ell)
    alpha = EisensteinInt((s + t) // 2, t)
    if alpha.norm() != ell:
        raise InvariantError(f"bad generator {alpha} for {ell}")
    return alpha


def normalized_candidates(ell: int) -> list[EisensteinInt]:
    """Associates of a generator above ell that are ≡ 1 mod 3."""
    return sorted(x for x in _some_generator(ell).associates()
                  if x.a % 3 == 1 and x.b % 3 == 0)


def normalized_generator(ell: int) -> EisensteinInt:
    """Generator alpha of a prime above ell with alpha ≡ 1 mod (1 - zeta_3)^2."""
    _check_split(ell)
    cands = normalized_candidates(ell)
    if len(cands) != 2 or cands[0].trace() != cands[1].trace():
        raise InvariantError(f"normalization not unique for {ell}: {cands}")
    return cands[0]


@dataclass(frozen=True)
class OrderResult:
    ell: int
    alpha: EisensteinInt
    s: int
    m: int
    order: int
    bound: float

    def to_dict(self) -> dict:
        return {"ell": self.ell, "alpha": [self.alpha.a, self.alpha.b],
                "s": self.s, "m": self.m, "order": self.order,
                "bound": self.bound}


def order_X3(ell: int) -> OrderResult:
    """|X_{ell}| over the cyclotomic Z_3-extension of Q, for ell ≡ 4, 7 mod 9."""
    require_prime(ell, "ell")
    if ell % 3 != 1 or ell % 9 == 1:
        raise HypothesisError(f"order formula needs ℓ ≡ 1 mod 3 and ℓ ≢ 1 mod 9 (ℓ={ell})")
    alpha = normalized_generator(ell)
    s = alpha.trace()
    disc = 4 * ell - s * s
    if disc <= 0:
        raise InvariantError(f"4ℓ - s² = {disc} is not positive")
    m = vp(disc, 3)
    if m % 2 == 0:
        raise InvariantError(f"3-valuation {m} of 4ℓ - s² is even")
    order = 3 ** ((m - 1) // 2)
    # m <= log(4 ell)/log 3, checked exactly
    if order < 3 or 3**m > 4 * ell:
        raise InvariantError(f"order {order} violates 3 <= |X| <= bound for {ell}")
    bound = math.sqrt(3) ** (math.log(4 * ell) / math.log(3) - 1)
    return OrderResult(ell, alpha, s, m, order, bound)


def order_X2(ell: int) -> int:
    """|X_{ell}| for p = 2 and ell ≡ 3 mod 4, which is trivial."""
    require_prime(ell, "ell")
    if ell % 4 != 3:
        raise HypothesisError(f"vanishing needs ℓ ≡ 3 mod 4 (ℓ={ell})")
    return 1
