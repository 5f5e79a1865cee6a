"""Brute-force p-parts of ray class groups of the layers B_n of Q_infty.

For k = Q the p-class groups A_emptyset(B_n) vanish, so the ray class
p-group A_S(B_n) is the cokernel of

    E(B_n) ⊗ Z_p  ->  ⊕_{ell in S} (O_{B_n}/ell)^x ⊗ Z_p.

E(B_n) ⊗ Z_p is generated as a Galois module by one cyclotomic unit xi_n,
so only the p^n conjugates of xi_n (and -1 for p = 2) are mapped into the
residue fields.  All arithmetic happens in the finite fields of
:mod:`tamelambda.ffield`; no unit group is ever computed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import DomainError, HypothesisError, InvariantError, ResourceError
from .ffield import FFCtx, FFElem, make_cyclotomic_ctx, plog, sylow_generator
from .padic import (
    SplittingProfile,
    mult_order,
    require_prime,
    root_order,
    splitting_profile,
    teichmuller_group,
    vp,
)
from .snf import GroupSNF, cokernel_pgroup

DEFAULT_LEVEL_CAPS = {2: 4, 3: 3, 5: 2, 7: 1}


def level_cap(p: int) -> int:
    """Highest level the oracle will build, overridable from the environment.

    ``TAMELAMBDA_MAX_LEVEL_P<p>`` wins over ``TAMELAMBDA_MAX_LEVEL``.
    """
    for var in (f"TAMELAMBDA_MAX_LEVEL_P{p}", "TAMELAMBDA_MAX_LEVEL"):
        val = os.environ.get(var)
        if val:
            return int(val)
    return DEFAULT_LEVEL_CAPS.get(p, 1)


def _check_level(p: int, S: Sequence[int], n: int, max_level: Optional[int]) -> None:
    cap = level_cap(p) if max_level is None else max_level
    if n < 0:
        raise DomainError("level must be nonnegative")
    if n > cap:
        M = root_order(p, n)
        sizes = ", ".join(f"ℓ={l}: F_{l}^{mult_order(l, M)} "
                          f"(~2^{(l ** mult_order(l, M)).bit_length()})"
                          for l in S)
        raise ResourceError(f"level {n} exceeds the cap {cap} for p={p}; "
                            f"required residue fields: {sizes or 'none'}")


@dataclass(frozen=True)
class EllTarget:
    """p-Sylow of the residue fields of B_n at the primes above one ell.

    The primes are the translates gamma^i(l), i < ``primes``; each residue
    field is the degree-``f`` subfield of ``ctx`` and its p-Sylow is cyclic
    of order p^a, generated by ``w``.  Elements are projected to it by
    raising to ``proj``.
    """

    ell: int
    profile: SplittingProfile
    primes: int
    f: int
    a: int
    ctx: Optional[FFCtx]
    w: Optional[FFElem]
    proj: int


@dataclass(frozen=True)
class ResidueTarget:
    p: int
    n: int
    S: tuple[int, ...]
    entries: tuple[EllTarget, ...]

    @property
    def exps(self) -> list[int]:
        return [e.a for e in self.entries for _ in range(e.primes) if e.a]

    @property
    def rows(self) -> list[tuple[int, int]]:
        return [(e.ell, i) for e in self.entries if e.a for i in range(e.primes)]

    def describe(self) -> str:
        if not self.exps:
            return "0"
        return " ⊕ ".join(f"Z/{self.p ** a}" for a in self.exps)


def _validate(p: int, S: Iterable[int]) -> tuple[int, ...]:
    require_prime(p, "p")
    S = tuple(sorted(set(S)))
    for l in S:
        require_prime(l, "ell")
    if p in S:
        raise DomainError(f"p={p} must not lie in S")
    return S


def residue_targets(p: int, S: Iterable[int], n: int,
                    max_level: Optional[int] = None) -> ResidueTarget:
    S = _validate(p, S)
    _check_level(p, S, n, max_level)
    entries = []
    for ell in S:
        prof = splitting_profile(p, ell)
        g = prof.primes_at_level(n)
        f = p**n // g
        a = vp(ell**f - 1, p)
        if a == 0:
            entries.append(EllTarget(ell, prof, g, f, 0, None, None, 0))
            continue
        ctx = make_cyclotomic_ctx(ell, p, n)
        if ctx.d % f:
            raise InvariantError(f"residue degree {f} does not divide {ctx.d}")
        w = sylow_generator(ctx) ** (p ** (ctx.sylow_exp - a))
        entries.append(EllTarget(ell, prof, g, f, a, ctx, w,
                                 (ell**f - 1) // p**a))
    return ResidueTarget(p, n, S, tuple(entries))


def _zpow(zeta: FFElem, k: int, M: int) -> FFElem:
    return zeta ** (k % M)


def cyclotomic_unit_image(p: int, n: int, k: int, ctx: FFCtx,
                          zeta: Optional[FFElem] = None) -> FFElem:
    """Image of gamma^k(xi_n) in the residue field ``ctx``.

    ``zeta`` is the image of the primitive M-th root of unity, M the root
    order at level n; it defaults to the canonical root of ``ctx`` (which
    must then be built for level n).  Passing zeta = x^p of a level n+1
    context evaluates the level-n unit at a prime of the next layer.
    """
    M = root_order(p, n)
    if zeta is None:
        if ctx.M != M:
            raise DomainError("context level does not match the unit level")
        zeta = ctx.zeta
    num = ctx.one
    den = ctx.one
    if p == 2:
        u = pow(5, k, M)
        num = _zpow(zeta, -2 * u, M) * (1 - _zpow(zeta, 5 * u, M))
        den = 1 - _zpow(zeta, u, M)
    else:
        mu = teichmuller_group(p, n + 1)
        omega = mu[1] if p > 2 and len(mu) > 1 else 1
        c = (1 + p) * omega % M
        e = (1 - c) * pow(2, -1, M) % M
        u = pow(1 + p, k, M)
        for t in mu:
            ut = u * t % M
            num = num * _zpow(zeta, ut * e, M) * (1 - _zpow(zeta, ut * c, M))
            den = den * (1 - _zpow(zeta, ut, M))
    if num.is_zero() or den.is_zero():
        raise InvariantError("cyclotomic unit reduces to zero")
    return num / den


def _subfield_degree_check(x: FFElem, f: int) -> None:
    if x ** (x.ctx.ell**f) != x:
        raise InvariantError(
            f"unit image does not lie in the degree-{f} residue field of B_n")


def unit_coordinates(target: ResidueTarget, entry: EllTarget) -> list[int]:
    """Discrete logs of gamma^k(xi_n) at the base prime, k = 0..p^n - 1."""
    p, n = target.p, target.n
    out = []
    for k in range(p**n):
        img = cyclotomic_unit_image(p, n, k, entry.ctx)
        _subfield_degree_check(img, entry.f)
        out.append(plog(entry.ctx, img**entry.proj, entry.w, entry.a))
    return out


@dataclass
class RayClassResult:
    p: int
    n: int
    S: tuple[int, ...]
    group: GroupSNF
    target: str
    generators: list[list[int]] = field(repr=False, default_factory=list)

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "S": list(self.S),
                "orders": list(self.group.orders),
                "valuation": self.group.valuation, "target": self.target}


def ray_class_relations(p: int, S: Iterable[int], n: int,
                        max_level: Optional[int] = None
                        ) -> tuple[ResidueTarget, list[list[int]]]:
    """Target exponents and the generator vectors of the unit image."""
    tgt = residue_targets(p, S, n, max_level)
    rows = tgt.rows
    coords = {e.ell: unit_coordinates(tgt, e) for e in tgt.entries if e.a}
    size = p**n
    gens = []
    for j in range(size):
        gens.append([coords[ell][(j - i) % size] for ell, i in rows])
    if p == 2:
        minus_one = {}
        for e in tgt.entries:
            if e.a:
                minus_one[e.ell] = plog(e.ctx, e.ctx.scalar(-1) ** e.proj, e.w, e.a)
        gens.append([minus_one[ell] for ell, _ in rows])
    return tgt, gens


def ray_class_group(p: int, S: Iterable[int], n: int,
                    max_level: Optional[int] = None) -> GroupSNF:
    tgt, gens = ray_class_relations(p, S, n, max_level)
    return cokernel_pgroup(p, tgt.exps, gens)


def ray_class_result(p: int, S: Iterable[int], n: int,
                     max_level: Optional[int] = None) -> RayClassResult:
    tgt, gens = ray_class_relations(p, S, n, max_level)
    return RayClassResult(p, n, tgt.S, cokernel_pgroup(p, tgt.exps, gens),
                          tgt.describe(), gens)


def level0_valuation(p: int, S: Iterable[int]) -> int:
    """vp|A_S(Q)| in closed form: p-part of (Z/m)^x modulo {±1}."""
    S = _validate(p, S)
    e = sum(vp(l - 1, p) for l in S)
    if p == 2 and S:
        e -= 1
    return e


@dataclass(frozen=True)
class GrowthResult:
    lam: Optional[int]
    stabilized: bool
    n0: Optional[int]
    diffs: tuple[int, ...]
    insufficient: bool = False

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "stabilized": self.stabilized,
                "n0": self.n0, "diffs": list(self.diffs),
                "insufficient_data": self.insufficient}


def growth_lambda(orders: Sequence[int]) -> GrowthResult:
    """Eventual slope of the valuations e_n = vp|A_S(B_n)|.

    Needs three consecutive levels; the slope counts as stabilized once the
    last two differences agree, and ``n0`` is the first level from which
    every difference equals the final one.
    """
    e = list(orders)
    if len(e) < 3:
        return GrowthResult(None, False, None,
                            tuple(b - a for a, b in zip(e, e[1:])), True)
    diffs = tuple(b - a for a, b in zip(e, e[1:]))
    last = diffs[-1]
    stabilized = diffs[-2] == last
    n0 = len(diffs) - 1
    while n0 > 0 and diffs[n0 - 1] == last:
        n0 -= 1
    return GrowthResult(last, stabilized, n0 if stabilized else None, diffs)


def ray_class_tower(p: int, S: Iterable[int], top: int,
                    max_level: Optional[int] = None) -> list[GroupSNF]:
    return [ray_class_group(p, S, n, max_level) for n in range(top + 1)]


@dataclass
class UnitPowerReport:
    p: int
    ell: int
    n: int
    e: int
    verdicts: list[tuple[int, bool]]

    @property
    def all_pass(self) -> bool:
        return all(ok for _, ok in self.verdicts)

    @property
    def any_pass(self) -> bool:
        return any(ok for _, ok in self.verdicts)

    def to_dict(self) -> dict:
        return {"p": self.p, "ell": self.ell, "n": self.n, "e": self.e,
                "verdicts": [{"k": k, "pass": ok} for k, ok in self.verdicts],
                "all_pass": self.all_pass}


def unit_power_check(p: int, ell: int, n: int,
                     max_level: Optional[int] = None) -> UnitPowerReport:
    """Test (1 - zeta)^e != 1 for every primitive p^(n+1)-th root zeta in F_{ell^(p^n)}.

    With e = (ell^(p^n) - 1)/p^(n+1); the roots are listed as zeta_0^k for
    the canonical root zeta_0 and k prime to p.
    """
    require_prime(p, "p")
    require_prime(ell, "ell")
    if p == 2:
        raise HypothesisError("p must be odd")
    if ell % p != 1 or ell % (p * p) == 1:
        raise HypothesisError(f"needs ℓ ≡ 1 mod p and ℓ ≢ 1 mod p² (ℓ={ell}, p={p})")
    _check_level(p, (ell,), n, max_level)
    ctx = make_cyclotomic_ctx(ell, p, n)
    if ctx.d != p**n:
        raise InvariantError("residue field degree differs from p^n")
    e = (ell ** (p**n) - 1) // p ** (n + 1)
    M = ctx.M
    verdicts = []
    for k in range(1, M):
        if k % p == 0:
            continue
        z = ctx.zeta ** k
        verdicts.append((k, not ((1 - z) ** e).is_one()))
    return UnitPowerReport(p, ell, n, e, verdicts)
