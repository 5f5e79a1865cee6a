"""Smith normal form for relation matrices of finite abelian p-groups."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvariantError
from .padic import vp


@dataclass(frozen=True)
class GroupSNF:
    """Finite abelian p-group as cyclic factors p^e1 >= p^e2 >= ... (ones dropped)."""

    p: int
    orders: tuple[int, ...]

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(vp(o, self.p) for o in self.orders)

    @property
    def valuation(self) -> int:
        return sum(self.exponents)

    @property
    def order(self) -> int:
        return self.p**self.valuation

    def is_trivial(self) -> bool:
        return not self.orders

    def __str__(self) -> str:
        if not self.orders:
            return "0"
        return " ⊕ ".join(f"Z/{o}" for o in self.orders)


def cokernel_pgroup(p: int, exps: list[int], gens: list[list[int]]) -> GroupSNF:
    """Quotient of ⊕ Z/p^exps[i] by the subgroup spanned by ``gens``.

    Equivalently the cokernel of the integer matrix [diag(p^a_i) | gens].
    Its column span contains D*Z^r with D = p^max(a_i), so entries are
    reduced mod D and eliminated with minimal-valuation pivots over Z/D.
    """
    r = len(exps)
    if r == 0 or max(exps) == 0:
        return GroupSNF(p, ())
    E = max(exps)
    D = p**E
    cols = [[(p**a if k == i else 0) for k in range(r)] for i, a in enumerate(exps)]
    for g in gens:
        if len(g) != r:
            raise InvariantError("generator length does not match the target")
        cols.append(list(g))
    A = [[cols[j][i] % D for j in range(len(cols))] for i in range(r)]
    live_rows = list(range(r))
    live_cols = list(range(len(cols)))
    pivots = []
    while live_rows:
        best = None
        for i in live_rows:
            row = A[i]
            for j in live_cols:
                x = row[j]
                if x:
                    v = vp(x, p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            # rows vanishing mod D each contribute a factor Z/D
            pivots.extend([E] * len(live_rows))
            break
        v, i, j = best
        pv = p**v
        uinv = pow(A[i][j] // pv, -1, D)
        for k in live_rows:
            A[k][j] = A[k][j] * uinv % D
        # pivot is now p^v: clear its row with column ops, its column with row ops
        for c in live_cols:
            if c != j and A[i][c]:
                f = A[i][c] // pv
                for k in live_rows:
                    A[k][c] = (A[k][c] - f * A[k][j]) % D
        for k in live_rows:
            if k != i and A[k][j]:
                f = A[k][j] // pv
                row_k, row_i = A[k], A[i]
                for c in live_cols:
                    row_k[c] = (row_k[c] - f * row_i[c]) % D
        pivots.append(v)
        live_rows.remove(i)
        live_cols.remove(j)
    if sum(pivots) > sum(exps):
        raise InvariantError("cokernel larger than the target group")
    return GroupSNF(p, tuple(sorted((p**v for v in pivots if v), reverse=True)))


def smith_invariants(rows: list[list[int]]) -> list[int]:
    """Invariant factors of an integer matrix by plain Euclidean SNF.

    Slow and coefficient-hungry; kept as an independent check of
    :func:`cokernel_pgroup`.  Rows without a pivot are reported as 0.
    """
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if done:
                bad = [i for i in range(t + 1, m) for j in range(t + 1, n)
                       if A[i][j] % A[t][t]]
                if not bad:
                    break
                A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
        diag.append(abs(A[t][t]))
        t += 1
    return diag + [0] * (m - len(diag))
