"""Pure-Python polynomial kernels over F_ell.

A field element is a list of ``d`` coefficients (constant term first).
The monic modulus x^d + c_{d-1} x^{d-1} + ... + c_0 is passed as its low
coefficients ``[c_0, ..., c_{d-1}]``.  Must stay interchangeable with the
compiled ``_kernels`` extension.
"""


def mulmod(a, b, mod, ell):
    d = len(mod)
    prod = [0] * (2 * d - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for k in range(2 * d - 2, d - 1, -1):
        t = prod[k] % ell
        if t:
            base = k - d
            for i in range(d):
                prod[base + i] -= t * mod[i]
    return [c % ell for c in prod[:d]]


def sqrmod(a, mod, ell):
    return mulmod(a, a, mod, ell)


def powmod(a, e, mod, ell):
    d = len(mod)
    result = [1] + [0] * (d - 1)
    if e == 0:
        return result
    base = [c % ell for c in a]
    for bit in bin(e)[2:]:
        result = mulmod(result, result, mod, ell)
        if bit == "1":
            result = mulmod(result, base, mod, ell)
    return result
