"""Exact integer polynomial arithmetic and cyclotomic polynomials.

Polynomials are tuples of integer coefficients, lowest degree first.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np

Poly = Tuple[int, ...]


def trim(coeffs: Iterable[int]) -> Poly:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def degree(p: Sequence[int]) -> int:
    return len(trim(p)) - 1


def poly_mul(a: Sequence[int], b: Sequence[int]) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def poly_divmod(a: Sequence[int], b: Sequence[int]) -> Tuple[Poly, Poly]:
    """Long division over the integers; b must have leading coefficient +-1."""

    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead = b[-1]
    if lead not in (1, -1):
        raise ValueError("divisor must be monic up to sign")
    rem = list(trim(a))
    db = len(b) - 1
    if len(rem) - 1 < db:
        return (), tuple(rem)
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        coef = rem[k + db] * lead
        quot[k] = coef
        if coef:
            for i, c in enumerate(b):
                rem[k + i] -= coef * c
    return trim(quot), trim(rem[:db])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Poly:
    """Phi_n obtained by dividing x^n - 1 by Phi_d for every proper divisor d."""

    if n < 1:
        raise ValueError("cyclotomic index must be positive")
    poly: Poly = (-1,) + (0,) * (n - 1) + (1,)
    for d in range(1, n):
        if n % d == 0:
            poly, rem = poly_divmod(poly, cyclotomic_polynomial(d))
            if rem:
                raise ArithmeticError(f"Phi_{d} does not divide x^{n}-1")
    return poly


def divides(divisor: Sequence[int], p: Sequence[int]) -> bool:
    if not trim(p):
        return True
    _, rem = poly_divmod(p, divisor)
    return not rem


def power_residues(count: int, n: int) -> np.ndarray:
    """Rows j = 0..count-1 hold the coefficients of x^j mod Phi_n."""

    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows: List[List[int]] = []
    current = [0] * deg
    current[0] = 1
    if deg == 0:
        return np.zeros((count, 0), dtype=np.int64)
    for _ in range(count):
        rows.append(list(current))
        top = current[-1]
        shifted = [0] + current[:-1]
        # x^deg = -(phi_0 + ... + phi_{deg-1} x^{deg-1}) modulo a monic phi
        current = [shifted[i] - top * phi[i] for i in range(deg)]
    return np.asarray(rows, dtype=np.int64)
