"""Exact integer linear algebra for evaluation/restriction matrices.

Ranks are computed twice over: a single-prime modular elimination (fast,
vectorized) gives a certified *lower* bound on the rational rank, and a
fraction-based elimination is the exact fallback.  Callers combine the
modular bound with an a-priori bound from the other side to certify answers
without ever trusting the prime alone.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from p3bundles.oracle.configs import Line, Point4, Proj1

PRIME = 2_147_483_647  # 2^31 - 1; squares stay inside int64


def monomial_exponents(k: int) -> list[tuple[int, int, int, int]]:
    """Degree-k monomials in 4 variables, deterministic (lex) order."""
    if k < 0:
        return []
    out = []
    for e0 in range(k, -1, -1):
        for e1 in range(k - e0, -1, -1):
            for e2 in range(k - e0 - e1, -1, -1):
                out.append((e0, e1, e2, k - e0 - e1 - e2))
    return out


def _binary_power(p: int, q: int, e: int) -> list[int]:
    """Coefficients of (p*s + q*t)^e as a list indexed by the power of t."""
    return [comb(e, j) * p ** (e - j) * q ** j for j in range(e + 1)]


def _convolve(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def line_restriction_block(line: Line, k: int) -> tuple[tuple[int, ...], ...]:
    """Rows: coefficients of the restriction of each degree-k monomial to the
    line s*p + t*q, expressed in the basis s^k, s^{k-1} t, ..., t^k.

    Returned transposed to matrix shape (k+1) x C(k+3, 3): one row per basis
    form on the line, one column per ambient monomial.
    """
    cols = []
    for expo in monomial_exponents(k):
        poly = [1]
        for i in range(4):
            if expo[i]:
                poly = _convolve(poly, _binary_power(line.p[i], line.q[i], expo[i]))
        poly = poly + [0] * (k + 1 - len(poly))
        cols.append(poly)
    rows = tuple(tuple(col[r] for col in cols) for r in range(k + 1))
    return rows


def point_evaluation_row(point: Point4, k: int) -> tuple[int, ...]:
    row = []
    for expo in monomial_exponents(k):
        val = 1
        for i in range(4):
            val *= point[i] ** expo[i]
        row.append(val)
    return tuple(row)


def bidegree_evaluation_row(u: Proj1, v: Proj1, p: int, q: int) -> tuple[int, ...]:
    """Evaluate the (p, q) monomial basis u0^{p-i} u1^i v0^{q-j} v1^j at a
    point of P^1 x P^1."""
    row = []
    for i in range(p + 1):
        for j in range(q + 1):
            row.append(u[0] ** (p - i) * u[1] ** i * v[0] ** (q - j) * v[1] ** j)
    return tuple(row)


def rank_mod_p(rows: list[tuple[int, ...]]) -> int:
    if not rows or not rows[0]:
        return 0
    m = np.array([[x % PRIME for x in row] for row in rows], dtype=np.int64)
    n_rows, n_cols = m.shape
    rank = 0
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        pivots = np.nonzero(m[row:, col])[0]
        if pivots.size == 0:
            continue
        pivot_row = row + int(pivots[0])
        if pivot_row != row:
            m[[row, pivot_row]] = m[[pivot_row, row]]
        inv = pow(int(m[row, col]), PRIME - 2, PRIME)
        m[row] = (m[row] * inv) % PRIME
        mask = np.nonzero(m[row + 1:, col])[0]
        if mask.size:
            factors = m[row + 1 + mask, col][:, None]
            m[row + 1 + mask] = (m[row + 1 + mask] - factors * m[row][None, :]) % PRIME
        rank += 1
        row += 1
    return rank


def rank_exact(rows: list[tuple[int, ...]]) -> int:
    if not rows or not rows[0]:
        return 0
    m = [[Fraction(x) for x in row] for row in rows]
    n_rows, n_cols = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        pivot = next((r for r in range(row, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        pv = m[row][col]
        m[row] = [x / pv for x in m[row]]
        for r in range(row + 1, n_rows):
            f = m[r][col]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        rank += 1
        row += 1
    return rank


def nullity_certified(rows: list[tuple[int, ...]], n_cols: int, lower_bound: int = 0) -> int:
    """Exact kernel dimension of an integer matrix with n_cols columns.

    The modular rank bounds the rational rank from below, so
    n_cols - rank_p bounds the nullity from above; when that pinches against
    a caller-supplied valid lower bound the answer is certified without
    exact elimination.
    """
    if n_cols == 0:
        return 0
    if not rows:
        return n_cols
    upper = n_cols - rank_mod_p(rows)
    lower = max(0, lower_bound)
    if upper < lower:
        raise AssertionError(
            f"caller lower bound {lower} exceeds certified upper bound {upper}")
    if upper == lower:
        return upper
    return n_cols - rank_exact(rows)


def full_row_rank(rows: list[tuple[int, ...]]) -> bool:
    if not rows:
        return True
    if not rows[0] or len(rows) > len(rows[0]):
        return False
    if rank_mod_p(rows) == len(rows):
        return True
    return rank_exact(rows) == len(rows)
