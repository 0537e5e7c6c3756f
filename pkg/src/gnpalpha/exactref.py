"""Exact-rational and 256-bit reference backend for the moment formulas.

For rational p = a/b every expectation is a ratio of big integers (no
rounding anywhere); only the final ln is taken, at 300 bits.  For irrational
p the same formulas are evaluated in 256-bit float arithmetic via mpmath.
The float64 engine in moments.py must agree with this backend to 1e-9
relative; that agreement is enforced by the test suite.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

NEG_INF = float("-inf")

PREC_RATIONAL = 300
PREC_FLOAT = 256


def _log_ratio(num: int, den: int) -> float:
    if num < 0 or den <= 0:
        raise ValueError("expectation ratio must be >= 0")
    if num == 0:
        return NEG_INF
    with mpmath.workprec(PREC_RATIONAL):
        return float(mpmath.log(mpmath.mpf(num)) - mpmath.log(mpmath.mpf(den)))


def _check_p(p: Fraction):
    if not 0 < p < 1:
        raise ValueError("exact backend needs rational p in (0, 1)")


def matchings_count(k: int, r: int) -> int:
    """(k+r)! / ((k-r)! 2^r r!): ways to place r disjoint edges in a (k+r)-set."""
    return math.factorial(k + r) // (math.factorial(k - r) * (1 << r)
                                     * math.factorial(r))


def exact_log_EX(n: int, k: int, p: Fraction) -> float:
    """ln E[X_k] with exact big-integer arithmetic."""
    _check_p(p)
    if k < 0 or k > n:
        raise ValueError("k out of range")
    a, b = p.numerator, p.denominator
    e = k * (k - 1) // 2
    return _log_ratio(math.comb(n, k) * (b - a) ** e, b ** e)


def exact_log_E_aug(n: int, k: int, r: int, p: Fraction) -> float:
    """ln E(n,k,r) with exact big-integer arithmetic."""
    _check_p(p)
    if r < 0 or r > k or k + r > n:
        raise ValueError("need 0 <= r <= k and k + r <= n")
    a, b = p.numerator, p.denominator
    m = k + r
    fnum = b ** m - (b - a) ** m - m * a * (b - a) ** (m - 1) if m >= 1 else 0
    if fnum == 0 and n > m:
        return NEG_INF
    num = (math.comb(n, m) * matchings_count(k, r) * a ** r
           * (b - a) ** (m * (m - 1) // 2 - r) * fnum ** (n - m))
    den = b ** (m * (m - 1) // 2 + m * (n - m))
    return _log_ratio(num, den)


def exact_log_EY(n: int, k: int, p: Fraction) -> float:
    """ln E[Y_k] with exact big-integer arithmetic."""
    _check_p(p)
    if k < 0 or k > n:
        raise ValueError("k out of range")
    a, b = p.numerator, p.denominator
    cover = b ** k - (b - a) ** k
    if cover == 0 and n > k:
        return NEG_INF
    num = math.comb(n, k) * (b - a) ** (k * (k - 1) // 2) * cover ** (n - k)
    den = b ** (k * (k - 1) // 2 + k * (n - k))
    return _log_ratio(num, den)


def exact_F(k: int, r: int, p: Fraction) -> Fraction:
    """F(n,k,r) as an exact rational."""
    _check_p(p)
    m = k + r
    if m <= 1:
        return Fraction(0)
    q = 1 - p
    return 1 - q ** m - m * p * q ** (m - 1)


# --------------------------------------------------------------------------
# 256-bit float evaluation for irrational p
# --------------------------------------------------------------------------


def _mp_log_binomial(n: int, k: int):
    return (mpmath.loggamma(n + 1) - mpmath.loggamma(k + 1)
            - mpmath.loggamma(n - k + 1))


def mp_log_EX(n: int, k: int, p: float) -> float:
    """ln E[X_k] at 256-bit precision (p taken as the exact float64 value)."""
    if k < 0 or k > n:
        raise ValueError("k out of range")
    with mpmath.workprec(PREC_FLOAT):
        q = 1 - mpmath.mpf(p)
        return float(_mp_log_binomial(n, k) + (k * (k - 1) // 2) * mpmath.log(q))


def mp_log_E_aug(n: int, k: int, r: int, p: float) -> float:
    """ln E(n,k,r) at 256-bit precision."""
    if r < 0 or r > k or k + r > n:
        raise ValueError("need 0 <= r <= k and k + r <= n")
    m = k + r
    with mpmath.workprec(PREC_FLOAT):
        pp = mpmath.mpf(p)
        q = 1 - pp
        if m <= 1:
            f = mpmath.mpf(0)
        else:
            f = 1 - q ** m - m * pp * q ** (m - 1)
        if f <= 0 and n > m:
            return NEG_INF
        val = (_mp_log_binomial(n, m)
               + mpmath.loggamma(m + 1) - mpmath.loggamma(k - r + 1)
               - r * mpmath.log(2) - mpmath.loggamma(r + 1)
               + r * mpmath.log(pp)
               + (m * (m - 1) // 2 - r) * mpmath.log(q))
        if n > m:
            val += (n - m) * mpmath.log(f)
        return float(val)


def mp_log_EY(n: int, k: int, p: float) -> float:
    """ln E[Y_k] at 256-bit precision."""
    if k < 0 or k > n:
        raise ValueError("k out of range")
    with mpmath.workprec(PREC_FLOAT):
        pp = mpmath.mpf(p)
        q = 1 - pp
        cover = 1 - q ** k
        if cover <= 0 and n > k:
            return NEG_INF
        val = _mp_log_binomial(n, k) + (k * (k - 1) // 2) * mpmath.log(q)
        if n > k:
            val += (n - k) * mpmath.log(cover)
        return float(val)


# --------------------------------------------------------------------------
# independent brute-force threshold scans (no caps, no unimodality)
# --------------------------------------------------------------------------


def oracle_kx(n: int, p: float, threshold: float) -> int | None:
    """Full scan over k in [0, n] at 256 bits; largest k above threshold."""
    best = None
    for k in range(n + 1):
        if mp_log_EX(n, k, p) > threshold:
            best = k
    return best


def oracle_kz(n: int, p: float, threshold: float, kx: int) -> tuple[int, int] | None:
    """Full 2-D scan: for k from kx down, every r in [0, min(k, n-k)]."""
    for k in range(kx, -1, -1):
        best_r = None
        best_val = NEG_INF
        for r in range(min(k, n - k) + 1):
            val = mp_log_E_aug(n, k, r, p)
            if val > best_val:
                best_val = val
                best_r = r
        if best_val > threshold:
            return k, best_r
    return None
