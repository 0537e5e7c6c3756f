"""Closed forms, thresholds, and asymptotic estimates for G(n,p).

All expectations are handled in the natural-log domain (float, -inf encoding
zero).  The exact-rational / high-precision cross-check backend lives in
exactref; agreement between the two is a test invariant, not a runtime check.

Threshold conventions: kx_threshold and kz_threshold are log-domain.  The
defaults follow the expected-count cutoffs n^(2*eps) and n^eps with
eps = max(0.02, 2/3 + ln(p)/ln(n)), the largest eps consistent with the
standing assumption p = n^(-2/3+eps); both are overridable, including the
unit-threshold variant (kx_threshold = 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

NEG_INF = float("-inf")

# scans stop once values fall this far below the running max / threshold,
# past the argmax; validated against full scans in the test suite
SCAN_DROP_NATS = 200.0

# advisory regime band: p within +-5% of log(n)/sqrt(n) counts as critical
CRITICAL_BAND = 0.05

E2 = math.e * math.e


def log_binomial(n: int, k: int) -> float:
    if k < 0 or k > n:
        return NEG_INF
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_add(a: float, b: float) -> float:
    """log(e^a + e^b), stable; -inf encodes zero."""
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


@dataclass(frozen=True)
class ParamPoint:
    """One analysis instance (n, p) with its epsilon and threshold settings."""

    n: int
    p: float
    epsilon: float = field(default=None)  # type: ignore[assignment]
    kx_threshold: float = field(default=None)  # type: ignore[assignment]
    kz_threshold: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not 0.0 < self.p < 1.0:
            raise ValueError("p must be in (0, 1)")
        if self.epsilon is None:
            eps = max(0.02, 2.0 / 3.0 + math.log(self.p) / math.log(self.n))
            object.__setattr__(self, "epsilon", eps)
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.kx_threshold is None:
            object.__setattr__(self, "kx_threshold",
                               2.0 * self.epsilon * math.log(self.n))
        if self.kz_threshold is None:
            object.__setattr__(self, "kz_threshold",
                               self.epsilon * math.log(self.n))
        if not math.isfinite(self.kx_threshold) or not math.isfinite(self.kz_threshold):
            raise ValueError("thresholds must be finite")


# --------------------------------------------------------------------------
# first moments
# --------------------------------------------------------------------------


def _xlogq(e: int, p: float) -> float:
    """e * ln(1-p) with the conventions 0 * (-inf) = 0 and p in [0, 1]."""
    if e == 0:
        return 0.0
    if p >= 1.0:
        return NEG_INF
    return e * math.log1p(-p)


def log_expected_independent_sets(n: int, p: float, k: int) -> float:
    """ln E[X_k] where X_k counts independent k-sets."""
    if k < 0 or k > n:
        raise ValueError(f"k={k} outside [0, {n}]")
    return log_binomial(n, k) + _xlogq(k * (k - 1) // 2, p)


def F(n: int, k: int, r: int, p: float) -> float:
    """Probability that a fixed outside vertex has >= 2 neighbors in a
    (k+r)-set.  Computed as -expm1 of the log of the complement for accuracy
    near 0."""
    m = k + r
    if m <= 1 or p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    t = (m - 1) * math.log1p(-p) + math.log((1.0 - p) + m * p)
    return max(0.0, -math.expm1(t))


def log_F(n: int, k: int, r: int, p: float) -> float:
    m = k + r
    if m <= 1 or p <= 0.0:
        return NEG_INF
    if p >= 1.0:
        return 0.0
    t = (m - 1) * math.log1p(-p) + math.log((1.0 - p) + m * p)
    if t >= 0.0:
        return NEG_INF
    return math.log(-math.expm1(t))


def log_E_aug(n: int, p: float, k: int, r: int) -> float:
    """ln E(n,k,r): expected number of augmented independent sets of order k
    with exactly r matching edges."""
    if r < 0 or r > k:
        raise ValueError("need 0 <= r <= k")
    m = k + r
    if m > n:
        raise ValueError("need k + r <= n")
    if n > m:
        lf = log_F(n, k, r, p)
        if lf == NEG_INF:
            return NEG_INF
        outside = (n - m) * lf
    else:
        outside = 0.0
    if r and p <= 0.0:
        return NEG_INF
    log_matchings = (math.lgamma(m + 1) - math.lgamma(k - r + 1)
                     - r * math.log(2.0) - math.lgamma(r + 1))
    internal = r * math.log(p) if r else 0.0
    nonedges = _xlogq(m * (m - 1) // 2 - r, p)
    if nonedges == NEG_INF:
        return NEG_INF
    return math.fsum([log_binomial(n, m), log_matchings, internal,
                      nonedges, outside])


def log_expected_maximal_sets(n: int, p: float, k: int) -> float:
    """ln E[Y_k] where Y_k counts maximal independent k-sets."""
    if k < 0 or k > n:
        raise ValueError(f"k={k} outside [0, {n}]")
    base = log_expected_independent_sets(n, p, k)
    if n == k or base == NEG_INF:
        return base
    if k == 0 or p <= 0.0:
        return NEG_INF  # (1-p)^k = 1 with k < n: no maximal set possible
    if p >= 1.0:
        return base  # every vertex outside sees all of S
    t = k * math.log1p(-p)
    if t == 0.0:
        return NEG_INF
    return base + (n - k) * math.log(-math.expm1(t))


# --------------------------------------------------------------------------
# thresholds
# --------------------------------------------------------------------------


def k_x(point: ParamPoint) -> int | None:
    """Largest k with ln E[X_k] > kx_threshold, by full scan (no unimodality
    assumed); None when no k qualifies."""
    best = None
    running_max = NEG_INF
    argmax = -1
    for k in range(point.n + 1):
        val = log_expected_independent_sets(point.n, point.p, k)
        if val > running_max:
            running_max = val
            argmax = k
        if val > point.kx_threshold:
            best = k
        if k > argmax and val < point.kx_threshold - SCAN_DROP_NATS:
            break
    return best


def r_M(n: int, p: float, k: int) -> tuple[int, float]:
    """argmax_r E(n,k,r) over 0 <= r <= min(k, n-k), smallest r on ties;
    returns (r, ln E(n,k,r))."""
    best_r = 0
    best_val = NEG_INF
    for r in range(min(k, n - k) + 1):
        val = log_E_aug(n, p, k, r)
        if val > best_val:
            best_val = val
            best_r = r
        elif r > best_r and val < best_val - SCAN_DROP_NATS:
            break
    return best_r, best_val


def k_z(point: ParamPoint) -> tuple[int, int] | None:
    """Largest k <= k_x with max_r E(n,k,r) > kz_threshold; returns
    (k_z, r_z) with r_z = r_M(k_z), or None when empty."""
    kx = k_x(point)
    if kx is None:
        return None
    for k in range(kx, -1, -1):
        r, val = r_M(point.n, point.p, k)
        if val > point.kz_threshold:
            return k, r
    return None


def kz_unconstrained_exceeds_kx(point: ParamPoint) -> bool:
    """True when the scan without the k <= k_x cap would land above k_x."""
    kx = k_x(point)
    if kx is None or kx + 1 > point.n:
        return False
    _, val = r_M(point.n, point.p, kx + 1)
    return val > point.kz_threshold


def predicted_interval(point: ParamPoint) -> tuple[int, int]:
    """The two-point window {k_z, k_z+1} for alpha(G(n,p))."""
    kz = k_z(point)
    if kz is None:
        raise ValueError("k_z is undefined at this point (empty scan)")
    return kz[0], kz[0] + 1


# --------------------------------------------------------------------------
# asymptotic estimates
# --------------------------------------------------------------------------


def frieze_estimate(n: int, p: float) -> float:
    """(2/p)(ln(np) - lnln(np) + ln(e/2)): the classical leading-order alpha."""
    np_ = n * p
    if np_ <= math.e:
        raise ValueError("frieze_estimate requires np > e")
    return (2.0 / p) * (math.log(np_) - math.log(math.log(np_))
                        + 1.0 - math.log(2.0))


def rz_asymptotic(n: int, p: float) -> float:
    """Leading-order r_z before ceiling: 4 ln(np)^3 / (e^2 n p^2) - 1."""
    if n * p <= 1.0:
        raise ValueError("requires np > 1")
    return 4.0 * math.log(n * p) ** 3 / (E2 * n * p * p) - 1.0


def rm_asymptotic(n: int, p: float, k: int) -> float:
    """Leading-order r_M(k) before ceiling: k^3 p / (2 e^2 n) - 1."""
    return k ** 3 * p / (2.0 * E2 * n) - 1.0


def kx_minus_kz_asymptotic(n: int, p: float) -> float:
    """Leading-order gap k_x - k_z: 4 ln(np)^2 / (e^2 p^2 n)."""
    if n * p <= 1.0:
        raise ValueError("requires np > 1")
    return 4.0 * math.log(n * p) ** 2 / (E2 * p * p * n)


def xi_band(c_const: float, epsilon: float | None = None) -> tuple[float, float]:
    """The open interval containing xi = k_x - k_z when p = C log(n)/sqrt(n).

    The band depends only on C; epsilon enters the refined center expression
    reported by moment_report, not the band itself.
    """
    center = 1.0 / (E2 * c_const * c_const)
    return center - 2.5, center + 1.5


def expected_tree4(n: int, p: float) -> float:
    """E[t(G)]: expected number of 4-vertex tree components."""
    if n < 4:
        return 0.0
    return math.comb(n, 4) * 16.0 * p ** 3 * (1.0 - p) ** (3 + 4 * (n - 4))


def mu(c: float) -> float:
    """mu(c) = 2 c^3 e^{-4c} / 3, the t(G)/n limit at p = c/n."""
    return 2.0 * c ** 3 * math.exp(-4.0 * c) / 3.0


def ss_ladder(n: int, p: float) -> list[float]:
    """Probability ladder p_0 = p, p_{i+1} = p_i + sqrt(p_i)/n, ending at the
    first rung >= 2p.  Ladder length minus one is at most n*sqrt(p)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    if 2.0 * p + math.sqrt(2.0 * p) / n > 1.0:
        raise ValueError("ladder would leave [0, 1]; need 2p + sqrt(2p)/n <= 1")
    rungs = [p]
    while rungs[-1] < 2.0 * p:
        rungs.append(rungs[-1] + math.sqrt(rungs[-1]) / n)
    assert len(rungs) - 1 <= n * math.sqrt(p)
    return rungs


def ss_ell(n: int, p: float) -> float:
    """The anti-concentration width ln(np) / (2 n p^{3/2})."""
    if n * p <= 1.0:
        raise ValueError("requires np > 1")
    return math.log(n * p) / (2.0 * n * p ** 1.5)


def upper_bound_diagnostic(n: int, p: float) -> float:
    """k_x (unit threshold) minus the leading-order gap ln(np)^2/(p^2 n).

    Diagnostic only: the gap theorem has an unspecified Omega constant, so
    this traces the shape of the upper-bound curve, not a certified bound.
    """
    if n * p <= 1.0:
        raise ValueError("requires np > 1")
    kx1 = k_x(ParamPoint(n, p, kx_threshold=0.0))
    if kx1 is None:
        raise ValueError("unit-threshold k_x undefined")
    return kx1 - math.log(n * p) ** 2 / (p * p * n)


def regime_label(n: int, p: float) -> str:
    """Advisory regime tag; boundaries are exact comparisons with a +-5%
    critical band around log(n)/sqrt(n)."""
    if p > 1.0 / math.log(n) ** 2:
        return "dense"
    crit = math.log(n) / math.sqrt(n)
    if p > (1.0 + CRITICAL_BAND) * crit:
        return "middle"
    if p >= (1.0 - CRITICAL_BAND) * crit:
        return "critical"
    if p > n ** (-2.0 / 3.0):
        return "sparse-valid"
    return "below-validity"


# --------------------------------------------------------------------------
# assembled report
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentReport:
    n: int
    p: float
    epsilon: float
    kx_threshold: float
    kz_threshold: float
    regime: str
    k_x: int | None
    k_z: int | None
    r_z: int | None
    kz_capped: bool
    predicted_interval: tuple[int, int] | None
    log_ex: dict[int, float]
    r_m_table: dict[int, tuple[int, float]]
    frieze: float | None
    kx_minus_kz_asymptotic: float | None
    rz_asymptotic_raw: float | None
    rz_asymptotic_ceiled: int | None
    xi_c: float | None
    xi_band: tuple[float, float] | None
    xi_center_raw: float | None
    xi_center_ceiled: int | None

    def __post_init__(self):
        if self.k_x is not None and self.k_z is not None:
            if self.k_z > self.k_x:
                raise ValueError("invariant violated: k_z > k_x")

    def to_json_dict(self) -> dict:
        out = {
            "n": self.n,
            "p": self.p,
            "epsilon": self.epsilon,
            "kx_threshold": self.kx_threshold,
            "kz_threshold": self.kz_threshold,
            "regime": self.regime,
            "k_x": self.k_x,
            "k_z": self.k_z,
            "r_z": self.r_z,
            "kz_capped": self.kz_capped,
            "predicted_interval": list(self.predicted_interval)
            if self.predicted_interval else None,
            "log_ex": {str(k): v for k, v in self.log_ex.items()},
            "r_m_table": {str(k): [r, v] for k, (r, v) in self.r_m_table.items()},
            "frieze_estimate": self.frieze,
            "kx_minus_kz_asymptotic": self.kx_minus_kz_asymptotic,
            "rz_asymptotic_raw": self.rz_asymptotic_raw,
            "rz_asymptotic_ceiled": self.rz_asymptotic_ceiled,
            "xi_c": self.xi_c,
            "xi_band": list(self.xi_band) if self.xi_band else None,
            "xi_center_raw": self.xi_center_raw,
            "xi_center_ceiled": self.xi_center_ceiled,
        }
        return out


def moment_report(point: ParamPoint) -> MomentReport:
    """All thresholds and predictions for one ParamPoint."""
    n, p = point.n, point.p
    kx = k_x(point)
    kz_pair = k_z(point)
    kzv, rzv = kz_pair if kz_pair is not None else (None, None)
    log_ex = {}
    if kx is not None:
        for k in (kx, kx + 1, kx + 2):
            if 0 <= k <= n:
                log_ex[k] = log_expected_independent_sets(n, p, k)
    table = {}
    if kx is not None and kzv is not None:
        for k in range(kzv, kx + 1):
            table[k] = r_M(n, p, k)
    regime = regime_label(n, p)
    np_ = n * p
    frieze = frieze_estimate(n, p) if np_ > math.e else None
    gap_asym = kx_minus_kz_asymptotic(n, p) if np_ > 1.0 else None
    rz_raw = rz_asymptotic(n, p) if np_ > 1.0 else None
    rz_ceil = max(0, math.ceil(rz_raw)) if rz_raw is not None else None
    xi_c = xi_b = xi_raw = xi_ceil = None
    if regime == "critical":
        xi_c = p * math.sqrt(n) / math.log(n)
        xi_b = xi_band(xi_c)
        if kx is not None:
            xi_raw = (1.0 / (E2 * xi_c * xi_c)
                      - 2.0 * log_ex[kx] / math.log(n) + 2.0 * point.epsilon)
            xi_ceil = math.ceil(xi_raw)
    return MomentReport(
        n=n, p=p, epsilon=point.epsilon,
        kx_threshold=point.kx_threshold, kz_threshold=point.kz_threshold,
        regime=regime, k_x=kx, k_z=kzv, r_z=rzv,
        kz_capped=kz_unconstrained_exceeds_kx(point),
        predicted_interval=(kzv, kzv + 1) if kzv is not None else None,
        log_ex=log_ex, r_m_table=table, frieze=frieze,
        kx_minus_kz_asymptotic=gap_asym,
        rz_asymptotic_raw=rz_raw, rz_asymptotic_ceiled=rz_ceil,
        xi_c=xi_c, xi_band=xi_b, xi_center_raw=xi_raw, xi_center_ceiled=xi_ceil,
    )
