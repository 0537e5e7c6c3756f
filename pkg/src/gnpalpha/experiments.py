"""Monte Carlo experiments tying the closed forms to sampled graphs.

Every experiment derives one seed per trial as mix64(seed_base + trial_index)
and aggregates with commutative merges, so a run is reproducible bit for bit
and independent of worker count.
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._accel import kernels
from ._bits import bits, words_for
from .graph import Graph, tree4_decompose
from .moments import (ParamPoint, expected_tree4, log_E_aug,
                      log_expected_independent_sets,
                      log_expected_maximal_sets, predicted_interval,
                      ss_ell, ss_ladder)
from .sampler import TWO53, pair_from_index, pair_uniform_bits, sample_gnp, trial_seed
from .solver import BudgetExceededError, alpha

MAX_FAILURE_FRACTION = 0.01


class ExperimentAbortedError(RuntimeError):
    """Raised when more than 1% of trials exhaust the solver budget."""


class InvariantViolationError(RuntimeError):
    """A theorem-level identity failed on concrete data: indicates a bug."""


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(f"not JSON serializable: {type(o)}")


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
        + "\n")


# --------------------------------------------------------------------------
# concentration histogram
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ConcentrationSummary:
    n: int
    p: float
    trials: int
    seed: int
    histogram: dict[int, int]
    mode: int
    median_alpha: float
    predicted_window: tuple[int, int] | None
    mass_in_predicted_window: float | None
    failures: int

    def to_json_dict(self) -> dict:
        return {
            "experiment": "concentration",
            "n": self.n, "p": self.p, "trials": self.trials, "seed": self.seed,
            "per_trial_seed": "mix64(seed + trial_index)",
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "mode": self.mode,
            "median_alpha": self.median_alpha,
            "predicted_window": list(self.predicted_window)
            if self.predicted_window else None,
            "mass_in_predicted_window": self.mass_in_predicted_window,
            "failures": self.failures,
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha", "count"])
            for k in sorted(self.histogram):
                w.writerow([k, self.histogram[k]])


def _alpha_chunk(args) -> list[tuple[int, int]]:
    n, p, seed, lo, hi, budget = args
    out = []
    for i in range(lo, hi):
        g = sample_gnp(n, p, trial_seed(seed, i))
        try:
            out.append((i, alpha(g, node_budget=budget).alpha))
        except BudgetExceededError:
            out.append((i, -1))
    return out


def _run_trials(fn, args_list, threads: int):
    if threads <= 1:
        for a in args_list:
            yield fn(a)
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            yield from pool.map(fn, args_list)


def concentration_run(point: ParamPoint, trials: int, seed: int,
                      threads: int = 1,
                      node_budget: int = 10**9) -> ConcentrationSummary:
    """Sample `trials` graphs, solve each exactly, and report the alpha
    histogram with the mass falling inside the predicted two-point window."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    chunk = max(1, trials // (8 * max(1, threads)))
    args = [(point.n, point.p, seed, lo, min(lo + chunk, trials), node_budget)
            for lo in range(0, trials, chunk)]
    values: dict[int, int] = {}
    failures = 0
    hist: Counter[int] = Counter()
    for results in _run_trials(_alpha_chunk, args, threads):
        for i, a in results:
            values[i] = a
    for i in range(trials):
        a = values[i]
        if a < 0:
            failures += 1
        else:
            hist[a] += 1
    if failures > MAX_FAILURE_FRACTION * trials:
        raise ExperimentAbortedError(
            f"{failures}/{trials} trials exhausted the solver budget")
    try:
        window = predicted_interval(point)
    except ValueError:
        window = None
    ok = trials - failures
    mode = min(k for k, c in hist.items() if c == max(hist.values()))
    flat = sorted(a for i, a in values.items() if a >= 0)
    median = float(np.median(flat))
    mass = None
    if window is not None and ok:
        mass = (hist.get(window[0], 0) + hist.get(window[1], 0)) / ok
    return ConcentrationSummary(
        n=point.n, p=point.p, trials=trials, seed=seed,
        histogram=dict(hist), mode=mode, median_alpha=median,
        predicted_window=window, mass_in_predicted_window=mass,
        failures=failures)


# --------------------------------------------------------------------------
# tree-component decomposition identity
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class DecompositionTrial:
    trial: int
    seed: int
    t: int
    stars: int
    alpha: int
    alpha_h: int
    residual: int


@dataclass(frozen=True)
class DecompositionSummary:
    n: int
    c: float
    trials: int
    seed: int
    records: tuple[DecompositionTrial, ...]
    mean_t: float
    expected_t: float
    se_t: float
    star_fraction: float | None
    se_star_fraction: float | None
    max_abs_residual: int

    def to_json_dict(self) -> dict:
        return {
            "experiment": "tree4_decomposition",
            "n": self.n, "c": self.c, "p": self.c / self.n,
            "trials": self.trials, "seed": self.seed,
            "per_trial_seed": "mix64(seed + trial_index)",
            "mean_t": self.mean_t, "expected_t": self.expected_t,
            "se_t": self.se_t,
            "star_fraction": self.star_fraction,
            "se_star_fraction": self.se_star_fraction,
            "max_abs_residual": self.max_abs_residual,
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["trial", "t", "stars", "alpha", "alpha_H", "residual"])
            for r in self.records:
                w.writerow([r.trial, r.t, r.stars, r.alpha, r.alpha_h,
                            r.residual])


def _decomposition_chunk(args):
    n, c, seed, lo, hi, budget = args
    p = c / n
    out = []
    for i in range(lo, hi):
        ts = trial_seed(seed, i)
        g = sample_gnp(n, p, ts)
        dec = tree4_decompose(g)
        a_g = alpha(g, node_budget=budget).alpha
        if dec.remainder:
            sub, _ = g.subgraph(dec.remainder)
            a_h = alpha(sub, node_budget=budget).alpha
        else:
            a_h = 0
        v_h = dec.remainder.bit_count()
        residual = a_g - (a_h + (n - v_h) // 2 + dec.star_count)
        out.append(DecompositionTrial(i, ts, dec.t, dec.star_count, a_g, a_h,
                                      residual))
    return out


def decomposition_check(n: int, c: float, trials: int, seed: int,
                        threads: int = 1,
                        node_budget: int = 10**9) -> DecompositionSummary:
    """Verify alpha(G) = alpha(H) + (n - v_H)/2 + B on sampled G(n, c/n).

    H is the graph left after deleting all 4-vertex tree components and B
    counts the star-shaped ones.  The residual must be identically zero; a
    nonzero residual raises InvariantViolationError.
    """
    chunk = max(1, trials // (8 * max(1, threads)))
    args = [(n, c, seed, lo, min(lo + chunk, trials), node_budget)
            for lo in range(0, trials, chunk)]
    records: list[DecompositionTrial] = []
    for out in _run_trials(_decomposition_chunk, args, threads):
        records.extend(out)
    records.sort(key=lambda r: r.trial)
    ts = np.array([r.t for r in records], dtype=float)
    mean_t = float(ts.mean())
    se_t = float(ts.std(ddof=1) / math.sqrt(len(ts))) if len(ts) > 1 else 0.0
    total_trees = int(ts.sum())
    stars = sum(r.stars for r in records)
    star_fraction = stars / total_trees if total_trees else None
    se_star = (math.sqrt(star_fraction * (1 - star_fraction) / total_trees)
               if total_trees and star_fraction is not None else None)
    summary = DecompositionSummary(
        n=n, c=c, trials=trials, seed=seed, records=tuple(records),
        mean_t=mean_t, expected_t=expected_tree4(n, c / n), se_t=se_t,
        star_fraction=star_fraction, se_star_fraction=se_star,
        max_abs_residual=max(abs(r.residual) for r in records))
    if summary.max_abs_residual != 0:
        bad = next(r for r in records if r.residual != 0)
        raise InvariantViolationError(
            f"decomposition identity violated at trial {bad.trial} "
            f"(seed {bad.seed}): residual {bad.residual}")
    return summary


# --------------------------------------------------------------------------
# Monte Carlo moment cross-check
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MomentMcReport:
    n: int
    p: float
    k: int
    r: int
    trials: int
    seed: int
    mean_x: float
    mean_y: float
    mean_z: float
    exact_x: float
    exact_y: float
    exact_z: float
    z_x: float
    z_y: float
    z_z: float

    def to_json_dict(self) -> dict:
        return {
            "experiment": "moment_mc_check",
            "n": self.n, "p": self.p, "k": self.k, "r": self.r,
            "trials": self.trials, "seed": self.seed,
            "mean": {"X": self.mean_x, "Y": self.mean_y, "Z": self.mean_z},
            "exact": {"X": self.exact_x, "Y": self.exact_y, "Z": self.exact_z},
            "z_scores": {"X": self.z_x, "Y": self.z_y, "Z": self.z_z},
        }


def _zscore(samples: np.ndarray, exact: float) -> float:
    se = samples.std(ddof=1) / math.sqrt(len(samples))
    if se == 0.0:
        return 0.0 if float(samples.mean()) == exact else math.inf
    return (float(samples.mean()) - exact) / se


def moment_mc_check(n: int, p: float, k: int, r: int, trials: int,
                    seed: int) -> MomentMcReport:
    """Compare Monte Carlo means of X_k, Y_k and Z_{k,r} against the closed
    forms; reports z-scores.  Exact counting per trial, so n <= 12."""
    if n > 12:
        raise ValueError("moment_mc_check supports n <= 12")
    seeds = np.array([trial_seed(seed, i) for i in range(trials)],
                     dtype=np.uint64)
    masks = kernels.batch_sample_gnp_masks(n, p, seeds)
    counts = np.asarray(kernels.mc_structure_counts(masks, n, k, r))
    x = counts[:, 0].astype(float)
    y = counts[:, 1].astype(float)
    z = counts[:, 2].astype(float)
    ex = math.exp(log_expected_independent_sets(n, p, k))
    ey = math.exp(log_expected_maximal_sets(n, p, k))
    ez = math.exp(log_E_aug(n, p, k, r))
    return MomentMcReport(
        n=n, p=p, k=k, r=r, trials=trials, seed=seed,
        mean_x=float(x.mean()), mean_y=float(y.mean()), mean_z=float(z.mean()),
        exact_x=ex, exact_y=ey, exact_z=ez,
        z_x=_zscore(x, ex), z_y=_zscore(y, ey), z_z=_zscore(z, ez))


# --------------------------------------------------------------------------
# coupled probability ladder
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LadderReport:
    n: int
    p: float
    trials_per_rung: int
    seed: int
    rungs: tuple[float, ...]
    medians: tuple[float, ...]
    q05: tuple[float, ...]
    q95: tuple[float, ...]
    median_drift: float
    ell: float
    drift_leading_order: float
    monotone_violations: int

    def to_json_dict(self) -> dict:
        return {
            "experiment": "ladder",
            "n": self.n, "p": self.p,
            "trials_per_rung": self.trials_per_rung, "seed": self.seed,
            "per_trial_seed": "mix64(seed + trial_index)",
            "rungs": list(self.rungs),
            "medians": list(self.medians),
            "q05": list(self.q05), "q95": list(self.q95),
            "median_drift": self.median_drift,
            "ell": self.ell,
            "drift_leading_order": self.drift_leading_order,
            "monotone_violations": self.monotone_violations,
        }

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["rung", "p_i", "median", "q05", "q95"])
            for i, p_i in enumerate(self.rungs):
                w.writerow([i, repr(p_i), self.medians[i], self.q05[i],
                            self.q95[i]])


def _ladder_chunk(args):
    n, rungs, seed, lo, hi, budget = args
    m = n * (n - 1) // 2
    out = []
    for t in range(lo, hi):
        u53 = pair_uniform_bits(n, trial_seed(seed, t))
        alphas = []
        prev_alpha = None
        prev_witness = 0
        for p_i in rungs:
            sel = np.nonzero(u53 < np.uint64(int(math.ceil(p_i * TWO53))))[0]
            edges = [pair_from_index(int(j), n) for j in sel]
            g = Graph.from_edges(n, edges)
            # repair the previous witness into a warm incumbent: drop one
            # endpoint of any newly-appeared edge inside it
            seed_set = prev_witness
            for u, v in edges:
                if seed_set & (1 << u) and seed_set & (1 << v):
                    seed_set &= ~(1 << u)
            res = alpha(g, node_budget=budget, upper_bound=prev_alpha,
                        seed_set=seed_set)
            if not g.is_independent(res.witness) \
                    or res.witness.bit_count() != res.alpha:
                raise InvariantViolationError("invalid ladder witness")
            if prev_alpha is not None and res.alpha > prev_alpha:
                raise InvariantViolationError(
                    f"alpha increased along coupled ladder at trial {t}")
            alphas.append(res.alpha)
            prev_alpha = res.alpha
            prev_witness = res.witness
            prev_edges = len(edges)
        out.append((t, alphas))
    return out


def ladder_run(n: int, p: float, trials_per_rung: int, seed: int,
               threads: int = 1, node_budget: int = 10**9) -> LadderReport:
    """Coupled ladder experiment: one uniform per vertex pair per trial; rung
    i keeps the pairs below p_i, so each trial's graphs are edgewise nested
    and per-trial alpha is non-increasing (asserted exactly)."""
    rungs = ss_ladder(n, p)
    chunk = max(1, trials_per_rung // (8 * max(1, threads)))
    args = [(n, rungs, seed, lo, min(lo + chunk, trials_per_rung), node_budget)
            for lo in range(0, trials_per_rung, chunk)]
    table = np.zeros((trials_per_rung, len(rungs)), dtype=np.int64)
    for out in _run_trials(_ladder_chunk, args, threads):
        for t, alphas in out:
            table[t, :] = alphas
    medians = tuple(float(np.median(table[:, i])) for i in range(len(rungs)))
    q05 = tuple(float(np.percentile(table[:, i], 5)) for i in range(len(rungs)))
    q95 = tuple(float(np.percentile(table[:, i], 95)) for i in range(len(rungs)))
    violations = int(np.sum(np.diff(table, axis=1) > 0))
    return LadderReport(
        n=n, p=p, trials_per_rung=trials_per_rung, seed=seed,
        rungs=tuple(rungs), medians=medians, q05=q05, q95=q95,
        median_drift=medians[0] - medians[-1],
        ell=ss_ell(n, p),
        drift_leading_order=math.log(n * p) / p,
        monotone_violations=violations)
