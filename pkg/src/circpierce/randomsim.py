"""Random fixed-length societies: closed-form probabilities and Monte Carlo.

Random numbers come from numpy's counter-based Philox generator.  Trials are
grouped in blocks of :data:`BLOCK`; block ``b`` of a run with master seed ``s``
draws from ``Philox(key=s, counter=[0, b, 0, 0])`` and trial ``i`` takes row
``i % BLOCK`` of its block's ``(rows, n)`` matrix of left endpoints.  Workers
only ever receive whole blocks, so histograms do not depend on ``jobs``.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Dict, Iterable, List, Tuple

import numpy as np

from .errors import ParameterError
from .piercing import exact_tau
from .spectrum import CLOSED, Arc, Society

BLOCK = 1024
MAX_SEED = 2**64

PROVEN = "proven"
CONJECTURED = "conjectured"
OUTSIDE = "outside"


@dataclass(frozen=True)
class RandomSocietyParams:
    n: int
    p: float
    seed: int
    trials: int

    def __post_init__(self):
        _check_np(self.n, self.p)
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ParameterError(f"trials must be a positive integer, got {self.trials!r}")
        _check_seed(self.seed)


@dataclass(frozen=True)
class FormulaValue:
    value: float
    regime: str

    @property
    def proven(self) -> bool:
        return self.regime == PROVEN

    @property
    def applicable(self) -> bool:
        """Proven, or inside the band where simulation tracks the formula."""
        return self.regime != OUTSIDE


@dataclass
class SimulationReport:
    params: RandomSocietyParams
    histogram: Dict[int, int]
    estimates: Dict[int, Tuple[float, float]]
    mean_tau: Tuple[float, float]
    formula_values: Dict[int, FormulaValue] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "estimates": {str(k): {"probability": pr, "se": se} for k, (pr, se) in sorted(self.estimates.items())},
            "mean_tau": {"estimate": self.mean_tau[0], "se": self.mean_tau[1]},
            "formula_values": {
                str(k): {"value": f.value, "regime": f.regime, "applicable": f.applicable, "proven": f.proven}
                for k, f in sorted(self.formula_values.items())
            },
        }


def _check_np(n, p) -> None:
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if not 0 < p < 1:
        raise ParameterError(f"arc length p must lie in (0, 1), got {p!r}")


def _check_seed(seed) -> None:
    if not isinstance(seed, int) or not 0 <= seed < MAX_SEED:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")


def _block_lefts(n: int, seed: int, block: int, rows: int = BLOCK) -> np.ndarray:
    gen = np.random.Generator(np.random.Philox(key=seed, counter=[0, block, 0, 0]))
    return gen.random((rows, n))


def random_society(n: int, p: float, seed: int, trial: int = 0) -> Society:
    """Trial ``trial`` of the run seeded by ``seed``: n closed arcs of length p."""
    _check_np(n, p)
    _check_seed(seed)
    block, row = divmod(trial, BLOCK)
    lefts = _block_lefts(n, seed, block, row + 1)[row]
    return Society(tuple(Arc(float(x), float(p), CLOSED) for x in lefts), f"random(n={n},p={p},trial={trial})")


def _run_block(args) -> Tuple[Counter, int, int]:
    n, p, seed, block, rows = args
    p = float(p)
    hist: Counter = Counter()
    total = total_sq = 0
    for row in _block_lefts(n, seed, block, rows).tolist():
        tau = exact_tau([(x, p, x + p, True) for x in row])
        hist[tau] += 1
        total += tau
        total_sq += tau * tau
    return hist, total, total_sq


def _blocks(n, p, seed, trials) -> List[tuple]:
    count = -(-trials // BLOCK)
    return [(n, p, seed, b, min(BLOCK, trials - b * BLOCK)) for b in range(count)]


def tau_histogram(n: int, p: float, trials: int, seed: int, jobs: int = 1) -> Tuple[Counter, int, int]:
    """Counts of each piercing number over ``trials`` random societies."""
    tasks = _blocks(n, p, seed, trials)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_block, tasks))
    else:
        parts = [_run_block(t) for t in tasks]
    hist: Counter = Counter()
    total = total_sq = 0
    for h, t, t2 in parts:
        hist.update(h)
        total += t
        total_sq += t2
    return hist, total, total_sq


def binomial_se(prob: float, trials: int) -> float:
    return math.sqrt(prob * (1 - prob) / trials)


def simulate(params: RandomSocietyParams, jobs: int = 1) -> SimulationReport:
    n, p, trials = params.n, params.p, params.trials
    hist, total, total_sq = tau_histogram(n, p, trials, params.seed, jobs)
    estimates = {}
    for k in range(1, n + 1):
        prob = hist.get(k, 0) / trials
        estimates[k] = (prob, binomial_se(prob, trials))
    mean = total / trials
    if trials > 1:
        var = max(total_sq - trials * mean * mean, 0.0) / (trials - 1)
        se = math.sqrt(var / trials)
    else:
        se = 0.0
    formulas = {k: formula_tau_k(n, p, k) for k in range(1, n + 1)}
    return SimulationReport(params, dict(sorted(hist.items())), estimates, (mean, se), formulas)


def tau_k_regime(p: float, k: int) -> str:
    """Where the closed form for P(tau = k) stands at arc length p.

    Proven below 1/(2k).  For k >= 3 simulations track it up to about 1/k;
    that band is labelled conjectured.
    """
    if p < 1 / (2 * k):
        return PROVEN
    if k >= 3 and p <= 1 / k:
        return CONJECTURED
    return OUTSIDE


def formula_tau_k(n: int, p: float, k: int) -> FormulaValue:
    """C(n, k) (1 - kp)^(k-1) (kp)^(n-k), with its regime."""
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if not isinstance(k, int) or not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got k={k!r}, n={n}")
    if not p > 0:
        raise ParameterError(f"arc length must be positive, got {p!r}")
    value = comb(n, k) * (1 - k * p) ** (k - 1) * (k * p) ** (n - k)
    return FormulaValue(float(value), tau_k_regime(p, k))


def formula_tau1_n3(p: float) -> float:
    """P(tau = 1) for three random arcs of length p, over the whole range (0, 1)."""
    if not 0 < p < 1:
        raise ParameterError(f"arc length p must lie in (0, 1), got {p!r}")
    if p < 0.5:
        return 3 * p * p
    if 3 * p < 2:
        return -9 * p * p + 12 * p - 3
    return 1.0


def expected_tau_formula(n: int, p: float) -> FormulaValue:
    """Sum over k of k C(n,k) (1-kp)^(k-1) (kp)^(n-k); proven when p < 1/(2n)."""
    _check_np(n, p)
    value = sum(k * formula_tau_k(n, p, k).value for k in range(1, n + 1))
    regime = PROVEN if p < 1 / (2 * n) else OUTSIDE
    return FormulaValue(value, regime)


@dataclass(frozen=True)
class DisjointCheck:
    estimate: float
    se: float
    closed_form: float
    trials: int


def disjoint_probability_check(k: int, p: float, trials: int, seed: int) -> DisjointCheck:
    """Monte Carlo rate at which k random closed arcs of length p are pairwise disjoint.

    Disjointness is read off the sorted left endpoints: consecutive gaps
    (including the one that wraps past 0) must all exceed p.
    """
    if not isinstance(k, int) or k < 1:
        raise ParameterError(f"k must be a positive integer, got {k!r}")
    if not 0 < p or k * p >= 1:
        raise ParameterError(f"need 0 < p and kp < 1, got k={k}, p={p}")
    if not isinstance(trials, int) or trials < 1:
        raise ParameterError("trials must be a positive integer")
    _check_seed(seed)
    hits = 0
    for n_rows, block in ((min(BLOCK, trials - b * BLOCK), b) for b in range(-(-trials // BLOCK))):
        lefts = np.sort(_block_lefts(k, seed, block, n_rows), axis=1)
        gaps = np.diff(np.concatenate([lefts, lefts[:, :1] + 1.0], axis=1), axis=1)
        hits += int(np.count_nonzero((gaps > p).all(axis=1)))
    est = hits / trials
    return DisjointCheck(est, binomial_se(est, trials), (1 - k * p) ** (k - 1), trials)


def p_grid(p_min: float, p_max: float, step: float) -> List[float]:
    """Grid points in (0, 1) from p_min to p_max inclusive, rounded to the step's precision."""
    if step <= 0:
        raise ParameterError("p step must be positive")
    digits = max(0, -math.floor(math.log10(step)) + 2)
    out = []
    i = 0
    while True:
        p = round(p_min + i * step, digits)
        if p > p_max + step * 1e-9:
            break
        if 0 < p < 1:
            out.append(p)
        i += 1
    return out


SWEEP_COLUMNS = ["n", "p", "k", "prob_sim", "se", "prob_formula", "formula_applicable", "trials", "seed"]


def sweep(n: int, ps: Iterable[float], trials: int, seed: int, jobs: int = 1):
    """Yield one row per (p, k): simulated and closed-form P(tau = k).

    Every p reuses the same seed, so neighbouring curves share random draws.
    """
    for p in ps:
        report = simulate(RandomSocietyParams(n, p, seed, trials), jobs)
        for k in range(1, n + 1):
            prob, se = report.estimates[k]
            f = report.formula_values[k]
            yield {"n": n, "p": p, "k": k, "prob_sim": prob, "se": se, "prob_formula": f.value,
                   "formula_applicable": f.applicable, "trials": trials, "seed": seed}
