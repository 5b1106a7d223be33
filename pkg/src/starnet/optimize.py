"""Multi-start simplex search for the largest n-local value S.

Each restart runs Nelder-Mead (reflection 1, expansion 2, contraction 0.5,
shrink 0.5) over 4n spherical angles.  Restart r draws its start from
``default_rng([seed, r])``, so the first k restarts are the same whatever
the total count; restart 0 instead starts from the best axis-aligned grid
point.  The reduction keeps the largest S, ties going to the lowest restart
index, so parallel and serial runs agree bit for bit.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import itertools
import math

import numpy as np
from scipy.optimize import minimize

from .network import FastEvaluator, MeasurementSettings, root_sum, spherical, to_angles


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 8
    max_iterations: int = 6000
    tolerance: float = 1e-8
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


_S2 = 1 / math.sqrt(2)
GRID_DIRECTIONS = np.array([
    [1, 0, 0], [0, 1, 0], [0, 0, 1], [_S2, _S2, 0], [_S2, -_S2, 0],
], dtype=float)
_PAIRS = [(a, b) for a, b in itertools.permutations(range(len(GRID_DIRECTIONS)), 2)]


def _s_from(T, signs, n, m):
    V = m[None, :, 0, :] + signs[:, :, None] * m[None, :, 1, :]
    J = T
    for k in range(n):
        J = np.einsum("mj...,mj->m...", J, V[:, k])
    return root_sum(J / 2 ** n, n) * 2.0 ** (3 - n)


def _angles_to_m(x, n):
    a = np.asarray(x).reshape(n, 2, 2)
    return spherical(a[..., 0], a[..., 1])


def grid_start(T, signs, n):
    """Best uniform axis-aligned pair, then one greedy per-edge sweep."""
    def value(choice):
        m = np.array([[GRID_DIRECTIONS[a], GRID_DIRECTIONS[b]] for a, b in choice])
        return _s_from(T, signs, n, m)

    best = max(_PAIRS, key=lambda p: value([p] * n))
    choice = [best] * n
    for k in range(n):
        choice[k] = max(_PAIRS, key=lambda p: value(choice[:k] + [p] + choice[k + 1:]))
    m = np.array([[GRID_DIRECTIONS[a], GRID_DIRECTIONS[b]] for a, b in choice])
    return to_angles(m).ravel()


def restart_start(T, signs, n, seed, r):
    if r == 0:
        return grid_start(T, signs, n)
    rng = np.random.default_rng([seed, r])
    theta = rng.uniform(0, math.pi, size=(n, 2))
    phi = rng.uniform(0, 2 * math.pi, size=(n, 2))
    return np.stack([theta, phi], axis=-1).ravel()


def _run_restart(args):
    T, signs, n, seed, r, max_iter, tol = args
    x0 = restart_start(T, signs, n, seed, r)
    res = minimize(lambda x: -_s_from(T, signs, n, _angles_to_m(x, n)), x0,
                   method="Nelder-Mead",
                   options=dict(maxiter=max_iter, maxfev=4 * max_iter, xatol=tol, fatol=tol, adaptive=False))
    return -float(res.fun), np.asarray(res.x)


def restart_values(evaluator, config):
    """[(S, angles)] for every restart, in restart order."""
    jobs = [(evaluator.T, evaluator.signs, evaluator.n, config.seed, r,
             config.max_iterations, config.tolerance) for r in range(config.restarts)]
    if config.workers > 1 and config.restarts > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_run_restart, jobs))
    return [_run_restart(j) for j in jobs]


def maximize_s(scenario, config=OptimizerConfig(), evaluator=None):
    """(settings, report) for the best S found over all restarts."""
    evaluator = evaluator or FastEvaluator(scenario)
    results = restart_values(evaluator, config)
    best = 0
    for r, (s, _) in enumerate(results):
        if s > results[best][0]:
            best = r
    x = results[best][1]
    settings = MeasurementSettings(_angles_to_m(x, evaluator.n))
    report = evaluator.report(settings)
    report.extra.update(restart=best, restarts=config.restarts,
                        per_restart=tuple(s for s, _ in results))
    return settings, report
