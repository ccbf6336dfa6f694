"""Bernoulli simulation of tester runs and distance sweeps over epsilon grids."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .certification import TesterKind, TesterPlan, accept_prob, plan, ratio_bound
from .unitary import UnitaryMatrix, distance, eigenphases, haar_random, unitary_from_phases

WILSON_Z = 2.576
WINDOW = 0.01
MAX_ENDPOINT_TRIES = 64


@dataclass(frozen=True)
class TrialStats:
    trials: int
    accepts: int
    p_hat: float
    wilson_ci_99: tuple[float, float]
    exact_p: float
    seed: int

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "accepts": self.accepts,
            "p_hat": self.p_hat,
            "wilson_ci_99": list(self.wilson_ci_99),
            "exact_p": self.exact_p,
            "seed": self.seed,
        }


def wilson_interval(accepts: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    p = accepts / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    # keep p_hat inside the interval despite rounding at p in {0, 1}
    return min(p, max(0.0, centre - half)), max(p, min(1.0, centre + half))


def run_trials(u, v, plan: TesterPlan, trials: int, seed: int) -> TrialStats:
    """Sample ``trials`` independent tester runs at the exact acceptance probability."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    exact = min(1.0, max(0.0, accept_prob(u, v, plan).p_accept))
    rng = np.random.default_rng(seed)
    accepts = int(np.count_nonzero(rng.random(trials) < exact))
    return TrialStats(trials, accepts, accepts / trials, wilson_interval(accepts, trials), exact, seed)


def point_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for grid point ``index``, reproducible regardless of evaluation order."""
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _geodesic_phases(theta: np.ndarray, target: float) -> np.ndarray:
    """Scale principal-branch phases by t in [0, 1] so the distance to I hits ``target``."""
    principal = np.angle(np.exp(1j * theta))

    def dist(t: float) -> float:
        return math.sqrt(max(0.0, 1 - abs(np.exp(1j * t * principal).mean()) ** 2))

    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = (lo + hi) / 2
        if dist(mid) < target:
            lo = mid
        else:
            hi = mid
    return hi * principal


def sample_at_distance(
    d: int, low: float, high: float, rng: np.random.Generator
) -> tuple[UnitaryMatrix, UnitaryMatrix]:
    """Pair (U, V) with distance in [low, high]; V Haar, U^dagger V along a Haar geodesic."""
    v = haar_random(d, rng)
    target = rng.uniform(low, high)
    for _ in range(MAX_ENDPOINT_TRIES if target < 1.0 else 0):
        w = eigenphases(haar_random(d, rng))
        if distance(np.eye(d), w.reconstruct()) >= target:
            break
    else:
        # Haar endpoints essentially never reach distance 1; rotated roots of unity are traceless
        basis = haar_random(d, rng).matrix
        phases = rng.uniform(0, 2 * np.pi) + 2 * np.pi * np.arange(d) / d
        w = eigenphases(unitary_from_phases(phases, basis))
    theta = _geodesic_phases(w.phases, target)
    # U^dagger V = W diag(e^{i theta}) W^dagger, so U = V (W diag W^dagger)^dagger
    rel = unitary_from_phases(theta, w.basis)
    return UnitaryMatrix(v.matrix @ rel.matrix.conj().T), v


def _qubit_configuration(eps: float, high: float, k: int, per_point: int) -> UnitaryMatrix:
    # |sin(Delta/2)| spaced through [eps, high]
    frac = k / (per_point - 1) if per_point > 1 else 0.0
    delta = 2 * math.asin(min(1.0, eps + frac * (high - eps)))
    return unitary_from_phases([0.0, delta])


SWEEP_COLUMNS = ("epsilon", "n", "s", "rounds", "total_uses", "worst_p_accept", "soundness_bound", "window")


def sweep_distance(
    kind, d: int, epsilon_grid: Sequence[float], per_point: int = 64, seed: int = 0
) -> list[dict]:
    """Worst exact acceptance over adversarial instances near distance epsilon, per grid point."""
    kind = TesterKind.parse(kind)
    if len(epsilon_grid) == 0:
        raise ValueError("epsilon grid is empty")
    if per_point < 1:
        raise ValueError("per_point must be >= 1")
    rows = []
    for index, eps in enumerate(epsilon_grid):
        p = plan(kind, d, eps)
        high = min(1.0, eps + WINDOW)
        worst = 0.0
        if d == 2:
            eye = UnitaryMatrix.identity(2)
            for k in range(per_point):
                worst = max(worst, accept_prob(_qubit_configuration(eps, high, k, per_point), eye, p).p_accept)
        else:
            rng = point_rng(seed, index)
            for _ in range(per_point):
                u, v = sample_at_distance(d, eps, high, rng)
                worst = max(worst, accept_prob(u, v, p).p_accept)
        fid = min(1.0, ratio_bound(p) ** 2)
        bound = ((1 + fid) / 2) ** p.rounds if kind.is_swap else fid**p.rounds
        rows.append(
            {
                "epsilon": float(eps),
                "n": p.n,
                "s": p.s,
                "rounds": p.rounds,
                "total_uses": p.total_uses_u,
                "worst_p_accept": worst,
                "soundness_bound": bound,
                "window": WINDOW,
            }
        )
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def rows_to_csv(rows: list[dict], columns: Sequence[str] = SWEEP_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def rows_to_json(rows: list[dict], metadata: dict | None = None) -> str:
    """JSON mirror of the CSV table; floats carry 17 significant digits."""

    def encode(value):
        if isinstance(value, float):
            return _Raw(format(value, ".17g"))
        return value

    payload = {
        "metadata": metadata or {},
        "rows": [{k: encode(v) for k, v in row.items()} for row in rows],
    }
    return _dump_raw(payload)


class _Raw(str):
    pass


def _dump_raw(obj) -> str:
    # json.dumps cannot emit a float with a fixed digit count, so splice raw tokens in
    if isinstance(obj, _Raw):
        return str(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_dump_raw(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_dump_raw(v) for v in obj) + "]"
    return json.dumps(obj)
