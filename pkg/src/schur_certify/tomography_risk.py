"""Risk bound for ancilla-free unitary tomography built on Schur-Weyl blocks.

The estimator feeds a superposition of maximally entangled irrep states with
weights proportional to the products of partition gaps. Its worst-case
infidelity satisfies a finite-n bound (a sum over partitions of n+1) that
converges to a closed rational function of (n, d) built from Dirichlet
integrals over the gap simplex.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .partitions import Partition, count_partitions, enumerate_partitions

FINITE_SUM_GUARD = {2: 200, 3: 60}
FINITE_SUM_MAX_PARTITIONS = 200_000


class NonpositiveDenominator(ValueError):
    pass


class EnumerationGuardError(ValueError):
    pass


class Regime(str, enum.Enum):
    finite_sum = "finite_sum"
    closed_form = "closed_form"


@dataclass(frozen=True)
class RiskProfile:
    n: int
    d: int
    risk_bound: float
    regime: Regime

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "risk_bound": self.risk_bound, "regime": self.regime.value}


@dataclass(frozen=True)
class PartitionGaps:
    q: tuple[int, ...]
    x: tuple[float, ...]
    T: tuple[float, ...]


def partition_gaps(mu: Partition) -> PartitionGaps:
    """Gaps q_i = mu_i - mu_{i+1}, x_i = q_i/|mu|, T_k = 1 - sum_{j<=k} j x_j."""
    parts = mu.parts + (0,)
    q = tuple(parts[i] - parts[i + 1] for i in range(mu.d))
    total = mu.n
    x = tuple(qi / total for qi in q)
    T = tuple(1 - sum(j * x[j - 1] for j in range(1, k + 1)) for k in range(1, mu.d + 1))
    return PartitionGaps(q, x, T)


def _closed_form_terms(n: int, d: int) -> tuple[int, int]:
    big = n + 1
    num = (d * d - 1) * (3 * d - 2) * (3 * d - 1)
    den = 6 * big * big - 6 * big * (3 * d - 1) + (3 * d - 2) * (3 * d - 1) * (d * d + 2)
    return num, den


def risk_closed_form_exact(n: int, d: int) -> Fraction:
    if n < 1 or d < 2:
        raise ValueError("need n >= 1 and d >= 2")
    num, den = _closed_form_terms(n, d)
    if den <= 0:
        raise NonpositiveDenominator(f"denominator {den} <= 0 at n={n}, d={d}")
    return Fraction(num, den)


def risk_closed_form(n: int, d: int) -> float:
    """(d^2-1)(3d-2)(3d-1) / (6N^2 - 6N(3d-1) + (3d-2)(3d-1)(d^2+2)) with N = n+1."""
    return float(risk_closed_form_exact(n, d))


def risk_profile(n: int, d: int, regime: Regime | str = Regime.closed_form) -> RiskProfile:
    regime = Regime(regime)
    value = risk_closed_form(n, d) if regime is Regime.closed_form else risk_finite_sum(n, d)
    return RiskProfile(n, d, min(1.0, max(0.0, value)), regime)


def _check_guard(n: int, d: int) -> None:
    limit = FINITE_SUM_GUARD.get(d)
    if limit is not None:
        if n > limit:
            raise EnumerationGuardError(f"finite sum limited to n <= {limit} for d = {d}")
    elif count_partitions(n + 1, d) > FINITE_SUM_MAX_PARTITIONS:
        raise EnumerationGuardError(
            f"more than {FINITE_SUM_MAX_PARTITIONS} partitions of {n + 1} with <= {d} parts"
        )


def _except_one(x: np.ndarray, i: int) -> float:
    # x_{\i}: product of all gaps but the i-th (1-based); x_{\0} = 0
    if i == 0:
        return 0.0
    return float(np.prod(np.delete(x, i - 1)))


def risk_finite_sum(n: int, d: int) -> float:
    """Finite-n risk bound as a sum over partitions mu of n+1 with <= d parts.

    numerator:   sum over strict mu of ((n+1) d x_mu - x_{\\d})^2
    denominator: d * sum over all mu, i of ((n+1) x_mu + x_{\\i-1} - x_{\\i})^2
    """
    if n < 1 or d < 2:
        raise ValueError("need n >= 1 and d >= 2")
    _check_guard(n, d)
    big = n + 1
    num = 0.0
    den = 0.0
    for mu in enumerate_partitions(big, d):
        x = np.array(partition_gaps(mu).x)
        x_mu = float(np.prod(x))
        slash = [_except_one(x, i) for i in range(d + 1)]
        if np.all(x > 0):
            num += (big * d * x_mu - slash[d]) ** 2
        den += sum((big * x_mu + slash[i - 1] - slash[i]) ** 2 for i in range(1, d + 1))
    return 1.0 - num / (d * den)


@dataclass(frozen=True)
class GapIntegrals:
    """Dirichlet integrals over {x_i >= 0, T_{d-1} >= 0}, x_d = T_{d-1}/d.

    ``x_mu`` is the integral of x_mu^2; ``x_slash_sq[i-1]`` of x_{\\i}^2;
    ``x_slash_cross[i-1]`` of x_{\\i} x_{\\i+1}; ``x_mu_sq_over_xd`` of x_mu^2/x_d.
    """

    d: int
    x_mu: float
    x_slash_sq: tuple[float, ...]
    x_slash_cross: tuple[float, ...]
    x_mu_sq_over_xd: float

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "x_mu": self.x_mu,
            "x_slash_sq": list(self.x_slash_sq),
            "x_slash_cross": list(self.x_slash_cross),
            "x_mu_sq_over_xd": self.x_mu_sq_over_xd,
        }


def _log_common(d: int) -> float:
    # log(((d-1)!)^3)
    return 3 * math.lgamma(d)


def integral_closed_forms(d: int) -> GapIntegrals:
    if d < 2:
        raise ValueError("need d >= 2")
    ln2 = math.log(2)
    log_d = math.log(d)
    common = _log_common(d)
    x_mu = math.exp(d * ln2 - 2 * log_d - common - math.lgamma(3 * d))
    base_sq = (d - 1) * ln2 - 2 * log_d - common - math.lgamma(3 * d - 2)
    base_cross = (d - 2) * ln2 - 2 * log_d - common - math.lgamma(3 * d - 2)
    sq = tuple(math.exp(base_sq + 2 * math.log(i)) for i in range(1, d + 1))
    cross = tuple(math.exp(base_cross + math.log(i * (i + 1))) for i in range(1, d))
    over_xd = math.exp((d - 1) * ln2 - log_d - common - math.lgamma(3 * d - 1))
    return GapIntegrals(d, x_mu, sq, cross, over_xd)


def beta_recursion_x_mu(d: int) -> float:
    """Integral of x_mu^2 by peeling one coordinate at a time with Beta functions.

    Each step integrates x_k^2 T_k^a over x_k in [0, T_{k-1}/k], giving
    B(3, a+1)/k^3 and raising the power of T_{k-1} to a + 3.
    """
    log_val = -2 * math.log(d)
    power = 2
    for k in range(d - 1, 0, -1):
        log_val += _log_beta(3, power + 1) - 3 * math.log(k)
        power += 3
    return math.exp(log_val)


def _log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


@dataclass(frozen=True)
class AsymptoticAssembly:
    numerator: float
    denominator: float
    risk: float
    numerator_closed: float
    denominator_closed: float


def asymptotic_assembly(n: int, d: int) -> AsymptoticAssembly:
    """Assemble the n -> infinity risk ratio from the gap integrals.

    numerator   = d sum_i int (x_{\\i-1} - x_{\\i})^2 - int x_{\\d}^2
    denominator = d sum_i int ((n+1) x_mu + x_{\\i-1} - x_{\\i})^2
    The cross terms sum_i (x_{\\i-1} - x_{\\i}) telescope to -x_{\\d}.
    """
    g = integral_closed_forms(d)
    big = n + 1

    def sq(i: int) -> float:
        return 0.0 if i == 0 else g.x_slash_sq[i - 1]

    def cross(i: int) -> float:
        # int x_{\i} x_{\i+1}, zero when i = 0
        return 0.0 if i == 0 else g.x_slash_cross[i - 1]

    diff_sq = sum(sq(i - 1) - 2 * cross(i - 1) + sq(i) for i in range(1, d + 1))
    numerator = d * diff_sq - sq(d)
    denominator = d * (d * big**2 * g.x_mu - 2 * big * g.x_mu_sq_over_xd + diff_sq)

    prefactor = math.exp((d - 1) * math.log(2) - _log_common(d) - math.lgamma(3 * d))
    num_closed = prefactor * (d * d - 1) * (3 * d - 2) * (3 * d - 1) / 3
    den_closed = prefactor * (
        2 * big**2 - 2 * big * (3 * d - 1) + (3 * d - 2) * (3 * d - 1) * (d * d + 2) / 3
    )
    return AsymptoticAssembly(numerator, denominator, numerator / denominator, num_closed, den_closed)


class Integrand(str, enum.Enum):
    x_mu = "x_mu"
    x_slash_sq = "x_slash_sq"
    x_slash_cross = "x_slash_cross"
    x_mu_sq_over_xd = "x_mu_sq_over_xd"
    one = "one"


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    std_error: float
    samples: int

    def to_dict(self) -> dict:
        return {"estimate": self.estimate, "std_error": self.std_error, "samples": self.samples}


def sample_gap_simplex(d: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points of {x_j >= 0, sum_{j<d} j x_j <= 1} as an array (samples, d).

    Sorted-uniform spacings give y uniform on the simplex; x_j = y_j / j, and
    the last column is x_d = T_{d-1}/d.
    """
    u = np.sort(rng.random((samples, d - 1)), axis=1)
    edges = np.concatenate([np.zeros((samples, 1)), u, np.ones((samples, 1))], axis=1)
    y = np.diff(edges, axis=1)
    return y / np.arange(1, d + 1)


def mc_integral_oracle(
    d: int, integrand: Integrand | str, samples: int = 1_000_000, seed: int = 0, index: int = 1
) -> MCEstimate:
    """Monte-Carlo estimate of one gap integral; ``index`` selects i for the slashed families."""
    if d < 2:
        raise ValueError("need d >= 2")
    if samples < 10_000:
        raise ValueError("use at least 10^4 samples")
    integrand = Integrand(integrand)
    rng = np.random.default_rng(seed)
    x = sample_gap_simplex(d, samples, rng)
    x_mu = np.prod(x, axis=1)

    def slash(i: int) -> np.ndarray:
        return np.prod(np.delete(x, i - 1, axis=1), axis=1)

    if integrand is Integrand.x_mu:
        f = x_mu**2
    elif integrand is Integrand.x_slash_sq:
        f = slash(index) ** 2
    elif integrand is Integrand.x_slash_cross:
        if not 1 <= index <= d - 1:
            raise ValueError("cross integrand needs 1 <= index <= d-1")
        f = slash(index) * slash(index + 1)
    elif integrand is Integrand.x_mu_sq_over_xd:
        f = x_mu * slash(d)
    else:
        f = np.ones(samples)
    volume = math.exp(-math.lgamma(d) - math.lgamma(d))  # 1/(d-1)! * prod_{j<d} 1/j
    return MCEstimate(float(volume * f.mean()), float(volume * f.std(ddof=1) / math.sqrt(samples)), samples)


def plan_queries_tomography(d: int, epsilon: float) -> int:
    """Smallest n with closed-form risk <= epsilon."""
    if not (0 < epsilon < 1) or d < 2:
        raise ValueError("need d >= 2 and epsilon in (0, 1)")

    def ok(n: int) -> bool:
        return risk_closed_form(n, d) <= epsilon

    # the closed form rises until N = n + 1 passes (3d-1)/2, so scan that stretch directly
    vertex = max(1, math.ceil((3 * d - 1) / 2))
    for n in range(1, vertex + 1):
        if ok(n):
            return n
    lo, hi = vertex, vertex * 2
    while not ok(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi
