"""Ancilla-free certification testers for unitaries.

Each tester prepares a maximally entangled state across an irrep block
H_lambda (x) K_lambda of (C^d)^{(x)n}, applies U^{(x)n}, and either projects
onto the image under a known V or swap-tests against V^{(x)n}|phi+>. The
overlap reduces to chi_lambda(U^dagger V) / dim H_lambda, so every
probability below is exact and computed from the spectrum of U^dagger V.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import characters
from .partitions import Partition, dim_irrep, dim_multiplicity, staircase_partition
from .unitary import EigenPhases, distance, overlap, relative_phases

DECISION_THRESHOLD = 1 / 3
QUBIT_KNOWN_CONST = math.sqrt(3)
QUBIT_SWAP_CONST = 3.0
QUDIT_CONST = 6.0
_CEIL_SLACK = 1e-9


class TesterKind(str, enum.Enum):
    qubit_known_v = "qubit_known_v"
    qubit_swap_pair = "qubit_swap_pair"
    qudit_known_v = "qudit_known_v"
    qudit_swap_pair = "qudit_swap_pair"

    @classmethod
    def parse(cls, text: "str | TesterKind") -> "TesterKind":
        if isinstance(text, cls):
            return text
        return cls(str(text).replace("-", "_"))

    @property
    def is_qubit(self) -> bool:
        return self in (TesterKind.qubit_known_v, TesterKind.qubit_swap_pair)

    @property
    def is_swap(self) -> bool:
        return self in (TesterKind.qubit_swap_pair, TesterKind.qudit_swap_pair)


@dataclass(frozen=True)
class TesterPlan:
    kind: TesterKind
    d: int
    epsilon: float
    n: int
    s: int | None
    partition: Partition
    rounds: int
    total_uses_u: int
    total_uses_v: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "d": self.d,
            "epsilon": self.epsilon,
            "n": self.n,
            "s": self.s,
            "partition": list(self.partition.parts),
            "rounds": self.rounds,
            "total_uses_u": self.total_uses_u,
            "total_uses_v": self.total_uses_v,
        }


def _min_copies(const: float, eps: float) -> int:
    """Smallest integer n with (n - 1) eps >= const."""
    return math.ceil(const / eps - _CEIL_SLACK) + 1


def smallest_odd_above(x: float) -> int:
    s = math.floor(x + _CEIL_SLACK) + 1
    return s if s % 2 else s + 1


def plan(kind, d: int, epsilon: float, rounds: int | None = None) -> TesterPlan:
    """Choose copies per round so that distance >= epsilon forces acceptance <= 1/3.

    Qubit testers use lambda = (n-1, 1); qudit testers use the staircase
    partition with the smallest odd s > 6/epsilon.
    """
    kind = TesterKind.parse(kind)
    if not (0 < epsilon <= 1):
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if kind.is_qubit:
        if d != 2:
            raise ValueError(f"{kind.value} requires d = 2, got d = {d}")
        const = QUBIT_SWAP_CONST if kind.is_swap else QUBIT_KNOWN_CONST
        n = max(3, _min_copies(const, epsilon))
        s = None
        lam = Partition((n - 1, 1), 2)
    else:
        if d < 2:
            raise ValueError(f"{kind.value} requires d >= 2, got d = {d}")
        s = smallest_odd_above(QUDIT_CONST / epsilon)
        lam = staircase_partition(d, s)
        n = lam.n
    if rounds is None:
        rounds = 2 if kind.is_swap else 1
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    uses = n * rounds
    return TesterPlan(kind, d, float(epsilon), n, s, lam, rounds, uses, uses if kind.is_swap else 0)


@dataclass(frozen=True)
class AcceptanceReport:
    p_accept: float
    character: complex
    char_ratio: float
    bound: float
    decision_threshold: float = DECISION_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "p_accept": self.p_accept,
            "character": [self.character.real, self.character.imag],
            "char_ratio": self.char_ratio,
            "bound": self.bound,
            "decision_threshold": self.decision_threshold,
        }


def soundness_bound_qubit(n: int, epsilon: float) -> float:
    """Bound 1/((n-1) eps) on |chi|/dim for lambda = (n-1,1) when distance >= eps."""
    if n < 2 or not (0 < epsilon <= 1):
        raise ValueError("need n >= 2 and epsilon in (0, 1]")
    return 1.0 / ((n - 1) * epsilon)


def ratio_bound(p: TesterPlan) -> float:
    """Upper bound on |chi|/dim H that the plan guarantees at distance >= epsilon."""
    if p.kind.is_qubit:
        return soundness_bound_qubit(p.n, p.epsilon)
    return 2.0 / (p.s * p.epsilon)


def plan_character(phases: EigenPhases, p: TesterPlan) -> characters.CharacterValue:
    if phases.d != p.d:
        raise ValueError(f"dimension mismatch: unitaries have d = {phases.d}, plan has d = {p.d}")
    if p.kind.is_qubit:
        return characters.char_spin(phases, p.n)
    return characters.char_staircase(phases, p.s)


def _char_ratio(u, v, p: TesterPlan) -> tuple[complex, float]:
    chi = plan_character(relative_phases(u, v), p).value
    dim = dim_irrep(p.partition)
    return chi, min(1.0, abs(chi) / dim)


def accept_prob_known(u, v, plan: TesterPlan) -> AcceptanceReport:
    """Known-V tester: project U^{(x)n}|phi+> onto (V_lambda (x) 1)|phi+>."""
    if plan.kind.is_swap:
        raise ValueError(f"accept_prob_known needs a known-V plan, got {plan.kind.value}")
    chi, ratio = _char_ratio(u, v, plan)
    q = ratio_bound(plan) ** 2
    p = ratio**2
    return AcceptanceReport(p ** plan.rounds, chi, ratio, min(1.0, q) ** plan.rounds)


def accept_prob_swap(u, v, plan: TesterPlan) -> AcceptanceReport:
    """Swap test between U^{(x)n}|phi+> and V^{(x)n}|phi+>, accepting iff every round accepts."""
    if not plan.kind.is_swap:
        raise ValueError(f"accept_prob_swap needs a swap plan, got {plan.kind.value}")
    chi, ratio = _char_ratio(u, v, plan)
    fidelity = ratio**2
    fid_bound = min(1.0, ratio_bound(plan) ** 2)
    return AcceptanceReport(
        ((1 + fidelity) / 2) ** plan.rounds, chi, ratio, ((1 + fid_bound) / 2) ** plan.rounds
    )


def accept_prob(u, v, plan: TesterPlan) -> AcceptanceReport:
    if plan.kind.is_swap:
        return accept_prob_swap(u, v, plan)
    return accept_prob_known(u, v, plan)


def dirichlet_bound_check(s: int, x: float) -> bool:
    """|sin(s x)| <= s |sin x| for odd s."""
    if s < 1 or s % 2 == 0:
        raise ValueError(f"s must be an odd positive integer, got {s}")
    return abs(math.sin(s * x)) <= s * abs(math.sin(x)) + 1e-12


def trace_identity_check(phases) -> float:
    """Residual of |sum e^{i theta}|^2 = d^2 - 4 sum_{j<k} sin^2((theta_k - theta_j)/2)."""
    theta = phases.phases if isinstance(phases, EigenPhases) else np.asarray(phases, dtype=float)
    d = len(theta)
    lhs = abs(np.exp(1j * theta).sum()) ** 2
    diffs = theta[None, :] - theta[:, None]
    pair_sum = np.sum(np.sin(diffs[np.triu_indices(d, 1)] / 2) ** 2)
    return float(lhs - (d * d - 4 * pair_sum))


def pair_threshold(d: int, epsilon: float) -> float:
    return d * (2 * epsilon**2 - epsilon**4) / (2 * (d - 1))


@dataclass(frozen=True)
class BlowupReport:
    """Pair-counting bound on the staircase character ratio.

    ``applicable`` is false when distance < epsilon. ``overlap_condition``
    records whether |tr(U^dagger V)|/d <= 1 - eps^2, the condition under which
    at least one pair clears ``threshold``; distance >= eps alone is weaker.
    """

    m: int
    threshold: float
    bound: float
    char_ratio: float
    applicable: bool
    overlap_condition: bool

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "threshold": self.threshold,
            "bound": self.bound,
            "char_ratio": self.char_ratio,
            "applicable": self.applicable,
            "overlap_condition": self.overlap_condition,
        }


def blowup_report(u, v, d: int, s: int, epsilon: float) -> BlowupReport:
    phases = relative_phases(u, v)
    if phases.d != d:
        raise ValueError(f"dimension mismatch: unitaries have d = {phases.d}, expected {d}")
    if s < 1 or s % 2 == 0:
        raise ValueError(f"s must be odd, got {s}")
    if not (0 < epsilon <= 1):
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    chi = characters.char_staircase(phases, s).value
    ratio = abs(chi) / s ** (d * (d - 1) // 2)
    threshold = pair_threshold(d, epsilon)
    hypothesis_holds = abs(overlap(u, v)) <= 1 - epsilon**2 + 1e-12
    if distance(u, v) < epsilon:
        return BlowupReport(0, threshold, 1.0, ratio, False, hypothesis_holds)
    theta = phases.phases
    m = sum(
        1
        for j, k in combinations(range(d), 2)
        if math.sin((theta[k] - theta[j]) / 2) ** 2 >= threshold
    )
    bound = (2 / (s * epsilon)) ** m
    if ratio > bound * (1 + 1e-9) + 1e-12:
        raise AssertionError(f"character ratio {ratio} exceeds pair bound {bound} (m = {m})")
    return BlowupReport(m, threshold, bound, ratio, True, hypothesis_holds)


@dataclass(frozen=True)
class AncillaRequirement:
    needs_ancilla: bool
    ancilla_dim: int
    dim_irrep: int
    dim_mult: int

    def to_dict(self) -> dict:
        return {
            "needs_ancilla": self.needs_ancilla,
            "ancilla_dim": self.ancilla_dim,
            "dim_irrep": self.dim_irrep,
            "dim_mult": self.dim_mult,
        }


def ancilla_requirement(lam: Partition) -> AncillaRequirement:
    """Reference-system size needed when the irrep outgrows its multiplicity space."""
    dh, dk = dim_irrep(lam), dim_multiplicity(lam)
    if dh > dk:
        return AncillaRequirement(True, -(-dh // dk), dh, dk)
    return AncillaRequirement(False, 1, dh, dk)
