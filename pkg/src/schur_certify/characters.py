"""Characters of U(d) irreps evaluated from eigenphases.

Four routes: closed geometric-sum products for the two families the testers
use, the Weyl bialternant, Jacobi-Trudi over complete homogeneous
polynomials, and a brute-force sum over semistandard tableaux that serves as
ground truth for the others.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .partitions import Partition, dim_irrep, semistandard_tableaux, staircase_partition
from .unitary import EigenPhases

DEGENERACY_TOL = 1e-6
MAX_JT_DEGREE = 10_000
ORACLE_LIMIT = 1_000_000


class DegenerateSpectrumError(ValueError):
    """The bialternant is 0/0; use the Jacobi-Trudi route instead."""


class OracleTooLarge(ValueError):
    pass


class Method(str, enum.Enum):
    geometric_product = "geometric_product"
    bialternant = "bialternant"
    jacobi_trudi = "jacobi_trudi"
    ssyt_oracle = "ssyt_oracle"


@dataclass(frozen=True)
class CharacterValue:
    value: complex
    partition: Partition
    method: Method

    def to_dict(self) -> dict:
        return {
            "value": [self.value.real, self.value.imag],
            "abs": abs(self.value),
            "partition": list(self.partition.parts),
            "method": self.method.value,
        }


def _phase_array(phases) -> np.ndarray:
    if isinstance(phases, EigenPhases):
        return phases.phases
    return np.asarray(phases, dtype=float)


def _geometric_sum(xk: complex, xj: complex, s: int) -> complex:
    # (xk^s - xj^s)/(xk - xj) without dividing, so it is exact at xk == xj
    t = np.arange(s)
    return complex(np.sum(xk**t * xj ** (s - 1 - t)))


def char_staircase(phases, s: int) -> CharacterValue:
    """Character of the staircase irrep lambda_i = (d-i)(s-1).

    Product over pairs j<k of (x_k^s - x_j^s)/(x_k - x_j), each factor summed
    as a geometric series.
    """
    theta = _phase_array(phases)
    d = len(theta)
    lam = staircase_partition(d, s)
    x = np.exp(1j * theta)
    value = complex(1.0)
    for j, k in combinations(range(d), 2):
        value *= _geometric_sum(x[k], x[j], s)
    return CharacterValue(value, lam, Method.geometric_product)


def char_spin(phases, n: int) -> CharacterValue:
    """Character of lambda = (n-1, 1) at diag(e^{i alpha}, e^{i beta})."""
    theta = _phase_array(phases)
    if len(theta) != 2:
        raise ValueError(f"char_spin needs d = 2, got d = {len(theta)}")
    if n < 3:
        raise ValueError("char_spin needs n >= 3")
    a, b = np.exp(1j * theta)
    value = a * b * _geometric_sum(a, b, n - 1)
    return CharacterValue(complex(value), Partition((n - 1, 1), 2), Method.geometric_product)


def _padded(lam: Partition, d: int) -> Partition:
    if lam.d == d:
        return lam
    return Partition(lam.nonzero, d)


def char_bialternant(lam: Partition, phases) -> CharacterValue:
    """det(x_i^{lambda_j + d - j}) / det(x_i^{d - j}) for a well-separated spectrum."""
    theta = _phase_array(phases)
    d = len(theta)
    lam = _padded(lam, d)
    x = np.exp(1j * theta)
    gaps = np.abs(x[:, None] - x[None, :])[np.triu_indices(d, 1)]
    if d > 1 and gaps.min() <= DEGENERACY_TOL:
        raise DegenerateSpectrumError(f"minimum eigenvalue gap {gaps.min():.2e} <= {DEGENERACY_TOL:g}")
    exps = np.array(lam.shifted())
    num = np.linalg.det(x[:, None] ** exps[None, :])
    den = np.linalg.det(x[:, None] ** np.arange(d - 1, -1, -1)[None, :])
    return CharacterValue(complex(num / den), lam, Method.bialternant)


def complete_homogeneous(theta: np.ndarray, degree: int) -> np.ndarray:
    """h_0..h_degree of the eigenvalues via Newton's identities k h_k = sum_i p_i h_{k-i}."""
    k = np.arange(1, degree + 1)
    power = np.exp(1j * np.outer(k, theta)).sum(axis=1) if degree else np.zeros(0, complex)
    h = np.zeros(degree + 1, dtype=np.complex128)
    h[0] = 1.0
    for m in range(1, degree + 1):
        h[m] = np.dot(power[:m], h[m - 1 :: -1][:m]) / m
    return h


def char_jacobi_trudi(lam: Partition, phases) -> CharacterValue:
    """det(h_{lambda_i - i + j}); valid at degenerate spectra."""
    theta = _phase_array(phases)
    d = len(theta)
    lam = _padded(lam, d)
    top = lam.parts[0] + d
    if top > MAX_JT_DEGREE:
        raise ValueError(f"lambda_1 + d = {top} exceeds {MAX_JT_DEGREE}")
    h = complete_homogeneous(theta, top)
    mat = np.zeros((d, d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            idx = lam.parts[i] - i + j
            if 0 <= idx <= top:
                mat[i, j] = h[idx]
    return CharacterValue(complex(np.linalg.det(mat)), lam, Method.jacobi_trudi)


def char_ssyt_oracle(lam: Partition, phases) -> CharacterValue:
    """Schur polynomial as an explicit sum over semistandard tableaux."""
    theta = _phase_array(phases)
    d = len(theta)
    lam = _padded(lam, d)
    count = dim_irrep(lam)
    if count > ORACLE_LIMIT:
        raise OracleTooLarge(f"{count} tableaux exceeds the oracle limit {ORACLE_LIMIT}")
    x = np.exp(1j * theta)
    total = 0j
    for tableau in semistandard_tableaux(lam, d):
        term = 1 + 0j
        for row in tableau:
            for entry in row:
                term *= x[entry - 1]
        total += term
    return CharacterValue(complex(total), lam, Method.ssyt_oracle)


def character(lam: Partition, phases) -> CharacterValue:
    """Bialternant when the spectrum is separated, Jacobi-Trudi otherwise."""
    try:
        return char_bialternant(lam, phases)
    except DegenerateSpectrumError:
        return char_jacobi_trudi(lam, phases)


def evaluate(lam: Partition, phases, method: Method | str | None = None) -> CharacterValue:
    if method is None:
        return character(lam, phases)
    method = Method(method)
    if method is Method.bialternant:
        return char_bialternant(lam, phases)
    if method is Method.jacobi_trudi:
        return char_jacobi_trudi(lam, phases)
    if method is Method.ssyt_oracle:
        return char_ssyt_oracle(lam, phases)
    theta = _phase_array(phases)
    lam = _padded(lam, len(theta))
    if len(theta) == 2 and lam.parts[1] == 1 and lam.parts[0] >= 2:
        return char_spin(theta, lam.n)
    s = _staircase_step(lam)
    if s is None:
        raise ValueError(f"no geometric product form for {lam}")
    return char_staircase(theta, s)


def _staircase_step(lam: Partition) -> int | None:
    d = lam.d
    if d < 2 or lam.parts[-1] != 0 or lam.parts[-2] < 1:
        return None
    step = lam.parts[-2]
    if lam.parts != tuple((d - i) * step for i in range(1, d + 1)):
        return None
    return step + 1
