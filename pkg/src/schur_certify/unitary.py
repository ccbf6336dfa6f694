"""Unitary matrices, their spectra as phases, Haar sampling and the unitary distance."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

TWO_PI = 2 * np.pi
UNITARITY_TOL = 1e-10
CLUSTER_TOL = 1e-8


class NotUnitaryError(ValueError):
    pass


def unitarity_residual(matrix: np.ndarray) -> float:
    d = matrix.shape[0]
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(d))))


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """A d x d complex matrix checked for unitarity at construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise NotUnitaryError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NotUnitaryError("matrix has non-finite entries")
        res = unitarity_residual(m)
        if res > UNITARITY_TOL:
            raise NotUnitaryError(f"unitarity residual {res:.3e} exceeds {UNITARITY_TOL:g}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def dag(self) -> "UnitaryMatrix":
        return UnitaryMatrix(self.matrix.conj().T)

    def __matmul__(self, other: "UnitaryMatrix") -> "UnitaryMatrix":
        return UnitaryMatrix(self.matrix @ other.matrix)

    def scaled(self, theta: float) -> "UnitaryMatrix":
        """e^{i theta} U."""
        return UnitaryMatrix(np.exp(1j * theta) * self.matrix)

    @classmethod
    def identity(cls, d: int) -> "UnitaryMatrix":
        return cls(np.eye(d, dtype=np.complex128))

    def to_json_obj(self) -> dict:
        return {
            "d": self.d,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "UnitaryMatrix":
        """Parse the wire format ``{"d": d, "entries": [[[re, im], ...], ...]}`` (row-major)."""
        try:
            d = int(obj["d"])
            rows = obj["entries"]
            if len(rows) != d or any(len(r) != d for r in rows):
                raise ValueError(f"entries are not {d}x{d}")
            m = np.array([[complex(float(re), float(im)) for re, im in row] for row in rows])
        except (KeyError, TypeError, ValueError) as exc:
            raise NotUnitaryError(f"malformed matrix JSON: {exc}") from exc
        return cls(m)

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def loads(cls, text: str) -> "UnitaryMatrix":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NotUnitaryError(f"malformed matrix JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise NotUnitaryError("matrix JSON must be an object with 'd' and 'entries'")
        return cls.from_json_obj(obj)


def _as_array(u) -> np.ndarray:
    return u.matrix if isinstance(u, UnitaryMatrix) else np.asarray(u, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class EigenPhases:
    """Spectrum of a unitary as phases in [0, 2pi), sorted, with an orthonormal eigenbasis."""

    phases: np.ndarray
    basis: np.ndarray

    @property
    def d(self) -> int:
        return len(self.phases)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.exp(1j * self.phases)

    def reconstruct(self) -> np.ndarray:
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


def wrap_phases(phases) -> np.ndarray:
    p = np.mod(np.asarray(phases, dtype=float), TWO_PI)
    # mod can return exactly 2pi for tiny negative inputs
    p[p >= TWO_PI] = 0.0
    return p


def _orthonormalize_clusters(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Re-orthonormalize eigenvectors inside clusters of nearly equal eigenvalues."""
    d = len(values)
    out = vectors.copy()
    seen = np.zeros(d, dtype=bool)
    for i in range(d):
        if seen[i]:
            continue
        cluster = np.flatnonzero(np.abs(values - values[i]) <= CLUSTER_TOL)
        seen[cluster] = True
        q, _ = np.linalg.qr(out[:, cluster])
        out[:, cluster] = q
    return out


def eigenphases(u) -> EigenPhases:
    """Spectral decomposition of a unitary.

    Uses the complex Schur form, whose triangular factor is diagonal for a
    normal matrix and whose Schur vectors are unitary by construction.
    """
    m = _as_array(u)
    if unitarity_residual(m) > UNITARITY_TOL:
        raise NotUnitaryError("eigenphases requires a unitary input")
    t, z = scipy.linalg.schur(m, output="complex")
    values = np.diag(t)
    values = values / np.abs(values)
    z = _orthonormalize_clusters(values, z)
    phases = wrap_phases(np.angle(values))
    order = np.argsort(phases, kind="stable")
    return EigenPhases(phases[order], z[:, order])


def haar_random(d: int, seed: int | np.random.Generator = 0) -> UnitaryMatrix:
    """Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix."""
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    q = q * (diag / np.abs(diag))
    return UnitaryMatrix(q)


def unitary_from_phases(phases: Sequence[float], basis=None) -> UnitaryMatrix:
    """W diag(e^{i theta}) W^dagger, with W the identity by default."""
    phases = np.asarray(phases, dtype=float)
    d = len(phases)
    if basis is None:
        return UnitaryMatrix(np.diag(np.exp(1j * phases)))
    w = _as_array(basis)
    if w.shape != (d, d):
        raise ValueError(f"basis shape {w.shape} does not match {d} phases")
    if unitarity_residual(w) > UNITARITY_TOL:
        raise NotUnitaryError("basis is not unitary")
    return UnitaryMatrix((w * np.exp(1j * phases)) @ w.conj().T)


def overlap(u, v) -> complex:
    """tr(U^dagger V) / d."""
    a, b = _as_array(u), _as_array(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b)) / a.shape[0]


def distance(u, v) -> float:
    """sqrt(1 - |tr(U^dagger V)/d|^2): zero exactly when U and V agree up to a phase."""
    return float(np.sqrt(max(0.0, 1.0 - abs(overlap(u, v)) ** 2)))


def relative_phases(u, v) -> EigenPhases:
    """Eigenphases of U^dagger V, the only thing every acceptance probability depends on."""
    a, b = _as_array(u), _as_array(v)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return eigenphases(a.conj().T @ b)
