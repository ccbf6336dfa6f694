"""Integer partitions and the Schur-Weyl dimension formulas.

Every dimension here is an exact Python integer. Only the entropy-based
sandwich bounds are floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Partition:
    """A partition of ``n`` with at most ``d`` nonzero parts.

    ``parts`` is always stored zero-padded to length ``d``.
    """

    parts: tuple[int, ...]
    d: int = field(default=0)

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        d = int(self.d) if self.d else len(parts)
        if d < 1:
            d = 1
        while len(parts) > d and parts[-1] == 0:
            parts = parts[:-1]
        if len(parts) > d:
            raise ValueError(f"partition {parts} has more than d={d} nonzero parts")
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts + (0,) * (d - len(parts)))
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        """Number of nonzero parts."""
        return sum(1 for p in self.parts if p > 0)

    @property
    def nonzero(self) -> tuple[int, ...]:
        return self.parts[: self.length]

    def shifted(self) -> tuple[int, ...]:
        """lambda_i + d - i (1-based i), strictly decreasing."""
        return tuple(p + self.d - i for i, p in enumerate(self.parts, start=1))

    def normalized(self) -> tuple[float, ...]:
        n = self.n
        return tuple(p / n for p in self.parts) if n else tuple(0.0 for _ in self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.nonzero) + ")"


def parse_partition(text: str, d: int | None = None) -> Partition:
    """Parse ``"3,1"`` (or ``"3 1"``) into a Partition."""
    tokens = [t for t in text.replace(",", " ").split() if t]
    parts = tuple(int(t) for t in tokens)
    return Partition(parts, d or len(parts) or 1)


def enumerate_partitions(n: int, d: int) -> list[Partition]:
    """All partitions of ``n`` with at most ``d`` parts, lexicographically decreasing."""
    if n < 0 or d < 1:
        raise ValueError("need n >= 0 and d >= 1")

    def rec(remaining: int, max_part: int, slots: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        if slots == 0:
            return
        for first in range(min(remaining, max_part), 0, -1):
            # the remaining slots must be able to absorb what is left
            if first * slots < remaining:
                break
            for rest in rec(remaining - first, first, slots - 1):
                yield (first,) + rest

    return [Partition(p, d) for p in rec(n, n, d)]


def count_partitions(n: int, d: int) -> int:
    # p(n, <= d parts) by the standard recurrence on the largest part count
    table = [[0] * (d + 1) for _ in range(n + 1)]
    for k in range(d + 1):
        table[0][k] = 1
    for m in range(1, n + 1):
        for k in range(1, d + 1):
            table[m][k] = table[m][k - 1] + (table[m - k][k] if m >= k else 0)
    return table[n][d]


def dim_multiplicity(lam: Partition) -> int:
    """Dimension of the symmetric-group irrep (number of standard Young tableaux).

    n! / (l~_1! ... l~_d!) * prod_{i<j} (l~_i - l~_j), with l~_i = lambda_i + d - i.
    """
    shifted = lam.shifted()
    if any(a <= b for a, b in zip(shifted, shifted[1:])):
        raise AssertionError(f"shifted parts not strictly decreasing: {shifted}")
    num = math.factorial(lam.n)
    for a, b in combinations(shifted, 2):
        num *= a - b
    den = math.prod(math.factorial(a) for a in shifted)
    q, r = divmod(num, den)
    if r:
        raise AssertionError(f"non-integral multiplicity dimension for {lam}")
    return q


def dim_irrep(lam: Partition) -> int:
    """Dimension of the U(d) irrep via the Weyl dimension product."""
    num = 1
    den = 1
    parts = lam.parts
    for i, j in combinations(range(lam.d), 2):
        num *= parts[i] - parts[j] + j - i
        den *= j - i
    q, r = divmod(num, den)
    if r:
        raise AssertionError(f"non-integral irrep dimension for {lam}")
    return q


def entropy(lam: Partition) -> float:
    """Shannon entropy (nats) of lambda / n, with 0 log 0 = 0."""
    n = lam.n
    if n == 0:
        return 0.0
    return -sum((p / n) * math.log(p / n) for p in lam.parts if p > 0)


def multinomial(lam: Partition) -> int:
    return math.factorial(lam.n) // math.prod(math.factorial(p) for p in lam.parts)


@dataclass(frozen=True)
class PartitionDims:
    dim_irrep: int
    dim_mult: int
    entropy: float

    def to_dict(self) -> dict:
        return {"dim_irrep": self.dim_irrep, "dim_mult": self.dim_mult, "entropy": self.entropy}


def partition_dims(lam: Partition) -> PartitionDims:
    return PartitionDims(dim_irrep(lam), dim_multiplicity(lam), entropy(lam))


@dataclass(frozen=True)
class DimBounds:
    mult_lower: float
    mult_upper: float
    irrep_upper: float
    multinomial_lower: float
    multinomial_upper: int

    def to_dict(self) -> dict:
        return {
            "mult_lower": self.mult_lower,
            "mult_upper": self.mult_upper,
            "irrep_upper": self.irrep_upper,
            "multinomial_lower": self.multinomial_lower,
            "multinomial_upper": self.multinomial_upper,
        }


def dim_bounds(lam: Partition) -> DimBounds:
    """Entropy and multinomial sandwich bounds on dim K, and the polynomial bound on dim H."""
    n, d = lam.n, lam.d
    if n < 1:
        raise ValueError("bounds need n >= 1")
    upper = math.exp(n * entropy(lam))
    multi = multinomial(lam)
    return DimBounds(
        mult_lower=upper * (n + d) ** (-d * (d + 1) / 2),
        mult_upper=upper,
        irrep_upper=float((n + 1) ** (d * (d - 1) // 2)),
        multinomial_lower=multi * (n + d) ** (-d * (d - 1) / 2),
        multinomial_upper=multi,
    )


def staircase_partition(d: int, s: int) -> Partition:
    """lambda_i = (d - i)(s - 1); its irrep has dimension s**(d(d-1)/2)."""
    if d < 2 or s < 2:
        raise ValueError("staircase needs d >= 2 and s >= 2")
    return Partition(tuple((d - i) * (s - 1) for i in range(1, d + 1)), d)


def standard_tableaux(lam: Partition) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield standard Young tableaux of shape ``lam`` as tuples of rows.

    Brute force: place 1..n one at a time on any addable corner.
    """
    shape = lam.nonzero
    n = lam.n
    rows: list[list[int]] = [[] for _ in shape]

    def rec(k: int):
        if k > n:
            yield tuple(tuple(r) for r in rows)
            return
        for i, target in enumerate(shape):
            if len(rows[i]) < target and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(k)
                yield from rec(k + 1)
                rows[i].pop()

    yield from rec(1)


def semistandard_tableaux(lam: Partition, d: int | None = None) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield semistandard tableaux of shape ``lam`` with entries in 1..d.

    Rows weakly increase, columns strictly increase. Filled cell by cell in
    reading order (row by row).
    """
    d = d or lam.d
    shape = lam.nonzero
    grid = [[0] * r for r in shape]
    cells = [(i, j) for i, r in enumerate(shape) for j in range(r)]

    def rec(idx: int):
        if idx == len(cells):
            yield tuple(tuple(r) for r in grid)
            return
        i, j = cells[idx]
        lo = 1
        if j > 0:
            lo = max(lo, grid[i][j - 1])
        if i > 0:
            lo = max(lo, grid[i - 1][j] + 1)
        # row i needs entries >= i+1; reaching d+1 means infeasible
        for v in range(lo, d + 1):
            grid[i][j] = v
            yield from rec(idx + 1)
        grid[i][j] = 0

    yield from rec(0)
