"""Partition combinatorics and Littlewood-Richardson products on Grassmannians.

Partitions are plain tuples of nonnegative integers in canonical form
(weakly decreasing, trailing zeros stripped).  A Schubert class on
Gr(t, C^n) is indexed either by a t-subset of [n] or by the partition
that fits in the t x (n-t) rectangle; the two are related by
``partition_of_index`` / ``index_of_partition``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Partition = tuple[int, ...]


def make_partition(parts: Iterable[int]) -> Partition:
    """Validate ``parts`` and return it in canonical form."""
    parts = [int(p) for p in parts]
    for a, b in zip(parts, parts[1:]):
        if a < b:
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
    if parts and parts[-1] < 0:
        raise ValueError(f"partition parts must be nonnegative: {parts}")
    while parts and parts[-1] == 0:
        parts.pop()
    return tuple(parts)


def size(lam: Partition) -> int:
    return sum(lam)


@dataclass(frozen=True)
class RectangleBound:
    """The t x (n-t) box containing the partitions of Schubert classes on Gr(t, n)."""

    rows: int
    cols: int

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"invalid rectangle {self.rows}x{self.cols}")

    def fits(self, lam: Partition) -> bool:
        return len(lam) <= self.rows and (not lam or lam[0] <= self.cols)

    def full(self) -> Partition:
        return make_partition([self.cols] * self.rows)

    def check(self, lam: Partition) -> None:
        if not self.fits(lam):
            raise ValueError(f"partition {lam} does not fit in {self.rows}x{self.cols}")


@dataclass(frozen=True, order=True)
class SchubertIndex:
    """A t-subset of [ambient_n], stored as a strictly increasing tuple."""

    ambient_n: int
    elements: tuple[int, ...]

    def __post_init__(self) -> None:
        els = tuple(int(e) for e in self.elements)
        object.__setattr__(self, "elements", els)
        if self.ambient_n < 1:
            raise ValueError("ambient_n must be positive")
        if not els:
            raise ValueError("a Schubert index needs at least one element")
        if els[0] < 1 or els[-1] > self.ambient_n:
            raise ValueError(f"elements {els} not in [1, {self.ambient_n}]")
        if any(a >= b for a, b in zip(els, els[1:])):
            raise ValueError(f"elements must be strictly increasing: {els}")

    @property
    def t(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.elements)) + "}"

    def pick(self, positions: Iterable[int]) -> tuple[int, ...]:
        """The subset {i_p : p in positions} (1-based positions)."""
        return tuple(self.elements[p - 1] for p in positions)


def bound_for(t: int, n: int) -> RectangleBound:
    return RectangleBound(t, n - t)


def partition_of_index(index: SchubertIndex) -> Partition:
    """lambda(I) = (a_t - t, ..., a_1 - 1)."""
    els = index.elements
    return make_partition(a - (k + 1) for k, a in reversed(list(enumerate(els))))


def index_of_partition(lam: Partition, t: int, n: int) -> SchubertIndex:
    lam = make_partition(lam)
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    bound_for(t, n).check(lam)
    padded = list(lam) + [0] * (t - len(lam))
    # a_k = lambda_{t+1-k} + k
    return SchubertIndex(n, tuple(padded[t - k] + k for k in range(1, t + 1)))


def conjugate(lam: Partition) -> Partition:
    lam = make_partition(lam)
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > j) for j in range(lam[0]))


def complement_index(index: SchubertIndex) -> SchubertIndex:
    """J = {n+1-i : i not in I}; lambda(J) is the conjugate of lambda(I)."""
    n = index.ambient_n
    if index.t == n:
        raise ValueError("complement of the full set [n] is empty")
    missing = set(range(1, n + 1)) - set(index.elements)
    return SchubertIndex(n, tuple(sorted(n + 1 - i for i in missing)))


def dual_index(index: SchubertIndex) -> SchubertIndex:
    n = index.ambient_n
    return SchubertIndex(n, tuple(sorted(n + 1 - i for i in index.elements)))


def unit_index(t: int, n: int) -> SchubertIndex:
    return SchubertIndex(n, tuple(range(1, t + 1)))


def point_index(t: int, n: int) -> SchubertIndex:
    return SchubertIndex(n, tuple(range(n - t + 1, n + 1)))


# --- Littlewood-Richardson rule -------------------------------------------


def _contains(nu: Partition, lam: Partition) -> bool:
    return len(lam) <= len(nu) and all(a >= b for a, b in zip(nu, lam))


def _partitions_in_box(total: int, rows: int, cols: int, start: int | None = None) -> Iterator[Partition]:
    """All partitions of ``total`` with at most ``rows`` parts, each <= ``cols``."""
    if total == 0:
        yield ()
        return
    if rows == 0:
        return
    top = min(cols if start is None else start, total)
    for first in range(top, 0, -1):
        if first * rows < total:
            break
        for rest in _partitions_in_box(total - first, rows - 1, cols, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """c^nu_{lam,mu}: number of LR tableaux of shape nu/lam and content mu.

    Cells are filled in reverse reading order (rows top to bottom, each row
    right to left); rows weakly increase, columns strictly increase, and the
    reading word must stay a lattice word.
    """
    if sum(nu) != sum(lam) + sum(mu) or not _contains(nu, lam):
        return 0
    if not mu:
        return 1
    lam_p = list(lam) + [0] * (len(nu) - len(lam))
    cells = [(row, col) for row in range(len(nu)) for col in range(nu[row] - 1, lam_p[row] - 1, -1)]
    if len(cells) != sum(mu):
        return 0
    mu_list = list(mu)
    k = len(mu_list)
    filling: dict[tuple[int, int], int] = {}
    counts = [0] * (k + 1)

    def fill(pos: int) -> int:
        if pos == len(cells):
            return 1
        row, col = cells[pos]
        hi = k
        right = filling.get((row, col + 1))
        if right is not None:
            hi = min(hi, right)
        # letters in row `row` (0-based) never exceed row + 1
        hi = min(hi, row + 1)
        lo = 1
        above = filling.get((row - 1, col))
        if above is not None:
            lo = above + 1
        total = 0
        for v in range(lo, hi + 1):
            if counts[v] >= mu_list[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            counts[v] += 1
            filling[(row, col)] = v
            total += fill(pos + 1)
            del filling[(row, col)]
            counts[v] -= 1
        return total

    return fill(0)


def lr_expand(lam: Partition, mu: Partition, bound: RectangleBound) -> dict[Partition, int]:
    """Schur expansion of s_lam * s_mu, truncated to partitions fitting ``bound``."""
    lam, mu = make_partition(lam), make_partition(mu)
    bound.check(lam)
    bound.check(mu)
    return dict(_lr_expand(lam, mu, bound.rows, bound.cols))


@lru_cache(maxsize=None)
def _lr_expand(lam: Partition, mu: Partition, rows: int, cols: int) -> tuple[tuple[Partition, int], ...]:
    if sum(lam) < sum(mu):
        lam, mu = mu, lam
    out = []
    for nu in _partitions_in_box(sum(lam) + sum(mu), rows, cols):
        if not _contains(nu, lam) or not _contains(nu, mu):
            continue
        c = lr_coefficient(lam, mu, nu)
        if c:
            out.append((nu, c))
    return tuple(out)


def product_expand(lambdas: Sequence[Partition], bound: RectangleBound) -> dict[Partition, int]:
    """Truncated Schur expansion of the product of all ``lambdas``."""
    lams = [make_partition(lam) for lam in lambdas]
    for lam in lams:
        bound.check(lam)
    return dict(_product_expand(tuple(sorted(lams, reverse=True)), bound.rows, bound.cols))


@lru_cache(maxsize=None)
def _product_expand(lams: tuple[Partition, ...], rows: int, cols: int) -> tuple[tuple[Partition, int], ...]:
    current: dict[Partition, int] = {(): 1}
    budget = rows * cols
    for lam in lams:
        nxt: dict[Partition, int] = {}
        for nu, c in current.items():
            if sum(nu) + sum(lam) > budget:
                continue
            for rho, d in _lr_expand(nu, lam, rows, cols):
                nxt[rho] = nxt.get(rho, 0) + c * d
        current = nxt
        if not current:
            break
    return tuple(sorted(current.items()))


def product_coefficient(lambdas: Sequence[Partition], bound: RectangleBound, target: Partition) -> int:
    target = make_partition(target)
    bound.check(target)
    if sum(sum(lam) for lam in lambdas) != sum(target):
        for lam in lambdas:
            bound.check(make_partition(lam))
        return 0
    return product_expand(lambdas, bound).get(target, 0)


def _common_shape(seq: Sequence[SchubertIndex]) -> tuple[int, int]:
    if not seq:
        raise ValueError("empty index sequence")
    n, t = seq[0].ambient_n, seq[0].t
    for index in seq:
        if index.ambient_n != n or index.t != t:
            raise ValueError("indices must share ambient_n and cardinality")
    return t, n


def is_point_class(seq: Sequence[SchubertIndex]) -> bool:
    t, n = _common_shape(seq)
    lams = [partition_of_index(index) for index in seq]
    if sum(map(sum, lams)) != t * (n - t):
        return False
    bound = bound_for(t, n)
    return product_coefficient(lams, bound, bound.full()) == 1


def is_nonzero_product(seq: Sequence[SchubertIndex]) -> bool:
    t, n = _common_shape(seq)
    lams = [partition_of_index(index) for index in seq]
    if sum(map(sum, lams)) > t * (n - t):
        return False
    return bool(product_expand(lams, bound_for(t, n)))
