"""Orthonormal Hermitian operator sets and their partitions into groups."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DesignError
from .linalg import gram_matrix

ORTHONORMAL_TOL = 1e-10


@dataclass(frozen=True)
class OrthonormalHermitianSet:
    """Operators ``G_0 = I/sqrt(d), G_1, ..., G_{K-1}`` with ``Tr(G_i G_j) = delta_ij``.

    ``elements`` has shape ``(K, d, d)``; ``G_k`` for ``k >= 1`` are traceless.
    """

    dim: int
    elements: np.ndarray

    def __post_init__(self):
        els = self.elements
        if els.ndim != 3 or els.shape[1:] != (self.dim, self.dim):
            raise DesignError("DIMENSION", f"elements must have shape (K, {self.dim}, {self.dim})")
        if els.shape[0] > self.dim**2:
            raise DesignError("CARDINALITY", "more than d^2 orthonormal operators")
        if not np.allclose(els[0], np.eye(self.dim) / np.sqrt(self.dim), atol=ORTHONORMAL_TOL):
            raise DesignError("NOT-ORTHONORMAL", "first element must be I/sqrt(d)")
        check_orthonormal(els, ORTHONORMAL_TOL)
        els.setflags(write=False)

    @property
    def traceless(self) -> np.ndarray:
        return self.elements[1:]

    def __len__(self) -> int:
        return self.elements.shape[0]


def check_orthonormal(ops: np.ndarray, tol: float = ORTHONORMAL_TOL, traceless_from: int = 1) -> None:
    """Raise ``NOT-ORTHONORMAL`` unless ``ops`` is orthonormal and traceless past ``traceless_from``."""
    g = gram_matrix(ops)
    dev = np.abs(g - np.eye(len(ops))).max(initial=0.0)
    if dev > tol:
        raise DesignError("NOT-ORTHONORMAL", f"Gram matrix deviates from identity by {dev:.3e}")
    traces = np.abs(np.trace(ops[traceless_from:], axis1=1, axis2=2))
    if traces.size and traces.max() > tol:
        raise DesignError("NOT-ORTHONORMAL", f"operator with trace {traces.max():.3e}")


def gell_mann_set(d: int) -> OrthonormalHermitianSet:
    """Normalised generalized Gell-Mann operators.

    Order: ``I/sqrt(d)``, the symmetric ``(E_jk + E_kj)/sqrt(2)`` for ``j < k``,
    the antisymmetric ``-i(E_jk - E_kj)/sqrt(2)`` (``-i`` above the diagonal,
    so ``d = 2`` gives ``sigma_y/sqrt(2)``), then the ``d - 1`` diagonal ones.
    """
    if d < 2:
        raise DesignError("DIMENSION", "d must be at least 2")
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    out = [np.eye(d, dtype=np.complex128) / np.sqrt(d)]
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = g[k, j] = 1 / np.sqrt(2)
        out.append(g)
    for j, k in pairs:
        g = np.zeros((d, d), dtype=np.complex128)
        g[j, k] = -1j / np.sqrt(2)
        g[k, j] = 1j / np.sqrt(2)
        out.append(g)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(np.complex128))
    return OrthonormalHermitianSet(d, np.array(out))


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random ``n x n`` orthogonal matrix (Gaussian + QR, sign-fixed diagonal)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def random_rotated_set(d: int, seed: int) -> OrthonormalHermitianSet:
    """Gell-Mann set with its traceless part mixed by a seeded Haar orthogonal matrix.

    Uses ``numpy.random.default_rng(seed)`` (PCG64), so the output is
    reproducible bit-for-bit for a given seed and numpy version.
    """
    base = gell_mann_set(d)
    rng = np.random.default_rng(seed)
    o = haar_orthogonal(d * d - 1, rng)
    mixed = np.einsum("ij,jab->iab", o, base.traceless)
    return OrthonormalHermitianSet(d, np.concatenate([base.elements[:1], mixed]))


@dataclass(frozen=True)
class BasisPartition:
    """Consecutive traceless elements of ``base`` split into groups of ``M_alpha - 1``."""

    base: OrthonormalHermitianSet
    sizes: tuple[int, ...]

    @property
    def group_sizes(self) -> tuple[int, ...]:
        return tuple(m - 1 for m in self.sizes)

    @property
    def ranges(self) -> list[range]:
        out, start = [], 1
        for n in self.group_sizes:
            out.append(range(start, start + n))
            start += n
        return out

    @property
    def groups(self) -> list[np.ndarray]:
        return [self.base.elements[r.start:r.stop] for r in self.ranges]

    @property
    def is_maximal(self) -> bool:
        return sum(self.group_sizes) == self.base.dim**2 - 1


def partition_set(base: OrthonormalHermitianSet, sizes) -> BasisPartition:
    sizes = tuple(int(m) for m in sizes)
    if not sizes:
        raise DesignError("PARTITION", "at least one group is required")
    if any(m < 2 for m in sizes):
        raise DesignError("PARTITION", f"every M_alpha must be >= 2, got {sizes}")
    need = sum(m - 1 for m in sizes)
    if need > base.dim**2 - 1:
        raise DesignError("PARTITION", f"sum(M_alpha - 1) = {need} exceeds d^2 - 1 = {base.dim**2 - 1}")
    if need > len(base) - 1:
        raise DesignError("PARTITION", f"base has only {len(base) - 1} traceless elements, need {need}")
    return BasisPartition(base, sizes)
