"""Dense complex Hermitian matrix helpers.

Operators are plain ``numpy`` arrays of dtype ``complex128``. Lists of
operators are stacked into arrays of shape ``(n, d, d)``.
"""
from __future__ import annotations

import numpy as np

from .errors import DesignError

HERMITICITY_TOL = 1e-12
PSD_REL_TOL = 1e-9


def as_operator_stack(ops) -> np.ndarray:
    """Stack a sequence of square matrices into a ``(n, d, d)`` complex array."""
    arr = np.asarray(ops, dtype=np.complex128)
    if arr.ndim == 2:
        arr = arr[np.newaxis]
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DesignError("DIMENSION", f"expected a stack of square matrices, got shape {arr.shape}")
    return arr


def hermitian(a, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return ``(a + a^dagger)/2`` after checking ``a`` is Hermitian to ``tol``.

    Raises
    ------
    DesignError
        ``NOT-HERMITIAN`` if the largest entry of ``a - a^dagger`` exceeds
        ``tol``; ``DIMENSION`` if ``a`` is not square.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DesignError("DIMENSION", f"expected a square matrix, got shape {a.shape}")
    violation = np.abs(a - a.conj().T).max(initial=0.0)
    if violation > tol:
        raise DesignError("NOT-HERMITIAN", f"max |A - A^dagger| = {violation:.3e} > {tol:.1e}")
    return (a + a.conj().T) / 2


def density_matrix(rho, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate a density matrix: Hermitian, PSD and unit trace."""
    rho = hermitian(rho, tol)
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol:
        raise DesignError("NOT-DENSITY", f"trace {tr!r} differs from 1")
    if not is_psd(rho):
        raise DesignError("NOT-DENSITY", "density matrix has a negative eigenvalue")
    return rho


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DesignError("DIMENSION", f"dimension mismatch: {a.shape} vs {b.shape}")


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt pairing ``Tr(a b)`` of two Hermitian operators."""
    a = np.asarray(a)
    b = np.asarray(b)
    _check_same_dim(a, b)
    val = np.einsum("ij,ji->", a, b)
    if abs(val.imag) > 1e-10:
        raise DesignError("NOT-HERMITIAN", f"Tr(AB) has imaginary part {val.imag:.3e}")
    return float(val.real)


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def flip_operator(d: int) -> np.ndarray:
    """Swap operator on C^d (x) C^d, ``F (x (x) y) = y (x) x``."""
    if d < 1:
        raise DesignError("DIMENSION", "d must be positive")
    f = np.zeros((d * d, d * d), dtype=np.complex128)
    m, n = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    # |m><n| (x) |n><m| has its single 1 at row m*d+n, column n*d+m
    f[(m * d + n).ravel(), (n * d + m).ravel()] = 1.0
    return f


def psd_threshold(eigvals: np.ndarray, rel: float = PSD_REL_TOL) -> float:
    """Scale-aware tolerance ``rel * (max |eigenvalue| + 1)``."""
    return rel * (np.abs(eigvals).max(initial=0.0) + 1.0)


def min_eigenvalue(a) -> float:
    # eigvalsh raises LinAlgError on non-convergence; let it propagate
    return float(np.linalg.eigvalsh(np.asarray(a))[0])


def is_psd(a, tol: float | None = None) -> bool:
    """True iff the smallest eigenvalue of ``a`` is at least ``-tol``.

    With ``tol=None`` the threshold is ``1e-9 * (max |eigenvalue| + 1)``.
    Eigensolver failures raise ``numpy.linalg.LinAlgError``.
    """
    if tol is not None and tol < 0:
        raise ValueError("tol must be non-negative")
    ev = np.linalg.eigvalsh(np.asarray(a))
    if tol is None:
        tol = psd_threshold(ev)
    return bool(ev[0] >= -tol)


def frobenius_distance_sq(a, b) -> float:
    """Half the squared Frobenius distance, ``Tr[(a - b)^2] / 2``."""
    a = np.asarray(a)
    b = np.asarray(b)
    _check_same_dim(a, b)
    diff = a - b
    return float(0.5 * np.vdot(diff, diff).real)


def gram_matrix(ops) -> np.ndarray:
    """Real matrix of pairwise ``Tr(A_i A_j)`` for a stack of Hermitian operators."""
    ops = as_operator_stack(ops)
    g = np.einsum("iab,jba->ij", ops, ops)
    return g.real


def numerical_rank(matrix, rel_cutoff: float = 1e-9) -> int:
    """Count singular values above ``rel_cutoff * sigma_max``."""
    sv = np.linalg.svd(np.asarray(matrix), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_cutoff * sv[0]))


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Sample a density matrix from the induced (Ginibre) measure."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase-fixed diagonal."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
