"""Generalized equiangular tight frames: parameters, construction, verification.

A GETF is a set of ``M`` PSD operators ``P_k`` on C^d with

    Tr(P_k) = a,  Tr(P_k^2) = b a^2,  Tr(P_k P_l) = c a^2 (k != l),
    sum_k P_k = gamma I.

Frames are built as ``P_k = (gamma/M) I + tau H_k`` from ``M - 1``
orthonormal traceless Hermitian operators.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .basis import check_orthonormal
from .errors import DesignError, Violation
from .linalg import as_operator_stack, gram_matrix, numerical_rank, psd_threshold

TAU_CAP = 1e6


class Variant(str, enum.Enum):
    PLUS = "plus"
    PRIME = "prime"


class Sign(str, enum.Enum):
    POS = "pos"
    NEG = "neg"


@dataclass(frozen=True)
class FrameParams:
    """Parameters of one GETF.

    ``variant``, ``sign`` and ``tau`` are set for constructed frames and left
    as ``None`` when the parameters were fitted from a bare operator list.
    """

    dim: int
    M: int
    gamma: float
    a: float
    b: float
    c: float
    variant: Variant | None = None
    sign: Sign | None = None
    tau: float | None = None

    @property
    def S(self) -> float:
        """Squared Frobenius distance ``a^2 (b - c)`` between any two elements."""
        return self.a**2 * (self.b - self.c)


@dataclass(frozen=True)
class Getf:
    params: FrameParams
    elements: np.ndarray

    def __len__(self) -> int:
        return self.elements.shape[0]


class TauBounds(NamedTuple):
    positive: float
    negative: float


def b_range(d: int, M: int) -> tuple[float, float]:
    """Admissible ``b``: the half-open interval ``(1/d, min(d, M)/d]``.

    ``b = 1`` gives rank-1 elements; ``b = M/d`` (for ``M < d``) gives
    projectors of rank ``d/M``.
    """
    return 1 / d, min(d, M) / d


def _check_b(d: int, M: int, b: float, slack: float = 0.0) -> None:
    lo, hi = b_range(d, M)
    if not (b > lo and b <= hi + slack):
        raise DesignError("B-RANGE", f"b = {b!r} outside ({lo!r}, {hi!r}] for d={d}, M={M}")


def getf_params(d: int, M: int, gamma: float, b: float) -> FrameParams:
    """Derive ``a = d gamma / M`` and ``c = (M - d b)/(d (M - 1))``."""
    if not 2 <= M <= d * d:
        raise DesignError("M-RANGE", f"M = {M} outside [2, {d * d}]")
    if not gamma > 0:
        raise DesignError("GAMMA", f"gamma must be positive, got {gamma!r}")
    _check_b(d, M, b)
    a = d * gamma / M
    c = (M - d * b) / (d * (M - 1))
    return FrameParams(d, M, gamma, a, b, c)


def tau_value(params: FrameParams, variant: Variant, sign: Sign) -> float:
    M = params.M
    shift = 1.0 if Variant(variant) is Variant.PLUS else -1.0
    mag = np.sqrt(params.a**2 * (params.b - params.c) / (M * (np.sqrt(M) + shift) ** 2))
    return float(mag if Sign(sign) is Sign.POS else -mag)


def b_from_tau(d: int, M: int, gamma: float, tau: float, variant: Variant) -> float:
    """Invert the tau formula: the ``b`` whose frame uses ``|tau|``."""
    a = d * gamma / M
    shift = 1.0 if Variant(variant) is Variant.PLUS else -1.0
    return 1 / d + tau**2 * (M - 1) * (np.sqrt(M) + shift) ** 2 / a**2


def build_h_operators(group, variant: Variant = Variant.PLUS, check: bool = True) -> np.ndarray:
    """Traceless operators ``H_k`` (or ``H'_k``) from ``M - 1`` orthonormal ones.

    With ``G = sum_k G_k`` and ``s = +1`` (plus) or ``-1`` (prime)::

        H_k = G - s sqrt(M) (s + sqrt(M)) G_k,   k < M
        H_M = (1 + s sqrt(M)) G
    """
    group = as_operator_stack(group)
    if check:
        check_orthonormal(group, traceless_from=0)
    M = group.shape[0] + 1
    rt = np.sqrt(M)
    g = group.sum(axis=0)
    if Variant(variant) is Variant.PLUS:
        head = g - rt * (1 + rt) * group
        tail = (1 + rt) * g
    else:
        head = g + rt * (1 - rt) * group
        tail = (1 - rt) * g
    return np.concatenate([head, tail[np.newaxis]])


def max_feasible_tau(group, gamma: float, M: int | None = None, variant: Variant = Variant.PLUS) -> TauBounds:
    """Largest ``|tau|`` keeping every ``(gamma/M) I + tau H_k`` PSD, per sign of ``tau``.

    Along a ray the smallest eigenvalue is affine in ``tau``
    (``gamma/M + tau * lambda_min(H_k)`` for ``tau >= 0``), so the bound is
    exact. Unbounded directions are capped at ``TAU_CAP``.
    """
    group = as_operator_stack(group)
    if M is None:
        M = group.shape[0] + 1
    elif M != group.shape[0] + 1:
        raise DesignError("M-RANGE", f"group of {group.shape[0]} operators implies M = {group.shape[0] + 1}, not {M}")
    h = build_h_operators(group, variant, check=False)
    ev = np.linalg.eigvalsh(h)
    base = gamma / M
    lowest = -ev[:, 0].min()
    highest = ev[:, -1].max()
    pos = base / lowest if lowest > 0 else np.inf
    neg = base / highest if highest > 0 else np.inf
    return TauBounds(float(min(pos, TAU_CAP)), float(min(neg, TAU_CAP)))


def construct_getf(group, gamma: float, b: float, variant: Variant = Variant.PLUS,
                   sign: Sign = Sign.POS, tol: float = 1e-9) -> Getf:
    """Build ``P_k = (gamma/M) I + tau H_k`` for the requested ``b`` and branch.

    Raises ``DesignError`` with code ``B-RANGE`` for an inadmissible ``b`` and
    ``INFEASIBLE`` when the resulting elements are not all PSD.
    """
    group = as_operator_stack(group)
    variant, sign = Variant(variant), Sign(sign)
    d = group.shape[1]
    M = group.shape[0] + 1
    params = getf_params(d, M, gamma, b)
    h = build_h_operators(group, variant)
    tau = tau_value(params, variant, sign)
    elements = gamma / M * np.eye(d) + tau * h

    ev = np.linalg.eigvalsh(elements)
    worst = ev[:, 0].min()
    if worst < -psd_threshold(ev, tol):
        bound = max_feasible_tau(group, gamma, M, variant)
        limit = bound.positive if sign is Sign.POS else bound.negative
        raise DesignError(
            "INFEASIBLE",
            f"|tau| = {abs(tau):.6g} exceeds the PSD limit {limit:.6g} "
            f"(min eigenvalue {worst:.3e}) for b = {b!r}, {variant.value}/{sign.value}",
        )

    fitted = verify_getf(elements, tol)
    if isinstance(fitted, Violation):
        raise DesignError(fitted.code, f"constructed frame failed verification: {fitted.message}")
    for name in ("gamma", "a", "b", "c"):
        want, got = getattr(params, name), getattr(fitted, name)
        if abs(want - got) > tol * max(1.0, abs(want)):
            raise DesignError("INCONSISTENT", f"{name}: requested {want!r}, constructed {got!r}")
    return Getf(FrameParams(d, M, gamma, params.a, b, params.c, variant, sign, tau), elements)


def verify_getf(elements, tol: float = 1e-9) -> FrameParams | Violation:
    """Fit GETF parameters to ``elements`` or report the first failed predicate.

    Checks, in order: cardinality, PSD, equal traces, ``sum P_k = gamma I``,
    constant purity ratio ``b``, constant overlap ratio ``c``, consistency of
    ``(a, c)`` with ``(gamma, b)``, the admissible ``b`` range, and linear
    independence via the Gram matrix rank (cutoff ``tol * sigma_max``).
    Deviations are measured relative to ``a`` (and ``a^2`` for overlaps).
    """
    ops = as_operator_stack(elements)
    M, d = ops.shape[0], ops.shape[1]
    if not 2 <= M <= d * d:
        return Violation("CARDINALITY", f"M = {M} outside [2, {d * d}]", magnitude=M)

    ev = np.linalg.eigvalsh(ops)
    mins = ev[:, 0]
    thresh = tol * (np.abs(ev).max(axis=1) + 1.0)
    bad = np.flatnonzero(mins < -thresh)
    if bad.size:
        return Violation("NOT-PSD", f"elements {bad.tolist()} have negative eigenvalues",
                         tuple(bad.tolist()), float(-mins[bad].min()))

    traces = np.trace(ops, axis1=1, axis2=2).real
    a = traces.mean()
    if not a > 0:
        return Violation("ZERO-TRACE", "mean trace is not positive", magnitude=float(a))
    dev = np.abs(traces - a)
    if dev.max() > tol * a:
        k = int(dev.argmax())
        return Violation("UNEQUAL-TRACE", f"trace of element {k} deviates from mean {a:.12g}",
                         (k,), float(dev[k] / a))

    total = ops.sum(axis=0)
    gamma = np.trace(total).real / d
    dev = np.abs(total - gamma * np.eye(d)).max()
    if not gamma > 0 or dev > tol * max(gamma, a):
        return Violation("NOT-TIGHT", f"sum of elements deviates from {gamma:.12g} I",
                         magnitude=float(dev))

    g = gram_matrix(ops)
    a2 = a * a
    diag = np.diag(g)
    b = diag.mean() / a2
    dev = np.abs(diag - b * a2)
    if dev.max() > tol * a2:
        k = int(dev.argmax())
        return Violation("UNEQUAL-PURITY", f"Tr(P_{k}^2) deviates from b a^2", (k,), float(dev[k] / a2))

    off = ~np.eye(M, dtype=bool)
    c = g[off].mean() / a2
    dev = np.where(off, np.abs(g - c * a2), 0.0)
    if dev.max() > tol * a2:
        k, l = np.unravel_index(dev.argmax(), dev.shape)
        return Violation("UNEQUAL-OVERLAP", f"Tr(P_{k} P_{l}) deviates from c a^2",
                         (int(k), int(l)), float(dev[k, l] / a2))

    a_pred = d * gamma / M
    c_pred = (M - d * b) / (d * (M - 1))
    if abs(a - a_pred) > tol * a or abs(c - c_pred) > tol * max(1.0, abs(c)):
        return Violation("PARAM-INCONSISTENT", "fitted (a, c) disagree with a = d gamma/M, c = (M - d b)/(d(M - 1))",
                         magnitude=float(max(abs(a - a_pred) / a, abs(c - c_pred))),
                         details={"a": a, "a_pred": a_pred, "c": c, "c_pred": c_pred})

    lo, hi = b_range(d, M)
    if not (b > lo + tol and b <= hi + tol):
        return Violation("B-RANGE", f"b = {b:.12g} outside ({lo:.12g}, {hi:.12g}]", magnitude=float(b),
                         details={"b": b, "low": lo, "high": hi})

    rank = numerical_rank(g, tol)
    if rank != M:
        return Violation("LINEAR-DEPENDENCE", f"Gram rank {rank} < M = {M}", magnitude=float(rank))

    return FrameParams(d, M, float(gamma), float(a), float(b), float(c))
