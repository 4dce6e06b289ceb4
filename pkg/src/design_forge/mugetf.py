"""Mutually unbiased GETF families, equidistance and the index of coincidence."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisPartition
from .errors import DesignError, Violation
from .getf import Getf, Sign, Variant, construct_getf, verify_getf
from .linalg import as_operator_stack, density_matrix, frobenius_distance_sq, gram_matrix


@dataclass(frozen=True)
class MuGetfFamily:
    """``N`` GETFs whose cross-group overlaps are ``f a_alpha a_beta``.

    ``S_values[alpha] = a_alpha^2 (b_alpha - c_alpha)`` and
    ``mu = sum_alpha a_alpha gamma_alpha / d``. For a single group ``f`` is
    set to ``1/d``, the value any cross pair would be forced to take.
    """

    dim: int
    groups: tuple[Getf, ...]
    f: float
    Gamma: float
    S_values: tuple[float, ...]
    mu: float

    @property
    def N(self) -> int:
        return len(self.groups)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    @property
    def gammas(self) -> tuple[float, ...]:
        return tuple(g.params.gamma for g in self.groups)

    @property
    def elements(self) -> np.ndarray:
        return np.concatenate([g.elements for g in self.groups])

    @property
    def is_maximal(self) -> bool:
        return sum(self.sizes) == self.dim**2 + self.N - 1


def _family_from_groups(d: int, getfs: list[Getf], f: float) -> MuGetfFamily:
    gammas = [g.params.gamma for g in getfs]
    mu = sum(g.params.a * g.params.gamma for g in getfs) / d
    return MuGetfFamily(d, tuple(getfs), float(f), float(sum(gammas)),
                        tuple(float(g.params.S) for g in getfs), float(mu))


def verify_mu_getf(groups, tol: float = 1e-9) -> MuGetfFamily | Violation:
    """Verify each group as a GETF, then mutual unbiasedness and the cardinality bounds."""
    stacks = [as_operator_stack(g) for g in groups]
    if not stacks:
        return Violation("CARDINALITY", "no groups given")
    d = stacks[0].shape[1]
    if any(s.shape[1] != d for s in stacks):
        return Violation("DIMENSION", "groups act on different dimensions")

    getfs = []
    for alpha, ops in enumerate(stacks):
        res = verify_getf(ops, tol)
        if isinstance(res, Violation):
            return Violation(res.code, f"group {alpha}: {res.message}", (alpha,) + tuple(res.indices),
                             res.magnitude, res.details)
        getfs.append(Getf(res, ops))

    n = len(stacks)
    f = 1 / d
    if n > 1:
        ratios = []
        for alpha in range(n):
            for beta in range(alpha + 1, n):
                block = np.einsum("kab,lba->kl", stacks[alpha], stacks[beta]).real
                ratios.append(block / (getfs[alpha].params.a * getfs[beta].params.a))
        flat = np.concatenate([r.ravel() for r in ratios])
        f = flat.mean()
        spread = np.abs(flat - f).max()
        if spread > tol:
            return Violation("NOT-UNBIASED", f"cross-overlap ratios spread by {spread:.3e}",
                             magnitude=float(spread))
        if abs(f - 1 / d) > tol:
            return Violation("F-VALUE", f"fitted f = {f:.12g} differs from 1/d", magnitude=float(abs(f - 1 / d)))

    total = sum(len(g) for g in getfs)
    if not 2 * n <= total <= d * d + n - 1:
        return Violation("CARDINALITY", f"sum M_alpha = {total} outside [{2 * n}, {d * d + n - 1}]",
                         magnitude=total)
    return _family_from_groups(d, getfs, f)


def s_range(d: int, M_list, gamma_list) -> tuple[float, float]:
    """Admissible common distance ``S``: ``(0, upper]`` with

    ``upper = min_alpha min(d g^2/M, (d-1)/(M-1) * d g^2/M)``.
    """
    M_list, gamma_list = list(M_list), list(gamma_list)
    if len(M_list) != len(gamma_list):
        raise DesignError("PARTITION", "M_list and gamma_list differ in length")
    upper = min(
        min(d * g**2 / m, (d - 1) / (m - 1) * (d * g**2 / m))
        for m, g in zip(M_list, gamma_list)
    )
    return 0.0, upper


def b_from_S(d: int, M: int, gamma: float, S: float) -> float:
    """Invert ``S = (d gamma^2/M) (d b - 1)/(M - 1)`` for ``b``."""
    return (1 + S * M * (M - 1) / (d * gamma**2)) / d


def _per_group(value, n: int, cast) -> list:
    if isinstance(value, (str, Variant, Sign)) or not np.iterable(value):
        return [cast(value)] * n
    value = [cast(v) for v in value]
    if len(value) != n:
        raise DesignError("PARTITION", f"expected {n} per-group values, got {len(value)}")
    return value


def assemble_mu_getf(partition: BasisPartition, gammas, bs, variants=Variant.PLUS,
                     signs=Sign.POS, tol: float = 1e-9) -> MuGetfFamily:
    """Build one GETF per partition group with explicit ``b_alpha`` and verify the family.

    Unlike :func:`construct_mu_getf` this does not force equidistance.
    """
    groups = partition.groups
    n = len(groups)
    gammas = _per_group(gammas, n, float)
    bs = _per_group(bs, n, float)
    variants = _per_group(variants, n, Variant)
    signs = _per_group(signs, n, Sign)
    getfs = [construct_getf(g, gm, b, v, s, tol) for g, gm, b, v, s in zip(groups, gammas, bs, variants, signs)]
    res = verify_mu_getf([g.elements for g in getfs], tol)
    if isinstance(res, Violation):
        raise DesignError(res.code, f"constructed family failed verification: {res.message}")
    # keep the construction metadata (variant, sign, tau) on each group
    return _family_from_groups(partition.base.dim, getfs, res.f)


def construct_mu_getf(partition: BasisPartition, gammas, S: float, variants=Variant.PLUS,
                      signs=Sign.POS, tol: float = 1e-9) -> MuGetfFamily:
    """Equidistant MU GETF family with common Frobenius distance ``S``.

    Each ``b_alpha`` is obtained from ``S`` so that ``S_alpha = S`` exactly.
    Raises ``S-RANGE`` if ``S`` is inadmissible and propagates ``INFEASIBLE``.
    """
    d = partition.base.dim
    n = len(partition.sizes)
    gammas = _per_group(gammas, n, float)
    _, upper = s_range(d, partition.sizes, gammas)
    if not (S > 0 and S <= upper * (1 + 1e-12)):
        raise DesignError("S-RANGE", f"S = {S!r} outside (0, {upper!r}]")
    bs = [min(b_from_S(d, m, g, S), min(d, m) / d) for m, g in zip(partition.sizes, gammas)]
    return assemble_mu_getf(partition, gammas, bs, variants, signs, tol)


@dataclass(frozen=True)
class NotEquidistant:
    """Equidistance failure: per-group ``S_alpha`` and their spread about the mean."""

    S_values: tuple[float, ...]
    mean: float
    spread: float
    reason: str = "S_alpha differ"

    def __bool__(self) -> bool:
        return False


def equidistance(family: MuGetfFamily, tol: float = 1e-9) -> float | NotEquidistant:
    """Common distance ``S`` of an equidistant family, else :class:`NotEquidistant`.

    Each ``S_alpha`` is also cross-checked against the direct pairwise
    ``frobenius_distance_sq`` of the group's elements.
    """
    s = np.array(family.S_values)
    mean = float(s.mean())
    for alpha, g in enumerate(family.groups):
        els = g.elements
        for k in range(len(els)):
            for l in range(k + 1, len(els)):
                dist = frobenius_distance_sq(els[k], els[l])
                if abs(dist - s[alpha]) > tol * max(s[alpha], 1e-300):
                    return NotEquidistant(tuple(s), mean, float(abs(dist - s[alpha])),
                                          f"group {alpha}: D^2(P_{k}, P_{l}) = {dist:.12g} != S_alpha")
    spread = float(np.abs(s - mean).max())
    if spread > tol * mean:
        return NotEquidistant(tuple(s), mean, spread)
    return mean


@dataclass(frozen=True)
class CoincidenceReport:
    probabilities: tuple[np.ndarray, ...]
    C: float
    purity: float
    predicted_C: float
    residual: float


def index_of_coincidence(family: MuGetfFamily, rho, tol: float = 1e-9) -> CoincidenceReport:
    """Index of coincidence of ``rho`` against the linear purity law.

    Probabilities are ``Tr(P rho)/Gamma``; the law is evaluated for the
    rescaled operators ``P/Gamma``, i.e. with ``S/Gamma^2`` and ``mu/Gamma^2``.
    """
    S = equidistance(family, tol)
    if isinstance(S, NotEquidistant):
        raise DesignError("NOT-EQUIDISTANT", f"S_alpha = {S.S_values}")
    rho = density_matrix(rho)
    if rho.shape[0] != family.dim:
        raise DesignError("DIMENSION", "state and family dimensions differ")
    G = family.Gamma
    probs = tuple(np.einsum("kab,ba->k", g.elements, rho).real / G for g in family.groups)
    C = float(sum((p**2).sum() for p in probs))
    purity = float(np.vdot(rho, rho).real)
    predicted = S / G**2 * (purity - 1 / family.dim) + family.mu / G**2
    return CoincidenceReport(probs, C, purity, float(predicted), abs(C - predicted))


@dataclass(frozen=True)
class RankReport:
    size: int
    rank: int
    expected: int
    singular_values: np.ndarray

    @property
    def ok(self) -> bool:
        return self.rank == self.expected


def reduced_linear_independence(family: MuGetfFamily, tol: float = 1e-9) -> RankReport:
    """Rank of ``{I} + {P_alpha,k : k < M_alpha}``.

    ``expected`` is the set size, which equals ``d^2`` for maximal families.
    """
    d = family.dim
    ops = [np.eye(d, dtype=np.complex128)[np.newaxis]] + [g.elements[:-1] for g in family.groups]
    ops = np.concatenate(ops)
    sv = np.linalg.svd(gram_matrix(ops), compute_uv=False)
    rank = int(np.sum(sv > tol * sv[0])) if sv[0] > 0 else 0
    return RankReport(len(ops), rank, len(ops), sv)
