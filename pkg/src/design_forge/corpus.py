"""Golden fixtures ``example1`` to ``example3`` plus seeded generators."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import haar_orthogonal, partition_set, random_rotated_set
from .conical import Verdict, equivalence_report, fit_kappas, trace_profile, validate_profile
from .errors import DesignError
from .getf import Getf, Sign, Variant, b_from_tau, b_range, construct_getf, max_feasible_tau
from .mugetf import MuGetfFamily, assemble_mu_getf, b_from_S, construct_mu_getf, s_range

MAX_ATTEMPTS = 100

SQRT2, SQRT3, SQRT5 = np.sqrt(2.0), np.sqrt(3.0), np.sqrt(5.0)

# sum R (x) R shared by example1 and example3
FLIP_MIX_MATRIX = np.array([[3, 0, 0, 0], [0, 2, 1, 0], [0, 1, 2, 0], [0, 0, 0, 3]], dtype=float) / 6

_EXAMPLE1 = np.array([
    np.array([[1 + SQRT5, 1 - 1j], [1 + 1j, -1 + SQRT5]]) / (4 * SQRT3),
    np.array([[1 + 3 * SQRT5, -5 - 1j], [-5 + 1j, -1 + 3 * SQRT5]]) / (12 * SQRT3),
    np.array([[-1 - 3 * SQRT5, -1 - 5j], [-1 + 5j, 1 - 3 * SQRT5]]) / (12 * SQRT3),
    np.array([[5 - 3 * SQRT5, -1 + 1j], [-1 - 1j, -5 - 3 * SQRT5]]) / (12 * SQRT3),
])

_EXAMPLE3 = np.array([
    np.array([[1, 0], [0, 0]]) / np.sqrt(6.0),
    np.array([[0, 0], [0, 1]]) / np.sqrt(6.0),
    np.array([[2 * SQRT3, SQRT5 - 1j * SQRT2], [SQRT5 + 1j * SQRT2, 2 * SQRT3]]) / (2 * np.sqrt(30.0)),
    np.array([[2 * SQRT3, -SQRT5 - 1j * SQRT2], [-SQRT5 + 1j * SQRT2, 2 * SQRT3]]) / (2 * np.sqrt(30.0)),
    np.array([[2 * SQRT2, 1j * SQRT3], [-1j * SQRT3, 2 * SQRT2]]) / (2 * np.sqrt(15.0)),
])


@dataclass(frozen=True)
class Fixture:
    """Fixed operators with expected values.

    ``origin`` tells, per expected key, whether the value is stated alongside
    the matrices (``"given"``) or computed from them (``"derived"``).
    """

    name: str
    dim: int
    grouping: tuple[int, ...]
    operators: np.ndarray
    expected: dict
    origin: dict = field(default_factory=dict)
    description: str = ""

    @property
    def groups(self) -> list[np.ndarray]:
        bounds = np.cumsum((0,) + self.grouping)
        return [self.operators[bounds[i]:bounds[i + 1]] for i in range(len(self.grouping))]


def _example1() -> Fixture:
    return Fixture(
        "example1", 2, (4,), _EXAMPLE1.copy(),
        expected={"tensor_sum": FLIP_MIX_MATRIX, "kappas": (1 / 3, 1 / 6), "verdict": Verdict.NOT_PSD,
                  "non_psd": (2, 3), "traces": (SQRT5 / (2 * SQRT3),) * 2 + (-SQRT5 / (2 * SQRT3),) * 2},
        origin={"tensor_sum": "given", "kappas": "given", "verdict": "given", "non_psd": "given",
                "traces": "given"},
        description="Four non-PSD qubit operators satisfying the tensor identity with (1/3, 1/6).",
    )


def _example2() -> Fixture:
    # The matrices repeat example1 verbatim, so only what those
    # matrices satisfy is asserted; the unequal-trace PSD role is played by
    # random_inhomogeneous_conical_qubit.
    return Fixture(
        "example2", 2, (4,), _EXAMPLE1.copy(),
        expected={"kappas": (1 / 3, 1 / 6), "verdict": Verdict.NOT_PSD, "classification": "Inhomogeneous",
                  "kappa": 5 / 6},
        origin={"kappas": "given", "verdict": "derived", "classification": "given", "kappa": "derived"},
        description="Matrices listed for the unequal-trace case (identical to example1).",
    )


def _example3() -> Fixture:
    return Fixture(
        "example3", 2, (2, 3), _EXAMPLE3.copy(),
        expected={"tensor_sum": FLIP_MIX_MATRIX, "kappas": (1 / 3, 1 / 6), "verdict": Verdict.CONICAL_DESIGN,
                  "group_kappas": (1 / 6, 2 / 3), "kappa": 5 / 6,
                  # plain sum of group 0, trace-weighted sum of group 1
                  "group0_sum": np.eye(2) / np.sqrt(6.0), "group1_weighted_sum": 2 * np.eye(2) / 3,
                  "classification": "Inhomogeneous"},
        origin={"tensor_sum": "given", "kappas": "given", "verdict": "given", "group_kappas": "derived",
                "kappa": "derived", "group0_sum": "given", "group1_weighted_sum": "given", "classification": "derived"},
        description="Rescaled von Neumann pair plus three full-rank qubit operators of unequal trace.",
    )


_FIXTURES = {"example1": _example1, "example2": _example2, "example3": _example3}


def fixture_names() -> list[str]:
    return list(_FIXTURES)


def fixture(name: str) -> Fixture:
    try:
        return _FIXTURES[name]()
    except KeyError:
        raise DesignError("UNKNOWN-FIXTURE", f"no fixture named {name!r}; known: {', '.join(_FIXTURES)}") from None


def _branch(rng: np.random.Generator) -> tuple[Variant, Sign]:
    return (Variant.PLUS if rng.random() < 0.5 else Variant.PRIME,
            Sign.POS if rng.random() < 0.5 else Sign.NEG)


def _feasible_b_max(group, gamma: float, variant: Variant, sign: Sign) -> float:
    d = group.shape[1]
    M = group.shape[0] + 1
    bounds = max_feasible_tau(group, gamma, M, variant)
    tau = bounds.positive if sign is Sign.POS else bounds.negative
    return min(b_range(d, M)[1], b_from_tau(d, M, gamma, tau, variant))


def random_getf(d: int, seed: int, M: int | None = None) -> Getf:
    """Seeded GETF on a random rotated basis (``M = d^2`` by default).

    ``gamma`` is uniform on [1/2, 2]; ``b`` is uniform on the upper 95% of
    ``(1/d, b_max]``, where ``b_max`` is the smaller of the admissible bound
    and the PSD limit of the sampled branch.
    """
    if M is None:
        M = d * d
    rng = np.random.default_rng(seed)
    last = None
    for _ in range(MAX_ATTEMPTS):
        basis = random_rotated_set(d, int(rng.integers(2**32)))
        group = basis.traceless[:M - 1]
        gamma = rng.uniform(0.5, 2.0)
        variant, sign = _branch(rng)
        lo = 1 / d
        hi = _feasible_b_max(group, gamma, variant, sign)
        b = lo + rng.uniform(0.05, 1.0) * (hi - lo)
        try:
            return construct_getf(group, gamma, b, variant, sign)
        except DesignError as exc:
            if exc.code != "INFEASIBLE":
                raise
            last = exc
    raise DesignError("INFEASIBLE", f"no feasible GETF after {MAX_ATTEMPTS} attempts: {last}")


def maximal_sizes(d: int, n_groups: int, seed: int) -> list[int]:
    """Random group sizes ``M_alpha >= 2`` with ``sum(M_alpha - 1) = d^2 - 1``."""
    total = d * d - 1
    if not 1 <= n_groups <= total:
        raise DesignError("PARTITION", f"cannot split {total} operators into {n_groups} groups")
    rng = np.random.default_rng(seed)
    cuts = np.sort(rng.choice(np.arange(1, total), size=n_groups - 1, replace=False))
    parts = np.diff(np.concatenate([[0], cuts, [total]]))
    return [int(p) + 1 for p in parts]


def _sample_family_inputs(d: int, sizes, rng: np.random.Generator):
    basis = random_rotated_set(d, int(rng.integers(2**32)))
    part = partition_set(basis, sizes)
    n = len(part.sizes)
    gammas = rng.uniform(0.5, 2.0, size=n).tolist()
    branches = [_branch(rng) for _ in range(n)]
    bmax = [_feasible_b_max(g, gm, v, s) for g, gm, (v, s) in zip(part.groups, gammas, branches)]
    return part, gammas, branches, bmax


def _S_of_b(d: int, M: int, gamma: float, b: float) -> float:
    return d * gamma**2 / M * (d * b - 1) / (M - 1)


def random_mu_getf(d: int, sizes, seed: int) -> MuGetfFamily:
    """Seeded equidistant MU GETF family for the given group sizes.

    ``S`` is uniform on the upper 95% of ``(0, S_max]``, with ``S_max`` the
    admissible bound capped by each group's PSD limit.
    """
    rng = np.random.default_rng(seed)
    last = None
    for _ in range(MAX_ATTEMPTS):
        part, gammas, branches, bmax = _sample_family_inputs(d, sizes, rng)
        upper = s_range(d, part.sizes, gammas)[1]
        upper = min([upper] + [_S_of_b(d, m, g, b) for m, g, b in zip(part.sizes, gammas, bmax)])
        S = rng.uniform(0.05, 1.0) * upper
        try:
            return construct_mu_getf(part, gammas, S, [v for v, _ in branches], [s for _, s in branches])
        except DesignError as exc:
            if exc.code != "INFEASIBLE":
                raise
            last = exc
    raise DesignError("INFEASIBLE", f"no feasible family after {MAX_ATTEMPTS} attempts: {last}")


def random_perturbed_mu_getf(d: int, sizes, seed: int, delta: float = 0.05) -> tuple[MuGetfFamily, int, float]:
    """Equidistant family with one ``b_alpha`` shifted by ``+-delta`` (kept admissible and PSD).

    Returns the family, the perturbed group index and the signed shift.
    """
    rng = np.random.default_rng(seed)
    for _ in range(MAX_ATTEMPTS):
        part, gammas, branches, bmax = _sample_family_inputs(d, sizes, rng)
        upper = s_range(d, part.sizes, gammas)[1]
        upper = min([upper] + [_S_of_b(d, m, g, b) for m, g, b in zip(part.sizes, gammas, bmax)])
        S = rng.uniform(0.2, 0.9) * upper
        bs = [b_from_S(d, m, g, S) for m, g in zip(part.sizes, gammas)]
        alpha = int(rng.integers(len(bs)))
        shifts = [s for s in (delta, -delta) if 1 / d < bs[alpha] + s <= bmax[alpha]]
        if not shifts:
            continue
        shift = shifts[int(rng.integers(len(shifts)))]
        bs[alpha] += shift
        try:
            family = assemble_mu_getf(part, gammas, bs, [v for v, _ in branches], [s for _, s in branches])
        except DesignError as exc:
            if exc.code != "INFEASIBLE":
                raise
            continue
        return family, alpha, shift
    raise DesignError("INFEASIBLE", f"no admissible perturbation after {MAX_ATTEMPTS} attempts")


PAULI = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=np.complex128)


def _from_bloch(w: float, r: np.ndarray) -> np.ndarray:
    return (w * np.eye(2) + np.einsum("i,iab->ab", r, PAULI)) / 2


def random_inhomogeneous_conical_qubit(seed: int) -> list[np.ndarray]:
    """Seeded qubit conical design with a group of unequal traces.

    Returns two groups: a rescaled orthogonal pair ``(w1 I +- s n.sigma)/2``
    and three full-rank operators whose Bloch vectors lie in the plane
    orthogonal to ``n``. Writing the three as ``(w_k I + v_k.sigma)/2``,
    the design conditions become ``sum_k w_k v_k = 0`` and
    ``sum_k v_k v_k^T = 2 s^2 P_plane``; they are met by taking ``w`` along
    a positive unit vector ``q`` and ``v`` from an orthonormal completion of
    ``q``, so ``kappa_minus = s^2``. Every output is checked with
    :func:`fit_kappas`, :func:`equivalence_report` and the trace relations.
    """
    rng = np.random.default_rng(seed)
    for _ in range(MAX_ATTEMPTS):
        km = rng.uniform(0.1, 1.0)
        q = np.abs(rng.standard_normal(3))
        q /= np.linalg.norm(q)
        if q.min() < 0.2 or q.max() - q.min() < 0.05:
            continue
        basis, _ = np.linalg.qr(np.column_stack([q, rng.standard_normal((3, 2))]))
        frame = basis[:, 1:]
        v = np.sqrt(2 * km) * frame
        # smallest scale keeping |v_k| <= w_k, then a random margin
        c = np.max(np.linalg.norm(v, axis=1) / q) * (1 + rng.uniform(0.0, 0.5))
        w2 = c * q
        w1 = np.sqrt(km) * (1 + rng.uniform(0.0, 0.5))

        rot = haar_orthogonal(3, rng)
        ex, ey, n = rot[:, 0], rot[:, 1], rot[:, 2]
        g1 = np.array([_from_bloch(w1, np.sqrt(km) * n), _from_bloch(w1, -np.sqrt(km) * n)])
        g2 = np.array([_from_bloch(w2[k], v[k, 0] * ex + v[k, 1] * ey) for k in range(3)])

        ops = np.concatenate([g1, g2])
        fit = fit_kappas(ops)
        if not fit.is_design:
            continue
        if equivalence_report(ops, [2, 3]).classification != "Inhomogeneous":
            continue
        check = validate_profile(trace_profile(ops, [2, 3]), fit)
        if check.max_deviation > 1e-10 or not check.bounds_ok:
            continue
        return [g1, g2]
    raise DesignError("GENERATOR", f"no inhomogeneous design after {MAX_ATTEMPTS} attempts")
