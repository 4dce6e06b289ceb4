"""Conical 2-designs: fitting, trace relations, equivalence ladders and bridges.

A set of PSD operators ``R_k`` on C^d is a conical 2-design when

    sum_k R_k (x) R_k = kappa_plus I (x) I + kappa_minus F,   kappa_plus >= kappa_minus > 0,

with ``F`` the swap. Equivalently the map ``X -> sum_k R_k Tr(R_k X)``
equals ``kappa_plus Tr(X) I + kappa_minus X``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .basis import gell_mann_set
from .errors import DesignError, Violation
from .getf import FrameParams, verify_getf
from .linalg import as_operator_stack, flip_operator, gram_matrix, numerical_rank
from .mugetf import MuGetfFamily, NotEquidistant, equidistance, verify_mu_getf


class Verdict(str, enum.Enum):
    CONICAL_DESIGN = "ConicalDesign"
    NOT_PSD = "NotPsd"
    RESIDUAL_TOO_LARGE = "ResidualTooLarge"
    KAPPA_CONSTRAINT_VIOLATED = "KappaConstraintViolated"


@dataclass(frozen=True)
class ConicalFit:
    dim: int
    kappa_plus: float
    kappa_minus: float
    residual: float
    verdict: Verdict
    non_psd: tuple[int, ...] = ()
    tensor_norm: float = 0.0

    @property
    def kappa(self) -> float:
        return self.dim * self.kappa_plus + self.kappa_minus

    @property
    def is_design(self) -> bool:
        return self.verdict is Verdict.CONICAL_DESIGN


def flatten_groups(groups) -> tuple[np.ndarray, list[int]]:
    """Concatenate grouped operators; returns the stack and the group sizes."""
    stacks = [as_operator_stack(g) for g in groups]
    return np.concatenate(stacks), [len(s) for s in stacks]


def split_groups(ops, grouping) -> list[np.ndarray]:
    ops = as_operator_stack(ops)
    grouping = [int(n) for n in grouping]
    if sum(grouping) != len(ops) or any(n < 1 for n in grouping):
        raise DesignError("GROUPING", f"grouping {grouping} does not partition {len(ops)} operators")
    bounds = np.cumsum([0] + grouping)
    return [ops[bounds[i]:bounds[i + 1]] for i in range(len(grouping))]


def tensor_sum(ops) -> np.ndarray:
    """``sum_k R_k (x) R_k`` as a ``d^2 x d^2`` matrix."""
    ops = as_operator_stack(ops)
    d = ops.shape[1]
    return np.einsum("kab,kcd->acbd", ops, ops).reshape(d * d, d * d)


def fit_kappas(ops, tol: float = 1e-9) -> ConicalFit:
    """Project ``sum R (x) R`` onto span{I (x) I, F} and classify.

    The projection solves the 2x2 Gram system
    ``Tr(T) = d^2 k+ + d k-`` and ``Tr(T F) = d k+ + d^2 k-``.
    Verdicts are checked in the order PSD, residual
    (``<= tol * (1 + ||T||)``), then ``k+ >= k- > 0``.
    """
    ops = as_operator_stack(ops)
    d = ops.shape[1]
    if d < 2:
        raise DesignError("DIMENSION", "d = 1 makes I (x) I and F identical")
    t = tensor_sum(ops)
    f = flip_operator(d)
    rhs = np.array([np.trace(t).real, np.einsum("ij,ji->", t, f).real])
    lhs = np.array([[d * d, d], [d, d * d]], dtype=float)
    kp, km = np.linalg.solve(lhs, rhs)
    resid = float(np.linalg.norm(t - kp * np.eye(d * d) - km * f))
    tnorm = float(np.linalg.norm(t))

    ev = np.linalg.eigvalsh(ops)
    thresh = tol * (np.abs(ev).max(axis=1) + 1.0)
    bad = tuple(int(k) for k in np.flatnonzero(ev[:, 0] < -thresh))

    scale = 1.0 + abs(kp)
    if bad:
        verdict = Verdict.NOT_PSD
    elif resid > tol * (1.0 + tnorm):
        verdict = Verdict.RESIDUAL_TOO_LARGE
    elif not (km > tol * scale and kp >= km - tol * scale):
        verdict = Verdict.KAPPA_CONSTRAINT_VIOLATED
    else:
        verdict = Verdict.CONICAL_DESIGN
    return ConicalFit(d, float(kp), float(km), resid, verdict, bad, tnorm)


def choi_map_residual(ops, fit: ConicalFit | None = None) -> float:
    """Max Frobenius deviation of ``X -> sum R Tr(R X)`` from ``k+ Tr(X) I + k- X``.

    Evaluated on the Gell-Mann basis; an independent route to the tensor-sum fit.
    """
    ops = as_operator_stack(ops)
    d = ops.shape[1]
    if fit is None:
        fit = fit_kappas(ops)
    worst = 0.0
    for x in gell_mann_set(d).elements:
        coeffs = np.einsum("kab,ba->k", ops, x)
        image = np.einsum("k,kab->ab", coeffs, ops)
        target = fit.kappa_plus * np.trace(x) * np.eye(d) + fit.kappa_minus * x
        worst = max(worst, float(np.linalg.norm(image - target)))
    return worst


@dataclass(frozen=True)
class TraceProfile:
    """Traces ``w``, purities ``x``, intra-group overlaps ``y`` and cross blocks ``z``.

    ``y[alpha]`` is the full intra-group overlap matrix (its diagonal is
    ``x[alpha]``); ``z[(alpha, beta)]`` for ``alpha < beta`` is the cross block.
    """

    dim: int
    grouping: tuple[int, ...]
    w: tuple[np.ndarray, ...]
    x: tuple[np.ndarray, ...]
    y: tuple[np.ndarray, ...]
    z: dict
    kappa_groups: tuple[float, ...]
    kappa: float
    overlaps: np.ndarray = field(repr=False)


def trace_profile(ops, grouping=None, tol: float = 1e-9) -> TraceProfile:
    """Collect all pairwise overlap data per group.

    Each group must satisfy ``sum_k Tr(R_k) R_k = kappa_alpha I``; otherwise
    ``GROUP-SUM`` is raised.
    """
    ops = as_operator_stack(ops)
    d = ops.shape[1]
    grouping = [len(ops)] if grouping is None else [int(n) for n in grouping]
    groups = split_groups(ops, grouping)
    gram = gram_matrix(ops)
    traces = np.trace(ops, axis1=1, axis2=2).real
    bounds = np.cumsum([0] + grouping)

    w, x, y, kappas = [], [], [], []
    for alpha, g in enumerate(groups):
        sl = slice(bounds[alpha], bounds[alpha + 1])
        wa = traces[sl]
        weighted = np.einsum("k,kab->ab", wa, g)
        ka = np.trace(weighted).real / d
        dev = np.abs(weighted - ka * np.eye(d)).max()
        if dev > tol * (1.0 + abs(ka)):
            raise DesignError("GROUP-SUM", f"group {alpha}: sum Tr(R) R deviates from {ka:.6g} I by {dev:.3e}")
        w.append(wa)
        block = gram[sl, sl]
        x.append(np.diag(block).copy())
        y.append(block.copy())
        kappas.append(float(ka))
    z = {}
    for alpha in range(len(groups)):
        for beta in range(alpha + 1, len(groups)):
            z[(alpha, beta)] = gram[bounds[alpha]:bounds[alpha + 1], bounds[beta]:bounds[beta + 1]].copy()
    return TraceProfile(d, tuple(grouping), tuple(w), tuple(x), tuple(y), z,
                        tuple(kappas), float(sum(kappas)), gram)


@dataclass(frozen=True)
class ProfileCheck:
    """Deviations of a trace profile from the closed-form trace relations."""

    x_deviation: float
    y_deviation: float
    z_deviation: float
    kappa_sum_deviation: float
    group_norm_deviation: float
    kappa_alpha_ok: tuple[bool, ...]
    w_lower: tuple[np.ndarray, ...]
    w_upper: tuple[np.ndarray, ...]
    bounds_ok: bool
    cauchy_schwarz_ok: bool

    @property
    def max_deviation(self) -> float:
        return max(self.x_deviation, self.y_deviation, self.z_deviation)


def validate_profile(profile: TraceProfile, fit: ConicalFit, tol: float = 1e-10) -> ProfileCheck:
    """Compare measured overlaps with the predictions from ``(w, kappa_alpha, kappa_minus)``.

    For one group the predictions reduce to ``x = k- + (k+/k) w^2`` and
    ``y = (k+/k) w w'``. Also checks ``kappa_alpha >= k-``,
    ``d k- k_a / ((d-1) k_a + k-) <= w^2 < d k_a`` and the Cauchy-Schwarz
    closure ``w^2 <= d x``, ``y^2 <= x x'``.
    """
    d = profile.dim
    km = fit.kappa_minus
    xdev = ydev = zdev = 0.0
    norm_dev = 0.0
    ka_ok, lower, upper = [], [], []
    bounds_ok = cs_ok = True
    for wa, xa, ya, ka in zip(profile.w, profile.x, profile.y, profile.kappa_groups):
        coef = (ka - km) / (d * ka)
        xdev = max(xdev, float(np.abs(xa - (km + coef * wa**2)).max()))
        off = ~np.eye(len(wa), dtype=bool)
        if off.any():
            ydev = max(ydev, float(np.abs((ya - coef * np.outer(wa, wa))[off]).max()))
        norm_dev = max(norm_dev, abs(float((wa**2).sum()) - d * ka))
        ka_ok.append(bool(ka >= km - tol))
        lo = d * km * ka / ((d - 1) * ka + km)
        lower.append(wa**2 - lo)
        upper.append(d * ka - wa**2)
        bounds_ok &= bool((wa**2 >= lo - tol).all() and (wa**2 < d * ka).all())
        cs_ok &= bool((wa**2 <= d * xa + tol).all())
        cs_ok &= bool((ya**2 <= np.outer(xa, xa) + tol).all())
    for (alpha, beta), block in profile.z.items():
        zdev = max(zdev, float(np.abs(block - np.outer(profile.w[alpha], profile.w[beta]) / d).max()))
    bounds_ok &= all(ka_ok)
    return ProfileCheck(xdev, ydev, zdev, abs(profile.kappa - fit.kappa), norm_dev, tuple(ka_ok),
                        tuple(lower), tuple(upper), bounds_ok, cs_ok)


@dataclass(frozen=True)
class EquivalenceReport:
    """Independently evaluated statements of the equivalence ladder.

    ``statements`` holds one dict per group. Keys: ``equal_trace``,
    ``equal_purity``, ``constant_overlap``, ``sums_to_identity`` and then
    ``homogeneous`` (single group) or ``is_getf`` and ``mutually_unbiased``
    (grouped). ``precondition`` names the failed hypothesis, if any.
    """

    statements: tuple[dict, ...]
    eta: tuple[float | None, ...]
    classification: str
    precondition: str | None
    fit: ConicalFit

    LADDER = ("equal_trace", "equal_purity", "constant_overlap", "sums_to_identity")

    @property
    def uniform(self) -> tuple[bool, ...]:
        return tuple(s["equal_trace"] for s in self.statements)

    @property
    def consistent(self) -> bool:
        """True when, per group, the ladder statements agree.

        ``mutually_unbiased`` is left out: cross overlaps ``w w'/d`` hold for
        every grouped design of this class, whatever the traces.
        """
        keys = self.LADDER + ("homogeneous", "is_getf")
        return all(len({s[k] for k in keys if k in s}) == 1 for s in self.statements)


def _is_const(values: np.ndarray, scale: float, tol: float) -> bool:
    if values.size == 0:
        return True
    return bool(np.abs(values - values.mean()).max() <= tol * max(scale, 1e-300))


def _ladder(ops: np.ndarray, tol: float) -> tuple[dict, float | None]:
    d = ops.shape[1]
    traces = np.trace(ops, axis1=1, axis2=2).real
    gram = gram_matrix(ops)
    scale = np.abs(traces).max() ** 2
    off = ~np.eye(len(ops), dtype=bool)
    total = ops.sum(axis=0)
    eta = np.trace(total).real / d
    sums = bool(eta > 0 and np.abs(total - eta * np.eye(d)).max() <= tol * max(abs(eta), 1.0))
    st = {
        "equal_trace": _is_const(traces, np.abs(traces).max(), tol),
        "equal_purity": _is_const(np.diag(gram), scale, tol),
        "constant_overlap": _is_const(gram[off], scale, tol),
        "sums_to_identity": sums,
    }
    return st, (float(eta) if sums else None)


def equivalence_report(ops, grouping=None, tol: float = 1e-9) -> EquivalenceReport:
    """Evaluate each equivalence statement on its own and classify the design.

    Without ``grouping`` (or with one group) the hypotheses are ``d^2``
    linearly independent elements; with groups, each group must be linearly
    independent, satisfy ``sum Tr(R) R = kappa_alpha I``, and the total must
    be ``d^2 + N - 1``. Failed hypotheses are reported, not raised.
    """
    ops = as_operator_stack(ops)
    d = ops.shape[1]
    fit = fit_kappas(ops, tol)
    grouping = [len(ops)] if grouping is None else [int(n) for n in grouping]
    groups = split_groups(ops, grouping)
    problems = [] if fit.is_design else [fit.verdict.value]

    if len(groups) == 1:
        if len(ops) != d * d:
            problems.append("CARDINALITY")
        if numerical_rank(gram_matrix(ops), tol) != len(ops):
            problems.append("LINEAR-DEPENDENCE")
        st, eta = _ladder(ops, tol)
        st["homogeneous"] = st["equal_trace"] and st["equal_purity"]
        cls = "Homogeneous" if st["homogeneous"] else "Inhomogeneous"
        return EquivalenceReport((st,), (eta,), cls, ",".join(problems) or None, fit)

    if len(ops) != d * d + len(groups) - 1:
        problems.append("CARDINALITY")
    try:
        trace_profile(ops, grouping, tol)
    except DesignError as exc:
        problems.append(exc.code)
    statements, etas = [], []
    traces = np.trace(ops, axis1=1, axis2=2).real
    bounds = np.cumsum([0] + grouping)
    for alpha, g in enumerate(groups):
        if numerical_rank(gram_matrix(g), tol) != len(g):
            problems.append(f"LINEAR-DEPENDENCE[{alpha}]")
        st, eta = _ladder(g, tol)
        st["is_getf"] = not isinstance(verify_getf(g, tol), Violation)
        wa = traces[bounds[alpha]:bounds[alpha + 1]]
        ratios = []
        for beta, h in enumerate(groups):
            if beta == alpha:
                continue
            wb = traces[bounds[beta]:bounds[beta + 1]]
            block = np.einsum("kab,lba->kl", g, h).real
            ratios.append((block / np.outer(wa, wb)).ravel())
        st["mutually_unbiased"] = _is_const(np.concatenate(ratios), 1.0 / d, tol)
        statements.append(st)
        etas.append(eta)
    homogeneous = _is_const(traces, np.abs(traces).max(), tol) and _is_const(
        np.diag(gram_matrix(ops)), np.abs(traces).max() ** 2, tol)
    cls = "Homogeneous" if homogeneous else "Inhomogeneous"
    return EquivalenceReport(tuple(statements), tuple(etas), cls, ",".join(problems) or None, fit)


def _require_design(ops, tol: float) -> ConicalFit:
    fit = fit_kappas(ops, tol)
    if not fit.is_design:
        raise DesignError("NOT-CONICAL", f"verdict {fit.verdict.value} (residual {fit.residual:.3e})")
    return fit


def _close(got: float, want: float, tol: float) -> bool:
    return abs(got - want) <= tol * max(1.0, abs(want))


def conical_to_getf(ops, tol: float = 1e-9) -> FrameParams:
    """GETF parameters of a homogeneous conical design of ``d^2`` independent elements.

    ``gamma = kappa/w``, ``a = w``, ``b = x/w^2``, ``c = y/w^2``, where the
    common trace, purity and overlap must equal ``sqrt(kappa/d)``,
    ``k- + k+/d`` and ``k+/d``. The result is cross-checked against
    :func:`verify_getf` on the same operators.
    """
    ops = as_operator_stack(ops)
    d = ops.shape[1]
    fit = _require_design(ops, tol)
    if len(ops) != d * d:
        raise DesignError("CARDINALITY", f"{len(ops)} elements, need d^2 = {d * d}")
    gram = gram_matrix(ops)
    if numerical_rank(gram, tol) != d * d:
        raise DesignError("LINEAR-DEPENDENCE", "elements are not linearly independent")
    st, _ = _ladder(ops, tol)
    if not (st["equal_trace"] and st["equal_purity"]):
        raise DesignError("NOT-HOMOGENEOUS", "traces or purities differ")

    kp, km, kappa = fit.kappa_plus, fit.kappa_minus, fit.kappa
    w = float(np.trace(ops, axis1=1, axis2=2).real.mean())
    x = float(np.diag(gram).mean())
    y = float(gram[~np.eye(d * d, dtype=bool)].mean())
    for name, got, want in (("w", w, np.sqrt(kappa / d)), ("x", x, km + kp / d), ("y", y, kp / d)):
        if not _close(got, want, tol):
            raise DesignError("INCONSISTENT", f"{name} = {got!r}, closed form gives {want!r}")
    params = FrameParams(d, d * d, kappa / w, w, x / w**2, y / w**2)

    check = verify_getf(ops, tol)
    if isinstance(check, Violation):
        raise DesignError(check.code, f"verify_getf rejected the design: {check.message}")
    for name in ("gamma", "a", "b", "c"):
        if not _close(getattr(check, name), getattr(params, name), tol):
            raise DesignError("INCONSISTENT", f"{name}: {getattr(check, name)!r} vs {getattr(params, name)!r}")
    return params


def conical_to_mu_getf(groups, tol: float = 1e-9) -> MuGetfFamily:
    """Read a grouped conical design with per-group equal traces as an MU GETF family.

    Requires ``sum M_alpha = d^2 + N - 1``. The family has ``a_alpha = w_alpha``,
    ``gamma_alpha = w_alpha M_alpha / d`` and common distance ``S = k-``.
    """
    ops, sizes = flatten_groups(groups)
    stacks = split_groups(ops, sizes)
    d = ops.shape[1]
    n = len(sizes)
    fit = _require_design(ops, tol)
    ws = []
    for alpha, g in enumerate(stacks):
        tr = np.trace(g, axis1=1, axis2=2).real
        if not _is_const(tr, np.abs(tr).max(), tol):
            raise DesignError("GROUP-TRACE-INHOMOGENEOUS", f"group {alpha} traces {tr.tolist()}")
        ws.append(float(tr.mean()))
    if sum(sizes) != d * d + n - 1:
        raise DesignError("CARDINALITY", f"sum M_alpha = {sum(sizes)}, maximal is {d * d + n - 1}")
    km = fit.kappa_minus
    for alpha, (w, m) in enumerate(zip(ws, sizes)):
        bound = np.sqrt(d * km / m) * max(1.0, np.sqrt((m - 1) / (d - 1)))
        if w < bound * (1 - tol):
            raise DesignError("TRACE-BOUND", f"group {alpha}: w = {w!r} below {bound!r}")

    family = verify_mu_getf(stacks, tol)
    if isinstance(family, Violation):
        raise DesignError(family.code, f"verify_mu_getf rejected the design: {family.message}")
    for alpha, (w, m) in enumerate(zip(ws, sizes)):
        p = family.groups[alpha].params
        if not (_close(p.a, w, tol) and _close(p.gamma, w * m / d, tol)):
            raise DesignError("INCONSISTENT", f"group {alpha}: (a, gamma) = ({p.a!r}, {p.gamma!r})")
    S = equidistance(family, tol)
    if isinstance(S, NotEquidistant) or not _close(S, km, tol):
        raise DesignError("NOT-EQUIDISTANT", f"S = {S!r}, kappa_minus = {km!r}")
    return family
