"""
Doubly-commuting certification, inner-function extraction and Beurling verdicts.

Two extraction routes are provided.  The wandering route takes the one
dimensional intersection of M ⊖ S1 M and M ⊖ S2 M.  The kernel route
projects a derivative representer at the origin onto M, using the lowest
order derivative that does not vanish identically on M.  On a Beurling-type
model both produce the same generator up to a unimodular constant, which is
fixed by a phase convention so the two can be compared as vectors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import (
    EmptyInterior,
    EmptySpan,
    EmptyWandering,
    NotNormalized,
    UnjustifiedRouteWarning,
    WanderingNotOneDim,
)
from .hardy_core import (
    DegreeWindow,
    DiscPoint,
    HardyElement,
    adjoint_toeplitz_apply,
    as_point,
    boundary_product_spectrum,
    cauchy_kernel,
    derivative_representer,
    evaluate,
    monomial_values,
)
from .subspace import (
    ANGLE_TOL,
    RANK_TOL,
    GeneratorSet,
    OrthonormalBasis,
    complement_in,
    graded_lex,
    interior_coordinates,
    intersect,
    intersect_via_projectors,
    orthonormalize,
    project,
    restrict_to,
    shift_columns,
    shift_image,
    span_invariant,
    subspace_distance,
)

DC_TOL = 1e-8
INNER_TOL = 1e-6
DIST_TOL = 1e-6
# A coefficient must reach this fraction of the largest one to fix the phase.
PHASE_TOL = 1e-8
SAMPLE_RADIUS = 0.5


@dataclass(frozen=True)
class Tolerances:
    rank_tol: float = RANK_TOL
    dc_tol: float = DC_TOL
    inner_tol: float = INNER_TOL
    dist_tol: float = DIST_TOL
    angle_tol: float = ANGLE_TOL

    def to_json(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DcReport:
    defect: float
    interior_dim: int
    tol: float

    @property
    def ok(self) -> bool:
        return self.defect <= self.tol


@dataclass(frozen=True)
class InnerReport:
    candidate: HardyElement
    origin_value: float
    max_offorigin: float
    is_inner: bool
    tol: float = INNER_TOL

    def to_json(self) -> dict:
        return {"origin": self.origin_value, "max_offorigin": self.max_offorigin, "is_inner": self.is_inner}


class Verdict(str, Enum):
    BEURLING = "Beurling"
    NOT_DOUBLY_COMMUTING = "NotDoublyCommuting"
    WANDERING_NOT_ONE_DIM = "WanderingNotOneDim"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BeurlingVerdict:
    basis: OrthonormalBasis
    dc: DcReport
    wandering_dim: int
    phi: Optional[InnerReport]
    beurling_distance: Optional[float]
    verdict: Verdict
    phi_route_agreement: Optional[float] = None
    kernel_phi: Optional[HardyElement] = None
    projector_route_distance: Optional[float] = None


# --------------------------------------------------------------------------
# compressed operators


def compressed_shifts(basis: OrthonormalBasis) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of P_M S_j restricted to M in the basis coordinates."""
    q = basis.matrix
    qh = q.conj().T
    return tuple(qh @ shift_columns(q, basis.window, axis) for axis in (1, 2))


def dc_defect(basis: OrthonormalBasis, tol: float = DC_TOL) -> DcReport:
    """Largest singular value of S1 S2^* - S2^* S1 (compressed) on interior members."""
    if basis.dim == 0:
        raise EmptySpan("dc_defect needs a nonempty basis")
    coords = interior_coordinates(basis)
    if coords.shape[1] == 0:
        raise EmptyInterior(
            f"margin {basis.window.margin} leaves no members inside the interior window"
        )
    a1, a2 = compressed_shifts(basis)
    a2h = a2.conj().T
    comm = a1 @ a2h - a2h @ a1
    defect = float(np.linalg.norm(comm @ coords, 2))
    return DcReport(defect, coords.shape[1], tol)


# --------------------------------------------------------------------------
# wandering subspaces


def wandering_subspace(basis: OrthonormalBasis, axis: int) -> OrthonormalBasis:
    """O_j = M ⊖ S_j M on the truncated model.

    The shift image is projected back onto M first, so that edge effects of
    non-monomial models cannot make the complement ill-posed.
    """
    image = shift_image(basis, axis)
    q = basis.matrix
    inside = orthonormalize(q @ (q.conj().T @ image.matrix), basis.rank_tol)
    return complement_in(basis, OrthonormalBasis(basis.window, inside, basis.rank_tol))


def wandering_intersection(basis: OrthonormalBasis, angle_tol: float = ANGLE_TOL) -> OrthonormalBasis:
    return intersect(wandering_subspace(basis, 1), wandering_subspace(basis, 2), angle_tol)


def phase_normalize(f: HardyElement, rel_tol: float = PHASE_TOL) -> HardyElement:
    """Unit norm, with the first graded-lex significant coefficient real positive."""
    nrm = f.norm()
    if nrm == 0:
        raise EmptySpan("cannot normalize the zero element")
    f = f / nrm
    cutoff = rel_tol * np.max(np.abs(f.coeffs))
    for m, n in graded_lex(f.window.d1, f.window.d2):
        c = f.coeffs[m, n]
        if abs(c) > cutoff:
            return f * (abs(c) / c)
    return f


def _candidate(f: HardyElement, rank_tol: float) -> HardyElement:
    return phase_normalize(phase_normalize(f).chop(rank_tol))


def innerness_report(candidate: HardyElement, tol: float = INNER_TOL) -> InnerReport:
    """Innerness test through the Laurent spectrum of |phi|^2 on the torus."""
    nrm = candidate.norm()
    if abs(nrm - 1) > 1e-8:
        raise NotNormalized(f"candidate norm {nrm:.12g} is not 1 to within 1e-8")
    spec = boundary_product_spectrum(candidate, candidate)
    origin = float(spec.origin.real)
    off = spec.max_offorigin()
    return InnerReport(candidate, origin, off, bool(abs(origin - 1) <= tol and off <= tol), tol)


def extract_inner_wandering(
    basis: OrthonormalBasis,
    dc_tol: float = DC_TOL,
    angle_tol: float = ANGLE_TOL,
    inner_tol: float = INNER_TOL,
) -> InnerReport:
    """Inner candidate spanning O1 ∩ O2.

    Warns (UnjustifiedRouteWarning) when the doubly-commuting defect exceeds
    ``dc_tol``.  Raises WanderingNotOneDim or EmptyWandering otherwise.
    """
    try:
        dc = dc_defect(basis, dc_tol)
        if not dc.ok:
            warnings.warn(
                f"dc defect {dc.defect:.3e} exceeds {dc_tol:.1e}; wandering route is unjustified",
                UnjustifiedRouteWarning,
                stacklevel=2,
            )
    except EmptyInterior:
        warnings.warn("no interior members; doubly-commuting check skipped", UnjustifiedRouteWarning, stacklevel=2)
    wand = wandering_intersection(basis, angle_tol)
    if wand.dim == 0:
        raise EmptyWandering()
    if wand.dim != 1:
        raise WanderingNotOneDim(wand.dim)
    return innerness_report(_candidate(wand.vectors[0], basis.rank_tol), inner_tol)


def kernel_route_order(basis: OrthonormalBasis) -> tuple[int, int]:
    """Lowest (graded, then lexicographic) derivative order not vanishing on M."""
    w = basis.window
    rows = np.linalg.norm(basis.matrix, axis=1).reshape(w.shape)
    for d1, d2 in graded_lex(w.d1, w.d2):
        if rows[d1, d2] > basis.rank_tol:
            return d1, d2
    raise EmptySpan("every basis coefficient is below the rank tolerance")


def extract_inner_kernel(basis: OrthonormalBasis, inner_tol: float = INNER_TOL) -> InnerReport:
    """Normalized projection of the derivative representer onto M."""
    d1, d2 = kernel_route_order(basis)
    phi = project(basis, derivative_representer(d1, d2, basis.window))
    return innerness_report(_candidate(phi, basis.rank_tol), inner_tol)


# --------------------------------------------------------------------------
# verdict pipeline


def _interior_model_distance(basis: OrthonormalBasis, phi: HardyElement) -> Optional[float]:
    inner = basis.window.interior()
    outside = math.sqrt(max(phi.norm() ** 2 - phi.restrict(inner).norm() ** 2, 0.0))
    if outside > basis.rank_tol:
        return None
    phi_in = phi.restrict(inner).chop(basis.rank_tol)
    m_in = restrict_to(basis, inner)
    try:
        model = span_invariant(GeneratorSet(inner, (phi_in,)), inner, basis.rank_tol)
    except EmptySpan:
        return None
    return subspace_distance(m_in, model)


def beurling_verdict(
    gens: GeneratorSet,
    window: Optional[DegreeWindow] = None,
    tols: Tolerances = Tolerances(),
) -> BeurlingVerdict:
    window = gens.window if window is None else window
    basis = span_invariant(gens, window, tols.rank_tol)
    dc = dc_defect(basis, tols.dc_tol)

    o1, o2 = wandering_subspace(basis, 1), wandering_subspace(basis, 2)
    wand = intersect(o1, o2, tols.angle_tol)
    by_projectors = intersect_via_projectors(o1, o2, tols.angle_tol)
    projector_distance = subspace_distance(wand, by_projectors)

    kernel = extract_inner_kernel(basis, tols.inner_tol)
    phi, agreement = kernel, None
    if wand.dim == 1:
        phi = innerness_report(_candidate(wand.vectors[0], tols.rank_tol), tols.inner_tol)
        agreement = (phi.candidate - kernel.candidate).norm()

    distance = _interior_model_distance(basis, phi.candidate)

    if not dc.ok:
        verdict = Verdict.NOT_DOUBLY_COMMUTING
    elif wand.dim != 1:
        verdict = Verdict.WANDERING_NOT_ONE_DIM
    elif phi.is_inner and distance is not None and distance <= tols.dist_tol:
        verdict = Verdict.BEURLING
    else:
        verdict = Verdict.INCONCLUSIVE
    return BeurlingVerdict(
        basis=basis,
        dc=dc,
        wandering_dim=wand.dim,
        phi=phi,
        beurling_distance=distance,
        verdict=verdict,
        phi_route_agreement=agreement,
        kernel_phi=kernel.candidate,
        projector_route_distance=projector_distance,
    )


# --------------------------------------------------------------------------
# identity checks


@dataclass(frozen=True)
class ResidualRecord:
    name: str
    lam: Optional[DiscPoint]
    z: Optional[DiscPoint]
    residual: float
    tail_bound: float

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lambda": self.lam.to_json() if self.lam is not None else [],
            "z": self.z.to_json() if self.z is not None else None,
            "residual": self.residual,
            "tail_bound": self.tail_bound,
        }


def sample_pairs(seed: int, samples: int, radius: float = SAMPLE_RADIUS) -> list[tuple[DiscPoint, DiscPoint]]:
    """Seeded (lambda, z) pairs, uniform in the radius-polydisc."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random((samples, 4)))
    t = 2 * np.pi * rng.random((samples, 4))
    w = r * np.exp(1j * t)
    return [(DiscPoint(a, b), DiscPoint(c, d)) for a, b, c, d in w]


def factorization_tail_bound(phi: HardyElement, window: DegreeWindow, lam: DiscPoint, z: DiscPoint) -> float:
    """Truncation tail of (1 - conj(l1) z1)(1 - conj(l2) z2) k_lam(z) for an inner polynomial phi.

    The truncated kernel is phi(z) conj(phi(lam)) prod_j (1 - w_j^N_j)/(1 - w_j)
    with w_j = conj(l_j) z_j and N_j = d_j - deg_j(phi) + 1.
    """
    p1, p2 = phi.degree()
    n1, n2 = window.d1 - p1 + 1, window.d2 - p2 + 1
    t1 = abs(np.conj(lam.lambda1) * z.lambda1) ** n1
    t2 = abs(np.conj(lam.lambda2) * z.lambda2) ** n2
    return abs(evaluate(phi, z)) * abs(evaluate(phi, lam)) * (t1 + t2 + t1 * t2)


def _interior_residual(diff: np.ndarray, window: DegreeWindow) -> float:
    """Norm of the coefficients inside the interior window."""
    inner = window.interior()
    return float(np.linalg.norm(diff.reshape(window.shape)[: inner.d1 + 1, : inner.d2 + 1]))


class ChainOperators:
    """Compressed S1, S2^* and the interior sub-model, built once per basis."""

    def __init__(self, basis: OrthonormalBasis):
        self.basis = basis
        self.a1, a2 = compressed_shifts(basis)
        self.a2h = a2.conj().T
        self.q_int = basis.matrix @ interior_coordinates(basis)


def kernel_factorization_residual(basis: OrthonormalBasis, phi: HardyElement, lam, z) -> ResidualRecord:
    """|(1 - conj(l1) z1)(1 - conj(l2) z2) k_lam(z) - phi(z) conj(phi(lam))| with its tail bound."""
    lam, z = as_point(lam), as_point(z)
    w, q = basis.window, basis.matrix
    k = q @ np.conj(q.T @ monomial_values(lam, w))
    kz = complex(monomial_values(z, w) @ k)
    lhs = (1 - np.conj(lam.lambda1) * z.lambda1) * (1 - np.conj(lam.lambda2) * z.lambda2) * kz
    rhs = evaluate(phi, z) * np.conj(evaluate(phi, lam))
    return ResidualRecord("kernel_factorization", lam, z, float(abs(lhs - rhs)), factorization_tail_bound(phi, w, lam, z))


def kernel_chain_residuals(ops: ChainOperators, lam) -> tuple[ResidualRecord, ResidualRecord]:
    """S1 S2^* k and S2^* S1 k against conj(l2) z1 k, tested on the interior sub-model."""
    lam = as_point(lam)
    basis = ops.basis
    w, q = basis.window, basis.matrix
    ck = np.conj(q.T @ monomial_values(lam, w))
    k = q @ ck
    target = np.conj(lam.lambda2) * shift_columns(k[:, None], w, 1)[:, 0]
    chains = (("kernel_chain_lhs", ops.a1 @ (ops.a2h @ ck)), ("kernel_chain_rhs", ops.a2h @ (ops.a1 @ ck)))
    return tuple(
        ResidualRecord(name, lam, None, float(np.linalg.norm(ops.q_int.conj().T @ (q @ c - target))), 0.0)
        for name, c in chains
    )


def identity_suite(
    basis: OrthonormalBasis,
    phi: HardyElement,
    seed: int,
    samples: int,
    tols: Tolerances = Tolerances(),
) -> list[ResidualRecord]:
    """Residuals of the kernel identities at seeded samples, then the subspace checks.

    Per sample: ``kernel_factorization`` (pointwise), ``kernel_chain_lhs``
    (S1 S2^* k versus conj(l2) z1 k) and ``kernel_chain_rhs`` (S2^* S1 k,
    same target).  The chain residuals are tested against the members of M
    supported in the interior window, where truncation does not reach the
    compressed operators.  Once per call: ``o1_s2_invariance`` and
    ``wandering_constant_modulus``, which are exact finite identities and
    carry a zero tail bound.
    """
    ops = ChainOperators(basis)
    records = []
    for lam, z in sample_pairs(seed, samples):
        records.append(kernel_factorization_residual(basis, phi, lam, z))
        records.extend(kernel_chain_residuals(ops, lam))

    o1 = wandering_subspace(basis, 1)
    records.append(ResidualRecord("o1_s2_invariance", None, None, o1_invariance_residual(o1), 0.0))
    wand = intersect(o1, wandering_subspace(basis, 2), tols.angle_tol)
    records.append(ResidualRecord("wandering_constant_modulus", None, None, cross_spectrum_residual(wand), 0.0))
    return records


def o1_invariance_residual(o1: OrthonormalBasis) -> float:
    """Largest distance from O1 of S2 applied to unit members of O1 whose shift fits."""
    image = shift_image(o1, 2)
    if image.dim == 0:
        return 0.0
    q = o1.matrix
    r = image.matrix - q @ (q.conj().T @ image.matrix)
    return float(np.linalg.norm(r, 2))


def cross_spectrum_residual(wand: OrthonormalBasis) -> float:
    """Max off-origin Laurent coefficient over all products g_i conj(g_j) of basis vectors."""
    vecs = wand.vectors
    worst = 0.0
    for i in range(len(vecs)):
        for j in range(i, len(vecs)):
            worst = max(worst, boundary_product_spectrum(vecs[i], vecs[j]).max_offorigin())
    return worst


def toeplitz_kernel_identity_check(phi: HardyElement, p, window: DegreeWindow) -> float:
    """Interior norm of T_phi^* C_p - conj(phi(p)) C_p."""
    p = as_point(p)
    ck = cauchy_kernel(p, window)
    lhs = adjoint_toeplitz_apply(phi.embed(window), ck)
    rhs = ck * np.conj(evaluate(phi, p))
    return _interior_residual((lhs - rhs).flat, window)


def toeplitz_tail_bound(phi: HardyElement, p, window: DegreeWindow) -> float:
    """Closed-form bound for :func:`toeplitz_kernel_identity_check`.

    The symbol term z1^a z2^b only differs from the exact identity on indices
    with m > d1 - a or n > d2 - b; the bound sums the Cauchy-kernel mass there,
    clipped to the interior window, weighted by |coef| |lambda^(a, b)|.
    """
    p = as_point(p)
    r1, r2 = abs(p.lambda1) ** 2, abs(p.lambda2) ** 2
    inner = window.interior()

    def seg(r, lo, hi):
        # sum_{k=lo}^{hi} r^k without the cancellation of a difference of full sums
        if hi < lo:
            return 0.0
        return float(hi - lo + 1) if r == 1 else r**lo * (1 - r ** (hi - lo + 1)) / (1 - r)

    phi = phi.embed(window)
    total = 0.0
    for (a, b), coef in np.ndenumerate(phi.coeffs):
        if coef == 0:
            continue
        s1, s2 = min(inner.d1, window.d1 - a), min(inner.d2, window.d2 - b)
        # interior box minus the safe box [0, s1] x [0, s2]
        mass = seg(r1, s1 + 1, inner.d1) * seg(r2, 0, inner.d2) + seg(r1, 0, s1) * seg(r2, s2 + 1, inner.d2)
        weight = abs(coef) * abs(p.lambda1) ** a * abs(p.lambda2) ** b
        total += weight * math.sqrt(mass)
    return total


# --------------------------------------------------------------------------
# report


def analysis_report(result: BeurlingVerdict, residuals: list[ResidualRecord], tols: Tolerances, seed: int) -> dict:
    """AnalysisReport as a JSON-ready dict with stable field names."""
    phi = result.phi
    return {
        "window": result.basis.window.to_json(),
        "dim": result.basis.dim,
        "dc_defect": result.dc.defect,
        "wandering_dim": result.wandering_dim,
        "phi": phi.candidate.to_json() if phi is not None else None,
        "phi_route_agreement": result.phi_route_agreement,
        "inner": phi.to_json() if phi is not None else None,
        "beurling_distance": result.beurling_distance,
        "verdict": result.verdict.value,
        "identity_residuals": [r.to_json() for r in residuals],
        "tolerances": tols.to_json(),
        "seed": seed,
        "projector_route_distance": result.projector_route_distance,
    }
