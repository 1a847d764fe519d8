"""
Finite-dimensional subspaces of a degree window.

A subspace is held as an orthonormal matrix ``Q`` of shape (N, r) whose
columns are row-major coefficient vectors (N = (d1 + 1)(d2 + 1)).  All rank
decisions go through one relative cutoff ``rank_tol``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import EmptySpan, MalformedInput, NotContained, WindowOverflow
from .hardy_core import (
    DegreeWindow,
    HardyElement,
    adjoint_shift_array,
    as_point,
    monomial_values,
    shift_array,
)

RANK_TOL = 1e-10
ANGLE_TOL = 1e-8


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Orthonormal columns spanning a subspace of ``window``.

    ``overflow`` counts dimensions lost to the window edge when the basis
    was produced by :func:`shift_image`; it is zero otherwise.
    """

    window: DegreeWindow
    matrix: np.ndarray
    rank_tol: float = RANK_TOL
    overflow: int = 0

    def __post_init__(self):
        q = np.asarray(self.matrix, dtype=complex)
        if q.ndim != 2 or q.shape[0] != self.window.size:
            raise ValueError(f"basis matrix shape {q.shape} incompatible with window size {self.window.size}")
        object.__setattr__(self, "matrix", _frozen(q))

    @classmethod
    def empty(cls, window: DegreeWindow, rank_tol: float = RANK_TOL) -> "OrthonormalBasis":
        return cls(window, np.zeros((window.size, 0), dtype=complex), rank_tol)

    @classmethod
    def from_elements(
        cls, elements: Sequence[HardyElement], window: DegreeWindow, rank_tol: float = RANK_TOL
    ) -> "OrthonormalBasis":
        """Orthonormal basis of the plain linear span of ``elements``."""
        if not elements:
            return cls.empty(window, rank_tol)
        cols = np.stack([e.embed(window).flat for e in elements], axis=1)
        return cls(window, orthonormalize(cols, rank_tol), rank_tol)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return self.dim

    @property
    def vectors(self) -> list[HardyElement]:
        return [HardyElement.from_flat(self.matrix[:, i], self.window) for i in range(self.dim)]

    def __iter__(self) -> Iterator[HardyElement]:
        return iter(self.vectors)

    def projector(self) -> np.ndarray:
        return self.matrix @ self.matrix.conj().T

    def _with(self, matrix: np.ndarray, overflow: int = 0) -> "OrthonormalBasis":
        return OrthonormalBasis(self.window, matrix, self.rank_tol, overflow)


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    window: DegreeWindow
    elements: tuple

    def __post_init__(self):
        if not self.elements:
            raise MalformedInput("generator set must be nonempty")
        els = tuple(self.elements)
        for i, g in enumerate(els):
            if not g.fits(self.window):
                raise MalformedInput(
                    f"generator {i} of degree {g.degree()} exceeds window ({self.window.d1}, {self.window.d2})"
                )
        object.__setattr__(self, "elements", tuple(g.embed(self.window) for g in els))

    def with_window(self, window: DegreeWindow) -> "GeneratorSet":
        for i, g in enumerate(self.elements):
            if not g.fits(window):
                raise WindowOverflow(
                    f"generator {i} of degree {g.degree()} exceeds window ({window.d1}, {window.d2})"
                )
        return GeneratorSet(window, tuple(g.embed(window) for g in self.elements))

    def to_json(self) -> dict:
        return {"window": self.window.to_json(), "generators": [g.to_json() for g in self.elements]}

    @classmethod
    def from_json(cls, obj) -> "GeneratorSet":
        if not isinstance(obj, dict):
            raise MalformedInput("generator file must hold a JSON object")
        for key in ("window", "generators"):
            if key not in obj:
                raise MalformedInput(f"generator file is missing {key!r}")
        window = DegreeWindow.from_json(obj["window"])
        gens = obj["generators"]
        if not isinstance(gens, list) or not gens:
            raise MalformedInput("'generators' must be a nonempty list")
        elements = []
        for i, entries in enumerate(gens):
            try:
                elements.append(HardyElement.from_json(entries, window))
            except MalformedInput as exc:
                raise MalformedInput(f"generator {i}: {exc}") from None
        return cls(window, tuple(elements))

    @classmethod
    def loads(cls, text: str) -> "GeneratorSet":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedInput(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_json(obj)


# --------------------------------------------------------------------------
# linear algebra helpers


def orthonormalize(columns: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the column span, by SVD with a relative cutoff."""
    if columns.shape[1] == 0:
        return np.zeros((columns.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(columns, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((columns.shape[0], 0), dtype=complex)
    rank = int(np.sum(s > rank_tol * s[0]))
    return u[:, :rank]


def null_space(rows: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of {c : ||rows @ c|| <= tol}, taken from the SVD."""
    r = rows.shape[1]
    if rows.shape[0] == 0 or r == 0:
        return np.eye(r, dtype=complex)
    _, s, vh = np.linalg.svd(rows, full_matrices=True)
    rank = int(np.sum(s > tol))
    return vh[rank:].conj().T


def graded_lex(d1: int, d2: int) -> list[tuple[int, int]]:
    """All (a, b) with a <= d1, b <= d2, ordered by (a + b, a)."""
    return sorted(((a, b) for a in range(d1 + 1) for b in range(d2 + 1)), key=lambda ab: (ab[0] + ab[1], ab[0]))


def _outside_rows(window: DegreeWindow, sub) -> np.ndarray:
    """Row indices of monomials outside the box ``sub`` = (top1, top2) or a window."""
    top1, top2 = (sub.d1, sub.d2) if isinstance(sub, DegreeWindow) else sub
    m, n = np.meshgrid(np.arange(window.d1 + 1), np.arange(window.d2 + 1), indexing="ij")
    return np.nonzero(((m > top1) | (n > top2)).reshape(-1))[0]


def _top_rows(window: DegreeWindow, axis: int) -> np.ndarray:
    top = (window.d1 - 1, window.d2) if axis == 1 else (window.d1, window.d2 - 1)
    return _outside_rows(window, top)


def shift_columns(matrix: np.ndarray, window: DegreeWindow, axis: int) -> np.ndarray:
    """Apply the in-window shift (top slab dropped) to every column."""
    cube = matrix.T.reshape(-1, *window.shape)
    return shift_array(cube, axis).reshape(matrix.shape[1], window.size).T


def adjoint_shift_columns(matrix: np.ndarray, window: DegreeWindow, axis: int) -> np.ndarray:
    cube = matrix.T.reshape(-1, *window.shape)
    return adjoint_shift_array(cube, axis).reshape(matrix.shape[1], window.size).T


# --------------------------------------------------------------------------
# operations


def invariant_candidates(gens: GeneratorSet, window: DegreeWindow) -> np.ndarray:
    """Columns z1^a z2^b g for every generator g and every shift that fits."""
    cols = []
    for g in gens.elements:
        if not g.fits(window):
            raise WindowOverflow(f"generator of degree {g.degree()} exceeds window ({window.d1}, {window.d2})")
        gm, gn = g.degree()
        if gm < 0:
            continue
        base = g.embed(window).coeffs
        for a, b in graded_lex(window.d1 - gm, window.d2 - gn):
            c = np.zeros(window.shape, dtype=complex)
            c[a : a + gm + 1, b : b + gn + 1] = base[: gm + 1, : gn + 1]
            cols.append(c.reshape(-1))
    if not cols:
        return np.zeros((window.size, 0), dtype=complex)
    return np.stack(cols, axis=1)


def span_invariant(gens: GeneratorSet, window: Optional[DegreeWindow] = None, rank_tol: float = RANK_TOL) -> OrthonormalBasis:
    """Truncated model of the smallest shift-invariant subspace containing ``gens``."""
    window = gens.window if window is None else window
    cols = invariant_candidates(gens, window)
    q = orthonormalize(cols, rank_tol)
    if q.shape[1] == 0:
        raise EmptySpan("every candidate vector is below the rank tolerance")
    return OrthonormalBasis(window, q, rank_tol)


def project(basis: OrthonormalBasis, f: HardyElement) -> HardyElement:
    q = basis.matrix
    v = f.embed(basis.window).flat
    return HardyElement.from_flat(q @ (q.conj().T @ v), basis.window)


def kernel_at(basis: OrthonormalBasis, p) -> HardyElement:
    """Reproducing kernel of span(basis) at ``p``: sum conj(v_i(p)) v_i."""
    e = monomial_values(as_point(p), basis.window)
    q = basis.matrix
    return HardyElement.from_flat(q @ np.conj(q.T @ e), basis.window)


def restrict_to(basis: OrthonormalBasis, sub: DegreeWindow) -> OrthonormalBasis:
    """Members of span(basis) supported in the sub-window, expressed in ``sub``.

    A direction is kept when its mass outside ``sub`` is at most rank_tol.
    """
    rows = _outside_rows(basis.window, sub)
    coords = null_space(basis.matrix[rows], basis.rank_tol)
    full = basis.matrix @ coords
    m, n = np.meshgrid(np.arange(basis.window.d1 + 1), np.arange(basis.window.d2 + 1), indexing="ij")
    keep = ((m <= sub.d1) & (n <= sub.d2)).reshape(-1)
    q = orthonormalize(full[keep], basis.rank_tol) if coords.shape[1] else full[keep]
    return OrthonormalBasis(sub, q, basis.rank_tol)


def interior_coordinates(basis: OrthonormalBasis) -> np.ndarray:
    """Orthonormal coordinate vectors (columns) of span(basis) ∩ interior window."""
    rows = _outside_rows(basis.window, basis.window.interior())
    return null_space(basis.matrix[rows], basis.rank_tol)


def shift_image(basis: OrthonormalBasis, axis: int) -> OrthonormalBasis:
    """Orthonormal basis of S_axis applied to the members whose shift fits the window.

    The number of dimensions lost at the window edge is reported as ``overflow``.
    """
    coords = null_space(basis.matrix[_top_rows(basis.window, axis)], basis.rank_tol)
    fitting = basis.matrix @ coords
    shifted = shift_columns(fitting, basis.window, axis)
    q = orthonormalize(shifted, basis.rank_tol)
    return basis._with(q, overflow=basis.dim - coords.shape[1])


def complement_in(ambient: OrthonormalBasis, inner: OrthonormalBasis) -> OrthonormalBasis:
    """Orthonormal basis of ambient ⊖ inner."""
    if inner.dim == 0:
        return ambient._with(ambient.matrix)
    qa, qb = ambient.matrix, inner.matrix
    coords = qa.conj().T @ qb
    residual = np.linalg.norm(qb - qa @ coords, axis=0)
    tol = 10 * ambient.rank_tol
    if np.max(residual) > tol:
        worst = int(np.argmax(residual))
        raise NotContained(f"inner vector {worst} has projection residual {residual[worst]:.3e} > {tol:.1e}")
    if inner.dim > ambient.dim:
        raise NotContained(f"inner dimension {inner.dim} exceeds ambient dimension {ambient.dim}")
    u, _, _ = np.linalg.svd(coords, full_matrices=True)
    return ambient._with(qa @ u[:, inner.dim :])


def canonical_basis(q: np.ndarray, window: DegreeWindow, floor: float = 1e-6) -> np.ndarray:
    """Rotation-free basis of span(q): Gram-Schmidt on projected monomials in graded-lex order.

    Inside a degenerate singular space the SVD returns an arbitrary rotation;
    this picks the same vectors whatever rotation came in (e.g. z2, z1 for
    span{z1, z2}).
    """
    r = q.shape[1]
    if r == 0:
        return q
    out = []
    for m, n in graded_lex(window.d1, window.d2):
        v = q @ np.conj(q[m * (window.d2 + 1) + n])
        for _ in range(2):
            for u in out:
                v = v - u * np.vdot(u, v)
        nrm = np.linalg.norm(v)
        if nrm > floor:
            out.append(v / nrm)
            if len(out) == r:
                return np.stack(out, axis=1)
    return q


def intersect(a: OrthonormalBasis, b: OrthonormalBasis, angle_tol: float = ANGLE_TOL) -> OrthonormalBasis:
    """Numerical intersection: directions with principal angle ~ 0, in canonical order."""
    if a.window != b.window:
        raise ValueError("bases live in different windows")
    if a.dim == 0 or b.dim == 0:
        return a._with(np.zeros((a.window.size, 0), dtype=complex))
    u, s, _ = np.linalg.svd(a.matrix.conj().T @ b.matrix)
    k = int(np.sum(s >= 1 - angle_tol))
    return a._with(canonical_basis(a.matrix @ u[:, :k], a.window))


def principal_cosines(a: OrthonormalBasis, b: OrthonormalBasis) -> np.ndarray:
    if a.dim == 0 or b.dim == 0:
        return np.zeros(0)
    return np.clip(np.linalg.svd(a.matrix.conj().T @ b.matrix, compute_uv=False), 0.0, 1.0)


def intersect_via_projectors(a: OrthonormalBasis, b: OrthonormalBasis, angle_tol: float = ANGLE_TOL) -> OrthonormalBasis:
    """Range of P_a P_b where it acts isometrically.

    Only a faithful intersection when the two projectors commute.
    """
    pp = a.projector() @ b.projector()
    u, s, _ = np.linalg.svd(pp)
    k = int(np.sum(s >= 1 - angle_tol))
    return a._with(u[:, :k])


def projector_commutator(a: OrthonormalBasis, b: OrthonormalBasis) -> float:
    pa, pb = a.projector(), b.projector()
    return float(np.linalg.norm(pa @ pb - pb @ pa, 2))


def subspace_distance(a: OrthonormalBasis, b: OrthonormalBasis) -> float:
    """Gap between spans: the larger of the two one-sided projection residual norms."""
    if a.window != b.window:
        raise ValueError("bases live in different windows")
    if a.dim == 0 and b.dim == 0:
        return 0.0
    if a.dim == 0 or b.dim == 0:
        return 1.0

    def one_sided(x, y):
        r = x.matrix - y.matrix @ (y.matrix.conj().T @ x.matrix)
        return np.linalg.norm(r, 2)

    return float(min(1.0, max(one_sided(a, b), one_sided(b, a))))
