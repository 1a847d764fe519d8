"""
Coefficient-level algebra for degree-truncated H^2 of the bidisc.

An element f = sum a(m, n) z1^m z2^n is stored as a dense complex array of
shape (d1 + 1, d2 + 1).  Monomials are orthonormal, so every inner product
is a finite coefficient sum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.signal import convolve2d

from .errors import (
    IndexOutsideWindow,
    MalformedInput,
    PointOutsideDisc,
    TruncationWarning,
    WindowOverflow,
)

__all__ = [
    "DegreeWindow",
    "HardyElement",
    "DiscPoint",
    "LaurentSpectrum",
    "inner_product",
    "shift",
    "adjoint_shift",
    "toeplitz_apply",
    "adjoint_toeplitz_apply",
    "boundary_product_spectrum",
    "evaluate",
    "cauchy_kernel",
    "derivative_representer",
    "shift_array",
    "adjoint_shift_array",
    "monomial_values",
    "polynomial",
    "as_point",
]

# Entries below this magnitude may be dropped on serialization.
SERIAL_FLOOR = 1e-300


@dataclass(frozen=True)
class DegreeWindow:
    """Per-axis maximum degrees plus an interior margin."""

    d1: int
    d2: int
    margin: int = 0

    def __post_init__(self):
        for name in ("d1", "d2", "margin"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.margin > min(self.d1, self.d2):
            raise ValueError(
                f"margin {self.margin} exceeds min(d1, d2) = {min(self.d1, self.d2)}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.d1 + 1, self.d2 + 1)

    @property
    def size(self) -> int:
        return (self.d1 + 1) * (self.d2 + 1)

    def interior(self) -> "DegreeWindow":
        return DegreeWindow(self.d1 - self.margin, self.d2 - self.margin, 0)

    def contains_index(self, m: int, n: int) -> bool:
        return 0 <= m <= self.d1 and 0 <= n <= self.d2

    def union(self, other: "DegreeWindow") -> "DegreeWindow":
        return DegreeWindow(
            max(self.d1, other.d1), max(self.d2, other.d2), max(self.margin, other.margin)
        )

    def to_json(self) -> dict:
        return {"d1": int(self.d1), "d2": int(self.d2), "margin": int(self.margin)}

    @classmethod
    def from_json(cls, obj) -> "DegreeWindow":
        if not isinstance(obj, dict) or set(obj) - {"d1", "d2", "margin"}:
            raise MalformedInput(f"window must be an object with d1, d2, margin: {obj!r}")
        try:
            return cls(obj["d1"], obj["d2"], obj.get("margin", 0))
        except KeyError as exc:
            raise MalformedInput(f"window is missing {exc.args[0]!r}") from None
        except ValueError as exc:
            raise MalformedInput(f"invalid window {obj!r}: {exc}") from None


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class HardyElement:
    """A polynomial in the window, stored as coefficients ``coeffs[m, n]``."""

    window: DegreeWindow
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != self.window.shape:
            raise ValueError(f"coefficient shape {c.shape} does not match window {self.window.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(c))

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, window: DegreeWindow) -> "HardyElement":
        return cls(window, np.zeros(window.shape, dtype=complex))

    @classmethod
    def monomial(cls, m: int, n: int, window: DegreeWindow, coef: complex = 1.0) -> "HardyElement":
        if not window.contains_index(m, n):
            raise IndexOutsideWindow(f"monomial z1^{m} z2^{n} outside window ({window.d1}, {window.d2})")
        c = np.zeros(window.shape, dtype=complex)
        c[m, n] = coef
        return cls(window, c)

    @classmethod
    def from_terms(cls, terms: dict, window: DegreeWindow) -> "HardyElement":
        """Build from a mapping ``{(m, n): coefficient}``."""
        c = np.zeros(window.shape, dtype=complex)
        for (m, n), v in terms.items():
            if not window.contains_index(m, n):
                raise IndexOutsideWindow(f"term ({m}, {n}) outside window ({window.d1}, {window.d2})")
            c[m, n] += v
        return cls(window, c)

    @classmethod
    def from_flat(cls, vec: np.ndarray, window: DegreeWindow) -> "HardyElement":
        return cls(window, np.asarray(vec, dtype=complex).reshape(window.shape))

    # views ------------------------------------------------------------------

    @property
    def flat(self) -> np.ndarray:
        """Row-major coefficient vector (index m * (d2 + 1) + n)."""
        return self.coeffs.reshape(-1)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def degree(self) -> tuple[int, int]:
        """Highest index along each axis carrying a nonzero coefficient (-1 if zero)."""
        rows = np.nonzero(np.any(self.coeffs != 0, axis=1))[0]
        cols = np.nonzero(np.any(self.coeffs != 0, axis=0))[0]
        return (int(rows[-1]) if rows.size else -1, int(cols[-1]) if cols.size else -1)

    def fits(self, window: DegreeWindow) -> bool:
        m, n = self.degree()
        return m <= window.d1 and n <= window.d2

    def embed(self, window: DegreeWindow) -> "HardyElement":
        """Re-express in ``window``; raises WindowOverflow if mass would be lost."""
        if not self.fits(window):
            raise WindowOverflow(
                f"element of degree {self.degree()} does not fit window ({window.d1}, {window.d2})"
            )
        c = np.zeros(window.shape, dtype=complex)
        k1, k2 = min(self.window.d1, window.d1) + 1, min(self.window.d2, window.d2) + 1
        c[:k1, :k2] = self.coeffs[:k1, :k2]
        return HardyElement(window, c)

    def restrict(self, window: DegreeWindow) -> "HardyElement":
        """Discard every coefficient outside ``window``."""
        c = np.zeros(window.shape, dtype=complex)
        k1, k2 = min(self.window.d1, window.d1) + 1, min(self.window.d2, window.d2) + 1
        c[:k1, :k2] = self.coeffs[:k1, :k2]
        return HardyElement(window, c)

    def chop(self, rel_tol: float) -> "HardyElement":
        """Zero out coefficients below ``rel_tol`` times the largest magnitude."""
        c = np.array(self.coeffs)
        top = np.max(np.abs(c)) if c.size else 0.0
        c[np.abs(c) <= rel_tol * top] = 0
        return HardyElement(self.window, c)

    def __getitem__(self, idx) -> complex:
        m, n = idx
        if not self.window.contains_index(m, n):
            return 0j
        return complex(self.coeffs[m, n])

    # arithmetic -------------------------------------------------------------

    def _aligned(self, other: "HardyElement"):
        w = self.window.union(other.window)
        return w, self.embed(w).coeffs, other.embed(w).coeffs

    def __add__(self, other: "HardyElement") -> "HardyElement":
        w, a, b = self._aligned(other)
        return HardyElement(w, a + b)

    def __sub__(self, other: "HardyElement") -> "HardyElement":
        w, a, b = self._aligned(other)
        return HardyElement(w, a - b)

    def __mul__(self, scalar: complex) -> "HardyElement":
        return HardyElement(self.window, self.coeffs * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "HardyElement":
        return HardyElement(self.window, self.coeffs / scalar)

    def __neg__(self) -> "HardyElement":
        return HardyElement(self.window, -self.coeffs)

    def allclose(self, other: "HardyElement", atol: float = 1e-12) -> bool:
        w, a, b = self._aligned(other)
        return bool(np.max(np.abs(a - b), initial=0.0) <= atol)

    def __repr__(self) -> str:
        terms = [f"({v:.6g})*z1^{m}*z2^{n}" for (m, n), v in np.ndenumerate(self.coeffs) if v != 0]
        body = " + ".join(terms[:8]) + (" + ..." if len(terms) > 8 else "")
        return f"HardyElement(({self.window.d1}, {self.window.d2}): {body or '0'})"

    # serialization ----------------------------------------------------------

    def to_json(self) -> list:
        out = []
        for (m, n), v in np.ndenumerate(self.coeffs):
            if abs(v.real) < SERIAL_FLOOR and abs(v.imag) < SERIAL_FLOOR:
                continue
            out.append([int(m), int(n), float(v.real), float(v.imag)])
        return out

    @classmethod
    def from_json(cls, entries, window: Optional[DegreeWindow] = None) -> "HardyElement":
        """Parse ``[[m, n, re, im], ...]``.  Without a window, the tightest one is used."""
        if not isinstance(entries, list):
            raise MalformedInput(f"element must be a list of [m, n, re, im] entries, got {type(entries).__name__}")
        terms = {}
        for pos, entry in enumerate(entries):
            if not isinstance(entry, list) or len(entry) != 4:
                raise MalformedInput(f"entry {pos} ({entry!r}) is not [m, n, re, im]")
            m, n, re, im = entry
            if any(isinstance(x, bool) or not isinstance(x, int) for x in (m, n)) or m < 0 or n < 0:
                raise MalformedInput(f"entry {pos} ({entry!r}): m, n must be nonnegative integers")
            if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in (re, im)):
                raise MalformedInput(f"entry {pos} ({entry!r}): re, im must be numbers")
            if not (math.isfinite(re) and math.isfinite(im)):
                raise MalformedInput(f"entry {pos} ({entry!r}): re, im must be finite")
            if (m, n) in terms:
                raise MalformedInput(f"entry {pos} ({entry!r}): duplicate index ({m}, {n})")
            terms[(m, n)] = complex(re, im)
        if window is None:
            window = DegreeWindow(
                max((m for m, _ in terms), default=0), max((n for _, n in terms), default=0)
            )
        for (m, n) in terms:
            if not window.contains_index(m, n):
                raise MalformedInput(
                    f"entry ({m}, {n}) lies outside window ({window.d1}, {window.d2})"
                )
        return cls.from_terms(terms, window)


@dataclass(frozen=True)
class DiscPoint:
    """A point (lambda1, lambda2) of the open bidisc."""

    lambda1: complex
    lambda2: complex

    def __post_init__(self):
        l1, l2 = complex(self.lambda1), complex(self.lambda2)
        if not (abs(l1) < 1 and abs(l2) < 1):
            raise PointOutsideDisc(f"({l1}, {l2}) is not inside the open bidisc")
        object.__setattr__(self, "lambda1", l1)
        object.__setattr__(self, "lambda2", l2)

    def __iter__(self):
        yield self.lambda1
        yield self.lambda2

    def to_json(self) -> list:
        return [[self.lambda1.real, self.lambda1.imag], [self.lambda2.real, self.lambda2.imag]]


def as_point(p) -> DiscPoint:
    return p if isinstance(p, DiscPoint) else DiscPoint(*p)


@dataclass(frozen=True, eq=False)
class LaurentSpectrum:
    """Two-sided Fourier coefficients c(k, l), -d1 <= k <= d1, -d2 <= l <= d2."""

    window: DegreeWindow
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        expected = (2 * self.window.d1 + 1, 2 * self.window.d2 + 1)
        if c.shape != expected:
            raise ValueError(f"spectrum shape {c.shape} != {expected}")
        object.__setattr__(self, "coeffs", _frozen(c))

    def __getitem__(self, kl) -> complex:
        k, l = kl
        if abs(k) > self.window.d1 or abs(l) > self.window.d2:
            return 0j
        return complex(self.coeffs[k + self.window.d1, l + self.window.d2])

    @property
    def origin(self) -> complex:
        return self[0, 0]

    def max_offorigin(self) -> float:
        mag = np.abs(self.coeffs).copy()
        mag[self.window.d1, self.window.d2] = 0.0
        return float(mag.max())

    def argmax_offorigin(self) -> tuple[int, int]:
        mag = np.abs(self.coeffs).copy()
        mag[self.window.d1, self.window.d2] = -1.0
        i, j = np.unravel_index(np.argmax(mag), mag.shape)
        return (int(i) - self.window.d1, int(j) - self.window.d2)


# --------------------------------------------------------------------------
# raw array kernels (operate on the trailing two axes)


def shift_array(c: np.ndarray, axis: int) -> np.ndarray:
    """Multiply by z_axis inside the same window; the top slab is dropped."""
    out = np.zeros_like(c)
    if _axis(axis) == 1:
        out[..., 1:, :] = c[..., :-1, :]
    else:
        out[..., 1:] = c[..., :-1]
    return out


def adjoint_shift_array(c: np.ndarray, axis: int) -> np.ndarray:
    """Backward shift along ``axis``: index-0 slab is discarded, top slab becomes zero."""
    out = np.zeros_like(c)
    if _axis(axis) == 1:
        out[..., :-1, :] = c[..., 1:, :]
    else:
        out[..., :-1] = c[..., 1:]
    return out


def _axis(axis: int) -> int:
    if axis not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {axis!r}")
    return axis


def _top_slab(c: np.ndarray, axis: int) -> np.ndarray:
    return c[-1, :] if axis == 1 else c[:, -1]


# --------------------------------------------------------------------------
# operations


def inner_product(f: HardyElement, g: HardyElement) -> complex:
    """<f, g> = sum a_f(m, n) conj(a_g(m, n)), linear in the first slot."""
    if f.window != g.window:
        w = f.window.union(g.window)
        f, g = f.embed(w), g.embed(w)
    return complex(np.vdot(g.flat, f.flat))


def shift(f: HardyElement, axis: int, target: Optional[DegreeWindow] = None) -> HardyElement:
    """Multiply by z1 (axis 1) or z2 (axis 2).

    Without ``target`` the result stays in ``f.window`` and a nonzero top slab
    raises WindowOverflow.
    """
    axis = _axis(axis)
    if target is None:
        if np.any(_top_slab(f.coeffs, axis) != 0):
            raise WindowOverflow(f"shift along axis {axis} would leave window ({f.window.d1}, {f.window.d2})")
        return HardyElement(f.window, shift_array(f.coeffs, axis))
    grow = (1, 0) if axis == 1 else (0, 1)
    m, n = f.degree()
    if m >= 0 and (m + grow[0] > target.d1 or n + grow[1] > target.d2):
        raise WindowOverflow(f"shifted element does not fit target ({target.d1}, {target.d2})")
    big = DegreeWindow(max(f.window.d1, target.d1) + 1, max(f.window.d2, target.d2) + 1)
    c = shift_array(f.embed(big).coeffs, axis)
    return HardyElement(big, c).restrict(target)


def adjoint_shift(f: HardyElement, axis: int) -> HardyElement:
    return HardyElement(f.window, adjoint_shift_array(f.coeffs, axis))


def toeplitz_apply(
    symbol: HardyElement,
    f: HardyElement,
    target: Optional[DegreeWindow] = None,
    strict: bool = False,
) -> HardyElement:
    """Multiply ``f`` by a polynomial symbol.

    ``target`` defaults to the window holding the full product.  If the
    product does not fit, ``strict`` raises WindowOverflow; otherwise the
    result is truncated and a TruncationWarning is issued.
    """
    full = convolve2d(symbol.coeffs, f.coeffs)
    full_window = DegreeWindow(symbol.window.d1 + f.window.d1, symbol.window.d2 + f.window.d2)
    prod = HardyElement(full_window, full)
    if target is None:
        return prod
    if prod.fits(target):
        return prod.embed(target)
    if strict:
        raise WindowOverflow(f"product of degree {prod.degree()} exceeds target ({target.d1}, {target.d2})")
    out = prod.restrict(target)
    lost = math.sqrt(max(prod.norm() ** 2 - out.norm() ** 2, 0.0))
    warnings.warn(f"toeplitz product truncated; discarded mass {lost:.3e}", TruncationWarning, stacklevel=2)
    return out


def adjoint_toeplitz_apply(symbol: HardyElement, f: HardyElement) -> HardyElement:
    """T_phi^* f as sum over symbol terms of conj(coef) * backward shifts of f.

    Exact within ``f.window``; coefficients that would need data from beyond
    the window come out short (the usual finite-section bias).
    """
    out = np.zeros(f.window.shape, dtype=complex)
    for (a, b), coef in np.ndenumerate(symbol.coeffs):
        if coef == 0 or a > f.window.d1 or b > f.window.d2:
            continue
        # (S1^*)^a (S2^*)^b moves index (m, n) to (m - a, n - b)
        out[: f.window.d1 + 1 - a, : f.window.d2 + 1 - b] += np.conj(coef) * f.coeffs[a:, b:]
    return HardyElement(f.window, out)


def boundary_product_spectrum(f: HardyElement, g: HardyElement) -> LaurentSpectrum:
    """Laurent coefficients of f * conj(g) on the torus.

    c(k, l) = sum a_f(m, n) conj(a_g(m - k, n - l)); c(0, 0) = <f, g>.
    """
    if f.window != g.window:
        w = f.window.union(g.window)
        f, g = f.embed(w), g.embed(w)
    flipped = np.conj(g.coeffs[::-1, ::-1])
    return LaurentSpectrum(DegreeWindow(f.window.d1, f.window.d2), convolve2d(f.coeffs, flipped))


def evaluate(f: HardyElement, p) -> complex:
    """Point value at ``p``, summed row-major with compensated summation."""
    p = as_point(p)
    pw1 = p.lambda1 ** np.arange(f.window.d1 + 1)
    pw2 = p.lambda2 ** np.arange(f.window.d2 + 1)
    terms = (f.coeffs * np.outer(pw1, pw2)).reshape(-1)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def monomial_values(p, window: DegreeWindow) -> np.ndarray:
    """Row-major vector of lambda1^m lambda2^n over the window."""
    p = as_point(p)
    pw1 = p.lambda1 ** np.arange(window.d1 + 1)
    pw2 = p.lambda2 ** np.arange(window.d2 + 1)
    return np.outer(pw1, pw2).reshape(-1)


def cauchy_kernel(p, window: DegreeWindow) -> HardyElement:
    """Truncated Cauchy kernel: coefficients conj(lambda1)^m conj(lambda2)^n."""
    return HardyElement.from_flat(np.conj(monomial_values(p, window)), window)


def derivative_representer(d1: int, d2: int, window: DegreeWindow) -> HardyElement:
    """Representer of f -> (d^{d1+d2} f / dz1^d1 dz2^d2)(0, 0): d1! d2! z1^d1 z2^d2."""
    if not window.contains_index(d1, d2):
        raise IndexOutsideWindow(f"derivative order ({d1}, {d2}) outside window ({window.d1}, {window.d2})")
    return HardyElement.monomial(d1, d2, window, float(math.factorial(d1) * math.factorial(d2)))


def polynomial(terms: Iterable[Sequence], window: DegreeWindow) -> HardyElement:
    """Convenience: ``polynomial([(m, n, coef), ...], window)``."""
    return HardyElement.from_terms({(m, n): c for m, n, c in terms}, window)
