"""Built-in demo generator sets."""

from __future__ import annotations

from .hardy_core import DegreeWindow, HardyElement, polynomial
from .subspace import GeneratorSet

BLASCHKE_ZERO = 0.5
BLASCHKE_DEGREE = 20


def blaschke_coefficients(a: float = BLASCHKE_ZERO, degree: int = BLASCHKE_DEGREE) -> list[float]:
    """Taylor coefficients of (z - a)/(1 - a z) up to ``degree``: -a, then (1 - a^2) a^(k-1)."""
    return [-a] + [(1 - abs(a) ** 2) * a ** (k - 1) for k in range(1, degree + 1)]


def blaschke_element(window: DegreeWindow, a: float = BLASCHKE_ZERO, degree: int = BLASCHKE_DEGREE) -> HardyElement:
    return polynomial([(k, 0, c) for k, c in enumerate(blaschke_coefficients(a, degree))], window)


DEMO_WINDOWS = {
    "full_space": DegreeWindow(8, 8, 2),
    "monomial": DegreeWindow(8, 8, 2),
    "blaschke": DegreeWindow(BLASCHKE_DEGREE + 4, 4, 2),
    "nonbeurling": DegreeWindow(6, 6, 1),
}


def demo_generators(name: str, window: DegreeWindow | None = None) -> GeneratorSet:
    """Generator set for a named demo; ``window`` overrides the fixture default."""
    if name not in DEMO_WINDOWS:
        raise KeyError(name)
    w = DEMO_WINDOWS[name] if window is None else window
    # build in a window big enough for the generator, then move to the requested one
    base = DEMO_WINDOWS[name].union(w)
    if name == "full_space":
        gens = [polynomial([(0, 0, 1.0)], base)]
    elif name == "monomial":
        gens = [polynomial([(1, 1, 1.0)], base)]
    elif name == "blaschke":
        gens = [blaschke_element(base)]
    else:
        gens = [polynomial([(1, 0, 1.0)], base), polynomial([(0, 1, 1.0)], base)]
    return GeneratorSet(base, tuple(gens)).with_window(w)
