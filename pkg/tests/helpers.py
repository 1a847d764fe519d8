import numpy as np

from bidisc.hardy_core import DegreeWindow, HardyElement, polynomial
from bidisc.subspace import GeneratorSet


def random_element(rng, window, support=None):
    """Complex Gaussian coefficients, optionally zero outside ``support`` = (s1, s2)."""
    c = rng.normal(size=window.shape) + 1j * rng.normal(size=window.shape)
    if support is not None:
        c[support[0] + 1 :, :] = 0
        c[:, support[1] + 1 :] = 0
    return HardyElement(window, c)


def random_point(rng, radius):
    r = radius * np.sqrt(rng.random(2))
    t = 2 * np.pi * rng.random(2)
    return tuple(r * np.exp(1j * t))


def gens(window, *term_lists):
    """GeneratorSet from lists of (m, n, coef) triples."""
    return GeneratorSet(window, tuple(polynomial(t, window) for t in term_lists))


def monomial_gens(window, a, b):
    return gens(window, [(a, b, 1.0)])


W22 = DegreeWindow(2, 2)
