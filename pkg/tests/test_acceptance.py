"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import subprocess
import sys
import time

import numpy as np

import oracles
from conftest import ACCEPTANCE_LINES
from helpers import gens, monomial_gens
from bidisc.fixtures import blaschke_element, demo_generators
from bidisc.hardy_core import DegreeWindow, HardyElement, boundary_product_spectrum, polynomial
from bidisc.mandrekar import (
    Verdict,
    beurling_verdict,
    cross_spectrum_residual,
    identity_suite,
    innerness_report,
    o1_invariance_residual,
    sample_pairs,
    toeplitz_kernel_identity_check,
    toeplitz_tail_bound,
    wandering_intersection,
    wandering_subspace,
)
from bidisc.subspace import complement_in, intersect, kernel_at, span_invariant


def record(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def projector(b):
    return b.matrix @ b.matrix.conj().T


def test_criterion_1_beurling_fixtures():
    w = DegreeWindow(8, 8, 2)
    worst = {"dc": 0.0, "phi": 0.0, "dist": 0.0, "time": 0.0}
    ok = True
    for a, b in ((0, 0), (1, 1)):
        t0 = time.perf_counter()
        v = beurling_verdict(monomial_gens(w, a, b))
        elapsed = time.perf_counter() - t0
        err = (v.phi.candidate - HardyElement.monomial(a, b, w)).norm()
        ok &= v.verdict is Verdict.BEURLING and v.wandering_dim == 1
        worst = {
            "dc": max(worst["dc"], v.dc.defect),
            "phi": max(worst["phi"], err),
            "dist": max(worst["dist"], v.beurling_distance),
            "time": max(worst["time"], elapsed),
        }
    ok &= worst["dc"] < 1e-10 and worst["phi"] < 1e-10 and worst["dist"] < 1e-10 and worst["time"] < 5
    record(1, ok, f"verdict Beurling, dc {worst['dc']:.1e}, |phi-mono| {worst['phi']:.1e}, "
                  f"distance {worst['dist']:.1e}, {worst['time']:.2f}s")


def test_criterion_2_non_beurling_fixture():
    w = DegreeWindow(6, 6, 1)
    t0 = time.perf_counter()
    g = gens(w, [(1, 0, 1)], [(0, 1, 1)])
    v = beurling_verdict(g)
    wand = wandering_intersection(v.basis)
    cross = max(boundary_product_spectrum(wand.vectors[0], wand.vectors[1]).max_offorigin(), cross_spectrum_residual(wand))
    elapsed = time.perf_counter() - t0
    ok = 1 - 1e-6 <= v.dc.defect <= 2 and v.wandering_dim == 2 and cross >= 1 - 1e-6 and elapsed < 5
    record(2, ok, f"dc {v.dc.defect:.6f}, wandering dim {v.wandering_dim}, cross off-origin {cross:.6f}, {elapsed:.2f}s")


def test_criterion_3_route_agreement():
    rng = np.random.default_rng(2024)
    w = DegreeWindow(8, 8, 2)
    worst = 0.0
    for _ in range(20):
        a, b = (int(x) for x in rng.integers(0, 4, size=2))
        v = beurling_verdict(monomial_gens(w, a, b))
        worst = max(worst, v.phi_route_agreement if v.phi_route_agreement is not None else np.inf)
    record(3, worst <= 1e-8, f"max |phi_wandering - phi_kernel| over 20 fixtures {worst:.1e}")


def test_criterion_4_toeplitz_kernel_identity():
    w = DegreeWindow(12, 12, 0)
    points = [lam for lam, _ in sample_pairs(4, 50)]
    worst_excess, n = -np.inf, 0
    for terms in ([(1, 0, 1)], [(0, 1, 1)], [(0, 0, 1), (1, 1, 1)]):
        phi = polynomial(terms, w)
        for p in points:
            r, bound = toeplitz_kernel_identity_check(phi, p, w), toeplitz_tail_bound(phi, p, w)
            worst_excess = max(worst_excess, r - bound)
            n += 1
    record(4, worst_excess <= 1e-12, f"{n} samples, max(residual - tail bound) {worst_excess:.1e}")


def _z1z2_suite(margin=1):
    # margin 1: the chain identity raises degree, so it is checked one slab inside the top
    w = DegreeWindow(12, 12, margin)
    basis = span_invariant(monomial_gens(w, 1, 1))
    return identity_suite(basis, HardyElement.monomial(1, 1, w), 42, 100)


def test_criterion_5_kernel_factorization():
    res = [r.residual for r in _z1z2_suite() if r.name == "kernel_factorization"]
    record(5, len(res) == 100 and max(res) <= 1e-6, f"{len(res)} pairs, max residual {max(res):.1e}")


def test_criterion_6_kernel_chain():
    res = [r.residual for r in _z1z2_suite() if r.name == "kernel_chain_lhs"]
    no_margin = max(r.residual for r in _z1z2_suite(margin=0) if r.name == "kernel_chain_lhs")
    record(6, len(res) == 100 and max(res) <= 1e-6,
           f"{len(res)} samples, margin 1, max residual {max(res):.1e} (margin 0, top slab included: {no_margin:.1e})")


def test_criterion_7_o1_invariance():
    beurling = {name: o1_invariance_residual(wandering_subspace(span_invariant(demo_generators(name)), 1))
                for name in ("full_space", "monomial", "blaschke")}
    non = o1_invariance_residual(wandering_subspace(span_invariant(demo_generators("nonbeurling")), 1))
    worst = max(beurling.values())
    record(7, worst < 1e-10, f"max over Beurling fixtures {worst:.1e}; non-Beurling (recorded) {non:.3f}")


def test_criterion_8_truncated_blaschke():
    w = DegreeWindow(24, 4, 2)
    b = blaschke_element(w)
    r = innerness_report(b / b.norm())
    origin_raw = boundary_product_spectrum(b, b).origin.real
    tail = oracles.blaschke_tail_norm(0.5, 20)
    ratio = r.max_offorigin / tail
    ok = r.max_offorigin <= 1e-5 and abs(origin_raw - 1) <= 1e-5 and abs(r.origin_value - 1) <= 1e-5 and 0.1 <= ratio <= 10
    record(8, ok, f"max off-origin {r.max_offorigin:.3e}, |c(0,0)-1| {abs(origin_raw - 1):.1e}, "
                  f"oracle tail {tail:.3e}, ratio {ratio:.2f}")


def _oracle_cases():
    rng = np.random.default_rng(9)
    for d1, d2 in ((1, 1), (2, 2), (3, 3), (2, 3), (3, 1)):
        w = DegreeWindow(d1, d2)
        for _ in range(4):
            k = int(rng.integers(1, 3))
            term_lists = []
            for _ in range(k):
                m, n = int(rng.integers(0, d1 + 1)), int(rng.integers(0, d2 + 1))
                t = [(m, n, complex(*rng.integers(-2, 3, size=2)) or 1.0)]
                if rng.random() < 0.5 and m < d1:
                    t.append((m + 1, n, complex(*rng.integers(-2, 3, size=2))))
                term_lists.append(t)
            yield w, term_lists


def test_criterion_9_brute_force_oracle():
    rng = np.random.default_rng(10)
    worst = {"span": 0.0, "complement": 0.0, "intersection": 0.0, "kernel": 0.0}
    cases = 0
    for w, term_lists in _oracle_cases():
        cols = [[c for c in oracles.monomial_multiples(polynomial(t, w).coeffs, w.d1, w.d2)] for t in term_lists]
        all_cols = [c for cs in cols for c in cs]
        m = span_invariant(gens(w, *term_lists))
        pm = oracles.gram_projector(all_cols)
        worst["span"] = max(worst["span"], np.max(np.abs(projector(m) - pm)))

        sub = span_invariant(gens(w, term_lists[0]))
        p_sub = oracles.gram_projector(cols[0])
        worst["complement"] = max(worst["complement"], np.max(np.abs(projector(complement_in(m, sub)) - (pm - p_sub))))

        other_terms = [(0, 0, 1.0)] if len(term_lists) == 1 else term_lists[1]
        other = span_invariant(gens(w, other_terms))
        p_other = oracles.gram_projector(oracles.monomial_multiples(polynomial(other_terms, w).coeffs, w.d1, w.d2))
        p_int = oracles.intersection_projector(p_sub, p_other)
        worst["intersection"] = max(worst["intersection"], np.max(np.abs(projector(intersect(sub, other)) - p_int)))

        for _ in range(3):
            lam = tuple(0.9 * np.sqrt(rng.random(2)) * np.exp(2j * np.pi * rng.random(2)))
            k = kernel_at(m, lam).flat
            worst["kernel"] = max(worst["kernel"], np.max(np.abs(k - oracles.kernel(all_cols, lam, w.d1, w.d2))))
        cases += 1
    ok = max(worst.values()) <= 1e-10
    record(9, ok, f"{cases} cases, max deviation " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_criterion_10_determinism(tmp_path):
    argv = [sys.executable, "-m", "bidisc", "demo", "--demo", "blaschke", "--seed", "11", "--samples", "20", "--json"]
    outs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    record(10, outs[0] == outs[1] and len(outs[0]) > 0, f"two runs, {len(outs[0])} bytes each, identical={outs[0] == outs[1]}")
