"""Acceptance suite: one test per contract criterion, at the stated
tolerances and time budgets."""

import time
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from ncprob import berry as B
from ncprob import cumulants as C
from ncprob import infinitesimal as I
from ncprob import models as M
from ncprob import partitions as P
from ncprob import transforms as tr
from ncprob import words as W
from ncprob.algebra import Dual, mnorm
from conftest import rand_centered_local, rand_hermitian, rand_inf_pair


# 1 ------------------------------------------------------------------------

def test_01_partition_counts():
    t0 = time.monotonic()
    assert [len(P.noncrossing_partitions(n)) for n in range(1, 7)] == \
        [1, 2, 5, 14, 42, 132]
    assert all(len(P.interval_partitions(n)) == 2 ** (n - 1)
               for n in range(1, 7))
    assert all(len(P.noncrossing_pairings(2 * m)) == P.catalan(m)
               for m in range(1, 7))
    assert time.monotonic() - t0 < 1.0


# 2 ------------------------------------------------------------------------

def _cached_family(fam):
    cache = {}

    def key(letters, args):
        return (letters, tuple(np.asarray(a, dtype=complex).tobytes()
                               for a in args))

    def wrapped(letters, args):
        k = key(letters, args)
        if k not in cache:
            cache[k] = fam(letters, args)
        return cache[k]

    return wrapped


def test_02_moment_cumulant_roundtrips():
    t0 = time.monotonic()
    worst = 0.0
    for kind in C.KINDS:
        for d in (1, 2):
            for seed in range(20):
                rng = np.random.default_rng(seed)
                if d == 1:
                    mats = {k: [complex(rng.standard_normal(),
                                        rng.standard_normal())
                                for _ in range(k)] for k in range(1, 7)}
                    unit = 1.0
                else:
                    mats = {k: [rand_hermitian(rng, d) for _ in range(k)]
                            for k in range(1, 7)}
                    unit = np.eye(d)
                mom = _cached_family(C.SandwichFamily(mats))
                cum = _cached_family(
                    C.cumulants_from_moments(kind, mom, unit=unit))
                order = 6
                if d == 1:
                    args = tuple(complex(rng.standard_normal())
                                 for _ in range(order - 1))
                else:
                    args = tuple(rand_hermitian(rng, d)
                                 for _ in range(order - 1))
                back = C.moments_from_cumulants(kind, cum,
                                                ("x",) * order, args,
                                                unit=unit)
                worst = max(worst, mnorm(back - mom(("x",) * order, args)))
    assert worst <= 1e-10
    assert time.monotonic() - t0 < 10.0


# 3 ------------------------------------------------------------------------

def test_03_arcsine_normalization_and_bernoulli_chain():
    one = Fraction(1)
    m4 = C.limit_moments("monotone", lambda b: b, ("x",) * 4,
                         (one,) * 3, unit=one)
    assert m4 == Fraction(3, 2)
    # Bernoulli even moments are powers of the variance, exactly
    s = Fraction(5, 3)
    for k in (1, 2, 3, 4):
        m2k = C.limit_moments("boolean", lambda b: s * b, ("x",) * (2 * k),
                              (one,) * (2 * k - 1), unit=one)
        assert m2k == s ** k
    # operator-valued chain on a matrix model: tr x phi[B^{2k}] equals the
    # trace of eta(1)^k
    prof = M.VarianceProfile.uniform(3, 0.2, 1.0, 0.5)
    lam = M.lambda_profile(prof)
    star, Bop, _ = M.build_matrix_model(prof)
    for k in (1, 2, 3, 4):
        E = star.conditional_expectation(
            np.linalg.matrix_power(Bop, 2 * k), 3)
        assert abs(np.trace(E).real / 3 - np.mean(lam ** k)) < 1e-10


# 4 ------------------------------------------------------------------------

def test_04_monotone_pair_sum_three_routes():
    # route 1: word rules
    x_loc = M.bernoulli_local(1.0)
    model1 = M.VacuumModel(2)

    def fam(args):
        out = x_loc
        for b in args:
            out = out @ (b * np.eye(2)) @ x_loc
        return model1.state(out)

    fams = {0: fam, 1: fam}
    words_val = sum(
        W.mixed_moment("monotone", fams, letters, (1.0,) * 3, unit=1.0)
        for letters in product((0, 1), repeat=4))
    # route 2: operator model
    model2, ops = M.monotone_product_family([x_loc, x_loc])
    S = ops[0] + ops[1]
    model_val = model2.state(np.linalg.matrix_power(S, 4))
    # route 3: transforms
    mu = tr.monotone_convolve(tr.bernoulli_measure(1.0),
                              tr.bernoulli_measure(1.0))
    transform_val = tr.moments_from_transform(mu, 4)[4]
    for v in (words_val, model_val, transform_val):
        assert abs(v - 5.0) <= 1e-8


# 5 ------------------------------------------------------------------------

def test_05_lindeberg_identity():
    from test_berry import make_families

    worst = 0.0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        N = int(rng.integers(2, 5))
        model, xs, ys = make_families(rng, N)
        b = complex(rng.uniform(-1, 1), rng.uniform(0.8, 2.0))
        _, resid = B.lindeberg_terms(model, xs, ys, b)
        worst = max(worst, resid)
    assert worst <= 1e-12
    rng = np.random.default_rng(1)
    for kind in ("boolean", "monotone"):
        model, xs, ys = make_families(rng, 4, kind)
        terms, _ = B.lindeberg_terms(model, xs, ys, 1.3j)
        for A, Bi, _ in terms:
            assert abs(model.state(A)) <= 1e-10
            assert abs(model.state(Bi)) <= 1e-10


# 6 ------------------------------------------------------------------------

def test_06_monotone_subordination():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(20):
        x = rand_centered_local(rng, 2, 0.8)
        w = rand_centered_local(rng, 2, 0.8) + 0.3 * np.eye(2)
        y = rand_centered_local(rng, 2, 0.8)
        b1 = complex(rng.uniform(-1, 1), rng.uniform(0.8, 2.0))
        worst = max(worst, B.monotone_subordination_check(
            x, w, y, b1, np.conj(b1), w_power=int(rng.integers(1, 3))))
    assert worst <= 1e-9


# 7 ------------------------------------------------------------------------

def test_07_clt_bound_sweep_and_slope():
    atomic = tr.AtomicMeasure([(2.0, 0.2), (-0.5, 0.8)])
    for kind in ("boolean", "monotone"):
        for mu in (tr.bernoulli_measure(1.0), atomic):
            for n in (2, 4, 8, 16, 32):
                for z in (1j, 2j, 1 + 1j):
                    lhs, rhs = B.clt_gap(kind, mu, n, z)
                    assert lhs <= rhs
    ns = [2, 4, 8, 16, 32]
    lhs = [B.clt_gap("monotone", atomic, n, 2j)[0] for n in ns]
    slope = np.polyfit(np.log(ns), np.log(lhs), 1)[0]
    assert -1.2 <= slope <= -0.4


# 8 ------------------------------------------------------------------------

def test_08_variance_comparison():
    lhs, rhs = B.comparison_gap("bernoulli", lambda b: b,
                                lambda b: 2.0 * b, 2j)
    assert abs(lhs - 1.0 / 15.0) <= 1e-12
    assert abs(rhs - 1.0 / 8.0) <= 1e-12
    assert lhs <= rhs
    from test_berry import random_cp_map

    rng = np.random.default_rng(4)
    d, k = 2, 2
    for _ in range(10):
        e0, e1 = random_cp_map(rng, d), random_cp_map(rng, d)
        lhs, rhs = B.comparison_gap("bernoulli", e0, e1,
                                    4j * np.eye(k * d), k=k, d=d)
        assert lhs <= rhs + 1e-12


# 9 ------------------------------------------------------------------------

def _quantile_atoms(quantile, m=400):
    qs = (np.arange(m) + 0.5) / m
    return tr.AtomicMeasure([(float(quantile(q)), 1.0 / m) for q in qs])


def test_09_matrix_model_spectra():
    t0 = time.monotonic()
    # atoms equal ±sqrt(lambda_i) to 1e-8
    prof = M.VarianceProfile.uniform(4, 0.0, 1.0, 0.25)
    law = M.profile_spectral_law(prof)
    star, Bop, _ = M.build_matrix_model(prof)
    got = M.spectral_distribution(Bop, M.trace_phi_probes(4, star))
    assert len(got.atoms) == len(law.atoms)
    for (t1, w1), (t2, w2) in zip(got.atoms, law.atoms):
        assert abs(t1 - t2) <= 1e-8
    # the constant-parameter profile's lambda ramp, exactly
    n, sig, al, alt = 6, 0.3, 1.0, 0.25
    lam = M.lambda_profile(M.VarianceProfile.uniform(n, sig, al, alt))
    for i in range(1, n + 1):
        assert abs(lam[i - 1]
                   - (sig + (i - 1) * al / n + (n - i) * alt / n)) < 1e-12
    # n = 200 spectral laws vs the closed-form limit densities
    n = 200
    al, alt = 1.0, 0.25
    law1 = M.profile_spectral_law(M.VarianceProfile.uniform(n, 0.0, al, alt))

    def q_ramp(u):
        # limit density |t|/(al - alt) on sqrt(alt) < |t| < sqrt(al)
        sgn, q = (1.0, 2 * u - 1) if u >= 0.5 else (-1.0, 1 - 2 * u)
        return sgn * np.sqrt(alt + q * (al - alt))

    assert tr.levy_distance(law1, _quantile_atoms(q_ramp)) <= 0.05
    law2 = M.profile_spectral_law(M.VarianceProfile.distance_weighted(n))

    def q_dist(u):
        # limit density 2|t|/sqrt(4t² - 1) on 1/2 < |t| < 1/sqrt(2)
        sgn, q = (1.0, 2 * u - 1) if u >= 0.5 else (-1.0, 1 - 2 * u)
        return sgn * np.sqrt(q * q + 1.0) / 2.0

    assert tr.levy_distance(law2, _quantile_atoms(q_dist)) <= 0.05
    assert time.monotonic() - t0 < 60.0


# 10 -----------------------------------------------------------------------

def test_10_wigner_gap_sweep():
    rng = np.random.default_rng(5)
    for n in (2, 4, 8):
        prof = M.VarianceProfile.uniform(n, 0.0, 1.0, 0.25)
        for z in (1j, 2j):
            lhs, rhs = B.wigner_gap(
                prof, z,
                entry_factory=lambda i, j, a, at:
                M.perturbed_circular_local(a, at,
                                           0.4 * rng.standard_normal()))
            assert lhs <= rhs


# 11 -----------------------------------------------------------------------

def test_11_fourth_moment_bound():
    prev = None
    for n in (4, 16, 64):
        lhs, rhs, h4 = B.fourth_moment_gap(tr.bernoulli_measure(1.0), n, 2j)
        assert abs(float(h4) + 1.0 / (2 * n)) <= 1e-10
        assert lhs <= rhs
        if prev is not None:
            assert lhs < prev
        prev = lhs


# 12 -----------------------------------------------------------------------

def test_12_infinitesimal():
    rng = np.random.default_rng(6)
    # lift equivalence on words up to length 4
    for kind in ("boolean", "monotone"):
        pairs = {0: rand_inf_pair(rng), 1: rand_inf_pair(rng)}
        model, lifted = I.joint_lift_model(kind, [pairs[0], pairs[1]])
        for n in (2, 3, 4):
            for letters in product((0, 1), repeat=n):
                args = tuple(complex(rng.standard_normal())
                             for _ in range(n - 1))
                E, Ep = I.eprime_word(kind, pairs, letters, args)
                direct = I.lift_word_value(model, lifted, letters, args)
                assert abs(E - direct.re) <= 1e-10
                assert abs(Ep - direct.de) <= 1e-10
    # first-order distance bound sweeps
    for kind in ("boolean", "monotone", "free"):
        for N in (2, 4, 8):
            xs = [rand_inf_pair(rng, scale=0.4 / np.sqrt(N))
                  for _ in range(N)]
            ys = I.matched_target_family(xs)
            z = 2j if kind != "free" else 4j
            lhs, rhs = I.inf_bound_gap(kind, xs, ys, z)
            assert lhs <= rhs
    # first-order variance comparison on 10 random pairs
    for _ in range(10):
        e0, e1 = rng.uniform(0.2, 2.0, 2)
        p0, p1 = rng.uniform(-1.0, 1.0, 2)
        z = complex(rng.uniform(-1, 1), rng.uniform(0.8, 2.5))
        lhs, rhs = I.variance_comparison_inf(e0, p0, e1, p1, z)
        assert lhs <= rhs
    # tilde-expectation norm bound on 100 random lifts
    for _ in range(100):
        x, xp = rand_inf_pair(rng)
        L = I.lift(x, xp)
        v = I.tilde_state(M.VacuumModel(3), L)
        nrm = I.tilde_E_norm(np.array([[v.re]]), np.array([[v.de]]))
        assert nrm <= 3.0 * np.linalg.norm(L, 2) + 1e-12


# 13 -----------------------------------------------------------------------

def test_13_resolvent_l2_identity():
    rng = np.random.default_rng(7)
    for seed in range(5):
        k = int(rng.integers(2, 5))
        atoms = rng.uniform(-3, 3, k)
        w = rng.uniform(0.1, 1.0, k)
        w /= w.sum()
        mu = tr.AtomicMeasure([(float(t), float(p))
                               for t, p in zip(atoms, w)])
        for eps in (0.1, 1.0):
            val = tr.resolvent_l2_integral(mu, eps)
            assert abs(val - np.pi / eps) <= 1e-3 * (np.pi / eps)
