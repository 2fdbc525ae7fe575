from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ncprob import cumulants as C
from ncprob.algebra import mnorm
from conftest import rand_hermitian


def scalar_moment_family(ms):
    def fam(letters, args):
        v = ms[len(letters) - 1]
        for a in args:
            v = v * a
        return v
    return fam


# ---------------------------------------------------------------------------
# central-limit moments (exact rational oracles)

def test_limit_moments_free():
    one = Fraction(1)
    eta = lambda b: b
    vals = [C.limit_moments("free", eta, ("x",) * k, (one,) * (k - 1),
                            unit=one) for k in (2, 4, 6)]
    assert vals == [1, 2, 5]  # Catalan numbers


def test_limit_moments_boolean():
    one = Fraction(1)
    eta = lambda b: b
    vals = [C.limit_moments("boolean", eta, ("x",) * k, (one,) * (k - 1),
                            unit=one) for k in (2, 4, 6)]
    assert vals == [1, 1, 1]  # two-point +-1 law


def test_limit_moments_monotone_exact_rational():
    one = Fraction(1)
    eta = lambda b: b
    vals = [C.limit_moments("monotone", eta, ("x",) * k, (one,) * (k - 1),
                            unit=one) for k in (2, 4, 6)]
    assert vals == [Fraction(1), Fraction(3, 2), Fraction(5, 2)]


def test_limit_moments_odd_vanish():
    one = Fraction(1)
    eta = lambda b: b
    for kind in C.KINDS:
        for k in (1, 3, 5):
            assert C.limit_moments(kind, eta, ("x",) * k, (one,) * (k - 1),
                                   unit=one) == 0


def test_limit_moments_variance_scaling():
    one = Fraction(1)
    s = Fraction(3, 7)
    eta = lambda b: s * b
    v = C.limit_moments("monotone", eta, ("x",) * 4, (one,) * 3, unit=one)
    assert v == Fraction(3, 2) * s ** 2


# ---------------------------------------------------------------------------
# closed forms and inversion

def test_monotone_h_closed_forms_match_inversion():
    ms = [Fraction(1, 3), Fraction(2), Fraction(-1, 2), Fraction(7)]
    closed = C.monotone_h_from_moments(ms)
    fam = scalar_moment_family(ms)
    cf = C.cumulants_from_moments("monotone", fam, unit=Fraction(1))
    one = Fraction(1)
    inverted = [cf(("x",) * k, (one,) * (k - 1)) for k in range(1, 5)]
    assert closed == inverted


def test_h4_centered_formula(rng):
    d = 2
    mats = {k: [rand_hermitian(rng, d) for _ in range(k)]
            for k in range(1, 5)}
    base = C.SandwichFamily(mats)

    def mom(letters, args):
        if len(letters) == 1:
            return np.zeros((d, d))  # centered
        return base(letters, args)

    bs = [rand_hermitian(rng, d) for _ in range(3)]
    via_inversion = C.cumulants_from_moments("monotone", mom,
                                             unit=np.eye(d))
    got = C.h4_centered(mom, *bs, unit=np.eye(d))
    want = via_inversion(("x",) * 4, tuple(bs))
    assert mnorm(got - want) < 1e-10


# ---------------------------------------------------------------------------
# roundtrips

@pytest.mark.parametrize("kind", C.KINDS)
@pytest.mark.parametrize("d", [1, 2])
def test_moment_cumulant_roundtrip(kind, d):
    for seed in range(20):
        rng = np.random.default_rng(seed)
        if d == 1:
            mats = {k: [complex(rng.standard_normal(),
                                rng.standard_normal()) for _ in range(k)]
                    for k in range(1, 7)}
            unit = 1.0
        else:
            mats = {k: [rand_hermitian(rng, d) for _ in range(k)]
                    for k in range(1, 7)}
            unit = np.eye(d)
        mom = C.SandwichFamily(mats)
        cum = C.cumulants_from_moments(kind, mom, unit=unit)
        for order in range(1, 7):
            if d == 1:
                args = tuple(complex(rng.standard_normal())
                             for _ in range(order - 1))
            else:
                args = tuple(rand_hermitian(rng, d)
                             for _ in range(order - 1))
            back = C.moments_from_cumulants(kind, cum, ("x",) * order, args,
                                            unit=unit)
            assert mnorm(back - mom(("x",) * order, args)) <= 1e-10


# ---------------------------------------------------------------------------
# f_pi evaluation

@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6),
       st.integers(min_value=2, max_value=6))
def test_f_pi_collapse_order_invariance(seed, n):
    rng = np.random.default_rng(seed)
    mats = {k: [rand_hermitian(rng, 2) for _ in range(k)]
            for k in range(1, n + 1)}
    fam = C.SandwichFamily(mats)
    args = tuple(rand_hermitian(rng, 2) for _ in range(n - 1))
    from ncprob.partitions import noncrossing_partitions
    pis = noncrossing_partitions(n)
    pi = pis[rng.integers(len(pis))]
    ref = C.evaluate_f_pi(fam, pi, ("x",) * n, args, unit=np.eye(2))
    for _ in range(3):
        alt = C.evaluate_f_pi(fam, pi, ("x",) * n, args, unit=np.eye(2),
                              rng=rng)
        assert mnorm(ref - alt) < 1e-10


def test_partition_weight():
    assert C.partition_weight("monotone", ((1, 4), (2, 3))) == Fraction(1, 2)
    assert C.partition_weight("free", ((1, 4), (2, 3))) == 1
    assert C.partition_weight("boolean", ((1, 2), (3, 4))) == 1


def test_lattice_selection():
    from ncprob.partitions import interval_partitions, noncrossing_partitions

    assert C.lattice("boolean", 4) == interval_partitions(4)
    assert C.lattice("free", 4) == noncrossing_partitions(4)
    with pytest.raises(ValueError):
        C.lattice("classical", 3)


# ---------------------------------------------------------------------------
# mixed cumulants

def test_vanishing_mixed_monotone_rejected():
    fams = {0: lambda args: 0.0, 1: lambda args: 0.0}
    with pytest.raises(ValueError):
        C.check_vanishing_mixed("monotone", fams, (0, 1), (1.0,))
