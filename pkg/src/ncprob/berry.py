"""Quantitative central-limit machinery: Lindeberg decomposition, both
sides of the Boolean/monotone distance bounds, matrix-model comparison,
fourth-moment bounds and the monotone subordination identity.
"""

from fractions import Fraction

import numpy as np

from . import transforms as tr
from .algebra import mnorm
from .cumulants import (cumulants_from_moments, monotone_h_from_moments,
                        moments_from_cumulants)
from .models import VacuumModel, monotone_product_family


# ---------------------------------------------------------------------------
# moment functionals and bound right-hand sides

class MomentFunctionals:
    """alpha2 = max ||E[x²]||, alpha4 = max sup_{|b|=1} ||E[x b* x² b x]||,
    alpha4_tilde = max ||E[x⁴]||; the quantities entering the bounds."""

    def __init__(self, alpha2, alpha4, alpha4_tilde):
        self.alpha2 = float(alpha2)
        self.alpha4 = float(alpha4)
        self.alpha4_tilde = float(alpha4_tilde)


def moment_functionals(model, family, d=1, net=200, seed=0, tol=1e-8):
    """Compute the functionals for a centered family in a vacuum model.

    For d = 1 the supremum over unit b is trivial (alpha4 = alpha4_tilde);
    for d > 1 it is estimated on a random net of unit-norm matrices.
    """
    rng = np.random.default_rng(seed)
    a2 = a4 = a4t = 0.0
    for x in family:
        Ex = model.conditional_expectation(x, d)
        if mnorm(Ex) > tol:
            raise ValueError("family must be centered")
        x2 = x @ x
        a2 = max(a2, mnorm(model.conditional_expectation(x2, d)))
        a4t = max(a4t, mnorm(model.conditional_expectation(x2 @ x2, d)))
        if d == 1:
            a4 = a4t
        else:
            best = 0.0
            for _ in range(net):
                b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
                b /= np.linalg.norm(b, 2)
                big = np.kron(b, np.eye(model.dim))
                v = model.conditional_expectation(
                    x @ big.conj().T @ x2 @ big @ x, d)
                best = max(best, mnorm(v))
            a4 = max(a4, best)
    return MomentFunctionals(a2, a4, a4t)


def bound_rhs(kind, b, N, functionals_x=None, functionals_y=None,
              norm_x=None, norm_y=None):
    """Right-hand side of the distance bounds.

    boolean/monotone: ||Im(b)^{-1}||⁴ sqrt(α₂(x)) (sqrt(α₄(x)) + sqrt(α₄(y))) N
    infinitesimal:    2N ||Im(b)^{-1}||⁴ (max||x_i||³ + max||y_i||³)
    """
    im_inv = mnorm(np.linalg.inv(np.atleast_2d(np.asarray(b, complex)).imag))
    if kind == "infinitesimal":
        return 2.0 * N * im_inv ** 4 * (norm_x ** 3 + norm_y ** 3)
    fx, fy = functionals_x, functionals_y
    return (im_inv ** 4 * np.sqrt(fx.alpha2)
            * (np.sqrt(fx.alpha4) + np.sqrt(fy.alpha4)) * N)


# ---------------------------------------------------------------------------
# Lindeberg decomposition (exact identities, no independence needed)

def resolvent_taylor_residual(x, y, b, m):
    """Residual of the order-m resolvent expansion

    x^{-1} - y^{-1} = sum_{k=1}^m y^{-1}((y-x)y^{-1})^k + x^{-1}((y-x)y^{-1})^{m+1}

    for invertible matrices x, y (b unused; kept for API symmetry)."""
    xi, yi = np.linalg.inv(x), np.linalg.inv(y)
    D = (y - x) @ yi
    acc = np.zeros_like(xi)
    P = np.eye(x.shape[0], dtype=complex)
    for _ in range(m):
        P = P @ D
        acc = acc + yi @ P
    acc = acc + xi @ P @ D
    return np.linalg.norm(xi - yi - acc, 2)


def lindeberg_terms(model, xs, ys, b):
    """The telescoping resolvent decomposition for two families.

    With z_i = x_1+..+x_i+y_{i+1}+..+y_N and z_i0 = z_i - x_i,
        A_i = G0 x_i G0 - G0 y_i G0
        B_i = G0 (x_i G0)² - G0 (y_i G0)²
        C_i = G_{z_i}(x_i G0)³ - G_{z_{i-1}}(y_i G0)³
    and G_{z_N} - G_{z_0} = sum_i (A_i + B_i + C_i) exactly.
    Returns (terms, residual_norm).
    """
    N = len(xs)
    G = lambda z: model.resolvent(z, b)
    terms = []
    total = np.zeros_like(G(xs[0]))
    for i in range(N):
        zi = sum(xs[:i + 1]) + sum(ys[i + 1:])
        zi0 = zi - xs[i]
        zprev = zi0 + ys[i]
        G0, Gi, Gp = G(zi0), G(zi), G(zprev)
        xG, yG = xs[i] @ G0, ys[i] @ G0
        A = G0 @ xG - G0 @ yG
        B = G0 @ xG @ xG - G0 @ yG @ yG
        C = Gi @ xG @ xG @ xG - Gp @ yG @ yG @ yG
        terms.append((A, B, C))
        total = total + A + B + C
    resid = np.linalg.norm(G(sum(xs)) - G(sum(ys)) - total, 2)
    return terms, resid


# ---------------------------------------------------------------------------
# CLT gaps via transforms (scalar level)

def _summand_functionals(measure, n, kind):
    m2, m4 = measure.moment(2), measure.moment(4)
    kappa = 1.0 if kind == "boolean" else 1.5
    fx = MomentFunctionals(m2 / n, m4 / n ** 2, m4 / n ** 2)
    fy = MomentFunctionals(m2 / n, kappa * (m2 / n) ** 2,
                           kappa * (m2 / n) ** 2)
    return fx, fy


def clt_sum(kind, measure, n):
    """Distribution of (x_1 + ... + x_n)/sqrt(n) for iid summands."""
    s = tr.dilate(measure, 1.0 / np.sqrt(n))
    if kind == "boolean":
        return tr.iterate_boolean(s, n)
    if kind == "monotone":
        return tr.iterate_monotone(s, n)
    raise ValueError(f"unknown kind {kind!r}")


def clt_target(kind, measure):
    m2 = measure.moment(2)
    return (tr.bernoulli_measure(m2) if kind == "boolean"
            else tr.arcsine_measure(m2))


def clt_gap(kind, measure, n, z):
    """(lhs, rhs) of the CLT distance bound at spectral parameter z.

    lhs = |G_{X_n}(z) - G_target(z)|; rhs uses the closed-form
    alpha4(y) = kappa * alpha2² with kappa = 1 (Bernoulli target) or 3/2
    (arcsine target).
    """
    if abs(measure.moment(1)) > 1e-12:
        raise ValueError("summands must be centered")
    X = clt_sum(kind, measure, n)
    T = clt_target(kind, measure)
    lhs = abs(X.cauchy(z) - T.cauchy(z))
    fx, fy = _summand_functionals(measure, n, kind)
    rhs = bound_rhs(kind, complex(z), n, fx, fy)
    return lhs, rhs


def levy_rate(kind, measure, n, eps_grid=None):
    """(levy_estimate, rate_bound): the Lévy bound optimized over eps, and
    the n^{-1/14} rate expression (universal constant unknown, set to 1)."""
    X = clt_sum(kind, measure, n)
    T = clt_target(kind, measure)
    if eps_grid is None:
        eps_grid = np.geomspace(1e-4, 1.0, 17)
    best = np.inf
    for eps in eps_grid:
        best = min(best, tr.levy_bound_from_cauchy(X, T, eps))
    m2, m4 = measure.moment(2), measure.moment(4)
    kappa = 1.0 if kind == "boolean" else 1.5
    rate = (m2 * (m4 + kappa * m2 ** 2)) ** (1 / 14) * n ** (-1 / 14)
    return best, rate


# ---------------------------------------------------------------------------
# Bernoulli / arcsine comparison (Cauchy transforms in closed form)

def bernoulli_cauchy_ov(eta, b):
    """E[G_X(b)] = (b - eta(b^{-1}))^{-1} for a B-valued Bernoulli X."""
    b = np.atleast_2d(np.asarray(b, complex))
    return np.linalg.inv(b - eta(np.linalg.inv(b)))


def arcsine_cauchy_ov(eta, b, steps=200):
    """E[G_A(b)] for a B-valued arcsine element with variance eta.

    The arcsine family is the monotone convolution semigroup generated by
    the quadratic flow dF_t(b)/dt = -eta(F_t(b)^{-1}), F_0 = b (scalar
    check: F_t(z) = sqrt(z² - 2t eta)); integrate to t = 1 by RK4 and
    invert.
    """
    b = np.atleast_2d(np.asarray(b, complex))

    def vel(F):
        return -eta(np.linalg.inv(F))

    F = b.astype(complex)
    h = 1.0 / steps
    for _ in range(steps):
        k1 = vel(F)
        k2 = vel(F + 0.5 * h * k1)
        k3 = vel(F + 0.5 * h * k2)
        k4 = vel(F + h * k3)
        F = F + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return np.linalg.inv(F)


def map_norm(delta, d, net=200, seed=0):
    """sup_{||b||=1} ||delta(b)|| estimated on a random net (exact at d=1)."""
    if d == 1:
        return abs(complex(np.asarray(delta(np.eye(1))).reshape(())))
    rng = np.random.default_rng(seed)
    best = 0.0
    cands = []
    for _ in range(net):
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        cands.append(b)
        cands.append(b + b.conj().T)
    for b in cands:
        nb = np.linalg.norm(b, 2)
        if nb > 0:
            best = max(best, np.linalg.norm(delta(b / nb), 2))
    return best


def amplified(eta, k, d):
    """id_k ⊗ eta acting on M_k(M_d) block-wise."""

    def eta_k(B):
        out = np.zeros((k * d, k * d), dtype=complex)
        for p in range(k):
            for q in range(k):
                out[p * d:(p + 1) * d, q * d:(q + 1) * d] = \
                    eta(B[p * d:(p + 1) * d, q * d:(q + 1) * d])
        return out

    return eta_k


def comparison_gap(kind, eta0, eta1, b, k=1, d=1):
    """(lhs, rhs) of the variance-comparison bounds for two Bernoulli or
    two arcsine elements: rhs = k ||Im(b)^{-1}||³ ||eta1 - eta0||."""
    e0, e1 = amplified(eta0, k, d), amplified(eta1, k, d)
    transform = bernoulli_cauchy_ov if kind == "bernoulli" else arcsine_cauchy_ov
    lhs = mnorm(transform(e1, b) - transform(e0, b))
    im_inv = mnorm(np.linalg.inv(np.atleast_2d(np.asarray(b, complex)).imag))
    rhs = k * im_inv ** 3 * map_norm(lambda x: eta1(x) - eta0(x), d)
    return lhs, rhs


# ---------------------------------------------------------------------------
# fourth-moment bound for monotone n-divisible elements

def monotone_divisible_h4(measure_moments, n):
    """Exact h4 of the n-fold monotone convolution of dilated summands.

    Uses additivity of monotone cumulants over iid monotone summands:
    h_k(Y) = n h_k(x_1) with x_1 distributed per ``measure_moments``
    (moments of the dilated summand, exact Fractions recommended).
    """

    def mom(letters, args):
        out = measure_moments[len(letters)]
        for a in args:
            out = out * a
        return out

    h = cumulants_from_moments("monotone", mom, unit=Fraction(1))
    one = Fraction(1)
    hY = {kk: n * h(("x",) * kk, (one,) * (kk - 1)) for kk in range(1, 5)}

    def cumY(letters, args):
        out = hY[len(letters)]
        for a in args:
            out = out * a
        return out

    mY = [moments_from_cumulants("monotone", cumY, ("x",) * kk,
                                 (one,) * (kk - 1), unit=one)
          for kk in range(1, 5)]
    return monotone_h_from_moments(mY)[3], mY


def fourth_moment_gap(measure, n, b):
    """Theorem-4.6-style bound for Y = n-fold monotone power of the
    dilated summand: lhs = |G_Y(b) - G_arcsine(b)|,
    rhs = ||Im(b)^{-1}||⁴ sqrt(m2) sqrt(|h4(Y)|).  Also returns h4(Y)."""
    m2 = measure.moment(2)
    summand = tr.dilate(measure, 1.0 / np.sqrt(n))
    # moments of the dilated summand, exact rationals for symmetric laws
    mom_frac = {}
    for kk in range(1, 5):
        mk = measure.moment(kk)
        if kk % 2 == 0:
            mom_frac[kk] = (Fraction(mk).limit_denominator(10 ** 12)
                            / Fraction(n) ** (kk // 2))
        else:
            mom_frac[kk] = (Fraction(0) if abs(mk) < 1e-14
                            else mk / n ** (kk / 2))
    h4, _ = monotone_divisible_h4(mom_frac, n)
    Y = tr.iterate_monotone(summand, n)
    A = tr.arcsine_measure(m2)
    z = complex(b)
    lhs = abs(Y.cauchy(z) - A.cauchy(z))
    rhs = (1.0 / z.imag) ** 4 * np.sqrt(m2) * np.sqrt(abs(float(h4)))
    return lhs, rhs, h4


# ---------------------------------------------------------------------------
# matrix-model comparison (Boolean Wigner)

def wigner_gap(profile, z, entry_factory, diag_factory=None):
    """(lhs, rhs) for the matrix-model comparison at spectral parameter z:

    lhs = |tr⊗phi[G_{A_n}(z)] - tr⊗phi[G_{B_n}(z)]|,
    rhs = 16 max||a_ij||³ / (Im(z)⁴ sqrt(n)),

    with A_n built from custom entries matching the profile's second
    moments and B_n the Bernoulli/η-circular reference model.
    """
    from .models import build_matrix_model, trace_phi_cauchy

    n = profile.n
    star_b, B, _ = build_matrix_model(profile)
    star_a, A, norms_a = build_matrix_model(profile, entry_factory,
                                            diag_factory)
    gB = trace_phi_cauchy(star_b, n, B, z)
    gA = trace_phi_cauchy(star_a, n, A, z)
    lhs = abs(gA - gB)
    rhs = 16.0 * max(norms_a) ** 3 / (complex(z).imag ** 4 * np.sqrt(n))
    return lhs, rhs


# ---------------------------------------------------------------------------
# monotone subordination identity

def monotone_subordination_check(x_local, w_local, y_local, b1, b2,
                                 w_power=2):
    """Residual of the two-sided subordination identity

    E[G_{x+y}(b1) w G_{x+y}(b2)]
        = E[G_x(E[G_y(b1)]^{-1}) E[w] G_x(E[G_y(b2)]^{-1})]

    realized on the 3-factor monotone model x ≺ c ≺ y with w = c^power.
    b1, b2 may lie in either half-plane (e.g. b2 = conj(b1)).  Note the
    right side keeps both x-resolvents inside one expectation.
    """
    model, (X, C, Y) = monotone_product_family([x_local, w_local, y_local])
    W = np.linalg.matrix_power(C, w_power)
    b1, b2 = complex(b1), complex(b2)
    I = np.eye(model.dim)
    Gs = lambda b: np.linalg.inv(b * I - X - Y)
    lhs = model.state(Gs(b1) @ W @ Gs(b2))
    Gy = lambda b: model.state(np.linalg.inv(b * I - Y))
    c1, c2 = 1.0 / Gy(b1), 1.0 / Gy(b2)
    rhs = model.state(np.linalg.inv(c1 * I - X) @ np.linalg.inv(c2 * I - X)) \
        * model.state(W)
    return abs(lhs - rhs)
