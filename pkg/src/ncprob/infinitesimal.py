"""Infinitesimal (first-order) noncommutative probability.

An infinitesimal element is a pair (x, x') of self-adjoint operators; its
upper-triangular lift [[x, x'], [0, x]] turns the pair calculus into
ordinary operator algebra over the dual-number ring, and E-prime data
rides in the eps-slot of ``Dual`` values.  The same word algorithms that
compute mixed moments then compute first-order mixed moments; this is
the equivalence between infinitesimal independence and independence of
the lifts over the upper-triangular base algebra, and both routes are
implemented independently so they can be cross-checked.
"""

import numpy as np

from .algebra import Dual, as_dual, mnorm, zero_like
from .cumulants import limit_moments
from .models import VacuumModel, boolean_star_family, monotone_product_family
from .words import mixed_moment


# ---------------------------------------------------------------------------
# lifts and the tilde expectation

def lift(x, xp):
    """[[x, x'], [0, x]] on C² ⊗ H."""
    x = np.asarray(x, dtype=complex)
    xp = np.asarray(xp, dtype=complex)
    z = np.zeros_like(x)
    return np.block([[x, xp], [z, x]])


def lift_norm(x, xp):
    """The norm ||x|| + ||x'|| used for lifted elements."""
    return np.linalg.norm(np.asarray(x), 2) + np.linalg.norm(np.asarray(xp), 2)


def dual_scalar_matrix(b, dim):
    """The lift of a dual scalar b as an operator on C² ⊗ C^dim."""
    b = as_dual(b)
    I = np.eye(dim)
    return np.block([[complex(b.re) * I, complex(b.de) * I],
                     [0 * I, complex(b.re) * I]])


def tilde_state(model, big):
    """Ẽ of an operator on C² ⊗ H as a Dual: (phi of 11-block, phi of
    12-block)."""
    D = model.dim
    return Dual(model.state(big[:D, :D]), model.state(big[:D, D:]))


def tilde_E_norm(E11, E12):
    """Norm ||[[p, q], [0, p]]|| = ||p|| + ||q|| of a tilde-expectation value."""
    return mnorm(E11) + mnorm(E12)


# ---------------------------------------------------------------------------
# pair families: E and E' of words in a single element

def dual_pair_family(x, xp):
    """Moment family of the pair (x, x') with values in the dual numbers:
    fam(args) = E[x b1 x ... x] + eps E'[same word], args scalar or Dual."""
    x = np.asarray(x, dtype=complex)
    model = VacuumModel(x.shape[0])
    L = lift(x, xp)

    def fam(args):
        out = L.copy()
        for b in args:
            out = out @ dual_scalar_matrix(b, model.dim) @ L
        return tilde_state(model, out)

    return fam


def eprime_word(kind, pairs, letters, args):
    """(E_value, E'_value) of a mixed word in infinitesimally independent
    elements, from per-algebra pairs {index: (x, x')} via the dual-number
    word rules."""
    fams = {a: dual_pair_family(x, xp) for a, (x, xp) in pairs.items()}
    dual_args = tuple(as_dual(complex(a)) for a in args)
    v = mixed_moment(kind, fams, letters, dual_args, unit=Dual(1.0 + 0j))
    return v.re, v.de


def joint_lift_model(kind, pairs_list):
    """Realize a family of pairs in one joint lifted model.

    Returns (scalar model, [lifted big matrices]): embed each local pair
    into the scalar Boolean star / monotone tensor model, then lift; the
    lifted family is independent over the upper-triangular base algebra.
    """
    builder = (boolean_star_family if kind == "boolean"
               else monotone_product_family)
    model, xs = builder([x for x, _ in pairs_list])
    _, xps = builder([xp for _, xp in pairs_list])
    return model, [lift(x, xp) for x, xp in zip(xs, xps)]


def lift_word_value(model, lifted, letters, args):
    """Ẽ of a word of lifted big matrices, as a Dual (independent route
    for cross-checking eprime_word)."""
    out = lifted[letters[0]]
    for b, l in zip(args, letters[1:]):
        out = out @ dual_scalar_matrix(b, model.dim) @ lifted[l]
    return tilde_state(model, out)


# ---------------------------------------------------------------------------
# infinitesimal transforms

def inf_cauchy(x, xp, z, zp=0.0):
    """(G, G') of a single pair at the (possibly dual) point z + eps z':
    G' = phi[R (x' - z') R] with R = (z - x)^{-1}."""
    x = np.asarray(x, dtype=complex)
    model = VacuumModel(x.shape[0])
    R = np.linalg.inv(complex(z) * np.eye(model.dim) - x)
    G = model.state(R)
    Gp = model.state(R @ (np.asarray(xp, dtype=complex)
                          - complex(zp) * np.eye(model.dim)) @ R)
    return G, Gp


def dual_cauchy(x, xp, z):
    z = as_dual(z)
    G, Gp = inf_cauchy(x, xp, z.re, z.de)
    return Dual(G, Gp)


def dual_eta(eta, etap):
    """The variance pair as one dual-linear map:
    (eta, eta')(p + eps q) = eta(p) + eps (eta'(p) + eta(q))."""

    def de(b):
        b = as_dual(b)
        return Dual(eta(b.re), etap(b.re) + eta(b.de))

    return de


def inf_limit_moments(kind, eta, etap, order, args):
    """(E, E') of the order-``order`` moment of the infinitesimal central
    limit element with variance pair (eta, eta'): the pairing sums with
    one slot replaced by eta' (tau!-weighted for the monotone kind)."""
    unit = Dual(1.0 + 0j)
    dual_args = tuple(as_dual(complex(a)) for a in args)
    v = limit_moments(kind, dual_eta(eta, etap), ("x",) * order, dual_args,
                      unit)
    return v.re, v.de


def inf_bernoulli_cauchy(eta, etap, z):
    """Dual Cauchy transform (b - eta(b^{-1}))^{-1} of an infinitesimal
    Bernoulli element with scalar variance pair (eta, eta')."""
    b = as_dual(z)
    em = dual_eta(lambda p: eta * p, lambda p: etap * p)
    return 1.0 / (b - em(1.0 / b))


def variance_comparison_inf(eta0, etap0, eta1, etap1, z):
    """(lhs, rhs) of the first-order Bernoulli comparison bound:
    lhs = |E'[G_1(z)] - E'[G_0(z)]|,
    rhs = 9 ||Im(z)^{-1}||³ (|eta1 - eta0| + |eta1' - eta0'|)."""
    g0 = inf_bernoulli_cauchy(eta0, etap0, z)
    g1 = inf_bernoulli_cauchy(eta1, etap1, z)
    lhs = abs(g1.de - g0.de)
    rhs = 9.0 * (1.0 / complex(z).imag) ** 3 * (abs(eta1 - eta0)
                                                + abs(etap1 - etap0))
    return lhs, rhs


def inf_variance_add(kind, v1, v2):
    """Sum of variance pairs under the infinitesimal convolution.

    Additive for the free and Boolean kinds; the monotone kind has no
    such additivity (its limit family is strictly larger than the
    arcsine pairs), so it is rejected.
    """
    if kind == "monotone":
        raise ValueError("infinitesimal monotone variances are not additive")
    (e1, p1), (e2, p2) = v1, v2
    return (e1 + e2, p1 + p2)


# ---------------------------------------------------------------------------
# dual-number free convolution (scalar level)

def dual_moments_of_pair(x, xp, order):
    """[m_0.., m_order] with m_k = phi(x^k) + eps phi(d/dt (x+t x')^k)."""
    x = np.asarray(x, dtype=complex)
    model = VacuumModel(x.shape[0])
    L = lift(x, xp)
    out = [Dual(1.0 + 0j)]
    P = np.eye(2 * model.dim, dtype=complex)
    for _ in range(order):
        P = P @ L
        out.append(tilde_state(model, P))
    return out


def _dual_arrays(vals):
    """Split a list of Dual/complex into (re, de) complex arrays."""
    ds = [as_dual(v) for v in vals]
    return (np.array([complex(d.re) for d in ds]),
            np.array([complex(d.de) for d in ds]))


def _dual_list(re, de):
    return [Dual(r, d) for r, d in zip(re, de)]


def free_cumulants_from_moment_list(ms):
    """Scalar free cumulants from [m_0, ..., m_M] (dual-ring valued),
    by the block-of-1 recursion m_n = sum_s k_s * (m^{*s})[n-s]."""
    mr, md = _dual_arrays(ms)
    M = len(ms) - 1
    # conv[s] = s-fold convolution power of the moment sequence
    cr = np.zeros((M + 1, M + 1), dtype=complex)
    cd = np.zeros((M + 1, M + 1), dtype=complex)
    cr[0, 0] = 1.0
    for s in range(1, M + 1):
        cr[s] = np.convolve(cr[s - 1], mr)[:M + 1]
        cd[s] = (np.convolve(cr[s - 1], md)[:M + 1]
                 + np.convolve(cd[s - 1], mr)[:M + 1])
    kr = np.zeros(M + 1, dtype=complex)
    kd = np.zeros(M + 1, dtype=complex)
    for n in range(1, M + 1):
        s = np.arange(1, n)
        kr[n] = mr[n] - kr[s] @ cr[s, n - s]
        kd[n] = md[n] - kr[s] @ cd[s, n - s] - kd[s] @ cr[s, n - s]
    return [None] + _dual_list(kr[1:], kd[1:])


def moment_list_from_free_cumulants(kappa, order):
    """Forward recursion: moments of the element whose free cumulants are
    ``kappa`` (list with kappa[0] unused)."""
    M = order
    kr = np.zeros(M + 1, dtype=complex)
    kd = np.zeros(M + 1, dtype=complex)
    for s in range(1, min(len(kappa), M + 1)):
        k = as_dual(kappa[s])
        kr[s], kd[s] = complex(k.re), complex(k.de)
    mr = np.zeros(M + 1, dtype=complex)
    md = np.zeros(M + 1, dtype=complex)
    mr[0] = 1.0
    # A[s, t] = sum over i_1+..+i_s = t of m_{i_1}..m_{i_s}; column t only
    # needs moments up to m_t, so fill moment t then column t.
    Ar = np.zeros((M + 1, M + 1), dtype=complex)
    Ad = np.zeros((M + 1, M + 1), dtype=complex)
    Ar[0, 0] = 1.0
    for n in range(1, M + 1):
        t = n - 1
        for s in range(1, M + 1):
            # row s of column t uses row s-1 of the same column (m_0 term)
            Ar[s, t] = Ar[s - 1, t::-1] @ mr[:t + 1]
            Ad[s, t] = (Ar[s - 1, t::-1] @ md[:t + 1]
                        + Ad[s - 1, t::-1] @ mr[:t + 1])
        s = np.arange(1, n + 1)
        mr[n] = kr[s] @ Ar[s, n - s]
        md[n] = kr[s] @ Ad[s, n - s] + kd[s] @ Ar[s, n - s]
    return _dual_list(mr, md)


def free_sum_dual_cauchy(pairs, z, order=150, tol=1e-11):
    """E[G_S(z)] + eps E'[G_S(z)] for S the free sum of the given pairs,
    via additive dual free cumulants and the moment series at z; raises
    if the series tail has not decayed below ``tol`` by ``order``."""
    total = None
    for x, xp in pairs:
        ms = dual_moments_of_pair(x, xp, order)
        ks = free_cumulants_from_moment_list(ms)
        if total is None:
            total = ks
        else:
            total = [None] + [total[s] + ks[s] for s in range(1, order + 1)]
    ms = moment_list_from_free_cumulants(total, order)
    return _dual_series_at(ms, z, tol)


def _dual_series_at(ms, z, tol):
    z = as_dual(z)
    zi = 1.0 / z
    out = Dual(0.0 + 0j)
    p = zi
    tail = np.inf
    for k in range(len(ms)):
        term = p * ms[k]
        out = out + term
        tail = abs(term.re) + abs(term.de)
        p = p * zi
    if tail > tol:
        raise ValueError("moment series did not converge at this spectral "
                         "parameter; use a point further from the real axis")
    return out


def semicircular_dual_cauchy(var_pairs, z, order=150, tol=1e-11):
    """Same series for the free sum of infinitesimal semicirculars with
    second-cumulant pairs (eta_i, eta'_i) and no higher cumulants."""
    zero = Dual(0.0 + 0j)
    k2 = zero
    for e, ep in var_pairs:
        k2 = k2 + Dual(complex(e), complex(ep))
    ms = moment_list_from_free_cumulants([None, zero, k2], order)
    return _dual_series_at(ms, z, tol)


# ---------------------------------------------------------------------------
# the first-order distance bound (three kinds)

def _matched_bernoulli_pair(x, xp):
    """A Bernoulli pair (y, y') with E[y²] = E[x²] and E'[y²] = E'[x²]."""
    model = VacuumModel(np.asarray(x).shape[0])
    v = float(np.real(model.state(x @ x)))
    w = float(np.real(model.state(x @ xp + xp @ x)))
    r = np.sqrt(v)
    y = np.array([[0, r], [r, 0]], dtype=complex)
    yp = (w / (2 * v)) * y
    return y, yp


def matched_target_family(x_pairs):
    return [_matched_bernoulli_pair(x, xp) for x, xp in x_pairs]


def inf_bound_gap(kind, x_pairs, y_pairs, z):
    """(lhs, rhs) of the first-order Lindeberg bound for two
    infinitesimally independent families with matching (E, E') second
    moments:

    lhs = ||E'[G_{sum x}(z)] - E'[G_{sum y}(z)]||
    rhs = 2N ||Im(z)^{-1}||⁴ (max ||x_i~||³ + max ||y_i~||³)

    with lifted norms ||x~|| = ||x|| + ||x'||.  Boolean: joint lifted
    star model; monotone: dual F-transform composition (x's before y's in
    the ≺-order); free: dual free-cumulant series.
    """
    N = len(x_pairs)
    z = complex(z)
    nx = max(lift_norm(x, xp) for x, xp in x_pairs)
    ny = max(lift_norm(y, yp) for y, yp in y_pairs)
    rhs = 2.0 * N * (1.0 / z.imag) ** 4 * (nx ** 3 + ny ** 3)
    if kind == "boolean":
        lhs = abs(_boolean_lift_eprime_G(x_pairs, z)
                  - _boolean_lift_eprime_G(y_pairs, z))
    elif kind == "monotone":
        lhs = abs(_monotone_dual_G(x_pairs, z).de
                  - _monotone_dual_G(y_pairs, z).de)
    elif kind == "free":
        lhs = abs(free_sum_dual_cauchy(x_pairs, z).de
                  - free_sum_dual_cauchy(y_pairs, z).de)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return lhs, rhs


def _boolean_lift_eprime_G(pairs, z):
    model, lifted = joint_lift_model("boolean", pairs)
    S = sum(lifted)
    big = np.linalg.inv(dual_scalar_matrix(complex(z), model.dim) - S)
    return tilde_state(model, big).de


def _monotone_dual_G(pairs, z):
    """Dual Cauchy transform of the monotone sum by F-composition
    F = F_1 ∘ F_2 ∘ ... (factor 1 is ≺-smallest)."""
    w = as_dual(complex(z))
    for x, xp in reversed(pairs):
        w = 1.0 / dual_cauchy(x, xp, w)
    return 1.0 / w
