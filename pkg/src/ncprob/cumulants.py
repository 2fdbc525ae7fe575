"""Moment-cumulant calculus for free, Boolean and monotone independence.

Everything is operator-valued over a base algebra B (scalars or d x d
matrices).  A *family* is a callable ``family(letters, args)`` giving the
multilinear functional value for a word whose letters are tagged by
``letters`` (a tuple of hashable ids) with interleaved B-arguments
``args`` (length ``len(letters) - 1``); for moment families this is
E[a_{l1} b_1 a_{l2} b_2 ... a_{lk}], and cumulant families read the same
way.  Single-element families may ignore ``letters``.

The three moment-cumulant formulas summed here are

    E[x1 ... xn] = sum over non-crossing partitions of r_pi        (free)
    E[x1 ... xn] = sum over interval partitions of beta_pi       (Boolean)
    E[x1 ... xn] = sum over non-crossing pi of h_pi / tau(pi)!  (monotone)

where each f_pi is evaluated by repeatedly collapsing an interval block
into a B-value multiplied into the neighbouring letter; the result does
not depend on the collapse order.
"""

from fractions import Fraction

from .algebra import mdot, scale, unit_like, zero_like
from .partitions import (interval_partitions, noncrossing_partitions,
                         tau_factorial)

KINDS = ("free", "boolean", "monotone")


def lattice(kind, n):
    """The partition lattice summed over for the given independence kind."""
    if kind == "boolean":
        return interval_partitions(n)
    if kind in ("free", "monotone"):
        return noncrossing_partitions(n)
    raise ValueError(f"unknown kind {kind!r}")


def partition_weight(kind, pi):
    """Weight of ``pi`` in the moment-cumulant formula (exact Fraction)."""
    if kind == "monotone":
        return Fraction(1, tau_factorial(pi))
    return Fraction(1)


def evaluate_f_pi(family, pi, letters, args, unit=None, rng=None):
    """Evaluate f_pi for a word with the given letters and B-arguments.

    Maintains, for each surviving letter, left/right B-multipliers
    (u_i, c_i) so the letter reads u_i * a_i * c_i.  An interval block
    (consecutive among survivors) is collapsed to

        u_{v1} * f_k(c_{v1} u_{v2}, ..., c_{v_{k-1}} u_{v_k}) * c_{v_k}

    and the value is folded into the preceding survivor's right
    multiplier (or the following survivor's left multiplier).
    """
    n = len(letters)
    if len(args) != n - 1:
        raise ValueError("need len(letters) - 1 interleaved arguments")
    if unit is None:
        unit = unit_like(args[0]) if args else 1
    u = {i: unit for i in range(1, n + 1)}
    c = {i: args[i - 1] for i in range(1, n)}
    c[n] = unit
    remaining = list(range(1, n + 1))
    blocks = list(pi)
    while True:
        pos_index = {p: j for j, p in enumerate(remaining)}
        candidates = [B for B in blocks
                      if pos_index[B[-1]] - pos_index[B[0]] == len(B) - 1]
        V = candidates[0] if rng is None else \
            candidates[rng.integers(len(candidates))]
        inner = tuple(mdot(c[V[j]], u[V[j + 1]]) for j in range(len(V) - 1))
        val = mdot(u[V[0]], mdot(family(tuple(letters[p - 1] for p in V), inner),
                                 c[V[-1]]))
        blocks.remove(V)
        remaining = [p for p in remaining if p not in V]
        if not remaining:
            return val
        pred = max((p for p in remaining if p < V[0]), default=None)
        if pred is not None:
            c[pred] = mdot(c[pred], val)
        else:
            succ = min(p for p in remaining if p > V[-1])
            u[succ] = mdot(val, u[succ])


def moments_from_cumulants(kind, cum, letters, args, unit=None):
    """Mixed moment of the word from its cumulant family."""
    n = len(letters)
    total = None
    for pi in lattice(kind, n):
        term = scale(partition_weight(kind, pi),
                     evaluate_f_pi(cum, pi, letters, args, unit))
        total = term if total is None else total + term
    return total


class CumulantFamily:
    """Cumulants obtained by inverting the moment-cumulant formula.

    c_n = m_n - sum over non-maximal lattice partitions of w(pi) * c_pi,
    evaluated recursively; the maximal partition has weight 1 for all
    three kinds (tau(1_n)! = 1).
    """

    def __init__(self, kind, moment_family, unit=None):
        self.kind = kind
        self.mom = moment_family
        self.unit = unit
        self._cache = {}

    @staticmethod
    def _key(letters, args):
        parts = []
        for a in args:
            if hasattr(a, "tobytes"):
                if a.dtype == object:
                    return None
                parts.append((a.shape, a.dtype.str, a.tobytes()))
            else:
                try:
                    hash(a)
                except TypeError:
                    return None
                parts.append(a)
        return (tuple(letters), tuple(parts))

    def __call__(self, letters, args):
        key = self._key(letters, args)
        if key is not None and key in self._cache:
            return self._cache[key]
        value = self._evaluate(letters, args)
        if key is not None:
            self._cache[key] = value
        return value

    def _evaluate(self, letters, args):
        n = len(letters)
        value = self.mom(letters, args)
        for pi in lattice(self.kind, n):
            if len(pi) == 1:
                continue
            value = value - scale(partition_weight(self.kind, pi),
                                  evaluate_f_pi(self, pi, letters, args,
                                                self.unit))
        return value


def cumulants_from_moments(kind, moment_family, unit=None):
    return CumulantFamily(kind, moment_family, unit)


def pair_family(eta, unit=1):
    """Cumulant family with only the order-2 cumulant, given by the map eta."""
    zero = zero_like(eta(unit))

    def fam(letters, args):
        if len(letters) == 2:
            return eta(args[0])
        return zero

    return fam


def limit_moments(kind, eta, letters, args, unit=None):
    """Moments of the central-limit element of the given kind with variance eta.

    Semicircular (free), Bernoulli (Boolean) or arcsine (monotone): the
    only non-vanishing cumulant is the second, equal to eta, so the
    moment formula reduces to a sum over non-crossing / interval pairings
    with monotone weights 1/tau!.  Odd moments vanish.
    """
    if unit is None:
        unit = unit_like(args[0]) if args else 1
    return moments_from_cumulants(kind, pair_family(eta, unit), letters, args,
                                  unit)


def monotone_h_from_moments(m):
    """Scalar monotone cumulants h_1..h_4 from raw moments [m1, m2, m3, m4].

    Closed forms:
        h1 = m1
        h2 = m2 - m1^2
        h3 = m3 - 5/2 m2 m1 + 3/2 m1^3
        h4 = m4 - 3/2 m2^2 - 3 m3 m1 + 37/6 m2 m1^2 - 8/3 m1^4
    """
    m1, m2, m3, m4 = m[0], m[1], m[2], m[3]
    half, f52, f32, f376, f83 = (Fraction(1, 2), Fraction(5, 2), Fraction(3, 2),
                                 Fraction(37, 6), Fraction(8, 3))
    h1 = m1
    h2 = m2 - m1 * m1
    h3 = m3 - scale(f52, m2 * m1) + scale(f32, m1 ** 3)
    h4 = (m4 - scale(f32, m2 * m2) - 3 * m3 * m1
          + scale(f376, m2 * m1 * m1) - scale(f83, m1 ** 4))
    return [h1, h2, h3, h4]


def h4_centered(mom, b1, b2, b3, unit=None):
    """Operator-valued fourth monotone cumulant of a centered element.

    For E[x] = 0 the general expression collapses to

        h4(x b1, x b2, x b3, x) = E[x b1 x b2 x b3 x]
                                  - E[x b1 x] b2 E[x b3 x]
                                  - 1/2 E[x (b1 E[x b2 x] b3) x]

    where ``mom`` is the element's moment family.
    """
    L = ("x",) * 4
    inner = mdot(mdot(b1, mom(L[:2], (b2,))), b3)
    return (mom(L, (b1, b2, b3))
            - mdot(mdot(mom(L[:2], (b1,)), b2), mom(L[:2], (b3,)))
            - scale(Fraction(1, 2), mom(L[:2], (inner,))))


def mixed_cumulant(kind, families, letters, args, unit=None):
    """Joint cumulant of a tagged word, by inverting mixed_moment data.

    ``families``: dict algebra-index -> single-element moment family
    ``fam(args)``; letters tag each position with its algebra.
    """
    from .words import mixed_moment

    def mom(ls, bs):
        return mixed_moment(kind, families, ls, bs, unit)

    return cumulants_from_moments(kind, mom, unit)(letters, args)


def check_vanishing_mixed(kind, families, letters, args, unit=None, tol=1e-8):
    """True iff the word's joint cumulant vanishes to tolerance.

    Mixed free and Boolean cumulants of independent algebras vanish; no
    such characterization exists for monotone independence, so that kind
    is rejected.
    """
    from .algebra import mnorm

    if kind == "monotone":
        raise ValueError("no vanishing-mixed-cumulant characterization "
                         "for monotone independence")
    return mnorm(mixed_cumulant(kind, families, letters, args, unit)) <= tol


class SandwichFamily:
    """Deterministic multilinear family f_k(b_1..b_{k-1}) = A_{k,0} b_1 A_{k,1} ... b_{k-1} A_{k,k-1}.

    Used as generic test data: any choice of matrices A gives a valid
    abstract cumulant (or moment) family.
    """

    def __init__(self, mats):
        # mats[k] = list of k matrices for the order-k functional
        self.mats = mats

    def __call__(self, letters, args):
        k = len(letters)
        A = self.mats[k]
        out = A[0]
        for b, a in zip(args, A[1:]):
            out = mdot(mdot(out, b), a)
        return out
