"""Finite-dimensional operator models with a vacuum state.

* Boolean star family: a shared vacuum e0 with one excited block per
  element; each element acts only on span{e0} ⊕ (own block), which makes
  the family Boolean independent in the vacuum state.
* Monotone product family: H = H_1 ⊗ ... ⊗ H_m with element k acting as
  1 ⊗ ... ⊗ a_k ⊗ P ⊗ ... ⊗ P (P the local vacuum projection on higher
  factors); the factors are monotone independent with A_1 ≺ ... ≺ A_m.
* Matrix models over M_n(C) with Bernoulli diagonal and η-circular
  off-diagonal entries realized on one shared star space.

Operator-valued quantities over B = M_d live on C^d ⊗ H with B acting as
b ⊗ 1 and E = id_d ⊗ <xi, . xi>.
"""

import numpy as np


# ---------------------------------------------------------------------------
# local building blocks

def jacobi_from_atoms(atoms):
    """Tridiagonal (Jacobi) matrix of an atomic measure, vacuum = e0.

    Lanczos on multiplication-by-t in L²(μ) started at the constant
    function; the resulting k x k matrix has the measure as its vacuum
    distribution.
    """
    ts = np.array([t for t, _ in atoms], dtype=float)
    ws = np.array([w for _, w in atoms], dtype=float)
    k = len(ts)
    A = np.diag(ts)
    v = np.sqrt(ws / ws.sum())
    basis = [v]
    for _ in range(k - 1):
        w_ = A @ basis[-1]
        for b in basis:          # full reorthogonalization
            w_ = w_ - (b @ w_) * b
        for b in basis:
            w_ = w_ - (b @ w_) * b
        nrm = np.linalg.norm(w_)
        if nrm < 1e-12:
            break
        basis.append(w_ / nrm)
    Q = np.array(basis).T
    J = Q.T @ A @ Q
    return 0.5 * (J + J.T)


def bernoulli_local(s):
    """2x2 model of the ±sqrt(s) Bernoulli law, vacuum e0."""
    r = np.sqrt(float(s))
    return np.array([[0.0, r], [r, 0.0]], dtype=complex)


def eta_circular_local(alpha, alpha_tilde):
    """3x3 model of an η-circular element, vacuum e0.

    A = sqrt(α̃)|e1><e0| + sqrt(α)|e0><e2| has phi[AA*] = α,
    phi[A*A] = α̃, phi[A²] = 0, all alternating Boolean *-cumulants of
    order ≠ 2 vanishing, and ||A|| = max(sqrt(α), sqrt(α̃)).
    """
    if alpha <= 0 or alpha_tilde <= 0:
        raise ValueError("variances must be positive")
    A = np.zeros((3, 3), dtype=complex)
    A[1, 0] = np.sqrt(alpha_tilde)
    A[0, 2] = np.sqrt(alpha)
    return A


def perturbed_circular_local(alpha, alpha_tilde, w):
    """η-circular block extended by a coupling w|e3><e2| (on a 4-dim local
    space): both second moments are unchanged but the alternating fourth
    Boolean *-cumulant becomes α|w|² ≠ 0, so the entry is no longer
    η-circular beyond order 2."""
    A = np.zeros((4, 4), dtype=complex)
    A[:3, :3] = eta_circular_local(alpha, alpha_tilde)
    A[3, 2] = w
    return A


# ---------------------------------------------------------------------------
# star / tensor constructions

class VacuumModel:
    """A Hilbert space C^dim with distinguished vacuum vector e0."""

    def __init__(self, dim):
        self.dim = dim
        self.vacuum = np.zeros(dim, dtype=complex)
        self.vacuum[0] = 1.0

    def state(self, op):
        return self.vacuum.conj() @ op @ self.vacuum

    def conditional_expectation(self, op, d):
        """id_d ⊗ <xi, . xi> applied to an operator on C^d ⊗ H."""
        D = self.dim
        blocks = op.reshape(d, D, d, D)
        return np.einsum("i,aibj,j->ab", self.vacuum.conj(), blocks,
                         self.vacuum)

    def resolvent(self, op, b):
        """(b ⊗ 1 - op)^{-1} for b an M_d matrix (or scalar, d = 1)."""
        b = np.atleast_2d(np.asarray(b, dtype=complex))
        d = b.shape[0]
        big = np.kron(b, np.eye(self.dim)) - op
        return np.linalg.inv(big)

    def cauchy(self, op, b):
        b = np.atleast_2d(np.asarray(b, dtype=complex))
        return self.conditional_expectation(self.resolvent(op, b), b.shape[0])


def boolean_star_family(local_ops):
    """Embed local operators (each with vacuum index 0) into one star space.

    Returns (model, [big operators]).  Element i acts on
    span{e0} ⊕ V_i and as zero elsewhere, so the family is Boolean
    independent in the vacuum state while each element keeps its local
    vacuum distribution.
    """
    sizes = [op.shape[0] - 1 for op in local_ops]
    dim = 1 + sum(sizes)
    model = VacuumModel(dim)
    out = []
    offset = 1
    for op, k in zip(local_ops, sizes):
        idx = [0] + list(range(offset, offset + k))
        big = np.zeros((dim, dim), dtype=complex)
        big[np.ix_(idx, idx)] = op
        out.append(big)
        offset += k
    return model, out


def monotone_product_family(local_ops):
    """Tensor model of A_1 ≺ A_2 ≺ ... ≺ A_m, each local vacuum = e0.

    Element k acts as 1^(k-1) ⊗ a_k ⊗ P^(m-k) with P = |e0><e0|.
    """
    dims = [op.shape[0] for op in local_ops]
    model = VacuumModel(int(np.prod(dims)))
    out = []
    for k, op in enumerate(local_ops):
        mat = np.eye(1, dtype=complex)
        for j, dj in enumerate(dims):
            if j < k:
                f = np.eye(dj)
            elif j == k:
                f = op
            else:
                f = np.zeros((dj, dj), dtype=complex)
                f[0, 0] = 1.0
            mat = np.kron(mat, f)
        out.append(mat)
    return model, out


def amplify(op, d):
    """1_d ⊗ op on C^d ⊗ H."""
    return np.kron(np.eye(d), op)


def spectral_distribution(op, probes, tol=1e-10):
    """Distribution of a self-adjoint operator under a convex mix of
    vector states; returns an AtomicMeasure, zero-weight atoms pruned."""
    from .transforms import AtomicMeasure

    vals, vecs = np.linalg.eigh(op)
    weights = np.zeros(len(vals))
    for p, v in probes:
        weights += p * np.abs(vecs.conj().T @ v) ** 2
    atoms = []
    cluster_tol = 1e-8 * max(1.0, np.max(np.abs(vals)))
    for lam, w in zip(vals, weights):  # vals are sorted
        if atoms and lam - atoms[-1][0] < cluster_tol:
            t, wp = atoms[-1]
            atoms[-1] = ((t * wp + lam * w) / (wp + w) if wp + w > 0 else t,
                         wp + w)
        else:
            atoms.append((float(lam), float(w)))
    return AtomicMeasure([(t, w) for t, w in atoms if w > tol])


# ---------------------------------------------------------------------------
# matrix models with a variance profile

class VarianceProfile:
    """Second-moment data of the entry family of an n x n matrix model.

    sigma[i]          variance of the diagonal Bernoulli entry b_ii
    alpha[i, j]       phi[b_ij b_ij*]   for i > j
    alpha_tilde[i, j] phi[b_ij* b_ij]   for i > j
    """

    def __init__(self, sigma, alpha, alpha_tilde):
        self.sigma = np.asarray(sigma, dtype=float)
        self.n = len(self.sigma)
        self.alpha = np.asarray(alpha, dtype=float)
        self.alpha_tilde = np.asarray(alpha_tilde, dtype=float)

    @classmethod
    def uniform(cls, n, sigma, alpha, alpha_tilde):
        """Constant-parameter profile reproducing the classic linear
        eigenvalue ramp: feeds the oracle per-entry values n*sigma on the
        diagonal and alpha/alpha_tilde off it, so that
        lambda_i = sigma + (i-1) alpha/n + (n-i) alpha_tilde/n."""
        a = np.full((n, n), alpha)
        at = np.full((n, n), alpha_tilde)
        return cls([n * sigma] * n, a, at)

    @classmethod
    def distance_weighted(cls, n):
        """Profile with per-entry weight |i-j|/n (and zero diagonal),
        giving lambda_i = [(n-i)(n-i+1) + i(i-1)] / (2 n²)."""
        idx = np.arange(1, n + 1)
        a = np.abs(idx[:, None] - idx[None, :]) / n
        return cls([0.0] * n, a, a.copy())


def lambda_profile(profile):
    """Diagonal of eta_n(1) = (id ⊗ phi)[B_n · B_n] for the matrix model.

    With the 1/sqrt(n) entry normalization,
    lambda_i = (sigma_i + sum_{k<i} alpha_ik + sum_{k>i} alpha_tilde_ki)/n.
    """
    n = profile.n
    lam = np.empty(n)
    for i in range(n):
        lam[i] = (profile.sigma[i]
                  + sum(profile.alpha[i, k] for k in range(i))
                  + sum(profile.alpha_tilde[k, i] for k in range(i + 1, n)))
    return lam / n


def profile_spectral_law(profile):
    """Atoms ±sqrt(lambda_i), weight 1/(2n) each, as an AtomicMeasure."""
    from .transforms import AtomicMeasure

    lam = lambda_profile(profile)
    n = len(lam)
    atoms = []
    for l in lam:
        r = np.sqrt(max(l, 0.0))
        atoms.append((r, 0.5 / n))
        atoms.append((-r, 0.5 / n))
    return AtomicMeasure(atoms)


def _entry_blocks(profile, entry_factory=None, diag_factory=None):
    """Local operators for every entry (diagonal first, then i > j)."""
    n = profile.n
    locals_, tags = [], []
    for i in range(n):
        s = profile.sigma[i]
        op = (diag_factory(i, s) if diag_factory is not None
              else bernoulli_local(s) if s > 0
              else np.zeros((1, 1), dtype=complex))
        locals_.append(op)
        tags.append(("diag", i))
    for i in range(1, n):
        for j in range(i):
            a, at = profile.alpha[i, j], profile.alpha_tilde[i, j]
            if entry_factory is not None:
                op = entry_factory(i, j, a, at)
            elif a > 0 and at > 0:
                op = eta_circular_local(a, at)
            else:
                op = np.zeros((1, 1), dtype=complex)
            locals_.append(op)
            tags.append(("off", i, j))
    return locals_, tags


def build_matrix_model(profile, entry_factory=None, diag_factory=None):
    """B_n = sum_{i>=j} (e_ij ⊗ b_ij + e_ij* ⊗ b_ij*) on C^n ⊗ (star space),
    with e_ii = E_ii/(2 sqrt n), e_ij = E_ij/sqrt(n).

    Entries are Boolean independent (one shared star space); custom
    factories substitute non-Bernoulli / non-η-circular entries with the
    same second moments (used for the matrix-model comparison theorem).
    Returns (model, B, entry_norms).
    """
    n = profile.n
    locals_, tags = _entry_blocks(profile, entry_factory, diag_factory)
    star, bigs = boolean_star_family(locals_)
    dim = star.dim
    B = np.zeros((n * dim, n * dim), dtype=complex)
    s = 1.0 / np.sqrt(n)
    norms = []
    for op, tag in zip(bigs, tags):
        norms.append(np.linalg.norm(op, 2))
        if tag[0] == "diag":
            # e_ii ⊗ b + e_ii* ⊗ b* = E_ii ⊗ (b + b*)/(2 sqrt n)
            i = tag[1]
            E = np.zeros((n, n))
            E[i, i] = 1.0
            B += np.kron(E, 0.5 * s * (op + op.conj().T))
        else:
            _, i, j = tag
            E = np.zeros((n, n))
            E[i, j] = 1.0
            B += s * (np.kron(E, op) + np.kron(E.T, op.conj().T))
    return star, B, norms


def trace_phi_probes(n, star):
    """Probe list for tr_n ⊗ phi on C^n ⊗ H."""
    probes = []
    for i in range(n):
        v = np.zeros(n * star.dim, dtype=complex)
        v[i * star.dim] = 1.0
        probes.append((1.0 / n, v))
    return probes


def trace_phi_cauchy(star, n, op, z):
    """(tr_n ⊗ phi)[(z - op)^{-1}]."""
    A = z * np.eye(op.shape[0]) - op
    out = 0.0 + 0.0j
    for p, v in trace_phi_probes(n, star):
        out += p * (v.conj() @ np.linalg.solve(A, v))
    return out
