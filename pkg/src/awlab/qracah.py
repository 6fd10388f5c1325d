"""Terminating q-Racah machinery: series evaluation on the q-quadratic grid,
three-term-recurrence generation, weights and norms with orthogonality, overlap
extraction from a built representation, and the balanced-series transformation.

The series base is q^2 everywhere here; QRacahParams carries it explicitly so
callers cannot mismatch it.
"""
from dataclasses import dataclass

import numpy as np

from .qcore import sinh_q, qpoch, qpoch_inf, phi43
from .linalg import sym_eig, match_eigenvalues
from . import aw3


@dataclass(frozen=True)
class QRacahParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    base: float


def params_from_roots(ctx, p):
    """Series parameters from the root labels (p0, p1, p2, p3)."""
    q = ctx.q
    return QRacahParams(alpha=-q**(p[0] + p[2]), beta=q**(p[0] - p[2]),
                        gamma=q**(p[0] - p[1]), delta=-q**(p[2] + p[3]),
                        base=q * q)


def y_grid(params, j):
    return params.base**(-j) + params.gamma * params.delta * params.base**(j + 1)


def qracah_eval(ctx, n, j, params):
    """R_n at the j-th grid point; terminating balanced 4phi3, value 1 at
    n = 0 or j = 0."""
    al, be, ga, de, b = (params.alpha, params.beta, params.gamma,
                         params.delta, params.base)
    num = [b**(-n), al * be * b**(n + 1), b**(-j), ga * de * b**(j + 1)]
    den = [al * b, be * de * b, ga * b]
    return phi43(ctx, num, den, b, b, n)


def dual_offset(p):
    """Offset s0 such that the second spectrum reads sinh_q(2m + s0 + 1)."""
    return sum(p) / 2 - p[1]


def eval_table(ctx, params_a, N):
    """Full (N+1)x(N+1) table, rows = variable index j, cols = degree index k,
    evaluated directly from the series."""
    qp = params_from_roots(ctx, params_a.pvec())
    T = np.empty((N + 1, N + 1))
    for j in range(N + 1):
        for k in range(N + 1):
            T[j, k] = qracah_eval(ctx, k, j, qp)
    return T


def recurrence_eval(ctx, params_a, N):
    """Same table generated by the three-term recurrence with the tridiagonal
    coefficients, then renormalized so degree 0 is the constant 1."""
    rep = aw3.build_rep(ctx, params_a, N)
    p = params_a.pvec()
    s0 = dual_offset(p)
    mu = np.array([sinh_q(ctx, 2 * m + s0 + 1) for m in range(N + 1)])
    a = np.concatenate([rep.a_seq, [1.0]])  # a[N+1] never multiplies anything real
    b = rep.b_seq
    hatP = np.zeros((N + 1, N + 1))  # hatP[n, m]
    hatP[0, :] = 1.0
    for m in range(N + 1):
        for n in range(N):
            prev = hatP[n - 1, m] if n > 0 else 0.0
            hatP[n + 1, m] = ((mu[m] - b[n]) * hatP[n, m] - a[n] * prev) / a[n + 1]
    P = hatP / hatP[:, [0]]
    return P.T  # rows j (variable), cols k (degree)


def overlap_from_rep(ctx, rep):
    """Double-ratio overlap table read off the eigenvectors of the tridiagonal
    generator; invariant under eigenvector sign flips."""
    p = rep.params.pvec()
    s0 = dual_offset(p)
    es = sym_eig(rep.L)
    mu = [sinh_q(ctx, 2 * m + s0 + 1) for m in range(rep.N + 1)]
    order = match_eigenvalues(es.values, mu)
    V = es.vectors[:, order]  # V[k, m] = <row k | eigvec m>
    N = rep.N
    T = np.empty((N + 1, N + 1))
    for m in range(N + 1):
        for n in range(N + 1):
            T[m, n] = V[n, m] / V[0, m] * V[0, 0] / V[n, 0]
    return T


# ---------------------------------------------------------------------------
# weights and norms

def rho(ctx, m, qp):
    al, be, ga, de, b = qp.alpha, qp.beta, qp.gamma, qp.delta, qp.base
    num = (qpoch(ctx, al * b, b, m) * qpoch(ctx, be * de * b, b, m)
           * qpoch(ctx, ga * b, b, m) * qpoch(ctx, ga * de * b, b, m)
           * (1 - ga * de * b**(2 * m + 1)))
    den = (qpoch(ctx, b, b, m) * qpoch(ctx, ga * de * b / al, b, m)
           * qpoch(ctx, ga * b / be, b, m) * qpoch(ctx, de * b, b, m)
           * (al * be * b)**m * (1 - ga * de * b))
    return num / den


def norm_main(ctx, n, qp):
    """n-dependent part of the squared norm."""
    al, be, ga, de, b = qp.alpha, qp.beta, qp.gamma, qp.delta, qp.base
    num = ((1 - al * be * b) * (ga * de * b)**n
           * qpoch(ctx, b, b, n) * qpoch(ctx, al * be * b / ga, b, n)
           * qpoch(ctx, al * b / de, b, n) * qpoch(ctx, be * b, b, n))
    den = ((1 - al * be * b**(2 * n + 1))
           * qpoch(ctx, al * b, b, n) * qpoch(ctx, al * be * b, b, n)
           * qpoch(ctx, be * de * b, b, n) * qpoch(ctx, ga * b, b, n))
    return num / den


def norm_prefactor_infprod(ctx, qp):
    """The n-independent infinite-product prefactor as printed in the source
    convention. Kept for the normalization adjudication; the mass prefactor
    below is the one that actually normalizes the orthogonality sums."""
    al, be, ga, de, b = qp.alpha, qp.beta, qp.gamma, qp.delta, qp.base
    num = (qpoch_inf(ctx, 1 / al, b) * qpoch_inf(ctx, ga / be, b)
           * qpoch_inf(ctx, de / al, b) * qpoch_inf(ctx, 1 / be, b)
           * qpoch_inf(ctx, ga * de * b * b, b))
    den = (qpoch_inf(ctx, 1 / (al * be * b), b) * qpoch_inf(ctx, ga * de * b / al, b)
           * qpoch_inf(ctx, ga * b / be, b) * qpoch_inf(ctx, de * b, b))
    return num / den


def total_mass(ctx, qp, N):
    return sum(rho(ctx, m, qp) for m in range(N + 1))


def weights(ctx, params_a, N):
    """w[j, k] such that sum_j w[j,k] P_k(j) P_{k'}(j) = delta_{k,k'}.

    The norm is mass-rescaled: h_k = total_mass * norm_main(k). Positivity is
    the caller's concern (report it, don't assume it)."""
    qp = params_from_roots(ctx, params_a.pvec())
    mass = total_mass(ctx, qp, N)
    return np.array([[rho(ctx, j, qp) / (mass * norm_main(ctx, k, qp))
                      for k in range(N + 1)] for j in range(N + 1)])


def weights_from_rep(ctx, rep):
    """Independent weight oracle from eigenvector components."""
    p = rep.params.pvec()
    s0 = dual_offset(p)
    es = sym_eig(rep.L)
    mu = [sinh_q(ctx, 2 * m + s0 + 1) for m in range(rep.N + 1)]
    order = match_eigenvalues(es.values, mu)
    V = es.vectors[:, order]
    N = rep.N
    return np.array([[abs(V[0, m] * V[n, 0])**2 / abs(V[0, 0])**2
                      for n in range(N + 1)] for m in range(N + 1)])


def orthogonality_defect(ctx, params_a, N, table=None):
    """Max deviation of the weighted Gram matrix from the identity."""
    if table is None:
        table = eval_table(ctx, params_a, N)
    w = weights(ctx, params_a, N)
    G = np.empty((N + 1, N + 1))
    for k in range(N + 1):
        for kp in range(N + 1):
            G[k, kp] = sum(w[j, k] * table[j, k] * table[j, kp]
                           for j in range(N + 1))
    return float(np.max(np.abs(G - np.eye(N + 1))))


# ---------------------------------------------------------------------------
# balanced-series transformation

def balance_defect(n, num, den, base):
    """Relative departure from the balance condition
    den0*den1*den2 = num1*num2*num3*base^(1-n) (num[0] = base^{-n})."""
    lhs = np.prod(den)
    rhs = np.prod(num[1:]) * base**(1 - n)
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def sears_transform(ctx, n, num, den, base, pivot=1, keep=0, tol=1e-10):
    """Rewrites a balanced terminating 4phi3 into an equal-valued one.

    num[0] must be base^{-n}; `pivot` picks which numerator parameter plays the
    distinguished role, `keep` which denominator parameter survives unchanged.
    Returns (prefactor, new_num, new_den) with
        phi43(num,den) = prefactor * phi43(new_num, new_den).
    """
    if balance_defect(n, num, den, base) > tol:
        raise ValueError("series is not balanced; transformation invalid")
    a = num[pivot]
    b, c = [num[i] for i in (1, 2, 3) if i != pivot]
    d = den[keep]
    e, f = [den[i] for i in range(3) if i != keep]
    pre = (qpoch(ctx, e / a, base, n) * qpoch(ctx, f / a, base, n)
           / (qpoch(ctx, e, base, n) * qpoch(ctx, f, base, n)) * a**n)
    new_num = [base**(-n), a, d / b, d / c]
    new_den = [d, a * base**(1 - n) / e, a * base**(1 - n) / f]
    return pre, new_num, new_den


def sears_value(ctx, n, num, den, base, **kw):
    pre, nn, dd = sears_transform(ctx, n, num, den, base, **kw)
    return pre * phi43(ctx, nn, dd, base, base, n)
