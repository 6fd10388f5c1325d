"""Small dense matrix utilities: q-commutators, symmetric eigendecomposition with a
fixed sign convention, block-wise refinement for degenerate operators, and the
scale-free residual norm used by every relation check."""
from dataclasses import dataclass

import numpy as np


@dataclass
class EigenSystem:
    values: np.ndarray        # ascending (or label-ordered after matching)
    vectors: np.ndarray       # orthonormal columns
    convention_tag: str = "max-entry-positive"


def qcomm(ctx, X, Y):
    """[X,Y]_q = q XY - q^{-1} YX."""
    if X.shape != Y.shape or X.shape[0] != X.shape[1]:
        raise ValueError("qcomm needs square matrices of equal size")
    q = ctx.q
    return q * (X @ Y) - (Y @ X) / q


def comm(X, Y):
    """[X,Y] = XY - YX."""
    if X.shape != Y.shape or X.shape[0] != X.shape[1]:
        raise ValueError("comm needs square matrices of equal size")
    return X @ Y - Y @ X


def rel_residual(terms):
    """||sum(terms)||_F / max(1, sum ||term||_F). Zero iff the terms cancel."""
    terms = [np.asarray(t) for t in terms]
    shape = terms[0].shape
    for t in terms:
        if t.shape != shape:
            raise ValueError("rel_residual terms must share a shape")
    tot = sum(terms)
    scale = max(1.0, sum(np.linalg.norm(t) for t in terms))
    return float(np.linalg.norm(tot) / scale)


def _fix_signs(V):
    W = V.copy()
    for j in range(W.shape[1]):
        i = int(np.argmax(np.abs(W[:, j])))  # first index on ties
        if W[i, j] < 0:
            W[:, j] = -W[:, j]
    return W


def sym_eig(A, sym_tol=1e-12):
    """Eigendecomposition of a symmetric matrix, ascending values, sign of each
    vector fixed so its largest-magnitude entry is positive."""
    A = np.asarray(A, dtype=float)
    scale = max(1.0, np.linalg.norm(A))
    if np.linalg.norm(A - A.T) / scale > sym_tol:
        raise ValueError("sym_eig input is not symmetric")
    vals, vecs = np.linalg.eigh(A)
    return EigenSystem(values=vals, vectors=_fix_signs(vecs))


def match_eigenvalues(values, expected, guard=1e-8):
    """Permutation taking computed eigenvalues onto the expected labels.

    Each expected label must have a computed value within guard, and the
    assignment must be injective (simple spectrum assumption)."""
    order = []
    for x in expected:
        j = int(np.argmin(np.abs(values - x)))
        if abs(values[j] - x) > guard:
            raise ValueError(
                "no eigenvalue within %g of expected label %r" % (guard, x))
        order.append(j)
    if len(set(order)) != len(order):
        raise ValueError("eigenvalue matching is not injective; spectrum too "
                         "degenerate for the requested labels")
    return order


def block_refine(a_values, B, basis, leak_tol=1e-10, group_tol=1e-8):
    """Given eigenvector columns `basis` of a first operator with per-column
    eigenvalues `a_values`, diagonalize the restriction of B inside each
    eigenspace. B must preserve the eigenspaces (checked)."""
    a_values = np.asarray(a_values, dtype=float)
    basis = np.asarray(basis, dtype=float)
    n = basis.shape[1]
    used = np.zeros(n, dtype=bool)
    out_vals = np.empty(n)
    out_vecs = np.empty_like(basis)
    pos = 0
    for i in range(n):
        if used[i]:
            continue
        grp = [j for j in range(n)
               if not used[j] and abs(a_values[j] - a_values[i]) <= group_tol]
        for j in grp:
            used[j] = True
        W = basis[:, grp]
        BW = B @ W
        sub = W.T @ BW
        leak = BW - W @ sub
        if np.linalg.norm(leak) / max(1.0, np.linalg.norm(BW)) > leak_tol:
            raise ValueError("operator does not preserve the eigenspace blocks")
        sub = 0.5 * (sub + sub.T)
        vals, vecs = np.linalg.eigh(sub)
        out_vals[pos:pos + len(grp)] = vals
        out_vecs[:, pos:pos + len(grp)] = W @ vecs
        pos += len(grp)
    return EigenSystem(values=out_vals, vectors=_fix_signs(out_vecs),
                       convention_tag="block-refined")
