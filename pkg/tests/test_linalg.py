import numpy as np
import pytest

from awlab.qcore import QContext
from awlab.linalg import (qcomm, comm, rel_residual, sym_eig,
                          match_eigenvalues, block_refine)

ctx = QContext(q=0.7)
rng = np.random.default_rng(42)


def test_qcomm_definition():
    X = rng.normal(size=(4, 4))
    Y = rng.normal(size=(4, 4))
    ref = ctx.q * X @ Y - Y @ X / ctx.q
    assert np.allclose(qcomm(ctx, X, Y), ref)
    with pytest.raises(ValueError):
        qcomm(ctx, X, rng.normal(size=(3, 3)))


def test_comm_antisymmetry():
    X = rng.normal(size=(5, 5))
    Y = rng.normal(size=(5, 5))
    assert np.allclose(comm(X, Y), -comm(Y, X))


def test_rel_residual_scale_free():
    A = rng.normal(size=(6, 6))
    assert rel_residual([A, -A]) == 0.0
    # scaling both terms leaves the residual of a near-cancellation bounded
    r1 = rel_residual([A, -A + 1e-8])
    r2 = rel_residual([1e6 * A, 1e6 * (-A + 1e-8)])
    assert r1 < 1e-7 and r2 < 1e-7
    with pytest.raises(ValueError):
        rel_residual([A, np.eye(3)])


def test_sym_eig_convention_and_symmetry_check():
    A = rng.normal(size=(7, 7))
    A = A + A.T
    es = sym_eig(A)
    # reconstruction + sign convention
    assert np.allclose(es.vectors @ np.diag(es.values) @ es.vectors.T, A)
    for j in range(7):
        col = es.vectors[:, j]
        assert col[np.argmax(np.abs(col))] > 0
    with pytest.raises(ValueError):
        sym_eig(rng.normal(size=(4, 4)))


def test_match_eigenvalues():
    values = np.array([-1.0, 0.5, 2.0])
    assert match_eigenvalues(values, [2.0, -1.0, 0.5]) == [2, 0, 1]
    with pytest.raises(ValueError):
        match_eigenvalues(values, [5.0])
    with pytest.raises(ValueError):
        # two labels fall on the same computed value -> not injective
        match_eigenvalues(values, [0.5, 0.5])


def test_block_refine_degenerate_spectrum():
    # A has a doubly degenerate eigenvalue; B resolves it
    Q, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    A = Q @ np.diag([1.0, 1.0, 3.0, 5.0]) @ Q.T
    B = Q @ np.diag([7.0, 2.0, 4.0, 6.0]) @ Q.T
    esA = sym_eig(A)
    es = block_refine(esA.values, B, esA.vectors)
    got = sorted(es.values)
    assert np.allclose(got, [2.0, 4.0, 6.0, 7.0])
    # refined vectors still diagonalize A
    back = es.vectors.T @ A @ es.vectors
    assert np.max(np.abs(back - np.diag(np.diag(back)))) < 1e-10


def test_block_refine_leakage_detected():
    A = np.diag([1.0, 1.0, 3.0])
    B = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    es = sym_eig(A)
    with pytest.raises(ValueError):
        block_refine(es.values, B, es.vectors)
