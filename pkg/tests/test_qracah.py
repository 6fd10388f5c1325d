import numpy as np
import pytest

from awlab.qcore import QContext, phi43
from awlab import aw3, qracah

ctx = QContext(q=0.7)


def params_for(N, a=(0.3, 0.4, 0.5)):
    return aw3.AlphaParams(a[0], a[1], a[2], -(N + 1.0))


def alphas_for(N):
    return aw3.find_valid_alphas(ctx, N, count=2)


def test_normalization_rows():
    pa = params_for(4)
    T = qracah.eval_table(ctx, pa, 4)
    assert np.allclose(T[0, :], 1.0, atol=1e-13)
    assert np.allclose(T[:, 0], 1.0, atol=1e-13)


@pytest.mark.parametrize("N", [2, 4, 6, 8])
def test_triple_agreement(N):
    for a in alphas_for(N):
        pa = params_for(N, a)
        rep = aw3.build_rep(ctx, pa, N)
        T1 = qracah.eval_table(ctx, pa, N)
        T2 = qracah.recurrence_eval(ctx, pa, N)
        T3 = qracah.overlap_from_rep(ctx, rep)
        scale = max(1.0, np.max(np.abs(T1)))
        assert np.max(np.abs(T1 - T2)) / scale < 1e-8
        assert np.max(np.abs(T1 - T3)) / scale < 1e-8
        assert np.max(np.abs(T2 - T3)) / scale < 1e-8


@pytest.mark.parametrize("N", [2, 4, 6])
def test_orthogonality(N):
    for a in alphas_for(N):
        pa = params_for(N, a)
        assert qracah.orthogonality_defect(ctx, pa, N) < 1e-9


def test_weights_match_eigenvector_oracle():
    N = 5
    a = alphas_for(N)[0]
    pa = params_for(N, a)
    rep = aw3.build_rep(ctx, pa, N)
    w = qracah.weights(ctx, pa, N)
    w_rep = qracah.weights_from_rep(ctx, rep)
    assert np.max(np.abs(w - w_rep)) < 1e-8


def test_weights_sum_to_one_in_degree_zero():
    # h_0 is the total mass, so column 0 of the weights sums to 1
    pa = params_for(4)
    w = qracah.weights(ctx, pa, 4)
    assert np.sum(w[:, 0]) == pytest.approx(1.0, rel=1e-10)


def test_duality_swaps_roles():
    # evaluating with swapped degree/variable through the dual parameter set
    # reproduces the transposed table
    N = 4
    pa = params_for(N)
    p = pa.pvec()
    s0 = qracah.dual_offset(p)
    sig = sum(p)
    dual_p = (sig / 2 - p[1], sig / 2 - p[0], sig / 2 - p[3], sig / 2 - p[2])
    T = qracah.eval_table(ctx, pa, N)
    qp_dual = qracah.params_from_roots(ctx, dual_p)
    for n in range(N + 1):
        for j in range(N + 1):
            assert qracah.qracah_eval(ctx, j, n, qp_dual) == pytest.approx(
                T[j, n], rel=1e-9, abs=1e-9)
    assert s0 == pytest.approx(dual_p[0], rel=1e-12)


def test_balance_defect_and_transform_guard():
    qp = qracah.params_from_roots(ctx, params_for(4).pvec())
    b = qp.base
    n = 2
    num = [b**(-n), qp.alpha * qp.beta * b**(n + 1), b**(-1),
           qp.gamma * qp.delta * b**2]
    den = [qp.alpha * b, qp.beta * qp.delta * b, qp.gamma * b]
    assert qracah.balance_defect(n, num, den, b) < 1e-12
    with pytest.raises(ValueError):
        qracah.sears_transform(ctx, n, num, [0.9, 0.8, 0.7], b)


def test_sears_transform_preserves_value():
    qp = qracah.params_from_roots(ctx, params_for(5).pvec())
    b = qp.base
    for n in (1, 2, 3):
        for j in (1, 2):
            num = [b**(-n), qp.alpha * qp.beta * b**(n + 1), b**(-j),
                   qp.gamma * qp.delta * b**(j + 1)]
            den = [qp.alpha * b, qp.beta * qp.delta * b, qp.gamma * b]
            direct = phi43(ctx, num, den, b, b, n)
            for keep in (0, 1, 2):
                got = qracah.sears_value(ctx, n, num, den, b, keep=keep)
                assert got == pytest.approx(direct, rel=1e-10, abs=1e-12)


def test_grid_values_match_spectrum():
    pa = params_for(4)
    qp = qracah.params_from_roots(ctx, pa.pvec())
    # y_grid is an affine image of the hyperbolic-sine spectrum
    p = pa.pvec()
    s0 = qracah.dual_offset(p)
    from awlab.qcore import sinh_q
    for j in range(5):
        mu = sinh_q(ctx, 2 * j + s0 + 1)
        y = qracah.y_grid(qp, j)
        # both encode the same grid point: y = c * mu + d for fixed c, d
        y0 = qracah.y_grid(qp, 0)
        mu0 = sinh_q(ctx, s0 + 1)
        y1 = qracah.y_grid(qp, 1)
        mu1 = sinh_q(ctx, 2 + s0 + 1)
        c = (y1 - y0) / (mu1 - mu0)
        d = y0 - c * mu0
        assert y == pytest.approx(c * mu + d, rel=1e-10)
