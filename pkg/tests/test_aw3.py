import numpy as np
import pytest

from awlab.qcore import QContext, sinh_q, cosh_q
from awlab.linalg import rel_residual
from awlab import aw3

ctx = QContext(q=0.7)


def make_params(N, a=(0.3, 0.4, 0.5)):
    return aw3.AlphaParams(a[0], a[1], a[2], -(N + 1.0))


def test_structure_from_alpha_matches_roots():
    pa = make_params(4)
    s = aw3.structure_from_alpha(ctx, pa)
    B, D0, D1 = aw3.structure_from_roots(ctx, pa.pvec())
    assert s.B == pytest.approx(B, rel=1e-12)
    assert s.D0 == pytest.approx(D0, rel=1e-12)
    assert s.D1 == pytest.approx(D1, rel=1e-12)
    s2 = sinh_q(ctx, 2)
    assert s.C0 == pytest.approx(-s2**2, rel=1e-12)


@pytest.mark.parametrize("N", [1, 2, 4, 6, 8])
def test_build_rep_satisfies_relations(N):
    for a in aw3.find_valid_alphas(ctx, N, count=2):
        pa = make_params(N, a)
        rep = aw3.build_rep(ctx, pa, N)
        assert aw3.aw_residual_max(ctx, rep.K, rep.L, pa.avec(ctx)) < 1e-10


def test_build_rep_requires_truncation():
    with pytest.raises(ValueError):
        aw3.build_rep(ctx, aw3.AlphaParams(0.3, 0.4, 0.5, -3.0), 4)


def test_negative_weight_raised():
    found = None
    for a0 in np.arange(-3, 3, 0.37):
        pa = aw3.AlphaParams(float(a0), 2.5, -2.0, -4.0)
        if not aw3.validate_positivity(ctx, pa, 3):
            found = pa
            break
    assert found is not None
    with pytest.raises(aw3.NegativeWeight):
        aw3.build_rep(ctx, found, 3)


def test_boundary_coefficient_snaps_to_zero():
    pa = make_params(5)
    al = (pa.alpha0, pa.alpha1, pa.alpha2, pa.alpha3)
    # at the bottom of the ladder (k=0) the coefficient is exactly 0
    y = -5 + pa.alpha0
    assert aw3.a_sq(ctx, y, al) == 0.0


def test_casimir_is_central_and_scalar():
    for N in (2, 4, 6):
        pa = make_params(N)
        rep = aw3.build_rep(ctx, pa, N)
        s = aw3.structure_from_alpha(ctx, pa)
        Q = aw3.casimir_Q(ctx, rep.K, rep.L, s)
        assert rel_residual([Q @ rep.K - rep.K @ Q]) < 1e-10
        assert rel_residual([Q @ rep.L - rep.L @ Q]) < 1e-10
        Q0 = aw3.casimir_value_from_roots(ctx, pa.pvec(), s)
        assert np.max(np.abs(Q - Q0 * np.eye(N + 1))) < 1e-9 * max(1, abs(Q0))


def test_casimir_legacy_form_differs():
    # kept as a warning-class comparison: the alternative closed form does not
    # reproduce the matrix value
    pa = make_params(4)
    rep = aw3.build_rep(ctx, pa, 4)
    s = aw3.structure_from_alpha(ctx, pa)
    Q = aw3.casimir_Q(ctx, rep.K, rep.L, s)
    Qleg = aw3.casimir_value_legacy(ctx, pa.pvec(), s)
    assert abs(Q[0, 0] - Qleg) > 1e-3


def test_b_coef_first_scalar_is_required():
    # dropping the leading scalar breaks the relations at O(1)
    pa = make_params(4)
    N = 4
    al = (pa.alpha0, pa.alpha1, pa.alpha2, pa.alpha3)
    rep = aw3.build_rep(ctx, pa, N)
    L_bad = rep.L.copy()
    for k in range(N + 1):
        y = (2 * k - N) + pa.alpha0
        L_bad[k, k] = aw3.b_coef(ctx, y, al, include_first_scalar=False)
    assert aw3.aw_residual_max(ctx, rep.K, L_bad, pa.avec(ctx)) > 1e-3


def test_char_poly_roots():
    pa = make_params(4)
    p = pa.pvec()
    s = aw3.structure_from_alpha(ctx, pa)
    Q0 = aw3.casimir_value_from_roots(ctx, p, s)
    coeffs, roots = aw3.char_poly(ctx, s, Q0)
    c1 = cosh_q(ctx, 1)
    expected = np.sort([c1 * sinh_q(ctx, pk) for pk in p])
    assert np.allclose(np.sort(roots.real), expected, atol=1e-8)


def test_adjudications_resolve_uniquely():
    for a in [(0.3, 0.4, 0.5), (0.7, 0.2, 1.1)]:
        pa = make_params(5, a)
        r1 = aw3.adjudicate_char_variable(ctx, pa)
        assert r1.passed and "resolved" in r1.notes
        r2 = aw3.adjudicate_dual_roots(ctx, pa)
        assert r2.passed and "symmetric" in r2.notes


def test_dual_spectrum_matches_eigenvalues():
    pa = make_params(5, aw3.find_valid_alphas(ctx, 5, count=1)[0])
    rep = aw3.build_rep(ctx, pa, 5)
    p = pa.pvec()
    s0 = sum(p) / 2 - p[1]
    mu = np.sort([sinh_q(ctx, 2 * m + s0 + 1) for m in range(6)])
    ev = np.sort(np.linalg.eigvalsh(rep.L))
    assert np.max(np.abs(ev - mu)) < 1e-10


def test_spectrum_identities():
    pa = make_params(6)
    rep = aw3.build_rep(ctx, pa, 6)
    s2 = sinh_q(ctx, 2)
    assert aw3.spectrum_identities(ctx, rep.lam, -s2**2) < 1e-12
    # and they have power: a wrong spectrum fails
    bad = rep.lam.copy()
    bad[2] += 1e-3
    assert aw3.spectrum_identities(ctx, bad, -s2**2) > 1e-5


def test_find_valid_alphas_deterministic():
    out1 = aw3.find_valid_alphas(ctx, 4, count=2)
    out2 = aw3.find_valid_alphas(ctx, 4, count=2)
    assert out1 == out2 and len(out1) == 2
    for a in out1:
        assert aw3.validate_positivity(ctx, make_params(4, a), 4)


def test_tilde_coeffs_sign_flip():
    pa = make_params(4)
    al = (pa.alpha0, pa.alpha1, pa.alpha2, pa.alpha3)
    y = 1.3
    swapped = (pa.alpha0, pa.alpha2, pa.alpha1, pa.alpha3)
    assert aw3.tilde_a_sq(ctx, y, al) == pytest.approx(
        -aw3.a_sq(ctx, y, swapped), rel=1e-13)
