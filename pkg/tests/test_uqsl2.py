import numpy as np
import pytest

from awlab.qcore import QContext, sinh_q, cosh_q
from awlab.linalg import rel_residual
from awlab import aw3, uqsl2

ctx = QContext(q=0.7)


@pytest.mark.parametrize("N", [1, 3, 5, 8])
def test_irrep_relations(N):
    rep = uqsl2.build_irrep(ctx, N)
    for name, r in uqsl2.irrep_relation_residuals(ctx, rep).items():
        assert r < 1e-12, name


@pytest.mark.parametrize("N", [1, 4, 7])
def test_casimir_scalar_value(N):
    rep = uqsl2.build_irrep(ctx, N)
    Om = uqsl2.casimir_omega(ctx, rep)
    assert np.max(np.abs(Om - cosh_q(ctx, N + 1) * np.eye(N + 1))) < 1e-12
    assert rel_residual([Om - uqsl2.casimir_omega_alt(ctx, rep)]) < 1e-13


def test_canonical_coeffs_products():
    s1 = sinh_q(ctx, 1)
    c = uqsl2.canonical_coeffs(ctx, 0.3, 0.4, 0.5)
    assert c.aE * c.aF == pytest.approx(s1**2, rel=1e-12)
    assert c.bE * c.bF == pytest.approx(s1**2, rel=1e-12)
    assert c.theta(ctx) == pytest.approx(cosh_q(ctx, 0.5), rel=1e-12)
    assert c.a_s == pytest.approx(sinh_q(ctx, 0.3), rel=1e-12)


@pytest.mark.parametrize("N", [2, 4, 8])
def test_matrix_structure_relation_single_factor(N):
    # the defining relation with the Casimir passed as a matrix entry
    rep = uqsl2.build_irrep(ctx, N)
    Om = uqsl2.casimir_omega(ctx, rep)
    for c in [uqsl2.canonical_coeffs(ctx, 0.3, 0.4, 0.5),
              uqsl2.canonical_coeffs(ctx, -0.2, 0.9, 1.1, s=0.8)]:
        YK, YL = uqsl2.build_twisted(ctx, rep, c)
        A = (c.a_s, c.bt, c.theta(ctx), Om, c.bE * c.bF, c.aE * c.aF)
        assert aw3.aw_residual_max(ctx, YK, YL, A) < 1e-10


@pytest.mark.parametrize("dims", [(1, 1), (2, 3), (5, 4), (5, 5)])
def test_tensor_relation_table(dims):
    N1, N2 = dims
    r1 = uqsl2.build_irrep(ctx, N1)
    r2 = uqsl2.build_irrep(ctx, N2)
    for c in [uqsl2.canonical_coeffs(ctx, 0.3, 0.4, 0.5),
              uqsl2.canonical_coeffs(ctx, 0.5, 0.3, 0.8, s=1.3)]:
        gens = uqsl2.build_tensor(ctx, r1, r2, c)
        for rep in uqsl2.verify_table1(ctx, gens):
            assert rep.passed, (rep.check_id, rep.residual)


def test_delta_casimir_closed_form():
    c = uqsl2.canonical_coeffs(ctx, 0.3, 0.4, 0.5)
    gens = uqsl2.build_tensor(ctx, uqsl2.build_irrep(ctx, 3),
                              uqsl2.build_irrep(ctx, 2), c)
    assert rel_residual([gens.dOmega
                         - uqsl2.delta_omega_closed_form(ctx, gens)]) < 1e-12


def test_sign_and_theta_adjudications():
    c = uqsl2.canonical_coeffs(ctx, 0.3, 0.4, 0.5)
    gens = uqsl2.build_tensor(ctx, uqsl2.build_irrep(ctx, 3),
                              uqsl2.build_irrep(ctx, 2), c)
    for rep in uqsl2.adjudicate_tensor_signs(ctx, gens):
        assert rep.passed and "resolved" in rep.notes
    rep = uqsl2.adjudicate_theta(ctx, gens)
    assert rep.passed and "two-term" in rep.notes


def test_embedding_solver_roundtrip():
    rng = np.random.default_rng(7)
    for _ in range(10):
        th, a_s, bt = rng.uniform(-1.5, 1.5, 3)
        aEaF, bEbF = rng.uniform(0.3, 2.0, 2)
        Om0 = rng.uniform(1.5, 3.0)
        s = uqsl2.embedding_constants(ctx, aEaF, bEbF, th, a_s, bt, Om0)
        sols = uqsl2.solve_embedding(ctx, s, Om0)
        best = min(sol["residual"] for sol in sols)
        assert best < 1e-8
        # and the original twist data is among the solutions
        match = min(abs(sol["theta"] - th) + abs(sol["a_s"] - a_s)
                    + abs(sol["bt"] - bt) for sol in sols)
        assert match < 1e-6


def test_embedding_excluded_case():
    with pytest.raises(uqsl2.NoSolution):
        uqsl2.solve_embedding(
            ctx, aw3.AWStructure(B=0.0, C0=0.0, C1=0.0, D0=0.0, D1=1.0), 2.0)
    with pytest.raises(uqsl2.NoSolution):
        uqsl2.solve_embedding(
            ctx, aw3.AWStructure(B=0.0, C0=0.0, C1=0.0, D0=0.7, D1=0.0), 2.0)


def test_special_coefficient_identities():
    reports = uqsl2.special_aw_check(ctx, 4)
    by_id = {r.check_id: r for r in reports}
    assert by_id["special_relation"].passed
    assert by_id["special_cyclic"].passed
    assert "interchanged" in by_id["special_cyclic"].notes
    # the simplified scalar comparison is warning-class: reported, never fatal
    assert by_id["special_simplified_casimir"].warning
    assert by_id["special_simplified_casimir"].passed


@pytest.mark.parametrize("dims", [(1, 1), (2, 2), (3, 2), (4, 4)])
def test_four_factor_relations(dims):
    N1, N2 = dims
    relA, relB, relC = uqsl2.four_factor_relations(ctx, N1, N2)
    assert max(relA, relB, relC) < 1e-9


def test_four_factor_sensitivity():
    rels = uqsl2.four_factor_relations(ctx, 2, 2, beta_perturb=0.01)
    assert max(rels) > 1e-3
