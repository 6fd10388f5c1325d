"""Command-line harness: verification suites, table generation, and parameter
sweeps, with structured JSON reports.

Exit codes: 0 all non-warning checks pass, 1 at least one check failed or a
numerical routine errored (partial report still written), 2 usage or
configuration error.
"""
import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict, fields

import numpy as np

from .qcore import QContext, sinh_q, cosh_q, phi43
from .linalg import rel_residual
from .report import check, CheckReport, dump_json
from . import aw3, qracah, uqsl2, rank2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    q: float = 0.7
    N: int = 4
    N1: int = 2
    N2: int = 2
    alpha0: float = 0.3
    alpha1: float = 0.4
    alpha2: float = 0.5
    tol: float = None
    precision: str = "double"
    out: str = None
    suite: str = "all"
    corrupt: bool = False

    def validate(self):
        if not (0 < self.q < 1):
            raise ConfigError("q must satisfy 0 < q < 1 (got %r)" % (self.q,))
        for name in ("N", "N1", "N2"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ConfigError("%s must be a non-negative integer (got %r)"
                                  % (name, v))
        if self.precision not in ("double", "extended"):
            raise ConfigError("precision must be 'double' or 'extended'")
        if self.suite not in ("aw3", "uq", "rank2", "all"):
            raise ConfigError("suite must be one of aw3|uq|rank2|all")

    def context(self):
        return QContext(q=self.q, precision=self.precision)


_INT_KEYS = {"N", "N1", "N2"}
_FLOAT_KEYS = {"q", "alpha0", "alpha1", "alpha2", "tol"}
_STR_KEYS = {"precision", "out", "suite"}
_BOOL_KEYS = {"corrupt"}


def _coerce(key, raw):
    raw = raw.strip()
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    if key in _BOOL_KEYS:
        if raw.lower() in ("1", "true", "yes"):
            return True
        if raw.lower() in ("0", "false", "no"):
            return False
        raise ConfigError("bad boolean for %s: %r" % (key, raw))
    return raw


def parse_config_file(path):
    """Line-based `key = value` file; '#' starts a comment; unknown keys are
    rejected."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected 'key = value'" % (path, ln))
            key, raw = [s.strip() for s in line.split("=", 1)]
            if key not in known:
                raise ConfigError("%s:%d: unknown key %r" % (path, ln, key))
            out[key] = _coerce(key, raw)
    return out


def load_config(args):
    cfg = RunConfig()
    if getattr(args, "config", None):
        for k, v in parse_config_file(args.config).items():
            setattr(cfg, k, v)
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None and (f.name != "corrupt" or v):
            setattr(cfg, f.name, v)
    env_prec = os.environ.get("AWLAB_PRECISION")
    if env_prec:
        cfg.precision = env_prec
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# verification suites

def _alpha_sets_rank1(ctx, N, count=2):
    sets = aw3.find_valid_alphas(ctx, N, count=count)
    if len(sets) < count:
        raise ConfigError("could not find %d valid parameter sets for N=%d"
                          % (count, N))
    return sets


def suite_aw3(ctx, cfg):
    """Rank-1 suite: representation relations, Casimir, spectra, polynomial
    adjudications, and the full orthogonal-function stack."""
    checks = []
    N = cfg.N
    tol = cfg.tol or 1e-10
    s1 = sinh_q(ctx, 1)
    s2 = sinh_q(ctx, 2)
    for a0, a1, a2 in _alpha_sets_rank1(ctx, N):
        pa = aw3.AlphaParams(a0, a1, a2, -(N + 1.0))
        tag = {"q": ctx.q, "N": N, "alpha": (a0, a1, a2)}
        rep = aw3.build_rep(ctx, pa, N)
        if cfg.corrupt:
            rep.L[0, 0] += 1e-3
        avec = pa.avec(ctx)
        checks.append(check("aw3_relations",
                            aw3.aw_residual_max(ctx, rep.K, rep.L, avec),
                            tol, params=tag))
        s = aw3.structure_from_alpha(ctx, pa)
        Q = aw3.casimir_Q(ctx, rep.K, rep.L, s)
        checks.append(check("aw3_casimir_central",
                            max(rel_residual([Q @ rep.K, -(rep.K @ Q)]),
                                rel_residual([Q @ rep.L, -(rep.L @ Q)])),
                            tol, params=tag))
        p = pa.pvec()
        Q0 = aw3.casimir_value_from_roots(ctx, p, s)
        checks.append(check("aw3_casimir_value",
                            float(np.max(np.abs(Q - Q0 * np.eye(N + 1))))
                            / max(1.0, abs(Q0)),
                            cfg.tol or 1e-9, params=tag))
        Qleg = aw3.casimir_value_legacy(ctx, p, s)
        checks.append(check("aw3_casimir_value_alt", abs(Q[0, 0] - Qleg),
                            1e-9, params=tag, warning=True,
                            notes="alternative closed form; known not to "
                                  "match the matrix value"))
        checks.append(check("aw3_spectrum_identities",
                            aw3.spectrum_identities(ctx, rep.lam, -s2**2),
                            tol, params=tag))
        checks.append(aw3.adjudicate_char_variable(ctx, pa))
        checks.append(aw3.adjudicate_dual_roots(ctx, pa))
        # dual spectrum actually appears as eigenvalues of L
        s0 = qracah.dual_offset(p)
        mu = sorted(sinh_q(ctx, 2 * m + s0 + 1) for m in range(N + 1))
        ev = np.sort(np.linalg.eigvalsh(rep.L))
        checks.append(check("aw3_dual_spectrum",
                            float(np.max(np.abs(ev - np.array(mu))))
                            / max(1.0, float(np.max(np.abs(ev)))),
                            tol if not cfg.corrupt else tol, params=tag))
        # orthogonal-function stack: triple agreement + orthogonality
        T_series = qracah.eval_table(ctx, pa, N)
        T_rec = qracah.recurrence_eval(ctx, pa, N)
        T_rep = qracah.overlap_from_rep(ctx, rep)
        scale = max(1.0, float(np.max(np.abs(T_series))))
        checks.append(check("qracah_series_vs_recurrence",
                            float(np.max(np.abs(T_series - T_rec))) / scale,
                            1e-8, params=tag))
        checks.append(check("qracah_series_vs_overlaps",
                            float(np.max(np.abs(T_series - T_rep))) / scale,
                            1e-8, params=tag))
        checks.append(check("qracah_recurrence_vs_overlaps",
                            float(np.max(np.abs(T_rec - T_rep))) / scale,
                            1e-8, params=tag))
        checks.append(check("qracah_orthogonality",
                            qracah.orthogonality_defect(ctx, pa, N,
                                                        table=T_series),
                            1e-9, params=tag))
        w = qracah.weights(ctx, pa, N)
        w_rep = qracah.weights_from_rep(ctx, rep)
        checks.append(check("qracah_weights_vs_eigvecs",
                            float(np.max(np.abs(w - w_rep))),
                            1e-8, params=tag))
        # balanced-series transformation keeps the value
        qp = qracah.params_from_roots(ctx, p)
        num = [qp.base**(-2), qp.alpha * qp.beta * qp.base**3,
               qp.base**(-1), qp.gamma * qp.delta * qp.base**2]
        den = [qp.alpha * qp.base, qp.beta * qp.delta * qp.base,
               qp.gamma * qp.base]
        direct = phi43(ctx, num, den, qp.base, qp.base, 2)
        checks.append(check("qracah_series_transform_value",
                            abs(qracah.sears_value(ctx, 2, num, den, qp.base)
                                - direct) / max(1.0, abs(direct)),
                            1e-10, params=tag))
    return checks


def suite_uq(ctx, cfg):
    """Tensor-factor suite: irrep relations, Casimirs, the five-row relation
    table with adjudications, the matrix-structure relation, the embedding
    solver, and the bracket-identity families."""
    checks = []
    tol = cfg.tol or 1e-10
    N1, N2 = cfg.N1, cfg.N2
    rep1 = uqsl2.build_irrep(ctx, N1)
    rep2 = uqsl2.build_irrep(ctx, N2)
    for name, r in uqsl2.irrep_relation_residuals(ctx, rep1).items():
        checks.append(check("uq_irrep_" + name, r, tol,
                            params={"N": N1}))
    Om = uqsl2.casimir_omega(ctx, rep1)
    checks.append(check("uq_casimir_scalar",
                        rel_residual([Om - cosh_q(ctx, N1 + 1)
                                      * np.eye(N1 + 1)]),
                        tol, params={"N": N1}))
    checks.append(check("uq_casimir_orderings",
                        rel_residual([Om - uqsl2.casimir_omega_alt(ctx, rep1)]),
                        tol, params={"N": N1}))
    coeff_sets = [uqsl2.canonical_coeffs(ctx, cfg.alpha0, cfg.alpha1,
                                         cfg.alpha2),
                  uqsl2.canonical_coeffs(ctx, cfg.alpha0 + 0.2,
                                         cfg.alpha1 - 0.1, cfg.alpha2 + 0.3,
                                         s=1.3)]
    for ci, c in enumerate(coeff_sets):
        gens = uqsl2.build_tensor(ctx, rep1, rep2, c)
        if cfg.corrupt:
            gens.dYL[0, 0] += 1e-3
        for r in uqsl2.verify_table1(ctx, gens, tol=tol):
            r.params.update({"N1": N1, "N2": N2, "coeff_set": ci})
            checks.append(r)
        if ci == 0:
            checks.extend(uqsl2.adjudicate_tensor_signs(ctx, gens, tol=tol))
            checks.append(uqsl2.adjudicate_theta(ctx, gens, tol=tol))
            checks.append(check(
                "uq_delta_casimir_closed_form",
                rel_residual([gens.dOmega
                              - uqsl2.delta_omega_closed_form(ctx, gens)]),
                tol))
        # matrix-structure relation on a single factor (Casimir as a matrix)
        YK, YL = uqsl2.build_twisted(ctx, rep1, c)
        A = (c.a_s, c.bt, c.theta(ctx), Om, c.bE * c.bF, c.aE * c.aF)
        checks.append(check("uq_matrix_structure_relation",
                            aw3.aw_residual_max(ctx, YK, YL, A), tol,
                            params={"N": N1, "coeff_set": ci}))
    # embedding solver round-trips
    rng = np.random.default_rng(20240817)
    worst = 0.0
    for _ in range(10):
        th, a_s, bt = rng.uniform(-1.5, 1.5, 3)
        aEaF, bEbF = rng.uniform(0.3, 2.0, 2)
        Om0 = rng.uniform(1.5, 3.0)
        s = uqsl2.embedding_constants(ctx, aEaF, bEbF, th, a_s, bt, Om0)
        sols = uqsl2.solve_embedding(ctx, s, Om0)
        worst = max(worst, min(sol["residual"] for sol in sols))
    checks.append(check("uq_embedding_roundtrip", worst, 1e-8))
    s1 = sinh_q(ctx, 1)
    c1 = cosh_q(ctx, 1)
    excluded = aw3.AWStructure(B=0.0, C0=0.0, C1=0.0, D0=0.0, D1=1.0)
    try:
        uqsl2.solve_embedding(ctx, excluded, 2.0)
        checks.append(check("uq_embedding_excluded_case", 1.0, 0.0,
                            notes="expected NoSolution"))
    except uqsl2.NoSolution:
        checks.append(check("uq_embedding_excluded_case", 0.0, 0.0,
                            notes="NoSolution raised as required"))
    checks.extend(uqsl2.special_aw_check(ctx, min(cfg.N, 4), tol=tol))
    relA, relB, relC = uqsl2.four_factor_relations(ctx, min(N1, 4),
                                                   min(N2, 4))
    checks.append(check("uq_four_factor_relations", max(relA, relB, relC),
                        cfg.tol or 1e-9, params={"N1": N1, "N2": N2}))
    pA, pB, pC = uqsl2.four_factor_relations(ctx, min(N1, 4), min(N2, 4),
                                             beta_perturb=0.01)
    sens = max(pA, pB, pC)
    checks.append(check("uq_four_factor_sensitivity",
                        1e-3 / sens if sens > 0 else 2.0, 1.0,
                        notes="perturbed residual %.3e must exceed 1e-3"
                              % sens))
    return checks


_RANK2_FALLBACK_ALPHA = (-1.5, -1.3, 0.1)


def _rank2_alpha(ctx, cfg, bivariate=False):
    alpha = (cfg.alpha0, cfg.alpha1, cfg.alpha2)
    if rank2.admissible(ctx, *alpha, cfg.N1, cfg.N2, bivariate=bivariate):
        return alpha
    if rank2.admissible(ctx, *_RANK2_FALLBACK_ALPHA, cfg.N1, cfg.N2,
                        bivariate=bivariate):
        return _RANK2_FALLBACK_ALPHA
    found = rank2.find_admissible_alpha(ctx, cfg.N1, cfg.N2,
                                        bivariate=bivariate)
    if not found:
        raise ConfigError("no admissible parameter set found for grid "
                          "(%d,%d)" % (cfg.N1, cfg.N2))
    return found[0]


def suite_rank2(ctx, cfg):
    checks = []
    tol = cfg.tol or 1e-9
    alpha = _rank2_alpha(ctx, cfg)
    rep = rank2.build_aw2(ctx, cfg.N1, cfg.N2, alpha)
    if cfg.corrupt:
        rep.L2[0, 0] += 1e-3
    tag = {"N1": cfg.N1, "N2": cfg.N2, "alpha": alpha}
    for r in rank2.verify_aw2_relations(ctx, rep, tol=tol):
        r.params.update(tag)
        checks.append(r)
    for r in rank2.stencil_checks(ctx, rep):
        r.params.update(tag)
        checks.append(r)
    checks.append(rank2.adjudicate_mixed_relation_signs(ctx, rep, tol=tol))
    # the stencil-scalar reading needs asymmetric dimensions to discriminate
    checks.append(rank2.adjudicate_a32(ctx, 3, 2, _RANK2_FALLBACK_ALPHA,
                                       tol=tol))
    # negative control: a perturbed diagonal entry must be detected
    pert = rank2.build_aw2(ctx, cfg.N1, cfg.N2, alpha)
    pert.L2[0, 0] += 1e-3
    worst = rank2.worst_relation_residual(ctx, pert)
    checks.append(check("rank2_negative_control",
                        1e-5 / worst if worst > 0 else 2.0, 1.0,
                        params=tag,
                        notes="perturbed residual %.3e must exceed 1e-5"
                              % worst))
    # bivariate stack (needs the second block family positive too)
    try:
        balpha = _rank2_alpha(ctx, cfg, bivariate=True)
    except ConfigError:
        balpha = None
        checks.append(check("rank2_bivariate_admissible", 1.0, 0.5,
                            params=tag, warning=True,
                            notes="no bivariate-admissible parameters; "
                                  "overlap stack skipped"))
    if balpha is not None:
        try:
            checks.extend(_rank2_bivariate_checks(ctx, cfg, rep, alpha,
                                                  balpha))
        except Exception as ex:
            checks.append(CheckReport(
                check_id="rank2_bivariate_error", params=tag,
                residual=float("inf"), tolerance=0.0, passed=False,
                notes=str(ex)))
    return checks


def _rank2_bivariate_checks(ctx, cfg, rep, alpha, balpha):
    checks = []
    brep = (rep if balpha == alpha
            else rank2.build_aw2(ctx, cfg.N1, cfg.N2, balpha))
    btag = {"N1": cfg.N1, "N2": cfg.N2, "alpha": balpha}
    table = rank2.bivariate_overlaps(ctx, brep)
    errP = max(abs(table.P[key]
                   - rank2.bivariate_product_formula(
                       ctx, balpha, cfg.N1, cfg.N2,
                       key[2], key[3], key[0], key[1]))
               for key in table.P)
    checks.append(check("rank2_bivariate_product_formula", errP, 1e-7,
                        params=btag))
    errO, errG = rank2.global_overlap_crosscheck(ctx, brep, table=table)
    checks.append(check("rank2_overlap_factorization", errO, 1e-9,
                        params=btag))
    checks.append(check("rank2_overlap_global_assembly", errG, 1e-9,
                        params=btag))
    errOrth, errW = rank2.bivariate_orthogonality(ctx, brep, table=table)
    checks.append(check("rank2_bivariate_orthogonality", errOrth, 1e-8,
                        params=btag))
    checks.append(check("rank2_weight_vs_normalizer", errW, 1e-7,
                        params=btag))
    checks.extend(rank2.gasper_rahman_bridge(ctx, balpha,
                                             min(cfg.N1, 3),
                                             min(cfg.N2, 3)))
    return checks


_SUITES = {"aw3": suite_aw3, "uq": suite_uq, "rank2": suite_rank2}


def run_suites(ctx, cfg):
    """Run the selected suites; a suite that errors contributes a named
    failing check instead of discarding the others (partial report)."""
    names = ["aw3", "uq", "rank2"] if cfg.suite == "all" else [cfg.suite]
    checks = []
    for name in names:
        try:
            checks.extend(_SUITES[name](ctx, cfg))
        except ConfigError:
            raise
        except Exception as ex:
            checks.append(CheckReport(
                check_id="%s_suite_exception" % name, params={},
                residual=float("inf"), tolerance=0.0, passed=False,
                notes=str(ex)))
    return checks


def _report_doc(cfg, checks):
    return {
        "meta": {"q": cfg.q, "N": cfg.N, "N1": cfg.N1, "N2": cfg.N2,
                 "alpha": [cfg.alpha0, cfg.alpha1, cfg.alpha2],
                 "precision": cfg.precision, "suite": cfg.suite},
        "checks": [c.to_dict() for c in checks],
    }


def _emit(cfg, doc):
    text = dump_json(doc)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_verify(cfg):
    ctx = cfg.context()
    checks = []
    failed = False
    try:
        checks = run_suites(ctx, cfg)
    except ConfigError:
        raise
    except Exception as ex:  # partial report with the failure recorded
        checks.append(CheckReport(check_id="suite_exception", params={},
                                  residual=float("inf"), tolerance=0.0,
                                  passed=False, notes=str(ex)))
        failed = True
    _emit(cfg, _report_doc(cfg, checks))
    if failed or any(not c.passed for c in checks):
        return 1
    return 0


# ---------------------------------------------------------------------------
# tables

def _write_csv(path, header_comment, columns, rows):
    lines = ["# " + header_comment, ",".join(columns)]
    for row in rows:
        lines.append(",".join(
            format(v, ".17g") if isinstance(v, float) else str(v)
            for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_tables(kind, cfg):
    ctx = cfg.context()
    base = cfg.out or ("awlab_%s" % kind)
    if base.endswith(".csv") or base.endswith(".json"):
        base = base.rsplit(".", 1)[0]
    alpha = (cfg.alpha0, cfg.alpha1, cfg.alpha2)
    if kind == "qracah":
        pa = aw3.AlphaParams(cfg.alpha0, cfg.alpha1, cfg.alpha2,
                             -(cfg.N + 1.0))
        T = qracah.eval_table(ctx, pa, cfg.N)
        rows = [[j] + [float(T[j, k]) for k in range(cfg.N + 1)]
                for j in range(cfg.N + 1)]
        cols = ["j"] + ["k%d" % k for k in range(cfg.N + 1)]
        _write_csv(base + ".csv", "orthogonal-function values, rows = grid "
                   "index j, columns = degree k", cols, rows)
        doc = {"kind": kind, "N": cfg.N, "q": cfg.q,
               "alpha": list(alpha),
               "values": [[float(v) for v in row] for row in T]}
    elif kind == "weights":
        pa = aw3.AlphaParams(cfg.alpha0, cfg.alpha1, cfg.alpha2,
                             -(cfg.N + 1.0))
        W = qracah.weights(ctx, pa, cfg.N)
        rows = [[j] + [float(W[j, k]) for k in range(cfg.N + 1)]
                for j in range(cfg.N + 1)]
        cols = ["j"] + ["k%d" % k for k in range(cfg.N + 1)]
        _write_csv(base + ".csv", "orthogonality weights w[j,k], rows = grid "
                   "index j, columns = degree k", cols, rows)
        doc = {"kind": kind, "N": cfg.N, "q": cfg.q, "alpha": list(alpha),
               "values": [[float(v) for v in row] for row in W]}
    elif kind == "bivariate":
        balpha = _rank2_alpha(ctx, cfg, bivariate=True)
        rep = rank2.build_aw2(ctx, cfg.N1, cfg.N2, balpha)
        table = rank2.bivariate_overlaps(ctx, rep)
        keys = sorted(table.P)
        rows = [[j1, j2, k1, k2, float(table.P[(j1, j2, k1, k2)])]
                for (j1, j2, k1, k2) in keys]
        _write_csv(base + ".csv", "normalized bivariate overlaps, row-major "
                   "over (j1,j2,k1,k2)",
                   ["j1", "j2", "k1", "k2", "value"], rows)
        doc = {"kind": kind, "N1": cfg.N1, "N2": cfg.N2, "q": cfg.q,
               "alpha": list(balpha),
               "entries": [{"j1": r[0], "j2": r[1], "k1": r[2], "k2": r[3],
                            "value": r[4]} for r in rows]}
    elif kind == "stencil":
        alpha2 = _rank2_alpha(ctx, cfg)
        rep = rank2.build_aw2(ctx, cfg.N1, cfg.N2, alpha2)
        idx = rep.grid.index
        offs = [(-2, -2), (-2, 0), (-2, 2), (0, -2), (0, 0), (0, 2),
                (2, -2), (2, 0), (2, 2)]
        rows = []
        for i, (d1, d2) in enumerate(rep.grid.states):
            vals = [float(rep.L2[idx[(d1 + o1, d2 + o2)], i])
                    if (d1 + o1, d2 + o2) in idx else 0.0
                    for o1, o2 in offs]
            rows.append([d1, d2] + vals)
        cols = (["two_n1", "two_n2"]
                + ["c_%+d_%+d" % o for o in offs])
        _write_csv(base + ".csv", "nine-point stencil coefficients of the "
                   "mixed generator, one line per grid state", cols, rows)
        doc = {"kind": kind, "N1": cfg.N1, "N2": cfg.N2, "q": cfg.q,
               "alpha": list(alpha2),
               "entries": [{"two_n1": r[0], "two_n2": r[1],
                            "coefficients": r[2:]} for r in rows]}
    else:
        raise ConfigError("unknown table kind %r" % kind)
    with open(base + ".json", "w", encoding="utf-8") as fh:
        fh.write(dump_json(doc) + "\n")
    return 0


# ---------------------------------------------------------------------------
# sweeps

def parse_grid_file(path):
    """`key = v1, v2, ...` per line; Cartesian product over all keys."""
    known = {f.name for f in fields(RunConfig)}
    axes = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError("%s:%d: expected 'key = v1, v2'"
                                  % (path, ln))
            key, raw = [s.strip() for s in line.split("=", 1)]
            if key not in known:
                raise ConfigError("%s:%d: unknown key %r" % (path, ln, key))
            axes.append((key, [_coerce(key, v) for v in raw.split(",")]))
    points = [{}]
    for key, vals in axes:
        points = [dict(p, **{key: v}) for p in points for v in vals]
    return points


def _sweep_point(payload):
    base, point = payload
    cfg = RunConfig(**base)
    for k, v in point.items():
        setattr(cfg, k, v)
    label = ",".join("%s=%s" % (k, point[k]) for k in sorted(point))
    try:
        cfg.validate()
        checks = run_suites(cfg.context(), cfg)
        return label, [c.to_dict() for c in checks], ""
    except Exception as ex:
        return label, None, str(ex)


def cmd_sweep(cfg, grid_path, workers=None):
    points = parse_grid_file(grid_path)
    base = asdict(cfg)
    base["out"] = None
    payloads = [(base, p) for p in points]
    workers = workers or min(4, os.cpu_count() or 1, max(1, len(points)))
    if workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_point, payloads))
    else:
        results = [_sweep_point(p) for p in payloads]
    results.sort(key=lambda r: r[0])
    agg = {}
    sub_reports = []
    any_fail = False
    for label, checks, err in results:
        if checks is None:
            sub_reports.append({"point": label, "error": err})
            any_fail = True
            continue
        sub_reports.append({"point": label, "checks": checks})
        for c in checks:
            cur = agg.setdefault(c["check_id"],
                                 {"max_residual": 0.0, "pass": True})
            cur["max_residual"] = max(cur["max_residual"], c["residual"])
            cur["pass"] = cur["pass"] and c["pass"]
            any_fail = any_fail or not c["pass"]
    doc = {
        "meta": {"grid": grid_path, "points": len(points),
                 "suite": cfg.suite, "precision": cfg.precision},
        "aggregate": {k: agg[k] for k in sorted(agg)},
        "runs": sub_reports,
    }
    _emit(cfg, doc)
    return 1 if any_fail else 0


# ---------------------------------------------------------------------------
# entry point

def _add_common_flags(p):
    p.add_argument("--q", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--N1", type=int)
    p.add_argument("--N2", type=int)
    p.add_argument("--alpha0", type=float)
    p.add_argument("--alpha1", type=float)
    p.add_argument("--alpha2", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--precision", choices=["double", "extended"])
    p.add_argument("--out")
    p.add_argument("--config")


def build_parser():
    ap = argparse.ArgumentParser(prog="awlab")
    sub = ap.add_subparsers(dest="command", required=True)
    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=["aw3", "uq", "rank2", "all"])
    pv.add_argument("--corrupt", action="store_true",
                    help="inject a coefficient corruption (negative control)")
    _add_common_flags(pv)
    pt = sub.add_parser("tables", help="emit CSV/JSON tables")
    pt.add_argument("kind", choices=["qracah", "bivariate", "weights",
                                     "stencil"])
    _add_common_flags(pt)
    ps = sub.add_parser("sweep", help="verify across a parameter grid")
    ps.add_argument("--grid", required=True)
    ps.add_argument("--workers", type=int)
    _add_common_flags(ps)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            args_suite = args.suite
            args.suite = None  # suite comes from the positional, not config
            cfg = load_config(args)
            cfg.suite = args_suite
            cfg.validate()
            return cmd_verify(cfg)
        if args.command == "tables":
            cfg = load_config(args)
            return cmd_tables(args.kind, cfg)
        if args.command == "sweep":
            cfg = load_config(args)
            return cmd_sweep(cfg, args.grid, workers=args.workers)
    except ConfigError as ex:
        sys.stderr.write("config error: %s\n" % ex)
        return 2
    except OSError as ex:
        sys.stderr.write("i/o error: %s\n" % ex)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
