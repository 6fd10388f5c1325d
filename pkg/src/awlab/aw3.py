"""Rank-1 q-deformed algebra on two generators K, L: structure constants in the
alpha parametrization, the two-sided relation residual, finite-dimensional
representation builder (diagonal K, tridiagonal L), Casimir, characteristic
polynomial and spectrum identities.

Conventions used throughout:
    p0 = alpha0+alpha3, p1 = alpha0-alpha3, p2 = alpha1+alpha2, p3 = alpha1-alpha2
    lambda_n = sinh_q(2n + alpha0),  n = k - N/2 for row k
All recurrence coefficients are functions of y = 2n + alpha0 only, so the
kernels below take y directly (rank-2 reuses them on shifted grids).
"""
import itertools
from dataclasses import dataclass

import numpy as np

from .qcore import sinh_q, cosh_q
from .linalg import qcomm, rel_residual


class NegativeWeight(ValueError):
    """Raised when an interior squared off-diagonal coefficient is negative,
    i.e. the parameters are outside the unitary domain."""

    def __init__(self, msg, index=None):
        super().__init__(msg)
        self.index = index


@dataclass(frozen=True)
class AWStructure:
    B: float
    C0: float
    C1: float
    D0: float
    D1: float


@dataclass(frozen=True)
class AlphaParams:
    alpha0: float
    alpha1: float
    alpha2: float
    alpha3: float
    A4: float = None  # defaults to sinh_q(1)^2 (canonical normalization)
    A5: float = None

    def avec(self, ctx):
        s1 = sinh_q(ctx, 1)
        a4 = s1**2 if self.A4 is None else self.A4
        a5 = s1**2 if self.A5 is None else self.A5
        return (sinh_q(ctx, self.alpha0), sinh_q(ctx, self.alpha1),
                cosh_q(ctx, self.alpha2), cosh_q(ctx, self.alpha3), a4, a5)

    def pvec(self):
        return (self.alpha0 + self.alpha3, self.alpha0 - self.alpha3,
                self.alpha1 + self.alpha2, self.alpha1 - self.alpha2)


def structure_from_alpha(ctx, params):
    A0, A1, A2, A3, A4, A5 = params.avec(ctx)
    s1 = sinh_q(ctx, 1)
    c1 = cosh_q(ctx, 1)
    return AWStructure(
        B=s1**2 * (A0 * A1 - A2 * A3),
        C0=-c1**2 * A4,
        C1=-c1**2 * A5,
        D0=c1 * (A0 * A3 * A4 + s1**2 * A1 * A2),
        D1=c1 * (A1 * A3 * A5 + s1**2 * A0 * A2),
    )


def _aw_terms(ctx, K, L, A):
    """The individual summands of the two relation residuals; keeping them
    separate lets rel_residual normalize by the scale of the cancellation
    rather than by the (already tiny) sum."""
    n = K.shape[0]
    if L.shape != K.shape:
        raise ValueError("K and L must have equal square shape")
    I = np.eye(n)

    def lift(x):
        return x if isinstance(x, np.ndarray) else x * I

    A0, A1, A2, A3, A4, A5 = [lift(x) for x in A]
    s1 = sinh_q(ctx, 1)
    c1 = cosh_q(ctx, 1)
    c2 = cosh_q(ctx, 2)
    B = s1**2 * (A0 @ A1 - A2 @ A3)
    C0 = -c1**2 * A4
    C1 = -c1**2 * A5
    D0 = c1 * (A0 @ A3 @ A4 + s1**2 * A1 @ A2)
    D1 = c1 * (A1 @ A3 @ A5 + s1**2 * A0 @ A2)
    terms1 = [c2 * (K @ L @ K), -(K @ K @ L), -(L @ K @ K),
              -(B @ K), -(C1 @ L), -D1]
    terms2 = [c2 * (L @ K @ L), -(L @ L @ K), -(K @ L @ L),
              -(B @ L), -(C0 @ K), -D0]
    return terms1, terms2


def aw_residual(ctx, K, L, A):
    """Two components of the relation residual for generators (K, L) with
    structure entries A = (A0..A5); scalars are lifted to multiples of the
    identity, matrices are used as-is. Both components vanish iff the pair
    satisfies the relations with those entries."""
    terms1, terms2 = _aw_terms(ctx, K, L, A)
    return sum(terms1), sum(terms2)


def aw_residual_max(ctx, K, L, A):
    terms1, terms2 = _aw_terms(ctx, K, L, A)
    return max(rel_residual(terms1), rel_residual(terms2))


def locality_residual(A_list, K, L):
    """Max pairwise-commutator residual of the structure entries against each
    other and against the two generators ("locally central")."""
    n = K.shape[0]
    I = np.eye(n)
    mats = [x if isinstance(x, np.ndarray) else x * I for x in A_list]
    worst = 0.0
    for i, X in enumerate(mats):
        for Y in mats[i + 1:] + [K, L]:
            worst = max(worst, rel_residual([X @ Y - Y @ X]))
    return worst


def casimir_Q(ctx, K, L, s):
    """Central element of the algebra evaluated on matrices."""
    q = ctx.q
    KLq = qcomm(ctx, K, L)
    return ((1 / q - q**3) * (K @ L @ KLq) + q**2 * (KLq @ KLq)
            + s.B * (K @ L + L @ K)
            + s.C0 * q**2 * (K @ K) + s.C1 * q**(-2) * (L @ L)
            + s.D0 * (1 + q**2) * K + s.D1 * (1 + q**(-2)) * L)


def structure_from_roots(ctx, p):
    """Closed forms of B, D0, D1 from the root parameters, canonical
    normalization (C0 = C1 = -sinh_q(2)^2)."""
    s1 = sinh_q(ctx, 1)
    c1 = cosh_q(ctx, 1)
    s2 = sinh_q(ctx, 2)
    sh = lambda x: sinh_q(ctx, x)
    ch = lambda x: cosh_q(ctx, x)
    p0, p1, p2, p3 = p
    B = s1**2 * (sh((p0 + p1) / 2) * sh((p2 + p3) / 2)
                 - ch((p0 - p1) / 2) * ch((p2 - p3) / 2))
    D0 = s2**2 / c1 * (sh((p0 + p1) / 2) * ch((p0 - p1) / 2)
                       + sh((p2 + p3) / 2) * ch((p2 - p3) / 2))
    D1 = s2**2 / c1 * (sh((p2 + p3) / 2) * ch((p0 - p1) / 2)
                       + sh((p0 + p1) / 2) * ch((p2 - p3) / 2))
    return B, D0, D1


def casimir_value_from_roots(ctx, p, s):
    """Scalar value of the Casimir from the roots: the form that actually
    matches the matrix computation (see also casimir_value_legacy)."""
    s1 = sinh_q(ctx, 1)
    c1 = cosh_q(ctx, 1)
    sh = [sinh_q(ctx, pk) for pk in p]
    e2 = sum(sh[i] * sh[j] for i in range(4) for j in range(i + 1, 4))
    return (s.B**2 + (s1**2 - 4) * s.C0 * s.C1 / c1**2 - s.C0 * s1**2 * e2) / s1**2


def casimir_value_legacy(ctx, p, s):
    """An alternative closed form kept for comparison; it does NOT agree with
    the matrix Casimir (reported as a warning, never asserted)."""
    s1 = sinh_q(ctx, 1)
    s2 = sinh_q(ctx, 2)
    prod_sh = np.prod([sinh_q(ctx, pk / 2) for pk in p])
    return s2**2 * (prod_sh + s1**2 - (s1**2 * s.B + s.D1**2) / (s1**2 * s2**2))


# ---------------------------------------------------------------------------
# recurrence-coefficient kernels (shared with the rank-2 grid construction)

_SNAP = 1e-9  # argument-space threshold for exact boundary zeros


def a_sq(ctx, y, al):
    """Squared off-diagonal coefficient at spectral point y = 2n + alpha0_local
    for labels al = (alpha0, alpha1, alpha2, alpha3).

    Factors that vanish by the boundary quantization (y-1 hits one of the root
    labels) are snapped to an exact 0 so truncation is exact, not O(eps)."""
    a0, a1, a2, a3 = al
    p = (a0 + a3, a0 - a3, a1 + a2, a1 - a2)
    num = 1.0
    for pk in p:
        if abs(y - 1 - pk) < _SNAP:
            return 0.0
        num = num * (sinh_q(ctx, y - 1) - sinh_q(ctx, pk))
    den = cosh_q(ctx, y - 1)**2 * cosh_q(ctx, y) * cosh_q(ctx, y - 2)
    return -num / den


def b_coef(ctx, y, al, include_first_scalar=True):
    """Diagonal coefficient at spectral point y. The leading numerator term is
    (A0*A1 - A2*A3)*sinh_q(y); dropping the A0 factor (include_first_scalar=
    False) is kept only for the adjudication report — it fails the relations."""
    a0, a1, a2, a3 = al
    A0, A1 = sinh_q(ctx, a0), sinh_q(ctx, a1)
    A2, A3 = cosh_q(ctx, a2), cosh_q(ctx, a3)
    c1 = cosh_q(ctx, 1)
    lead = (A0 * A1 - A2 * A3) if include_first_scalar else (A1 - A2 * A3)
    num = lead * sinh_q(ctx, y) + c1 * (A1 * A3 + A0 * A2)
    return num / (cosh_q(ctx, y - 1) * cosh_q(ctx, y + 1))


def tilde_a_sq(ctx, y, al):
    """Sign-flipped variant used when one spectral type is hyperbolic-cosine:
    equals minus a_sq with the middle two labels swapped."""
    a0, a1, a2, a3 = al
    return -a_sq(ctx, y, (a0, a2, a1, a3))


def tilde_b_coef(ctx, y, al):
    """Companion diagonal coefficient for the swapped-type case. Same shape as
    b_coef but with (sinh, cosh, sinh, cosh) scalar assignments."""
    a0, a1, a2, a3 = al
    A0, A1 = sinh_q(ctx, a0), cosh_q(ctx, a1)
    A2, A3 = sinh_q(ctx, a2), cosh_q(ctx, a3)
    c1 = cosh_q(ctx, 1)
    num = (A0 * A1 - A2 * A3) * sinh_q(ctx, y) + c1 * (A1 * A3 + A0 * A2)
    return num / (cosh_q(ctx, y - 1) * cosh_q(ctx, y + 1))


def tilde_coeffs(ctx, params, n):
    al = (params.alpha0, params.alpha1, params.alpha2, params.alpha3)
    y = 2 * n + params.alpha0
    return tilde_a_sq(ctx, y, al), tilde_b_coef(ctx, y, al)


# ---------------------------------------------------------------------------
# representation builder

@dataclass
class AW3Rep:
    N: int
    K: np.ndarray
    L: np.ndarray
    lam: np.ndarray
    a_seq: np.ndarray   # a_seq[k] couples rows k-1,k; a_seq[0] = 0
    b_seq: np.ndarray
    params: AlphaParams


def validate_positivity(ctx, params, N):
    """True iff every interior squared off-diagonal coefficient is positive."""
    al = (params.alpha0, params.alpha1, params.alpha2, params.alpha3)
    for k in range(1, N + 1):
        y = (2 * k - N) + params.alpha0
        if a_sq(ctx, y, al) <= 1e-12:
            return False
    return True


def build_rep(ctx, params, N):
    """Diagonal K / symmetric tridiagonal L pair of size N+1. Requires
    alpha3 = -(N+1) (truncation) and positivity of the interior weights."""
    if abs(params.alpha3 + (N + 1)) > 1e-12:
        raise ValueError("finite representation needs alpha3 = -(N+1)")
    al = (params.alpha0, params.alpha1, params.alpha2, params.alpha3)
    lam = np.array([sinh_q(ctx, (2 * k - N) + params.alpha0)
                    for k in range(N + 1)])
    K = np.diag(lam)
    a_seq = np.zeros(N + 1)
    b_seq = np.zeros(N + 1)
    L = np.zeros((N + 1, N + 1))
    for k in range(N + 1):
        y = (2 * k - N) + params.alpha0
        b_seq[k] = b_coef(ctx, y, al)
        L[k, k] = b_seq[k]
        if k > 0:
            v = a_sq(ctx, y, al)
            if v < 0:
                raise NegativeWeight(
                    "negative squared coefficient at interior index %d" % k,
                    index=k)
            a_seq[k] = np.sqrt(v)
            L[k, k - 1] = L[k - 1, k] = a_seq[k]
    return AW3Rep(N=N, K=K, L=L, lam=lam, a_seq=a_seq, b_seq=b_seq,
                  params=params)


def find_valid_alphas(ctx, N, count=2, lo=0.2, hi=2.01, step=0.2):
    """Deterministic grid scan for parameter triples that pass the positivity
    validation. Candidates are ranked by their smallest interior squared
    coefficient (largest first) so the returned sets are well-conditioned, not
    merely admissible. Returns up to `count` triples (alpha0, alpha1, alpha2)."""
    scored = []
    grid = np.arange(lo, hi, step)
    for a0, a1, a2 in itertools.product(grid, repeat=3):
        p = AlphaParams(a0, a1, a2, -(N + 1.0))
        al = (p.alpha0, p.alpha1, p.alpha2, p.alpha3)
        margin = min(a_sq(ctx, (2 * k - N) + p.alpha0, al)
                     for k in range(1, N + 1)) if N > 0 else 1.0
        if margin > 1e-12:
            scored.append((-margin, float(a0), float(a1), float(a2)))
    scored.sort()
    return [(a0, a1, a2) for _, a0, a1, a2 in scored[:count]]


# ---------------------------------------------------------------------------
# characteristic polynomial, roots, spectra

def char_poly(ctx, s, Q0):
    """Degree-4 polynomial whose roots encode the spectra. Returns coefficients
    (highest degree first) and the numerically computed roots."""
    s1 = sinh_q(ctx, 1)
    c1 = cosh_q(ctx, 1)
    c4 = s.C0 * s1**2 / c1**4
    c3 = s.D0 * s1**2 / c1**2
    c2 = (s.B**2 - s1**2 * Q0) / c1**2 + (s1**2 - 4) * s.C0 * s.C1 / c1**4
    c1_ = s.B * s.D1 - 4 * s.C1 * s.D0 / c1**2
    c0 = s.D1**2 + s.C1 * (s.B**2 + 4 * Q0) / c1**2 - 4 * s.C0 * s.C1**2 / c1**4
    coeffs = np.array([c4, c3, c2, c1_, c0])
    return coeffs, np.roots(coeffs)


def char_poly_dual(ctx, s, Q0):
    """Same polynomial with the two spectral sides swapped (C0<->C1, D0<->D1)."""
    swapped = AWStructure(B=s.B, C0=s.C1, C1=s.C0, D0=s.D1, D1=s.D0)
    return char_poly(ctx, swapped, Q0)


def char_variable_candidates(ctx, p):
    """The maps of the root parameters that could be the polynomial variable.
    Exactly one multiset should zero the polynomial; adjudicated numerically."""
    c1 = cosh_q(ctx, 1)
    return {
        "cosh1*sinh_q(p)": np.array([c1 * sinh_q(ctx, pk) for pk in p]),
        "sinh_q(p)": np.array([sinh_q(ctx, pk) for pk in p]),
        "cosh_q(p)": np.array([cosh_q(ctx, pk) for pk in p]),
        "q^p": np.array([ctx.q**pk for pk in p]),
    }


def dual_roots(p, variant="symmetric"):
    """Root parameters of the swapped-generator pair. The 'printed' variant
    repeats one entry; the 'symmetric' variant completes the pattern. Both are
    exposed so the adjudication can compare them against the dual polynomial."""
    sig = sum(p)
    if variant == "printed":
        return (sig / 2 - p[1], sig / 2 - p[0], sig / 2 - p[3], sig / 2 - p[1])
    if variant == "symmetric":
        return (sig / 2 - p[1], sig / 2 - p[0], sig / 2 - p[3], sig / 2 - p[2])
    raise ValueError("variant must be 'printed' or 'symmetric'")


def _poly_eval_residual(coeffs, points):
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    return float(max(abs(np.polyval(coeffs, x)) for x in points)) / scale


def adjudicate_char_variable(ctx, params, tol=1e-8):
    """Exactly one of the candidate variable maps must send the root labels to
    zeros of the characteristic polynomial."""
    from .report import check
    p = params.pvec()
    s = structure_from_alpha(ctx, params)
    Q0 = casimir_value_from_roots(ctx, p, s)
    coeffs, _ = char_poly(ctx, s, Q0)
    res = {name: _poly_eval_residual(coeffs, pts)
           for name, pts in char_variable_candidates(ctx, p).items()}
    winners = [k for k, v in res.items() if v <= tol]
    ok = len(winners) == 1
    rep = check("aw3_char_variable",
                res[winners[0]] if ok else min(res.values()), tol,
                notes=("resolved: %s" % winners[0]) if ok else
                ("ambiguous winners: %s" % winners))
    if not ok:
        rep.passed = False
    return rep


def adjudicate_dual_roots(ctx, params, tol=1e-8):
    """Exactly one dual-root variant must reproduce the full root multiset of
    the swapped polynomial (pointwise evaluation cannot distinguish the
    variants because one repeats an entry)."""
    from .report import check
    c1 = cosh_q(ctx, 1)
    p = params.pvec()
    s = structure_from_alpha(ctx, params)
    Q0 = casimir_value_from_roots(ctx, p, s)
    coeffs, roots = char_poly_dual(ctx, s, Q0)
    roots = np.sort(roots.real)
    scale = max(1.0, float(np.max(np.abs(roots))))
    res = {}
    for variant in ("symmetric", "printed"):
        pts = np.sort([c1 * sinh_q(ctx, pk) for pk in dual_roots(p, variant)])
        res[variant] = float(np.max(np.abs(roots - pts))) / scale
    winners = [k for k, v in res.items() if v <= tol]
    ok = len(winners) == 1
    rep = check("aw3_dual_roots",
                res[winners[0]] if ok else min(res.values()), tol,
                notes=("resolved: %s" % winners[0]) if ok else
                ("ambiguous winners: %s" % winners))
    if not ok:
        rep.passed = False
    return rep


def spectrum_identities(ctx, lam, C1):
    """Max relative residual of the three-point recursions a hyperbolic-sine
    spectrum must satisfy."""
    c2 = cosh_q(ctx, 2)
    lam = np.asarray(lam, dtype=float)
    worst = 0.0
    n = len(lam)
    for i in range(n - 1):
        r = lam[i]**2 + lam[i + 1]**2 - c2 * lam[i] * lam[i + 1] + C1
        worst = max(worst, abs(r) / max(1.0, lam[i]**2 + lam[i + 1]**2))
    for i in range(1, n - 1):
        r = c2 * lam[i] - lam[i + 1] - lam[i - 1]
        worst = max(worst, abs(r) / max(1.0, abs(c2 * lam[i])))
        r2 = lam[i]**2 - lam[i + 1] * lam[i - 1] + C1
        worst = max(worst, abs(r2) / max(1.0, lam[i]**2))
    return worst
