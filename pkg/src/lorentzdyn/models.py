"""The explicit model spaces: flat Lorentz tori, Hopf surfaces, anti-de
Sitter 3-space.

Flat tori carry the integer isometry groups O(g, Z) of an integer Lorentz
form g, enumerated exactly by backtracking.  The Hopf surface is the
quotient of the punctured plane by x -> alpha x; its affine dynamics is
bounded-but-not-equicontinuous with non-uniform stability modulus.  Anti-de
Sitter 3-space is realized as a level set of the split (2,2) form on
R^2 x R^2, where one SL(2, R) factor acts diagonally and the other moves a
circle's worth of isotropic 2-planes by Mobius transformations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetError,
    DegenerateFormError,
    DimensionError,
    NotIsometryError,
    PreconditionError,
)
from .minkowski import QuadraticForm, _as_matrix, _as_vector, canonical_ray, evaluate
from .projective import BoundaryPoint, ray_angle

# Column-candidate evaluations allowed in one integer enumeration.
ENUMERATION_BUDGET = 50_000_000

INFINITY = float("inf")


@dataclass(frozen=True)
class RationalLorentzForm:
    """Integer symmetric Gram matrix of Lorentz signature (1, d-1)."""

    gram: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gram)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionError("Gram matrix must be square")
        if not np.issubdtype(g.dtype, np.integer):
            gi = np.rint(g).astype(np.int64)
            if not np.array_equal(gi, g):
                raise DegenerateFormError("entries must be exact integers")
            g = gi
        else:
            g = g.astype(np.int64)
        if not np.array_equal(g, g.T):
            raise DegenerateFormError("Gram matrix is not symmetric")
        eig = np.linalg.eigvalsh(g.astype(float))
        if int(np.sum(eig < 0)) != 1 or int(np.sum(eig > 0)) != g.shape[0] - 1:
            raise DegenerateFormError("integer form must have Lorentz signature")
        g.flags.writeable = False
        object.__setattr__(self, "gram", g)

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def to_quadratic_form(self) -> QuadraticForm:
        return QuadraticForm(gram=self.gram.astype(float),
                             signature=(1, self.dim - 1))


def integer_isometries(g: RationalLorentzForm, height: int) -> list[np.ndarray]:
    """All A in GL(d, Z) with max |entry| <= height and A^T g A = g, exactly.

    Column-by-column backtracking: a partial choice of columns c_1..c_j must
    satisfy c_i^T g c_k = g_ik, which prunes almost everything early.  The
    search errors out beyond d = 4 or past the operation budget.
    """
    if height < 1:
        raise PreconditionError("height must be >= 1")
    d = g.dim
    if d > 4:
        raise BudgetError("integer enumeration is limited to d <= 4")
    gram = g.gram
    rng = range(-height, height + 1)
    columns = np.array(np.meshgrid(*[list(rng)] * d, indexing="ij"),
                       dtype=np.int64).reshape(d, -1).T
    columns = columns[np.any(columns != 0, axis=1)]
    norms = np.einsum("ki,ij,kj->k", columns, gram, columns)
    ops = 0
    budget = ENUMERATION_BUDGET
    found: list[np.ndarray] = []

    def extend(chosen: list[np.ndarray]):
        nonlocal ops
        j = len(chosen)
        if j == d:
            a = np.column_stack(chosen)
            found.append(a)
            return
        cand = columns[norms == gram[j, j]]
        if chosen:
            prev = np.column_stack(chosen)
            cross = cand @ gram @ prev  # (n_cand, j)
            ok = np.all(cross == gram[j, :j], axis=1)
            cand = cand[ok]
            ops += cross.size
        ops += cand.shape[0]
        if ops > budget:
            raise BudgetError("integer enumeration exceeded its operation budget")
        for c in cand:
            extend(chosen + [c])

    extend([])
    kept = []
    for a in found:
        det = int(round(np.linalg.det(a.astype(float))))
        if abs(det) == 1:
            kept.append(a)
    return kept


@dataclass(frozen=True)
class EntireCone:
    """Distinguished value: every isotropic direction of the form is fixed."""

    form: RationalLorentzForm


def _is_projectively_trivial(a: np.ndarray, tol: float = 1e-12) -> bool:
    d = a.shape[0]
    return bool(
        np.allclose(a, np.eye(d), atol=tol) or np.allclose(a, -np.eye(d), atol=tol)
    )


def fixed_isotropic_directions(g: RationalLorentzForm, elements, tol: float = 1e-8):
    """Isotropic rays fixed projectively by every element.

    Candidates are real one-dimensional eigendirections on the cone; each is
    then verified against all elements.  Returns `EntireCone` when every
    element acts as +-identity (torus case), else a list of BoundaryPoint.
    """
    form = g.to_quadratic_form()
    mats = [np.asarray(a, dtype=float) for a in elements]
    for a in mats:
        if not np.allclose(a.T @ form.gram @ a, form.gram, atol=1e-9):
            raise NotIsometryError("element does not preserve the form")
    acting = [a for a in mats if not _is_projectively_trivial(a)]
    if not acting:
        return EntireCone(form=g)
    candidates: list[np.ndarray] = []
    for a in acting:
        w, v = np.linalg.eig(a)
        for i in range(len(w)):
            if abs(w[i].imag) > tol:
                continue
            vec = np.real(v[:, i])
            nv = np.linalg.norm(vec)
            if nv < tol:
                continue
            vec = vec / nv
            if abs(evaluate(form, vec, vec)) > tol:
                continue
            candidates.append(canonical_ray(vec))
    fixed = []
    for ray in candidates:
        if any(ray_angle(ray, r) < 1e-9 for r in fixed):
            continue
        if all(ray_angle(a @ ray, ray) <= tol for a in acting):
            fixed.append(ray)
    return [BoundaryPoint(ray=r) for r in fixed]


def plus_minus_identity_check(g: RationalLorentzForm, a, rays, tol: float = 1e-8) -> bool:
    """Executable form of the three-fixed-rays fact: an isometry fixing three
    pairwise independent isotropic rays is +-identity on their span.

    Raises when the input violates the precondition (a ray not actually
    fixed, or proportional rays); returns the verified truth value.
    """
    m = _as_matrix(a)
    vecs = [r.ray if isinstance(r, BoundaryPoint) else canonical_ray(r) for r in rays]
    if len(vecs) != 3:
        raise PreconditionError("exactly three rays are required")
    for i in range(3):
        for j in range(i + 1, 3):
            if ray_angle(vecs[i], vecs[j]) < 1e-8:
                raise PreconditionError("rays must be pairwise non-proportional")
    mults = []
    for v in vecs:
        img = m @ v
        if ray_angle(img, v) > tol:
            raise PreconditionError("matrix does not fix all three rays")
        mults.append(float(img @ v))
    span = np.column_stack(vecs)
    for sign in (1.0, -1.0):
        if all(abs(mu - sign) <= 1e-8 for mu in mults):
            return bool(np.linalg.norm(m @ span - sign * span) <= 1e-8 * np.linalg.norm(span))
    return False


# ---------------------------------------------------------------------------
# the split Lorentz form on R^3 and its model isometries


def split_form_3d() -> QuadraticForm:
    """The Lorentz form x1 x3 + x2^2 (lightcone coordinates)."""
    return QuadraticForm.from_gram([[0.0, 0.0, 0.5], [0.0, 1.0, 0.0],
                                    [0.5, 0.0, 0.0]])


def split_unipotent(b: float) -> np.ndarray:
    """One-parameter unipotent isometry group of the split form.

    exp of b times the nilpotent generator [[0,2,0],[0,0,-1],[0,0,0]]; the
    powers satisfy split_unipotent(b)^k = split_unipotent(k b) exactly.
    """
    return np.array([[1.0, 2.0 * b, -b * b], [0.0, 1.0, -b], [0.0, 0.0, 1.0]])


def split_boost(c: float) -> np.ndarray:
    """Diagonal isometry diag(c, 1, 1/c) of the split form."""
    if c == 0:
        raise PreconditionError("boost parameter must be nonzero")
    return np.diag([float(c), 1.0, 1.0 / float(c)])


# ---------------------------------------------------------------------------
# Hopf surfaces


@dataclass(frozen=True)
class HopfModel:
    """Quotient of R^2 - {0} by x -> alpha x, with the diagonal map diag(1, lam).

    Fundamental annulus: {y : alpha < |y| <= 1} in the Euclidean norm (any
    other choice shifts representatives by a bounded power of alpha).
    """

    alpha: float
    lam: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0 < self.lam:
            raise PreconditionError("need 0 < alpha < 1 < lam")


def hopf_return_cocycle(model: HopfModel, x, n: int) -> tuple[int, np.ndarray]:
    """Derivative representative of the n-th iterate read in the fundamental
    annulus: the unique m with diag(alpha^-m, lam^n alpha^-m) . x back in the
    annulus, together with that matrix.

    For points off the contracted axis the representatives stay bounded in
    norm over n while their inverses blow up (bounded but not
    equicontinuous); on the axis (b = 0) the representative is diag(1, lam^n)
    and diverges.
    """
    alpha, lam = model.alpha, model.lam
    pt = _as_vector(x, 2)
    r = float(np.linalg.norm(pt))
    if r == 0.0:
        raise PreconditionError("the origin is not a point of the Hopf surface")
    k = int(np.floor(np.log(r) / np.log(alpha)))
    while alpha ** k * r > 1.0:
        k += 1
    while alpha ** k * r <= alpha:
        k -= 1
    a, b = alpha ** k * pt
    log_rho = 0.5 * np.log(a * a + (lam ** n * b) ** 2)
    m = int(np.floor(log_rho / np.log(alpha)))
    while -m * np.log(alpha) + log_rho > 0.0:
        m -= 1
    while -m * np.log(alpha) + log_rho <= np.log(alpha):
        m += 1
    rep = np.diag([alpha ** (-m), lam ** n * alpha ** (-m)])
    return m, rep


# ---------------------------------------------------------------------------
# anti-de Sitter 3-space as a level set in (R^2 x R^2, split form)


def ads_form() -> QuadraticForm:
    """The split (2,2) form on R^4 = R^2 x R^2 whose bilinear value pairs the
    two factors through the area form: <(u, v), (u', v')> = w(u, v') + w(u', v)
    normalized so that <e1, e4> = 1."""
    g = np.zeros((4, 4))
    g[0, 3] = g[3, 0] = 1.0
    g[1, 2] = g[2, 1] = -1.0
    return QuadraticForm(gram=g, signature=(2, 2))


@dataclass(frozen=True)
class IsotropicPlane2:
    """Totally isotropic 2-plane of the split form, as a 4 x 2 basis."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.shape != (4, 2):
            raise DimensionError("basis must be 4 x 2")
        if np.linalg.matrix_rank(b, tol=1e-10) != 2:
            raise DimensionError("basis must have rank 2")
        g = ads_form().gram
        if np.max(np.abs(b.T @ g @ b)) > 1e-10 * max(1.0, np.max(np.abs(b)) ** 2):
            raise PreconditionError("plane is not totally isotropic for the split form")
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)


def ads_plane_family(alpha: float) -> IsotropicPlane2:
    """The circle of diagonal-invariant isotropic 2-planes: {(u, alpha u)}
    for finite alpha and {0} x R^2 at alpha = infinity."""
    if np.isinf(alpha):
        return IsotropicPlane2(basis=np.array([[0.0, 0.0], [0.0, 0.0],
                                               [1.0, 0.0], [0.0, 1.0]]))
    return IsotropicPlane2(basis=np.array([[1.0, 0.0], [0.0, 1.0],
                                           [float(alpha), 0.0], [0.0, float(alpha)]]))


def ads_pair_orbit(p1: IsotropicPlane2, p2: IsotropicPlane2) -> int:
    """dim(P1 and P2): the complete orbit invariant of a pair of isotropic
    2-planes under the split orthogonal group (2 equal, 1 line, 0 transverse)."""
    stacked = np.hstack([p1.basis, p2.basis])
    return 4 - int(np.linalg.matrix_rank(stacked, tol=1e-10))


def diagonal_action(a) -> np.ndarray:
    """The 4 x 4 isometry (u, v) -> (A u, A v) of an SL(2, R) element."""
    m = _as_matrix(a)
    _require_sl2(m)
    out = np.zeros((4, 4))
    out[:2, :2] = m
    out[2:, 2:] = m
    return out


def second_factor_action_matrix(h) -> np.ndarray:
    """The 4 x 4 isometry by which the second SL(2, R) factor acts.

    Identifying (u, v) in R^2 x R^2 with the 2 x 2 matrix X = [u | v]
    (so the split form's quadratic values are proportional to det X), the
    pair group acts by (g, h) . X = g X h^{-1}; this is the g = 1 slice.
    """
    m = _as_matrix(h)
    _require_sl2(m)
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    out = np.zeros((4, 4))
    out[0, 0] = d
    out[0, 2] = -c
    out[1, 1] = d
    out[1, 3] = -c
    out[2, 0] = -b
    out[2, 2] = a
    out[3, 1] = -b
    out[3, 3] = a
    return out


def _require_sl2(m: np.ndarray):
    if m.shape != (2, 2):
        raise DimensionError("expected a 2 x 2 matrix")
    if abs(np.linalg.det(m) - 1.0) > 1e-10:
        raise PreconditionError("matrix must have determinant 1")


def ads_second_factor_action(h, alpha: float) -> float:
    """Parameter of the image of ads_plane_family(alpha) under the second-
    factor action of h; a circle action matching the Mobius action on RP^1.

    Computed geometrically (move the plane, re-identify its parameter); the
    algebraic shadow is mobius_rp1(J h J, alpha) with J = diag(1, -1), i.e.
    the usual projective action read in the family's coordinate.
    """
    mat = second_factor_action_matrix(h)
    image = mat @ ads_plane_family(alpha).basis
    top, bottom = image[:2, :], image[2:, :]
    if np.linalg.norm(top) <= 1e-9 * np.linalg.norm(bottom):
        return INFINITY
    num = float(np.sum(bottom * top))
    den = float(np.sum(top * top))
    ap = num / den
    if np.linalg.norm(bottom - ap * top) > 1e-8 * (1.0 + abs(ap)) * np.linalg.norm(top):
        raise PreconditionError("image plane left the diagonal-invariant family")
    return ap


def mobius_rp1(m, t: float) -> float:
    """Usual fractional-linear action (a t + b) / (c t + d) on R + {infinity}."""
    mm = _as_matrix(m)
    a, b, c, d = mm[0, 0], mm[0, 1], mm[1, 0], mm[1, 1]
    if np.isinf(t):
        return a / c if c != 0.0 else INFINITY
    den = c * t + d
    num = a * t + b
    if abs(den) <= 1e-14 * (abs(num) + 1.0):
        return INFINITY
    return float(num / den)


def rp1_distance(s: float, t: float) -> float:
    """Chordal distance on the projective line (|sin| of the angle between
    the lines through (1, s) and (1, t); infinity is the vertical line)."""
    u = np.array([0.0, 1.0]) if np.isinf(s) else np.array([1.0, s]) / np.hypot(1.0, s)
    v = np.array([0.0, 1.0]) if np.isinf(t) else np.array([1.0, t]) / np.hypot(1.0, t)
    return abs(float(u[0] * v[1] - u[1] * v[0]))


def rational_ray_diagnostic(ray, max_denominator: int = 50):
    """Denominator-bounded rational approximation of a ray, as a diagnostic
    only (rationality of limit data is an open matter, never asserted)."""
    v = np.asarray(ray.ray if isinstance(ray, BoundaryPoint) else ray, float)
    pivot = v[np.argmax(np.abs(v))]
    fracs = [Fraction(float(x / pivot)).limit_denominator(max_denominator) for x in v]
    approx = np.array([float(f) for f in fracs])
    err = float(np.linalg.norm(v / pivot - approx) / np.linalg.norm(v / pivot))
    return fracs, err
