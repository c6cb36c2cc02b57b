"""Bilinear forms, causal classification and the isotropic structure.

Everything downstream (Cartan factorizations, stable subspaces, boundary
dynamics) is phrased against a non-degenerate symmetric form of recorded
signature.  Vectors and Gram matrices are plain float ndarrays; all values
here are immutable after construction and every operation is pure.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFormError,
    DimensionError,
    NotIsometryError,
    NotIsotropicError,
)

# Scale-invariant isotropy test: |<v,v>| <= ISOTROPY_TOL * |v|^2 (Euclidean).
ISOTROPY_TOL = 1e-9
# Default Grassmannian equality threshold (largest principal angle, radians).
SUBSPACE_TOL = 1e-7
# Gram matrices must be symmetric to this relative tolerance.
SYMMETRY_TOL = 1e-12
# Eigenvalues below this (relative to the largest) mean a degenerate form.
DEGENERACY_TOL = 1e-12

_ORTHONORMAL_TOL = 1e-10


def _as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {m.shape}")
    return m


def _as_vector(v, d: int | None = None) -> np.ndarray:
    u = np.asarray(v, dtype=float).reshape(-1)
    if d is not None and u.shape[0] != d:
        raise DimensionError(f"expected a vector of dimension {d}, got {u.shape[0]}")
    return u


@dataclass(frozen=True)
class QuadraticForm:
    """Non-degenerate symmetric bilinear form with its signature (p, q).

    p counts negative eigenvalues of the Gram matrix, q positive ones.
    A Lorentz form in these conventions has signature (1, d-1).
    """

    gram: np.ndarray
    signature: tuple[int, int]

    def __post_init__(self):
        g = _as_matrix(self.gram)
        if g.shape[0] != g.shape[1]:
            raise DimensionError("Gram matrix must be square")
        scale = np.linalg.norm(g)
        if scale == 0 or np.linalg.norm(g - g.T) > SYMMETRY_TOL * scale:
            raise DegenerateFormError("Gram matrix is not symmetric")
        g = 0.5 * (g + g.T)
        g.flags.writeable = False
        object.__setattr__(self, "gram", g)
        eig = np.linalg.eigvalsh(g)
        top = np.max(np.abs(eig))
        if np.min(np.abs(eig)) <= DEGENERACY_TOL * top:
            raise DegenerateFormError("form is degenerate")
        p = int(np.sum(eig < 0))
        q = int(np.sum(eig > 0))
        if (p, q) != tuple(self.signature):
            raise DegenerateFormError(
                f"declared signature {self.signature} but eigenvalues give ({p}, {q})"
            )

    @classmethod
    def from_gram(cls, gram) -> "QuadraticForm":
        """Build a form from a Gram matrix, inferring the signature."""
        g = _as_matrix(gram)
        eig = np.linalg.eigvalsh(0.5 * (g + g.T))
        p = int(np.sum(eig < 0))
        q = int(np.sum(eig > 0))
        return cls(gram=g, signature=(p, q))

    @classmethod
    def minkowski(cls, d: int) -> "QuadraticForm":
        """Standard Lorentz form diag(-1, 1, ..., 1) on R^d."""
        g = np.eye(d)
        g[0, 0] = -1.0
        return cls(gram=g, signature=(1, d - 1))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def is_lorentz(self) -> bool:
        return self.signature == (1, self.dim - 1)


class CausalType(enum.Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"
    ZERO = "zero"


def evaluate(form: QuadraticForm, u, v) -> float:
    """The bilinear value u^T . gram . v; symmetric in u and v."""
    d = form.dim
    return float(_as_vector(u, d) @ form.gram @ _as_vector(v, d))


def causal_type(form: QuadraticForm, v, tol: float = ISOTROPY_TOL) -> CausalType:
    """Classify v as timelike / lightlike / spacelike, tolerance scaled by |v|^2."""
    u = _as_vector(v, form.dim)
    n2 = float(u @ u)
    if n2 == 0.0:
        return CausalType.ZERO
    q = evaluate(form, u, u)
    if q < -tol * n2:
        return CausalType.TIMELIKE
    if q > tol * n2:
        return CausalType.SPACELIKE
    return CausalType.LIGHTLIKE


def is_isometry(form: QuadraticForm, A, tol: float = 1e-9) -> bool:
    """True iff |A^T g A - g|_F <= tol * |g|_F."""
    m = _as_matrix(A)
    if m.shape != form.gram.shape:
        raise DimensionError("matrix dimension does not match the form")
    return bool(
        np.linalg.norm(m.T @ form.gram @ m - form.gram)
        <= tol * np.linalg.norm(form.gram)
    )


def require_isometry(form: QuadraticForm, A, tol: float = 1e-9) -> np.ndarray:
    """Gate variant of `is_isometry` with a roundoff allowance.

    Forming A^T g A loses about eps * |A|^2 of absolute accuracy to
    cancellation, so matrices of large norm cannot be checked against
    tol * |g| alone; the allowance keeps genuinely non-preserving matrices
    (defect of order |A|^2 |g|) detectable at every scale.
    """
    m = _as_matrix(A)
    if m.shape != form.gram.shape:
        raise DimensionError("matrix dimension does not match the form")
    op = np.linalg.norm(m, 2)
    allowance = 64.0 * form.dim * np.finfo(float).eps * op * op * np.linalg.norm(form.gram, 2)
    defect = np.linalg.norm(m.T @ form.gram @ m - form.gram)
    if defect > tol * np.linalg.norm(form.gram) + allowance:
        raise NotIsometryError("matrix does not preserve the form")
    return m


def canonical_ray(v) -> np.ndarray:
    """Deterministic projective representative: Euclidean unit length,
    first coordinate of magnitude > 1e-9 made positive."""
    u = _as_vector(v)
    n = np.linalg.norm(u)
    if n == 0:
        raise NotIsotropicError("zero vector has no ray representative")
    u = u / n
    for x in u:
        if abs(x) > 1e-9:
            if x < 0:
                u = -u
            break
    u.flags.writeable = False
    return u


def project_to_cone(form: QuadraticForm, v) -> np.ndarray:
    """Nearest-by-one-step isotropic vector to v (Newton step along gram.v).

    Used to land nearly isotropic limit directions exactly on the cone;
    fails if v is far from the cone (no small real step exists).
    """
    u = _as_vector(v, form.dim)
    q = evaluate(form, u, u)
    n2 = float(u @ u)
    if n2 == 0:
        raise NotIsotropicError("cannot project the zero vector")
    if abs(q) <= 1e-15 * n2:
        return canonical_ray(u)
    w = form.gram @ u
    a = evaluate(form, w, w)
    b = -2.0 * float(w @ form.gram @ u)
    # q(u - t w) = q + b t + a t^2 ; take the root of smaller magnitude
    if abs(a) <= 1e-300:
        if b == 0.0:
            raise NotIsotropicError("vector cannot be projected onto the cone")
        t = -q / b
    else:
        disc = b * b - 4.0 * a * q
        if disc < 0:
            raise NotIsotropicError("vector cannot be projected onto the cone")
        # cancellation-free small root: t = 2q / (-b -+ sqrt(disc))
        r = np.sqrt(disc)
        big = -(b + np.copysign(r, b)) / 2.0
        t_big = big / a
        t_small = q / big if big != 0.0 else 0.0
        t = t_small if abs(t_small) <= abs(t_big) else t_big
    if abs(t) * np.linalg.norm(w) > 0.5 * np.sqrt(n2):
        raise NotIsotropicError("vector is not close to the isotropic cone")
    return canonical_ray(u - t * w)


@dataclass(frozen=True)
class Subspace:
    """Linear subspace given by a Euclidean column-orthonormal basis matrix.

    Equality is Grassmannian: two subspaces are equal when the largest
    principal angle between them is below `SUBSPACE_TOL` (overridable via
    `isclose`).  The zero subspace is a (d, 0) basis.
    """

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.ndim != 2:
            raise DimensionError("basis must be a d x k matrix")
        if b.shape[1] > 0:
            gram = b.T @ b
            if np.linalg.norm(gram - np.eye(b.shape[1])) > _ORTHONORMAL_TOL:
                raise DimensionError("basis columns are not orthonormal")
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "basis", b)

    @classmethod
    def from_spanning(cls, columns, tol: float = 1e-12) -> "Subspace":
        """Orthonormalize a d x k matrix whose columns span the subspace."""
        m = np.asarray(columns, dtype=float)
        if m.ndim == 1:
            m = m.reshape(-1, 1)
        u, s, _ = np.linalg.svd(m, full_matrices=False)
        rank = int(np.sum(s > tol * (s[0] if s.size else 1.0)))
        return cls(basis=u[:, :rank])

    @classmethod
    def spanned_by(cls, *vectors) -> "Subspace":
        return cls.from_spanning(np.column_stack([_as_vector(v) for v in vectors]))

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(basis=np.zeros((d, 0)))

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(basis=np.eye(d))

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def distance(self, other: "Subspace") -> float:
        return grassmann_distance(self.basis, other.basis)

    def isclose(self, other: "Subspace", tol: float = SUBSPACE_TOL) -> bool:
        return self.distance(other) < tol

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.isclose(other)

    def contains(self, v, tol: float = 1e-8) -> bool:
        u = _as_vector(v, self.ambient_dim)
        n = np.linalg.norm(u)
        if n == 0:
            return True
        residual = u - self.basis @ (self.basis.T @ u)
        return bool(np.linalg.norm(residual) <= tol * n)

    def angle_to_vector(self, v) -> float:
        """Angle between a vector and the subspace (0 if contained)."""
        u = _as_vector(v, self.ambient_dim)
        n = np.linalg.norm(u)
        if n == 0 or self.dim == 0:
            return 0.0 if n == 0 else np.pi / 2
        c = np.linalg.norm(self.basis.T @ u) / n
        return float(np.arccos(min(1.0, c)))


def grassmann_distance(basis_a: np.ndarray, basis_b: np.ndarray) -> float:
    """Largest principal angle between two column spaces, in radians.

    Computed through the sine (operator norm of the projection residual),
    which stays accurate down to machine precision where the arccos of a
    near-unit cosine would lose half the digits.  Subspaces of different
    dimension are at distance pi/2 by convention.
    """
    a = np.asarray(basis_a, float)
    b = np.asarray(basis_b, float)
    if a.shape[1] != b.shape[1]:
        return np.pi / 2
    if a.shape[1] == 0:
        return 0.0
    residual = b - a @ (a.T @ b)
    s = np.linalg.norm(residual, 2)
    return float(np.arcsin(min(1.0, s)))


def orthogonal_complement(form: QuadraticForm, s: Subspace) -> Subspace:
    """{v : <v, w> = 0 for all w in S}, computed as the null space of S^T.gram."""
    if s.ambient_dim != form.dim:
        raise DimensionError("subspace does not live in the form's space")
    if s.dim == 0:
        return Subspace.full(form.dim)
    m = s.basis.T @ form.gram
    _, sv, vt = np.linalg.svd(m)
    rank = int(np.sum(sv > 1e-12 * sv[0]))
    return Subspace(basis=vt[rank:].T)


def lightlike_hyperplane(form: QuadraticForm, u) -> Subspace:
    """u-perp for isotropic u: the (d-1)-plane containing u on which the
    form degenerates with kernel R.u."""
    v = _as_vector(u, form.dim)
    ct = causal_type(form, v)
    if ct is not CausalType.LIGHTLIKE:
        raise NotIsotropicError(f"vector is {ct.value}, not lightlike")
    return orthogonal_complement(form, Subspace.spanned_by(v))


def restricted_gram(form: QuadraticForm, s: Subspace) -> np.ndarray:
    """Gram matrix of the form restricted to the subspace, in its basis."""
    return s.basis.T @ form.gram @ s.basis


def degenerate_kernel(form: QuadraticForm, s: Subspace, tol: float = 1e-8) -> Subspace:
    """Kernel of the restricted form inside S (directions orthogonal to all of S)."""
    g = restricted_gram(form, s)
    if s.dim == 0:
        return s
    w, v = np.linalg.eigh(g)
    scale = max(np.max(np.abs(w)), 1.0)
    cols = v[:, np.abs(w) <= tol * scale]
    if cols.shape[1] == 0:
        return Subspace.zero(s.ambient_dim)
    return Subspace.from_spanning(s.basis @ cols)
