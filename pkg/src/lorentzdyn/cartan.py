"""Cartan (KAK) decomposition A = L.D.R and the Lorentz pattern check.

L and R are Euclidean rotations, D is the ascending list of singular
values.  For an isometry of a Lorentz form expressed in a standard basis,
D must look like (lambda, 1, ..., 1, 1/lambda) with a single contracted
and a single expanded direction; `lorentz_kak` verifies that pattern and
returns lambda.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PatternMismatchError, SingularMatrixError
from .minkowski import QuadraticForm, _as_matrix, require_isometry

# Relative floor under which a singular value means a numerically singular input.
_SINGULAR_TOL = 1e-14
# Pattern tolerance for the Lorentz D = (lambda, 1, ..., 1, 1/lambda) check.
_PATTERN_TOL = 1e-8


@dataclass(frozen=True)
class KakFactorization:
    """Triple (L, D, R) with A = L . diag(D) . R, D ascending positive."""

    L: np.ndarray
    D: np.ndarray
    R: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.L @ np.diag(self.D) @ self.R

    @property
    def dim(self) -> int:
        return self.D.shape[0]


def kak(A) -> KakFactorization:
    """Factor an invertible matrix as rotation . positive-diagonal . rotation.

    D is the ascending singular-value list.  If det A > 0 both factors land
    in SO(d); for det A < 0 one factor necessarily has determinant -1 (the
    sign is pushed into R).  Ties in D leave L and R non-unique; only D is
    contract-stable under such ties.
    """
    m = _as_matrix(A)
    u, s, vt = np.linalg.svd(m)
    if s[-1] == 0 or s[-1] < _SINGULAR_TOL * s[0] or s[0] == 0:
        raise SingularMatrixError("matrix is numerically singular")
    order = np.argsort(s)  # ascending
    L = u[:, order]
    D = s[order]
    R = vt[order, :]
    # Land L in SO(d) without disturbing D: flip the last column of L and the
    # matching row of R.
    if np.linalg.det(L) < 0:
        L = L.copy()
        R = R.copy()
        L[:, -1] = -L[:, -1]
        R[-1, :] = -R[-1, :]
    return KakFactorization(L=L, D=D, R=R)


def norm_growth(A) -> float:
    """Largest singular value (operator norm); >= 1 for volume-preserving A."""
    return float(np.linalg.norm(_as_matrix(A), 2))


def standardizing_congruence(form: QuadraticForm) -> np.ndarray:
    """Matrix C with C^T . gram . C equal to the standard diag(-1,...,-1,1,...,1).

    Negative directions come first, so a Lorentz form standardizes to
    diag(-1, 1, ..., 1).  Deterministic: built from the eigendecomposition
    of the Gram matrix with eigenvalues sorted ascending.
    """
    w, v = np.linalg.eigh(form.gram)
    return v / np.sqrt(np.abs(w))


def lorentz_kak(form: QuadraticForm, A, tol: float = _PATTERN_TOL):
    """KAK of a Lorentz isometry with the D-pattern (lambda, 1, ..., 1, 1/lambda).

    Returns (KakFactorization, lambda) with lambda in (0, 1].  When the Gram
    matrix is not already diag(-1, 1, ..., 1) the matrix is first conjugated
    by the standardizing congruence; the returned factorization then refers
    to the standardized conjugate (Euclidean rotations cannot factor the
    original matrix while D keeps the Lorentz pattern).
    """
    if not form.is_lorentz():
        raise PatternMismatchError(
            f"form has signature {form.signature}, expected Lorentz (1, d-1)"
        )
    m = require_isometry(form, A, tol=1e-8)
    standard = np.eye(form.dim)
    standard[0, 0] = -1.0
    if not np.allclose(form.gram, standard, rtol=0, atol=1e-12):
        c = standardizing_congruence(form)
        m = np.linalg.solve(c, m @ c)
    fact = kak(m)
    d = fact.D
    mid_dev = np.max(np.abs(d[1:-1] - 1.0)) if d.shape[0] > 2 else 0.0
    if abs(d[0] * d[-1] - 1.0) > tol or mid_dev > tol:
        raise PatternMismatchError(
            "singular values do not match diag(lambda, 1, ..., 1, 1/lambda): "
            "form/basis mismatch"
        )
    lam = min(float(d[0]), 1.0)
    return fact, lam


def boost(d: int, rapidity: float, axis: int = 1) -> np.ndarray:
    """Hyperbolic rotation of the (e_0, e_axis) plane for diag(-1, 1, ..., 1)."""
    if not 1 <= axis < d:
        raise ValueError("boost axis must be a spacelike index")
    b = np.eye(d)
    c, s = np.cosh(rapidity), np.sinh(rapidity)
    b[0, 0] = c
    b[axis, axis] = c
    b[0, axis] = s
    b[axis, 0] = s
    return b


def spatial_rotation(d: int, q: np.ndarray) -> np.ndarray:
    """Embed a (d-1) x (d-1) rotation as an isometry fixing e_0."""
    r = np.eye(d)
    r[1:, 1:] = q
    return r


def random_lorentz(d: int, rng: np.random.Generator, factors: int = 3,
                   max_rapidity: float = 1.5) -> np.ndarray:
    """Random element of SO(1, d-1) built as boosts interleaved with rotations."""
    a = np.eye(d)
    for _ in range(factors):
        t = rng.uniform(-max_rapidity, max_rapidity)
        axis = int(rng.integers(1, d))
        a = a @ boost(d, t, axis) @ spatial_rotation(d, _random_rotation(d - 1, rng))
    return a


def _random_rotation(k: int, rng: np.random.Generator) -> np.ndarray:
    if k == 1:
        return np.eye(1)
    m = rng.normal(size=(k, k))
    q, r = np.linalg.qr(m)
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
