"""Partial-hyperbolicity cocycles and the entropy dichotomy on torus models.

A hyperbolic integer isometry of a flat Lorentz torus contracts one
isotropic eigenray and expands another; the derivative multipliers along
those rays form multiplicative cocycles whose logarithms are the Lyapunov
exponents, and whose volume-weighted logarithm is additive on ray-
preserving words.  The linear model collapses the manifold-level,
site-dependent picture to constants, which is exactly what makes every
identity checkable to machine accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotHyperbolicError, PreconditionError
from .minkowski import evaluate
from .models import RationalLorentzForm
from .projective import BoundaryPoint, ray_angle
from .stability import MatrixSequence, as_subspace_kak, is_divergent

_UNIT_CIRCLE_TOL = 1e-9


@dataclass(frozen=True)
class TorusAutomorphism:
    """Element of O(g, Z) acting on the flat torus R^d / Z^d with metric g."""

    matrix: np.ndarray
    form: RationalLorentzForm

    def __post_init__(self):
        a = np.asarray(self.matrix)
        if not np.issubdtype(a.dtype, np.integer):
            ai = np.rint(a).astype(np.int64)
            if not np.array_equal(ai, a):
                raise PreconditionError("automorphism entries must be integers")
            a = ai
        else:
            a = a.astype(np.int64)
        g = self.form.gram
        if not np.array_equal(a.T @ g @ a, g):
            raise PreconditionError("matrix does not preserve the integer form")
        det = int(round(np.linalg.det(a.astype(float))))
        if abs(det) != 1:
            raise PreconditionError("matrix is not unimodular")
        a.flags.writeable = False
        object.__setattr__(self, "matrix", a)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigen(self):
        return np.linalg.eig(self.matrix.astype(float))

    def is_hyperbolic(self) -> bool:
        w, _ = self.eigen()
        real = w[np.abs(w.imag) < _UNIT_CIRCLE_TOL].real
        return bool(np.any(np.abs(real) > 1.0 + _UNIT_CIRCLE_TOL))

    def power_sequence(self, count: int = 40, inverse: bool = False) -> MatrixSequence:
        """Powers A, A^2, ..., capped where the terms stop being numerically
        invertible (condition number past ~5e12); hyperbolic elements reach
        that wall long before 40 powers."""
        base = np.linalg.inv(self.matrix.astype(float)) if inverse \
            else self.matrix.astype(float)
        terms = []
        acc = base
        for _ in range(count):
            sv = np.linalg.svd(acc, compute_uv=False)
            if sv[-1] <= 2e-13 * sv[0]:
                break
            terms.append(acc)
            acc = acc @ base
        return MatrixSequence.from_terms(terms, generator_spec="powers 1..%d" % len(terms))


@dataclass(frozen=True)
class CocycleValue:
    """Multipliers along the contracted and expanded normal rays.

    `site` stays None for the linear torus model: the multipliers are
    site-independent there, which the field records.
    """

    lambda1: float
    lambda2: float
    site: object = None


def _hyperbolic_pair(aut: TorusAutomorphism):
    """(mu_small, ray_small, mu_big, ray_big) with |mu_small| < 1 < |mu_big|."""
    w, v = aut.eigen()
    real_idx = [i for i in range(len(w)) if abs(w[i].imag) < _UNIT_CIRCLE_TOL]
    off = [i for i in real_idx if abs(abs(w[i].real) - 1.0) > _UNIT_CIRCLE_TOL]
    if not off:
        raise NotHyperbolicError(
            "automorphism is elliptic/parabolic: every eigenvalue sits on "
            "the unit circle"
        )
    mags = [abs(w[i].real) for i in off]
    i_big = off[int(np.argmax(mags))]
    i_small = off[int(np.argmin(mags))]
    if not (mags[int(np.argmax(mags))] > 1.0 > mags[int(np.argmin(mags))]):
        raise NotHyperbolicError("eigenvalues off the unit circle do not pair up")
    form = aut.form.to_quadratic_form()
    a = aut.matrix.astype(float)
    a_inv = np.linalg.inv(a)
    out = []
    for i, refine in ((i_small, a_inv), (i_big, a)):
        vec = np.real(v[:, i])
        vec = vec / np.linalg.norm(vec)
        # purify by power iteration (the eigendirection dominates `refine`);
        # raw eig leaves ~1e-13 cross-contamination that word powers amplify
        for _ in range(30):
            vec = refine @ vec
            vec /= np.linalg.norm(vec)
        if abs(evaluate(form, vec, vec)) > 1e-8:
            raise NotHyperbolicError("normal eigendirection is not isotropic")
        out.append((float(w[i].real), BoundaryPoint.from_vector(form, vec)))
    (mu_s, ray_s), (mu_b, ray_b) = out
    return mu_s, ray_s, mu_b, ray_b


def normal_directions(aut: TorusAutomorphism) -> tuple[BoundaryPoint, BoundaryPoint]:
    """Contracted and expanded isotropic eigenrays of a hyperbolic element."""
    mu_s, ray_s, mu_b, ray_b = _hyperbolic_pair(aut)
    return ray_s, ray_b


def cocycle(aut: TorusAutomorphism, n: int) -> CocycleValue:
    """Multipliers of the n-th iterate: (|mu_1|^n, |mu_2|^n)."""
    mu_s, _, mu_b, _ = _hyperbolic_pair(aut)
    return CocycleValue(lambda1=abs(mu_s) ** n, lambda2=abs(mu_b) ** n)


def lyapunov_exponent(aut: TorusAutomorphism, direction: int,
                      steps: int = 50) -> float:
    """log|mu| along normal direction 1 (contracted, negative) or 2
    (expanded, positive).

    Cross-checked against the finite-step quotient log(|A^steps x|) / steps
    computed by matrix powering along the eigendirection (inverse powers for
    the contracted one, where forward powering is swamped by the expanding
    component); both routes must agree to 1e-9.
    """
    if direction not in (1, 2):
        raise PreconditionError("direction must be 1 or 2")
    mu_s, ray_s, mu_b, ray_b = _hyperbolic_pair(aut)
    mu, ray = (mu_s, ray_s) if direction == 1 else (mu_b, ray_b)
    closed = float(np.log(abs(mu)))
    a = aut.matrix.astype(float)
    if direction == 2:
        powered = np.linalg.matrix_power(a, steps) @ ray.ray
        finite = float(np.log(np.linalg.norm(powered)) / steps)
    else:
        powered = np.linalg.matrix_power(np.linalg.inv(a), steps) @ ray.ray
        finite = -float(np.log(np.linalg.norm(powered)) / steps)
    if abs(finite - closed) > 1e-9 * max(1.0, abs(closed)):
        raise NotHyperbolicError(
            "finite-step exponent disagrees with the closed form; eigendata "
            "is unreliable"
        )
    return closed


def ray_multiplier(a, ray: BoundaryPoint, tol: float = 1e-6) -> float:
    """|c| where A ray = c ray; errors if the ray is not preserved."""
    m = np.asarray(a, dtype=float)
    img = m @ ray.ray
    if ray_angle(img, ray.ray) > tol:
        raise PreconditionError(
            "cocycle undefined: word does not preserve the chosen ray"
        )
    return float(np.linalg.norm(img) / np.linalg.norm(ray.ray))


def big_lambda(words, volume: float = 1.0,
               ray: BoundaryPoint | None = None) -> list[float]:
    """Volume-weighted log-multiplier of each word along a shared invariant
    ray: volume * log lambda(word).

    Additive in the word (a homomorphism to R) whenever all words preserve
    the ray; defaults to the contracted ray of the first hyperbolic word.
    """
    mats = []
    for w in words:
        mats.append(w.matrix.astype(float) if isinstance(w, TorusAutomorphism)
                    else np.asarray(w, dtype=float))
    if ray is None:
        for w in words:
            if isinstance(w, TorusAutomorphism) and w.is_hyperbolic():
                ray = normal_directions(w)[0]
                break
    if ray is None:
        raise PreconditionError(
            "no invariant ray: supply one or include a hyperbolic word"
        )
    return [volume * float(np.log(ray_multiplier(m, ray))) for m in mats]


@dataclass(frozen=True)
class EntropyReport:
    """Entropy of a torus automorphism next to its stable-foliation flag.

    `as_equal` records whether the stable subspaces of the forward and
    backward power sequences agree (defined True for equicontinuous
    elements, where there is nothing to tell apart); the dichotomy is
    entropy > 0 exactly when they differ.  `p_threshold` is the smallest
    power p with |mu|^-p < 1/2 for hyperbolic elements.
    """

    entropy: float
    as_equal: bool
    eigenvalues: tuple
    exponents: tuple
    p_threshold: int | None

    def __iter__(self):
        return iter((self.entropy, self.as_equal))


def entropy_dichotomy(aut: TorusAutomorphism, count: int = 40,
                      subspace_tol: float = 1e-4) -> EntropyReport:
    """Topological entropy sum over expanding eigenvalues, with the
    approximately-stable comparison between the automorphism and its inverse."""
    w, _ = aut.eigen()
    entropy = float(np.sum(np.log(np.abs(w)[np.abs(w) > 1.0 + _UNIT_CIRCLE_TOL])))
    forward = aut.power_sequence(count)
    if not is_divergent(forward):
        as_equal = True
    else:
        fwd = as_subspace_kak(forward)
        bwd = as_subspace_kak(aut.power_sequence(count, inverse=True))
        as_equal = bool(fwd.subspace.isclose(bwd.subspace, tol=subspace_tol))
    p = None
    if aut.is_hyperbolic():
        mu_s, _, _, _ = _hyperbolic_pair(aut)
        p = 1
        while abs(mu_s) ** p >= 0.5:
            p += 1
    exponents = tuple(sorted(float(x) for x in np.log(np.abs(w))))
    return EntropyReport(
        entropy=entropy,
        as_equal=as_equal,
        eigenvalues=tuple(sorted((complex(z).real, complex(z).imag) for z in w)),
        exponents=exponents,
        p_threshold=p,
    )
