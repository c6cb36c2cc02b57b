"""Boundary dynamics: north-south certificates, orbit limits and limit sets.

The boundary in question is the projectivized isotropic cone of a Lorentz
form.  Divergent isometry sequences push any point of the unit-timelike
hyperboloid sheet out to a single boundary ray; sampling far-out words of a
finitely generated isometry group and clustering where they send a base
point estimates the group's limit set, whose cardinality classifies the
group (one point: parabolic; two: hyperbolic; more: non-elementary).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .cartan import norm_growth
from .errors import (
    CertificateError,
    ConvergenceError,
    EquicontinuousError,
    NotIsotropicError,
    PreconditionError,
)
from .minkowski import (
    ISOTROPY_TOL,
    QuadraticForm,
    Subspace,
    _as_vector,
    canonical_ray,
    evaluate,
    project_to_cone,
    require_isometry,
)
from .stability import (
    MatrixSequence,
    as_subspace_kak,
    is_divergent,
    sphere_points,
)

# Default clustering angle for limit-set estimates (5 degrees).
CLUSTER_ANGLE = np.deg2rad(5.0)
# Words below this operator norm are not "far out" enough to see the boundary.
WORD_DIVERGENCE_THRESHOLD = 1e3
# Default projective grid size for north-south certificates.
GRID_POINTS = 2000


@dataclass(frozen=True)
class BoundaryPoint:
    """Isotropic ray: deterministic unit representative of a projective
    point of the light cone."""

    ray: np.ndarray

    def __post_init__(self):
        r = _as_vector(self.ray)
        if abs(np.linalg.norm(r) - 1.0) > 1e-9:
            raise PreconditionError("boundary ray must be a unit vector")
        r = r.copy()
        r.flags.writeable = False
        object.__setattr__(self, "ray", r)

    @classmethod
    def from_vector(cls, form: QuadraticForm, v) -> "BoundaryPoint":
        r = canonical_ray(_as_vector(v, form.dim))
        if abs(evaluate(form, r, r)) > ISOTROPY_TOL:
            raise NotIsotropicError("ray is not on the isotropic cone")
        return cls(ray=r)

    @classmethod
    def from_near_cone(cls, form: QuadraticForm, v) -> "BoundaryPoint":
        """Snap a nearly isotropic direction onto the cone first."""
        return cls(ray=project_to_cone(form, v))

    def angle_to(self, other: "BoundaryPoint") -> float:
        return ray_angle(self.ray, other.ray)


def ray_angle(u, v) -> float:
    """Angular distance between projective rays (antipodal-safe)."""
    c = abs(float(np.dot(u, v))) / (np.linalg.norm(u) * np.linalg.norm(v))
    return float(np.arccos(min(1.0, c)))


@dataclass(frozen=True)
class HyperbolicPoint:
    """Point of the chosen sheet of the unit-timelike hyperboloid:
    <v, v> = -1 with v_1 > 0."""

    v: np.ndarray
    form: QuadraticForm

    def __post_init__(self):
        u = _as_vector(self.v, self.form.dim)
        if abs(evaluate(self.form, u, u) + 1.0) > 1e-10:
            raise PreconditionError("point is not on the unit-timelike hyperboloid")
        if not u[0] > 0:
            raise PreconditionError("point is on the wrong sheet (needs v_1 > 0)")
        u = u.copy()
        u.flags.writeable = False
        object.__setattr__(self, "v", u)

    @classmethod
    def from_timelike(cls, form: QuadraticForm, v) -> "HyperbolicPoint":
        u = _as_vector(v, form.dim)
        q = evaluate(form, u, u)
        if q >= 0:
            raise PreconditionError("vector is not timelike")
        u = u / np.sqrt(-q)
        if u[0] < 0:
            u = -u
        return cls(v=u, form=form)


def act_boundary(form: QuadraticForm, A, b: BoundaryPoint) -> BoundaryPoint:
    """Image of a boundary ray under an isometry."""
    m = require_isometry(form, A)
    return BoundaryPoint(ray=canonical_ray(m @ b.ray))


def hyperbolic_orbit_limit(form: QuadraticForm, seq: MatrixSequence,
                           s: HyperbolicPoint, angle_tol: float = 1e-2) -> BoundaryPoint:
    """Boundary limit of the orbit A_n . s of a hyperboloid point.

    The orbit must leave every compact set (divergent isometries); its
    directions must settle into a single angular cluster of radius
    `angle_tol` over the tail, else a ConvergenceError carries the cluster
    breakdown.  The limit is snapped onto the cone.  By the section-
    independence fact the result does not depend on s.
    """
    for t in seq.terms:
        require_isometry(form, t, tol=1e-8)
    orbit = seq.terms @ s.v
    norms = np.linalg.norm(orbit, axis=1)
    n = len(norms)
    tail = norms[n // 2:]
    if np.min(tail) <= 10.0 * np.linalg.norm(s.v) or norms[-1] < 1.3 * norms[n // 2]:
        raise EquicontinuousError(
            "orbit remains in a bounded region; sequence acts equicontinuously "
            "at the base point"
        )
    rays = orbit / norms[:, None]
    last = rays[-1]
    tail_rays = rays[n // 2:]
    angles = np.arccos(np.minimum(1.0, np.abs(tail_rays @ last)))
    if np.max(angles) > angle_tol:
        clusters = _cluster_rays(tail_rays, angle_tol)
        raise ConvergenceError(
            "orbit direction oscillates between boundary clusters",
            clusters=[(c.weight, c.centroid.ray.tolist()) for c in clusters],
        )
    return BoundaryPoint.from_near_cone(form, last)


def north_south_certificate(form: QuadraticForm, seq: MatrixSequence,
                            u_angle: float, v_angle: float,
                            grid: int = GRID_POINTS) -> int:
    """Smallest index N such that every grid direction outside the U-cone of
    the stable projective subspace lands, under every A_n with n >= N,
    inside the V-cone of the inverse sequence's stable subspace.

    Angles are radians.  Raises CertificateError when no such N exists
    within the sequence.
    """
    stable = as_subspace_kak(seq)
    unstable = as_subspace_kak(seq.inverse())
    if not (stable.converged and unstable.converged):
        raise ConvergenceError("stable subspaces of the sequence or its inverse "
                               "did not converge")
    pts = sphere_points(form.dim, grid)
    src = stable.subspace
    dst = unstable.subspace
    outside = np.array([src.angle_to_vector(p) > u_angle for p in pts])
    probes = pts[outside]
    ok = np.empty(len(seq), dtype=bool)
    for i, t in enumerate(seq.terms):
        images = probes @ t.T
        images /= np.linalg.norm(images, axis=1, keepdims=True)
        cosines = np.linalg.norm(images @ dst.basis, axis=1)
        ok[i] = bool(np.all(np.arccos(np.minimum(1.0, cosines)) <= v_angle))
    good = np.where(~ok)[0]
    if ok.all():
        return 0
    first = int(good[-1]) + 1
    if first >= len(seq):
        raise CertificateError("insufficient length: expansion never traps the "
                               "grid within the target cone")
    return first


class CardinalityClass(enum.Enum):
    ONE = "one"
    TWO = "two"
    LARGE = "large"


class GroupClass(enum.Enum):
    ELEMENTARY_PARABOLIC = "elementary_parabolic"
    ELEMENTARY_HYPERBOLIC = "elementary_hyperbolic"
    NON_ELEMENTARY = "non_elementary"


@dataclass(frozen=True)
class RayCluster:
    centroid: BoundaryPoint
    weight: int
    angular_radius: float


@dataclass(frozen=True)
class LimitSetEstimate:
    clusters: tuple
    cardinality_class: CardinalityClass
    words_sampled: int
    divergent_words: int
    min_intercluster_gap: float | None

    @property
    def points(self) -> tuple:
        return tuple(c.centroid for c in self.clusters)


def _cluster_rays(rays: np.ndarray, angle: float) -> list[RayCluster]:
    """Greedy angular clustering with antipodal identification."""
    sums: list[np.ndarray] = []
    members: list[list[np.ndarray]] = []
    for r in rays:
        placed = False
        for i, s in enumerate(sums):
            c = s / np.linalg.norm(s)
            if ray_angle(c, r) <= angle:
                aligned = r if np.dot(c, r) >= 0 else -r
                sums[i] = s + aligned
                members[i].append(aligned)
                placed = True
                break
        if not placed:
            sums.append(r.copy())
            members.append([r])
    clusters = []
    for s, mem in zip(sums, members):
        c = canonical_ray(s)
        radius = max(ray_angle(c, m) for m in mem)
        clusters.append(RayCluster(centroid=BoundaryPoint(ray=c),
                                   weight=len(mem), angular_radius=radius))
    clusters.sort(key=lambda cl: cl.weight, reverse=True)
    return clusters


def _snap_cluster(form: QuadraticForm, c: RayCluster) -> RayCluster:
    try:
        centroid = BoundaryPoint(ray=project_to_cone(form, c.centroid.ray))
    except NotIsotropicError:
        return c
    return RayCluster(centroid=centroid, weight=c.weight,
                      angular_radius=c.angular_radius)


def _merge_close_clusters(form: QuadraticForm, clusters: list[RayCluster],
                          angle: float) -> list[RayCluster]:
    """Merge cluster pairs until all centroids are separated by more than
    the clustering angle."""
    clusters = list(clusters)
    while len(clusters) > 1:
        best = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                gap = clusters[i].centroid.angle_to(clusters[j].centroid)
                if gap <= angle and (best is None or gap < best[0]):
                    best = (gap, i, j)
        if best is None:
            break
        _, i, j = best
        a, b = clusters[i], clusters[j]
        u = a.centroid.ray * a.weight
        v = b.centroid.ray * b.weight
        if np.dot(a.centroid.ray, b.centroid.ray) < 0:
            v = -v
        centroid = BoundaryPoint(ray=canonical_ray(u + v))
        merged = RayCluster(
            centroid=centroid,
            weight=a.weight + b.weight,
            angular_radius=max(
                a.angular_radius + centroid.angle_to(a.centroid),
                b.angular_radius + centroid.angle_to(b.centroid),
            ),
        )
        clusters = [c for k, c in enumerate(clusters) if k not in (i, j)]
        clusters.append(_snap_cluster(form, merged))
        clusters.sort(key=lambda cl: cl.weight, reverse=True)
    return clusters


def _sample_words(generators: list[np.ndarray], depth: int, samples: int,
                  rng: np.random.Generator):
    """Reduced random words up to the given length over generators and inverses."""
    letters = list(generators) + [np.linalg.inv(g) for g in generators]
    g = len(generators)
    inverse_of = {i: i + g for i in range(g)} | {i + g: i for i in range(g)}
    for _ in range(samples):
        length = int(rng.integers(1, depth + 1))
        word = np.eye(generators[0].shape[0])
        prev = -1
        wlen = 0
        for _ in range(length):
            choices = [i for i in range(2 * g) if prev < 0 or i != inverse_of[prev]]
            i = int(choices[rng.integers(0, len(choices))])
            word = word @ letters[i]
            prev = i
            wlen += 1
        yield wlen, word


def limit_set(form: QuadraticForm, generators, depth: int = 8,
              samples: int = 2000, s: HyperbolicPoint | None = None,
              cluster_angle: float = CLUSTER_ANGLE, seed: int = 0,
              divergence_threshold: float = WORD_DIVERGENCE_THRESHOLD,
              trace: list | None = None) -> LimitSetEstimate:
    """Estimate the limit set of the group generated by `generators`.

    Samples reduced random words up to length `depth`, keeps the ones whose
    operator norm clears `divergence_threshold`, maps the base point s
    through them, and clusters the resulting rays by angle.  Finite sampling
    evidences (never certifies) cardinality, so the estimate also reports
    the smallest gap between clusters.  When `trace` is a list, rows
    (word length, ray..., growth) are appended for CSV export.
    """
    gens = [require_isometry(form, g, tol=1e-8) for g in generators]
    if s is None:
        raise PreconditionError("a hyperboloid base point s is required")
    rng = np.random.default_rng(seed)
    rays = []
    divergent = 0
    for wlen, word in _sample_words(gens, depth, samples, rng):
        growth = norm_growth(word)
        if growth < divergence_threshold:
            continue
        divergent += 1
        img = word @ s.v
        ray = canonical_ray(img)
        rays.append(ray)
        if trace is not None:
            trace.append((wlen, *ray.tolist(), growth))
    if not rays:
        raise EquicontinuousError(
            "no sampled word exceeded the divergence threshold: group appears "
            "equicontinuous at this depth"
        )
    snapped = []
    for r in rays:
        try:
            snapped.append(project_to_cone(form, r))
        except NotIsotropicError:
            snapped.append(canonical_ray(r))
    clusters = _cluster_rays(np.array(snapped), cluster_angle)
    # cluster means drift off the cone; snap the representatives back, then
    # merge any pair the snap pushed inside the clustering angle
    clusters = [_snap_cluster(form, c) for c in clusters]
    clusters = _merge_close_clusters(form, clusters, cluster_angle)
    k = len(clusters)
    card = CardinalityClass.ONE if k == 1 else (
        CardinalityClass.TWO if k == 2 else CardinalityClass.LARGE)
    gap = None
    if k > 1:
        gap = min(
            clusters[i].centroid.angle_to(clusters[j].centroid)
            for i in range(k) for j in range(i + 1, k)
        )
    return LimitSetEstimate(
        clusters=tuple(clusters),
        cardinality_class=card,
        words_sampled=samples,
        divergent_words=divergent,
        min_intercluster_gap=gap,
    )


def classify_elementary(estimate: LimitSetEstimate) -> GroupClass:
    """Boundary cardinality one means parabolic, two hyperbolic, more means
    the group is not elementary."""
    if estimate.cardinality_class is CardinalityClass.ONE:
        return GroupClass.ELEMENTARY_PARABOLIC
    if estimate.cardinality_class is CardinalityClass.TWO:
        return GroupClass.ELEMENTARY_HYPERBOLIC
    return GroupClass.NON_ELEMENTARY
