"""Approximately stable subspaces of a matrix sequence.

A sequence (A_n) of invertible matrices is treated as a generalized
dynamical system at the origin: a direction is approximately stable when
nearby directions have bounded images along the sequence, and strongly so
when those images can be driven to zero.  Three independent detectors
recover the stable subspace:

* ``as_subspace_kak``       via Cartan factors A_n = L_n D_n R_n,
* ``as_subspace_ellipsoid`` via the shrinking axes of {x : |x|<=1, |A_n x|<=1},
* ``as_subspace_graph``     via Grassmannian limits of the graphs (x, A_n x),

plus ``brute_force_as``, a direct discretization of the definition that
backs the other three as an oracle.  Finite data cannot witness a limit;
each detector classifies singular-value trends over the tail of the
sequence and accelerates the subspace limit by polynomial extrapolation
in 1/n (the drift of the candidate subspaces is O(1/n) for unipotent-type
sequences, so plain tails converge too slowly to be useful).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .cartan import kak, norm_growth
from .errors import (
    ConvergenceError,
    EquicontinuousError,
    InsufficientDataError,
    NumericalError,
    SingularMatrixError,
)
from .minkowski import (
    QuadraticForm,
    Subspace,
    degenerate_kernel,
    evaluate,
    grassmann_distance,
    orthogonal_complement,
    require_isometry,
)

# Singular values above this for the whole tail, and still climbing, count
# as growing; below its inverse and shrinking they count as decaying.
BOUND_THRESHOLD = 10.0
# Tail growth ratio sigma(N)/sigma(N/2) that separates growth from a plateau.
# 2.0 misclassifies linearly growing values (ratio -> 2 exactly); 1.7 leaves
# margin on both sides.
GROWTH_RATIO = 1.7
# Single-linkage scale under which tail subspaces belong to one drifting
# family; distinct subsequential limits must be separated well above it.
CLUSTER_LINK = 0.02
# Pairwise agreement required of the detectors on converged input.
AGREEMENT_TOL = 1e-5
# Tolerance for intersecting subsequential limits.
INTERSECTION_TOL = 1e-6

_MIN_TERMS = 8


class StabilityKind(enum.Enum):
    STABLE = "stable"
    STRONGLY_STABLE = "strongly_stable"


@dataclass(frozen=True)
class MatrixSequence:
    """Finite indexed family of invertible d x d matrices.

    ``generator_spec`` is free-form provenance (e.g. "powers of A", "words in
    two boosts") used only in reports.
    """

    terms: np.ndarray
    generator_spec: str | None = None

    def __post_init__(self):
        t = np.asarray(self.terms, dtype=float)
        if t.ndim != 3 or t.shape[1] != t.shape[2]:
            raise SingularMatrixError("terms must be a list of square matrices")
        sv = np.linalg.svd(t, compute_uv=False)
        if np.any(sv[:, -1] <= 1e-13 * sv[:, 0]):
            raise SingularMatrixError("sequence contains a numerically singular term")
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "terms", t)

    @classmethod
    def from_powers(cls, a, count: int, start: int = 1) -> "MatrixSequence":
        m = np.asarray(a, dtype=float)
        terms = []
        acc = np.linalg.matrix_power(m, start)
        for _ in range(count):
            terms.append(acc)
            acc = acc @ m
        return cls(terms=np.array(terms), generator_spec=f"powers {start}..{start + count - 1}")

    @classmethod
    def from_terms(cls, mats, generator_spec: str | None = None) -> "MatrixSequence":
        return cls(terms=np.array([np.asarray(m, float) for m in mats]),
                   generator_spec=generator_spec)

    def inverse(self) -> "MatrixSequence":
        return MatrixSequence(
            terms=np.linalg.inv(self.terms),
            generator_spec=f"inverses of ({self.generator_spec})",
        )

    def __len__(self) -> int:
        return self.terms.shape[0]

    @property
    def dim(self) -> int:
        return self.terms.shape[1]

    @property
    def labels(self) -> np.ndarray:
        """1-based time labels used for extrapolation in 1/n."""
        return np.arange(1, len(self) + 1, dtype=float)


@dataclass(frozen=True)
class ASResult:
    subspace: Subspace
    kind: StabilityKind
    modulus: float
    oracle_agreement: dict = field(default_factory=dict)
    converged: bool = True
    subsequence_indices: tuple = ()

    def __post_init__(self):
        if self.converged and not self.modulus > 0:
            raise NumericalError("converged result must carry a positive modulus")


def is_divergent(seq: MatrixSequence, threshold: float = BOUND_THRESHOLD,
                 trend_ratio: float = 1.3) -> bool:
    """Monotone-trend test for norm_growth(A_n) -> infinity.

    True iff every tail norm exceeds `threshold` and the tail still grows by
    `trend_ratio` from its midpoint; a bounded subsequence (e.g. alternating
    boosts and identities) fails the first clause.
    """
    norms = np.array([norm_growth(t) for t in seq.terms])
    n = len(norms)
    if n < 2:
        return False
    tail = norms[n // 2:]
    if np.min(tail) <= threshold:
        return False
    return bool(norms[-1] >= trend_ratio * norms[n // 2])


# ---------------------------------------------------------------------------
# tail classification and subspace-limit machinery


def _tail_slice(n: int) -> slice:
    return slice(n // 2, n)


def _require_usable(seq: MatrixSequence):
    if len(seq) < _MIN_TERMS:
        raise InsufficientDataError(
            f"subspace-limit detectors need at least {_MIN_TERMS} terms, got {len(seq)}"
        )


def _growing_flags(sig: np.ndarray, threshold: float, ratio: float) -> np.ndarray:
    """Per singular-value index: exceeds threshold over the whole tail and climbs."""
    n = sig.shape[0]
    tail = sig[_tail_slice(n)]
    above = np.all(tail > threshold, axis=0)
    climbing = sig[-1] > ratio * sig[n // 2]
    return above & climbing


def _decaying_flags(sig: np.ndarray, threshold: float, ratio: float) -> np.ndarray:
    n = sig.shape[0]
    tail = sig[_tail_slice(n)]
    below = np.all(tail < 1.0 / threshold, axis=0)
    falling = sig[-1] < sig[n // 2] / ratio
    return below & falling


def _cluster_by_linkage(bases: list[np.ndarray], link: float = CLUSTER_LINK) -> list[list[int]]:
    """Single-linkage components of subspaces at Grassmannian scale `link`."""
    m = len(bases)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if grassmann_distance(bases[i], bases[j]) <= link:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: (len(g), max(g)), reverse=True)


def _extrapolate_projector(bases: list[np.ndarray], labels: np.ndarray,
                           rank: int) -> np.ndarray:
    """Accelerate the limit of a drifting subspace family.

    Candidate subspaces of unipotent-type sequences drift like 1/n, far too
    slowly for a 40-term tail; their projector entries are fitted as
    polynomials in x = 1/n and read off at x = 0.  Exponentially settling
    families (detected by the drift decaying much faster than 1/n) instead
    get a geometric tail-sum correction.  Both branches fall back to the
    last member when they would overshoot the observed drift.
    """
    d = bases[0].shape[0]
    last = bases[-1]
    m = len(bases)
    if rank == 0 or rank == d or m < 4:
        return last
    projs = np.array([b @ b.T for b in bases])
    drift = grassmann_distance(bases[m // 2], last)
    if drift < 1e-11:
        return last

    def to_basis(p0):
        p0 = 0.5 * (p0 + p0.T)
        w, v = np.linalg.eigh(p0)
        return v[:, np.argsort(w)[-rank:]]

    # Per-step decay ratios tell geometric (ratio bounded below 1) apart
    # from 1/n-type drift (ratio creeping up to 1).
    steps = np.array([np.linalg.norm(projs[i + 1] - projs[i])
                      for i in range(max(0, m - 7), m - 1)])
    ratios = steps[1:] / np.maximum(steps[:-1], 1e-300)
    if len(ratios) >= 2 and np.max(ratios) <= 0.85:
        q = float(np.median(ratios))
        d1 = projs[-1] - projs[-2]
        basis = to_basis(projs[-1] + d1 * (q / (1.0 - q)))
        step = grassmann_distance(bases[-2], last)
        if grassmann_distance(basis, last) <= 5.0 * step + 1e-9:
            return basis
        return last

    x = 1.0 / labels
    deg = int(min(6, m - 3))
    p0 = np.zeros((d, d))
    for i in range(d):
        for j in range(i, d):
            coef = np.polynomial.polynomial.polyfit(x, projs[:, i, j], deg)
            p0[i, j] = p0[j, i] = coef[0]
    basis = to_basis(p0)
    if grassmann_distance(basis, last) > max(5.0 * drift, 1e-6):
        return last
    return basis


def _subspace_limit(seq: MatrixSequence, bases_by_index: dict[int, np.ndarray],
                    rank: int):
    """Cluster tail candidates, extrapolate the dominant family, intersect
    the rest.  Returns (subspace, converged, dominant_indices, cluster_bases)."""
    d = seq.dim
    if rank == 0:
        return Subspace.zero(d), True, tuple(sorted(bases_by_index)), []
    if rank == d:
        return Subspace.full(d), True, tuple(sorted(bases_by_index)), []
    indices = sorted(bases_by_index)
    bases = [bases_by_index[i] for i in indices]
    clusters = _cluster_by_linkage(bases)
    labels = seq.labels
    limits = []
    for members in clusters:
        if len(members) < max(3, len(indices) // 10):
            continue
        members = sorted(members)
        fam_bases = [bases[i] for i in members]
        fam_labels = labels[[indices[i] for i in members]]
        limits.append((members, _extrapolate_projector(fam_bases, fam_labels, rank)))
    if not limits:
        raise ConvergenceError("no stable subspace family in the tail",
                               clusters=[len(c) for c in clusters])
    dominant_members, dominant_basis = limits[0]
    dominant_indices = tuple(indices[i] for i in dominant_members)
    if len(limits) == 1 and len(dominant_members) >= 0.9 * len(indices):
        return Subspace(basis=dominant_basis), True, dominant_indices, limits
    # No single limit: the stable set is the intersection of the
    # subsequential limit subspaces.
    inter = _intersect_bases([b for _, b in limits])
    return Subspace(basis=inter), False, dominant_indices, limits


def _intersect_bases(bases: list[np.ndarray], tol: float = INTERSECTION_TOL) -> np.ndarray:
    d = bases[0].shape[0]
    stack = np.vstack([np.eye(d) - b @ b.T for b in bases])
    _, sv, vt = np.linalg.svd(stack)
    sv = np.concatenate([sv, np.zeros(d - len(sv))])
    keep = sv <= tol * max(sv[0], 1.0)
    return vt[keep].T


def _restricted_norms(seq: MatrixSequence, bases_by_index: dict[int, np.ndarray],
                      indices) -> float:
    worst = 0.0
    for i in indices:
        b = bases_by_index[i]
        if b.shape[1] == 0:
            continue
        worst = max(worst, float(np.linalg.norm(seq.terms[i] @ b, 2)))
    return worst


def _modulus(seq, bases_by_index, indices) -> float:
    worst = _restricted_norms(seq, bases_by_index, indices)
    return float("inf") if worst == 0.0 else 1.0 / worst


# ---------------------------------------------------------------------------
# the three subspace detectors


def _gate(seq: MatrixSequence, check_divergent: bool):
    _require_usable(seq)
    if check_divergent and not is_divergent(seq):
        raise EquicontinuousError(
            "sequence is not divergent (equicontinuous trend); no stable "
            "subspace analysis applies"
        )


def as_subspace_kak(seq: MatrixSequence, bound_threshold: float = BOUND_THRESHOLD,
                    check_divergent: bool = True) -> ASResult:
    """Stable subspace via Cartan factors: the limit of R_n^{-1} applied to
    the span of the non-growing singular directions."""
    _gate(seq, check_divergent)
    n = len(seq)
    facts = [kak(t) for t in seq.terms]
    sig = np.array([f.D for f in facts])
    growing = _growing_flags(sig, bound_threshold, GROWTH_RATIO)
    rank = int(np.sum(~growing))
    tail = range(n // 2, n)
    # ascending D puts the bounded directions first; R rows are the
    # right-singular vectors, so R^T columns realize R^{-1}(R^i x {0}).
    cands = {i: facts[i].R[:rank, :].T for i in tail}
    sub, conv, used, _ = _subspace_limit(seq, cands, rank)
    return ASResult(
        subspace=sub,
        kind=StabilityKind.STABLE,
        modulus=_modulus(seq, cands, used),
        converged=conv,
        subsequence_indices=used,
    )


def as_subspace_ellipsoid(seq: MatrixSequence,
                          bound_threshold: float = BOUND_THRESHOLD,
                          check_divergent: bool = True) -> ASResult:
    """Stable subspace via the surviving axes of the ellipsoids
    {x : |x| <= 1 and |A_n x| <= 1} = U intersect A_n^{-1} U.

    The axis along eigenvector v of A_n^T A_n has half-length
    min(1, eigenvalue^{-1/2}); axes whose length collapses to zero drop out
    of the Hausdorff limit and the stable space is the span of the rest.
    Spectral route (eigh of the normalized Gram) kept deliberately separate
    from the SVD route of `as_subspace_kak`.
    """
    _gate(seq, check_divergent)
    n = len(seq)
    ops = np.array([norm_growth(t) for t in seq.terms])
    sig_rows = []
    vecs = []
    for t, op in zip(seq.terms, ops):
        mu, v = np.linalg.eigh((t.T @ t) / (op * op))
        mu = np.maximum(mu, 0.0)
        sig_rows.append(np.sqrt(mu) * op)  # ascending, equals singular values
        vecs.append(v)
    sig = np.array(sig_rows)
    growing = _growing_flags(sig, bound_threshold, GROWTH_RATIO)
    rank = int(np.sum(~growing))
    cands = {i: vecs[i][:, :rank] for i in range(n // 2, n)}
    sub, conv, used, _ = _subspace_limit(seq, cands, rank)
    return ASResult(
        subspace=sub,
        kind=StabilityKind.STABLE,
        modulus=_modulus(seq, cands, used),
        converged=conv,
        subsequence_indices=used,
    )


def as_subspace_graph(seq: MatrixSequence, check_divergent: bool = True) -> ASResult:
    """Stable subspace via graphs: orthonormalize Gr(A_n) = {(x, A_n x)} in
    R^{2d}, watch which first-factor singular directions of the limit keep
    mass, and project them back down.

    A direction with exploding image tilts the graph vertical, so its
    first-factor singular value collapses like 1/|A_n x|; kept directions
    stay bounded away from zero (at least 1/sqrt(1 + C^2) for image bound C).
    """
    _gate(seq, check_divergent)
    n = len(seq)
    d = seq.dim
    tops = []
    for t in seq.terms:
        q, _ = np.linalg.qr(np.vstack([np.eye(d), t]))
        u, s, _ = np.linalg.svd(q[:d, :])
        tops.append((u, s))  # s descending in [0, 1]
    s_all = np.array([s for _, s in tops])
    mid, last = s_all[n // 2], s_all[-1]
    collapsing = (last < 0.25) & (last < 0.6 * mid)
    rank = int(np.sum(~collapsing))
    cands = {i: tops[i][0][:, :rank] for i in range(n // 2, n)}
    sub, conv, used, _ = _subspace_limit(seq, cands, rank)
    return ASResult(
        subspace=sub,
        kind=StabilityKind.STABLE,
        modulus=_modulus(seq, cands, used),
        converged=conv,
        subsequence_indices=used,
    )


def as_all_oracles(seq: MatrixSequence, bound_threshold: float = BOUND_THRESHOLD,
                   check_divergent: bool = True) -> dict[str, ASResult]:
    """Run every subspace detector and cross-fill the agreement table."""
    results = {
        "kak": as_subspace_kak(seq, bound_threshold, check_divergent),
        "ellipsoid": as_subspace_ellipsoid(seq, bound_threshold, check_divergent),
        "graph": as_subspace_graph(seq, check_divergent),
    }
    names = list(results)
    out = {}
    for name in names:
        agreement = {
            other: results[name].subspace.distance(results[other].subspace)
            for other in names
            if other != name
        }
        out[name] = replace(results[name], oracle_agreement=agreement)
    return out


# ---------------------------------------------------------------------------
# brute force oracle


@dataclass(frozen=True)
class BruteForceScores:
    """Direct discretization of approximate stability.

    ``scores[k, r]`` is max over the tail of the sequence of the cheapest
    image norm achievable from a sampled unit direction k perturbed within
    radius ``radii[r]``.  A direction is approximately stable when its score
    stays bounded as the radius shrinks (down to the stated resolution), and
    strongly so when the score heads to zero.  `complete` is False when the
    evaluation budget ran out first.
    """

    directions: np.ndarray
    radii: tuple
    scores: np.ndarray
    complete: bool

    def score_map(self) -> dict[int, float]:
        return {k: float(self.scores[k, -1]) for k in range(self.directions.shape[0])}

    def score_of(self, v, radius_index: int = -1) -> float:
        """Score of the sampled direction nearest to v."""
        u = np.asarray(v, float)
        u = u / np.linalg.norm(u)
        k = int(np.argmax(np.abs(self.directions @ u)))
        return float(self.scores[k, radius_index])


def sphere_points(d: int, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic low-discrepancy unit directions (count x d).

    d=2 equally spaced angles, d=3 Fibonacci sphere, d>=4 seeded Gaussian.
    """
    if d == 2:
        th = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
        return np.column_stack([np.cos(th), np.sin(th)])
    if d == 3:
        i = np.arange(count, dtype=float)
        z = 1.0 - 2.0 * (i + 0.5) / count
        phi = i * np.pi * (3.0 - np.sqrt(5.0))
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(count, d))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _min_quadratic_on_sphere(beta: np.ndarray, gamma: np.ndarray) -> float:
    """min of y^T diag(beta) y + 2 gamma . y over the unit sphere.

    Trust-region secular equation: y(mu) = -gamma / (beta + mu) with
    |y(mu)| = 1 and mu >= -beta_min, including the hard case where gamma
    has no component on the bottom eigenspace.
    """
    b0 = float(beta[0])
    gnorm = float(np.linalg.norm(gamma))
    if gnorm == 0.0:
        return b0

    def y_norm2(mu):
        return float(np.sum((gamma / (beta + mu)) ** 2))

    lo, hi = -b0, -b0 + gnorm
    eps = 1e-14 * max(1.0, abs(b0))
    if y_norm2(lo + eps) < 1.0:
        # hard case: pad the limit solution along the bottom eigendirection
        denom = beta - b0
        y = np.where(denom > eps, -gamma / np.where(denom > eps, denom, 1.0), 0.0)
        pad = np.sqrt(max(0.0, 1.0 - float(y @ y)))
        y[int(np.argmin(beta))] += pad
        return float(y @ (beta * y) + 2.0 * gamma @ y)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if y_norm2(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    mu = 0.5 * (lo + hi)
    y = -gamma / (beta + mu)
    ny = np.linalg.norm(y)
    if ny > 0:
        y = y / ny
    return float(y @ (beta * y) + 2.0 * gamma @ y)


def _min_image_on_cap(eigvals: np.ndarray, eigvecs: np.ndarray, gram: np.ndarray,
                      v: np.ndarray, r: float) -> float:
    """min |A w| over unit w with |w - v| <= r, given eigh(A^T A).

    Exact: interior candidates are the eigendirections falling inside the
    cap, and the cap boundary reduces to a quadratic-on-a-sphere problem in
    v-perp coordinates.  Random perturbation sampling cannot do this job:
    for exponentially divergent sequences the bounded-image region near the
    stable hyperplane is a slab of width ~ 1/|A| that samples never hit.
    """
    c = 1.0 - 0.5 * r * r
    best = np.inf
    inside = np.abs(eigvecs.T @ v) >= c
    if np.any(inside):
        best = float(np.min(eigvals[inside]))
    if c >= 1.0:
        base = float(v @ gram @ v)
        return float(np.sqrt(max(0.0, min(best, base))))
    d = len(v)
    # orthonormal basis of v-perp
    q, _ = np.linalg.qr(np.column_stack([v, np.eye(d)]))
    perp = q[:, 1:d]
    s = np.sqrt(max(0.0, 1.0 - c * c))
    b_mat = perp.T @ gram @ perp
    g_vec = perp.T @ (gram @ v)
    beta, w_mat = np.linalg.eigh(s * s * b_mat)
    gamma = w_mat.T @ (c * s * g_vec)
    boundary = _min_quadratic_on_sphere(beta, gamma) + c * c * float(v @ gram @ v)
    return float(np.sqrt(max(0.0, min(best, boundary))))


def brute_force_as(seq: MatrixSequence, directions: int = 64,
                   radii: tuple = (0.3, 0.1, 0.03, 0.01),
                   budget: int = 20_000_000, seed: int = 0) -> BruteForceScores:
    """Score sampled directions by the best bounded-image witness nearby.

    For each unit direction v and radius r, m(v, r) = max over the last half
    of the sequence of the exact min over unit w with |w - v| <= r of
    |A_n w|.  The witness varies with n, matching the definition of a
    stable vector sequence.
    """
    _require_usable(seq)
    d = seq.dim
    n = len(seq)
    tail = seq.terms[_tail_slice(n)]
    dirs = sphere_points(d, directions, seed)
    radii = tuple(sorted(radii, reverse=True))
    grams = [t.T @ t for t in tail]
    eig = [np.linalg.eigh(m) for m in grams]
    scores = np.full((directions, len(radii)), np.nan)
    spent = 0
    complete = True
    for k in range(directions):
        v = dirs[k]
        for ri, r in enumerate(radii):
            cost = len(tail)
            if spent + cost > budget:
                complete = False
                break
            spent += cost
            worst = 0.0
            for (vals, vecs), m in zip(eig, grams):
                worst = max(worst, _min_image_on_cap(vals, vecs, m, v, r))
            scores[k, ri] = worst
        if not complete:
            break
    return BruteForceScores(directions=dirs, radii=radii, scores=scores,
                            complete=complete)


# ---------------------------------------------------------------------------
# strongly stable space and the Lorentz structure check


def brute_force_score(seq: MatrixSequence, v,
                      radii: tuple = (0.3, 0.1, 0.03, 0.01)) -> np.ndarray:
    """m(v, r) for one exact direction v, per radius (no direction grid)."""
    _require_usable(seq)
    u = np.asarray(v, dtype=float)
    u = u / np.linalg.norm(u)
    tail = seq.terms[_tail_slice(len(seq))]
    out = []
    for r in sorted(radii, reverse=True):
        worst = 0.0
        for t in tail:
            m = t.T @ t
            vals, vecs = np.linalg.eigh(m)
            worst = max(worst, _min_image_on_cap(vals, vecs, m, u, r))
        out.append(worst)
    return np.array(out)


def spas_subspace(seq: MatrixSequence, form: QuadraticForm | None = None,
                  bound_threshold: float = BOUND_THRESHOLD,
                  check_divergent: bool = True) -> ASResult:
    """Strongly approximately stable space: the limit of the right-singular
    directions whose singular values decay to zero.

    When a Lorentz `form` is supplied and the stable space is a hyperplane,
    the Lorentz structure is enforced: SPAS must be its orthogonal, an
    isotropic line.
    """
    _gate(seq, check_divergent)
    n = len(seq)
    facts = [kak(t) for t in seq.terms]
    sig = np.array([f.D for f in facts])
    decaying = _decaying_flags(sig, bound_threshold, GROWTH_RATIO)
    rank = int(np.sum(decaying))
    cands = {i: facts[i].R[:rank, :].T for i in range(n // 2, n)}
    sub, conv, used, _ = _subspace_limit(seq, cands, rank)
    result = ASResult(
        subspace=sub,
        kind=StabilityKind.STRONGLY_STABLE,
        modulus=_modulus(seq, cands, used),
        converged=conv,
        subsequence_indices=used,
    )
    if form is not None and form.is_lorentz():
        stable = as_subspace_kak(seq, bound_threshold, check_divergent=False)
        if stable.converged and stable.subspace.dim == seq.dim - 1:
            perp = orthogonal_complement(form, stable.subspace)
            if not result.subspace.isclose(perp, tol=AGREEMENT_TOL):
                raise NumericalError(
                    "strongly stable space is not the orthogonal of the "
                    "stable hyperplane"
                )
            ray = result.subspace.basis[:, 0]
            if abs(evaluate(form, ray, ray)) > 1e-6:
                raise NumericalError("strongly stable direction is not isotropic")
    return result


@dataclass(frozen=True)
class LorentzStabilityReport:
    """Outcome of the lightlike-hyperplane structure check, clause by clause."""

    passed: bool
    failures: tuple
    stable: ASResult
    strongly_stable: ASResult
    kernel_dim: int
    modulus: float

    def __bool__(self):
        return self.passed


def lorentz_as_check(form: QuadraticForm, seq: MatrixSequence,
                     bound_threshold: float = BOUND_THRESHOLD) -> LorentzStabilityReport:
    """Verify the Lorentz stable-subspace structure of a divergent isometry
    sequence: a converged stable hyperplane, lightlike with one-dimensional
    kernel, whose orthogonal is the isotropic strongly stable line.

    Preconditions (isometry terms, divergence) raise; structural violations
    come back as named failures in the report.
    """
    for t in seq.terms:
        require_isometry(form, t, tol=1e-8)
    _gate(seq, check_divergent=True)
    failures = []
    stable = as_subspace_kak(seq, bound_threshold, check_divergent=False)
    strongly = spas_subspace(seq, form=None, bound_threshold=bound_threshold,
                             check_divergent=False)
    d = seq.dim
    if not stable.converged:
        failures.append("stable-subspace-not-converged")
    if stable.subspace.dim != d - 1:
        failures.append(f"stable-dimension-{stable.subspace.dim}-not-{d - 1}")
    kernel = degenerate_kernel(form, stable.subspace, tol=1e-6)
    if stable.subspace.dim == d - 1:
        g = stable.subspace.basis.T @ form.gram @ stable.subspace.basis
        eig = np.linalg.eigvalsh(g)
        scale = max(np.max(np.abs(eig)), 1.0)
        negatives = int(np.sum(eig < -1e-6 * scale))
        if negatives or kernel.dim != 1:
            failures.append("stable-hyperplane-not-lightlike")
    perp = orthogonal_complement(form, stable.subspace)
    if strongly.subspace.dim != 1 or not strongly.subspace.isclose(perp, tol=AGREEMENT_TOL):
        failures.append("spas-not-orthogonal-of-stable")
    else:
        ray = strongly.subspace.basis[:, 0]
        if abs(evaluate(form, ray, ray)) > 1e-6:
            failures.append("spas-not-isotropic")
    return LorentzStabilityReport(
        passed=not failures,
        failures=tuple(failures),
        stable=stable,
        strongly_stable=strongly,
        kernel_dim=kernel.dim,
        modulus=stable.modulus,
    )
