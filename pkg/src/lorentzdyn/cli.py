"""Command line surface.

Every analysis is exposed with file-based input and deterministic output;
exit code 0 on success, 2 on a precondition violation, 3 on numerical
failure.  All randomness flows from --seed.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import numpy as np

from . import cocycles, jsonio, models, projective, stability
from .cartan import kak, lorentz_kak, norm_growth
from .errors import NumericalError, PreconditionError
from .minkowski import QuadraticForm
from .projective import HyperbolicPoint


@dataclass
class RunConfig:
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str = "json"

    def __post_init__(self):
        if any(v <= 0 for v in self.tolerances.values()):
            raise PreconditionError("tolerance overrides must be positive")


def _emit(config: RunConfig, text: str):
    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_inline_matrix(text: str) -> np.ndarray:
    rows = [[float(x) for x in row.split(",")] for row in text.split(";")]
    return np.array(rows)


def _parse_inline_vector(text: str) -> np.ndarray:
    return np.array([float(x) for x in text.split(",")])


def _config(args) -> RunConfig:
    tolerances = {}
    for name in ("bound_threshold", "cluster_angle", "divergence_threshold"):
        if getattr(args, name, None) is not None:
            tolerances[name] = float(getattr(args, name))
    return RunConfig(
        seed=getattr(args, "seed", 0),
        tolerances=tolerances,
        output_path=getattr(args, "output", None),
        format=getattr(args, "format", "json"),
    )


# ---------------------------------------------------------------------------
# subcommands


def cmd_kak(args) -> int:
    config = _config(args)
    a = jsonio.load_matrix(args.matrix)
    report = {"input": a.tolist(), "norm_growth": norm_growth(a)}
    if args.form:
        form = jsonio.load_form(args.form)
        fact, lam = lorentz_kak(form, a)
        report["lambda"] = lam
        report["standardized"] = not np.allclose(
            form.gram, QuadraticForm.minkowski(form.dim).gram, atol=1e-12
        )
    else:
        fact = kak(a)
    report["L"] = fact.L.tolist()
    report["D"] = fact.D.tolist()
    report["R"] = fact.R.tolist()
    _emit(config, jsonio.dumps(report))
    return 0


def cmd_as(args) -> int:
    config = _config(args)
    seq = jsonio.load_sequence(args.sequence)
    form = jsonio.load_form(args.form) if args.form else None
    report: dict = {"n_terms": len(seq), "d": seq.dim}
    if args.oracle == "all":
        results = stability.as_all_oracles(seq, bound_threshold=args.bound_threshold)
        report["oracles"] = {k: jsonio.as_result_to_dict(v) for k, v in results.items()}
    elif args.oracle == "brute":
        scores = stability.brute_force_as(seq, directions=args.directions,
                                          seed=config.seed)
        report["brute_force"] = jsonio.brute_to_dict(scores)
    else:
        op = {
            "kak": stability.as_subspace_kak,
            "ellipsoid": stability.as_subspace_ellipsoid,
            "graph": stability.as_subspace_graph,
        }[args.oracle]
        if args.oracle == "graph":
            result = op(seq)
        else:
            result = op(seq, bound_threshold=args.bound_threshold)
        report["oracles"] = {args.oracle: jsonio.as_result_to_dict(result)}
    if args.oracle != "brute":
        spas = stability.spas_subspace(seq, form=form,
                                       bound_threshold=args.bound_threshold)
        report["strongly_stable"] = jsonio.as_result_to_dict(spas)
    if form is not None:
        check = stability.lorentz_as_check(form, seq,
                                           bound_threshold=args.bound_threshold)
        report["lorentz_check"] = jsonio.lorentz_report_to_dict(check)
    _emit(config, jsonio.dumps(report))
    return 0


def cmd_limit_set(args) -> int:
    config = _config(args)
    form = jsonio.load_form(args.form)
    gens = jsonio.load_matrices(args.generators)
    if args.point:
        s = HyperbolicPoint.from_timelike(form, _parse_inline_vector(args.point))
    else:
        s = _default_base_point(form)
    trace: list | None = [] if args.trace else None
    estimate = projective.limit_set(
        form, gens, depth=args.depth, samples=args.samples, s=s,
        cluster_angle=np.deg2rad(args.cluster_angle), seed=config.seed,
        divergence_threshold=args.divergence_threshold, trace=trace,
    )
    classification = projective.classify_elementary(estimate)
    report = {
        "cardinality_class": estimate.cardinality_class.value,
        "classification": classification.value,
        "words_sampled": estimate.words_sampled,
        "divergent_words": estimate.divergent_words,
        "min_intercluster_gap": estimate.min_intercluster_gap,
        "clusters": [
            {
                "centroid": c.centroid.ray.tolist(),
                "weight": c.weight,
                "angular_radius": c.angular_radius,
            }
            for c in estimate.clusters
        ],
    }
    if args.trace:
        d = form.dim
        header = ["word_length"] + [f"ray_{i}" for i in range(d)] + ["growth"]
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(jsonio.csv_lines(header, trace))
    _emit(config, jsonio.dumps(report))
    return 0


def _default_base_point(form: QuadraticForm) -> HyperbolicPoint:
    # pick the most timelike eigendirection of the Gram matrix
    w, v = np.linalg.eigh(form.gram)
    vec = v[:, 0]
    if vec[0] < 0:
        vec = -vec
    return HyperbolicPoint.from_timelike(form, vec)


def cmd_model(args) -> int:
    config = _config(args)
    if args.model_command == "torus-isoms":
        g = models.RationalLorentzForm(gram=np.rint(jsonio.load_matrix(args.gram)).astype(np.int64))
        elems = models.integer_isometries(g, args.height)
        _emit(config, jsonio.dumps({
            "count": len(elems),
            "height": args.height,
            "elements": [a.tolist() for a in elems],
        }))
    elif args.model_command == "torus-fixed":
        g = models.RationalLorentzForm(gram=np.rint(jsonio.load_matrix(args.gram)).astype(np.int64))
        if args.elements:
            elems = jsonio.load_matrices(args.elements)
        else:
            elems = models.integer_isometries(g, args.height)
        fixed = models.fixed_isotropic_directions(g, elems)
        if isinstance(fixed, models.EntireCone):
            _emit(config, jsonio.dumps({"fixed": "entire-cone"}))
        else:
            rays = []
            for b in fixed:
                fracs, err = models.rational_ray_diagnostic(b)
                rays.append({
                    "ray": b.ray.tolist(),
                    "rational_approximation": [str(f) for f in fracs],
                    "rational_error": err,
                })
            _emit(config, jsonio.dumps({"fixed": rays}))
    elif args.model_command == "hopf":
        model = models.HopfModel(alpha=args.alpha, lam=getattr(args, "lambda"))
        x = _parse_inline_vector(args.point)
        rows = []
        for n in range(args.n + 1):
            m, rep = models.hopf_return_cocycle(model, x, n)
            rows.append((n, m, rep[0, 0], rep[1, 1], float(np.linalg.norm(rep, 2))))
        _emit(config, jsonio.csv_lines(["n", "m", "rep_00", "rep_11", "norm"], rows))
    elif args.model_command == "ads-orbit":
        p1 = models.ads_plane_family(args.alpha1)
        p2 = models.ads_plane_family(args.alpha2)
        _emit(config, jsonio.dumps({
            "intersection_dim": models.ads_pair_orbit(p1, p2),
        }))
    elif args.model_command == "ads-circle":
        h = _parse_inline_matrix(getattr(args, "h"))
        alpha = float("inf") if args.alpha in ("inf", "infinity") else float(args.alpha)
        out = models.ads_second_factor_action(h, alpha)
        _emit(config, jsonio.dumps({
            "alpha": alpha,
            "alpha_image": out,
        }))
    else:
        raise PreconditionError(f"unknown model subcommand {args.model_command!r}")
    return 0


def cmd_entropy(args) -> int:
    config = _config(args)
    g = models.RationalLorentzForm(gram=np.rint(jsonio.load_matrix(args.gram)).astype(np.int64))
    a = np.rint(jsonio.load_matrix(args.matrix)).astype(np.int64)
    aut = cocycles.TorusAutomorphism(matrix=a, form=g)
    report = cocycles.entropy_dichotomy(aut)
    _emit(config, jsonio.dumps({
        "eigenvalues": [list(z) for z in report.eigenvalues],
        "exponents": list(report.exponents),
        "entropy": report.entropy,
        "p_threshold": report.p_threshold,
        "as_equal": report.as_equal,
    }))
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lorentzdyn",
        description="Approximate stability analyses of Lorentz and linear "
                    "dynamical systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for every random choice (default 0)")
        p.add_argument("--parallel", action="store_true",
                       help="allow data-parallel evaluation (the analyses "
                            "are vectorized; results are identical either way)")

    p = sub.add_parser("kak", help="Cartan factorization of a matrix file")
    p.add_argument("matrix", help="JSON matrix (array of rows)")
    p.add_argument("--form", help="Gram matrix file: check the Lorentz pattern")
    common(p)
    p.set_defaults(func=cmd_kak)

    p = sub.add_parser("as", help="approximately stable subspaces of a sequence")
    p.add_argument("sequence", help="JSON sequence file {d, terms, generator_spec?}")
    p.add_argument("--oracle", choices=["kak", "ellipsoid", "graph", "brute", "all"],
                   default="all")
    p.add_argument("--form", help="Gram matrix file: adds the Lorentz structure check")
    p.add_argument("--bound-threshold", type=float, default=stability.BOUND_THRESHOLD)
    p.add_argument("--directions", type=int, default=64,
                   help="sampled directions for the brute-force oracle")
    common(p)
    p.set_defaults(func=cmd_as)

    p = sub.add_parser("limit-set", help="limit set estimate of a generated group")
    p.add_argument("generators", help="JSON array of generator matrices")
    p.add_argument("--form", required=True, help="Gram matrix file")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--cluster-angle", type=float, default=5.0,
                   help="clustering angle in degrees")
    p.add_argument("--divergence-threshold", type=float,
                   default=projective.WORD_DIVERGENCE_THRESHOLD)
    p.add_argument("--point", help="base point on the hyperboloid, e.g. '1,0,0'")
    p.add_argument("--trace", help="also write the orbit trace CSV here")
    common(p)
    p.set_defaults(func=cmd_limit_set)

    p = sub.add_parser("model", help="model-space computations")
    msub = p.add_subparsers(dest="model_command", required=True)

    q = msub.add_parser("torus-isoms", help="enumerate O(g, Z) up to an entry height")
    q.add_argument("--gram", required=True)
    q.add_argument("--height", type=int, required=True)
    common(q)

    q = msub.add_parser("torus-fixed", help="commonly fixed isotropic directions")
    q.add_argument("--gram", required=True)
    q.add_argument("--height", type=int, default=1)
    q.add_argument("--elements", help="JSON array of elements (else enumerate)")
    common(q)

    q = msub.add_parser("hopf", help="return-map derivative cocycle trace (CSV)")
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--lambda", dest="lambda", type=float, required=True)
    q.add_argument("--point", required=True, help="'a,b' off the origin")
    q.add_argument("--n", type=int, default=30)
    common(q)

    q = msub.add_parser("ads-orbit", help="orbit invariant of a pair of family planes")
    q.add_argument("--alpha1", type=float, required=True)
    q.add_argument("--alpha2", type=float, required=True)
    common(q)

    q = msub.add_parser("ads-circle", help="second-factor circle action on the family")
    q.add_argument("--h", required=True, help="SL(2,R) matrix 'a,b;c,d'")
    q.add_argument("--alpha", required=True, help="family parameter or 'inf'")
    common(q)

    p.set_defaults(func=cmd_model)

    p = sub.add_parser("entropy", help="entropy dichotomy of a torus automorphism")
    p.add_argument("matrix", help="integer matrix file")
    p.add_argument("--gram", required=True, help="integer Gram matrix file")
    common(p)
    p.set_defaults(func=cmd_entropy)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
