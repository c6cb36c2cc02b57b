"""File formats: JSON matrices (arrays of rows), sequence files, reports, CSV.

Serialization is deterministic: keys sorted, floats printed with 17
significant digits, newline-terminated UTF-8.  Identical analysis inputs
(and seed) therefore produce byte-identical outputs.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import PreconditionError
from .minkowski import QuadraticForm, Subspace
from .stability import ASResult, BruteForceScores, LorentzStabilityReport, MatrixSequence


def _format_float(x: float) -> str:
    if np.isnan(x):
        return "NaN"
    if np.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def dumps(obj) -> str:
    """Deterministic JSON text (sorted keys, 17 significant digits)."""

    def emit(o) -> str:
        if o is None:
            return "null"
        if isinstance(o, bool):
            return "true" if o else "false"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return _format_float(float(o))
        if isinstance(o, str):
            return json.dumps(o, ensure_ascii=False)
        if isinstance(o, np.ndarray):
            return emit(o.tolist())
        if isinstance(o, (list, tuple)):
            return "[" + ", ".join(emit(x) for x in o) + "]"
        if isinstance(o, dict):
            items = sorted(o.items(), key=lambda kv: str(kv[0]))
            return "{" + ", ".join(
                json.dumps(str(k), ensure_ascii=False) + ": " + emit(v)
                for k, v in items
            ) + "}"
        raise TypeError(f"cannot serialize {type(o)!r}")

    return emit(obj) + "\n"


def csv_lines(header: list[str], rows) -> str:
    """CSV with a header row; floats at 17 significant digits."""
    out = [",".join(header)]
    for row in rows:
        cells = []
        for x in row:
            if isinstance(x, (float, np.floating)):
                cells.append(_format_float(float(x)))
            else:
                cells.append(str(x))
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# readers


def load_matrix(path) -> np.ndarray:
    """A matrix stored as a JSON array of rows."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    m = np.asarray(data, dtype=float)
    if m.ndim != 2:
        raise PreconditionError(f"{path}: expected a JSON array of rows")
    return m


def load_form(path) -> QuadraticForm:
    return QuadraticForm.from_gram(load_matrix(path))


def load_matrices(path) -> list[np.ndarray]:
    """A JSON array of matrices (each an array of rows)."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not data:
        raise PreconditionError(f"{path}: expected a non-empty JSON array of matrices")
    return [np.asarray(m, dtype=float) for m in data]


def load_sequence(path) -> MatrixSequence:
    """Sequence schema: {"d": int, "terms": [[...], ...], "generator_spec": str?}."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "terms" not in data:
        raise PreconditionError(f"{path}: expected an object with a 'terms' field")
    terms = np.asarray(data["terms"], dtype=float)
    if "d" in data and terms.shape[1:] != (data["d"], data["d"]):
        raise PreconditionError(f"{path}: terms do not match the declared dimension")
    return MatrixSequence(terms=terms, generator_spec=data.get("generator_spec"))


def sequence_to_dict(seq: MatrixSequence) -> dict:
    return {
        "d": seq.dim,
        "terms": seq.terms.tolist(),
        "generator_spec": seq.generator_spec,
    }


# ---------------------------------------------------------------------------
# report shapes


def subspace_to_dict(s: Subspace) -> dict:
    return {"dimension": s.dim, "basis": s.basis.tolist()}


def as_result_to_dict(r: ASResult) -> dict:
    return {
        "subspace": subspace_to_dict(r.subspace),
        "kind": r.kind.value,
        "modulus": r.modulus,
        "converged": r.converged,
        "subsequence_indices": list(r.subsequence_indices),
        "oracle_agreement": dict(r.oracle_agreement),
    }


def brute_to_dict(b: BruteForceScores) -> dict:
    return {
        "radii": list(b.radii),
        "directions": b.directions.tolist(),
        "scores": b.scores.tolist(),
        "complete": b.complete,
    }


def lorentz_report_to_dict(rep: LorentzStabilityReport) -> dict:
    return {
        "passed": rep.passed,
        "failures": list(rep.failures),
        "stable": as_result_to_dict(rep.stable),
        "strongly_stable": as_result_to_dict(rep.strongly_stable),
        "kernel_dim": rep.kernel_dim,
        "modulus": rep.modulus,
    }
