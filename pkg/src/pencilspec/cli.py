"""Command-line front end: ``pencilspec <subcommand> ...``.

Structured output is one JSON document on stdout (keys sorted, floats with 17
significant digits, complex numbers as [re, im]); a short human summary goes to
stderr. Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 usage.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import sys
from enum import Enum
from pathlib import Path

import numpy as np

from .chardet import delta_derivative, delta_direct
from .core import BoundaryMatrix, Pencil, PlueckerVector, Problem, SearchRegion, Spectrum, validate_bc
from .errors import PencilError, ValidationError
from .harness import DEFAULT_REGION, TrialConfig, random_trial, run_example
from .inverse import RecoveryConfig, RecoveryOutcome, recover_from_spectrum
from .pluecker import equivalent, minors, relation_residual
from .roots import RootFinderConfig, find_eigenvalues

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_USAGE = 0, 1, 2, 3
_PROBLEM_KEYS = {"pencil", "bc", "region", "options"}
_RECOVER_KEYS = {"pencil", "eigenvalues", "options"}
_PENCIL_KEYS = {"b", "c", "L"}
_REGION_KEYS = {"re", "im"}
_ROOT_OPTIONS = {f.name for f in dataclasses.fields(RootFinderConfig)}
_RECOVERY_OPTIONS = {f.name for f in dataclasses.fields(RecoveryConfig)}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- JSON -----------------------------------------------------------------


def _plain(obj):
    """Reduce results to JSON-ready builtins; complex -> [re, im]."""
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, BoundaryMatrix):
        return _plain(obj.a)
    if isinstance(obj, PlueckerVector):
        return _plain(obj.as_array())
    if isinstance(obj, np.ndarray):
        return [_plain(x) for x in obj.tolist()] if obj.ndim else _plain(obj.item())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        # strict JSON has no non-finite numbers
        return json.dumps(str(x))
    s = format(x, ".17g")
    if not any(ch in s for ch in ".eE"):
        s += ".0"
    return s


def _encode(obj, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_encode(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in obj):
            return "[" + ", ".join(_encode(x) for x in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(x, indent + 1) for x in obj) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    return json.dumps(obj)


def dumps(obj) -> str:
    """Deterministic JSON text for any result object."""
    return _encode(_plain(obj)) + "\n"


# -- input files ----------------------------------------------------------


def _check_keys(d, allowed: set, where: str):
    if not isinstance(d, dict):
        raise ValidationError(f"{where} must be a JSON object")
    extra = set(d) - allowed
    if extra:
        raise ValidationError(f"unknown keys in {where}: {sorted(extra)}")


def _complex(v, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise ValidationError(f"{where} must be [re, im], got {v!r}")


def parse_pencil(d) -> Pencil:
    _check_keys(d, _PENCIL_KEYS, "pencil")
    if "b" not in d or "c" not in d:
        raise ValidationError("pencil needs both b and c")
    return Pencil(_complex(d["b"], "pencil.b"), _complex(d["c"], "pencil.c"), d.get("L", 1.0))


def parse_region(d) -> SearchRegion:
    _check_keys(d, _REGION_KEYS, "region")
    try:
        (r0, r1), (i0, i1) = d["re"], d["im"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("region needs re: [min, max] and im: [min, max]") from exc
    return SearchRegion(r0, r1, i0, i1)


def parse_bc(rows) -> BoundaryMatrix:
    if not (isinstance(rows, list) and len(rows) == 2 and all(isinstance(r, list) and len(r) == 4 for r in rows)):
        raise ValidationError("bc must be a 2x4 array of [re, im] pairs")
    return validate_bc([[_complex(v, "bc entry") for v in row] for row in rows])


def _options(d, allowed: set):
    opts = d.get("options", {}) or {}
    if not isinstance(opts, dict):
        raise ValidationError("options must be a JSON object")
    return {k: v for k, v in opts.items() if k in allowed}


def _check_options(d):
    opts = d.get("options", {}) or {}
    if not isinstance(opts, dict):
        raise ValidationError("options must be a JSON object")
    extra = set(opts) - _ROOT_OPTIONS - _RECOVERY_OPTIONS
    if extra:
        raise ValidationError(f"unknown options: {sorted(extra)}")


def _root_config(d) -> RootFinderConfig:
    try:
        return RootFinderConfig(**_options(d, _ROOT_OPTIONS))
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc


def _recovery_config(d) -> RecoveryConfig:
    try:
        return RecoveryConfig(**_options(d, _RECOVERY_OPTIONS))
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc


def load_problem(path: str):
    """(Problem, region or None, raw dict) from a problem file."""
    d = _read_json(path)
    _check_keys(d, _PROBLEM_KEYS, "problem file")
    if "pencil" not in d or "bc" not in d:
        raise ValidationError("problem file needs pencil and bc")
    _check_options(d)
    problem = Problem(parse_pencil(d["pencil"]), parse_bc(d["bc"]))
    region = parse_region(d["region"]) if "region" in d else None
    return problem, region, d


def problem_document(problem: Problem, region: SearchRegion | None = None) -> dict:
    doc = {
        "pencil": {"b": problem.pencil.b, "c": problem.pencil.c, "L": problem.pencil.L},
        "bc": problem.bc,
    }
    if region is not None:
        doc["region"] = {"re": [region.re_min, region.re_max], "im": [region.im_min, region.im_max]}
    return doc


def _parse_pair(text: str) -> complex:
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise UsageError(f"expected RE,IM, got {text!r}") from exc


def _parse_region_arg(text: str) -> SearchRegion:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"expected RE_MIN,RE_MAX,IM_MIN,IM_MAX, got {text!r}") from exc
    if len(vals) != 4:
        raise UsageError(f"expected RE_MIN,RE_MAX,IM_MIN,IM_MAX, got {text!r}")
    return SearchRegion(*vals)


# -- subcommands ----------------------------------------------------------


def spectrum_document(spec: Spectrum) -> dict:
    return {
        "eigenvalues": [
            {"re": lam.real, "im": lam.imag, "multiplicity": m, "residual": r}
            for (lam, m), r in zip(spec.eigenvalues, spec.residuals)
        ],
        "zero_order": spec.zero_order,
        "region": {"re": [spec.region.re_min, spec.region.re_max], "im": [spec.region.im_min, spec.region.im_max]},
    }


def _cmd_spectrum(args, err):
    problem, region, raw = load_problem(args.problem)
    if args.region is not None:
        region = _parse_region_arg(args.region)
    spec = find_eigenvalues(problem, region or DEFAULT_REGION, _root_config(raw))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "multiplicity", "residual"])
            for (lam, m), r in zip(spec.eigenvalues, spec.residuals):
                w.writerow([_fmt_float(lam.real), _fmt_float(lam.imag), m, _fmt_float(r)])
    err.write(f"{len(spec)} eigenvalues ({spec.total_multiplicity} with multiplicity), "
              f"zero order {spec.zero_order}\n")
    return spectrum_document(spec)


def _cmd_delta(args, err):
    problem, _, _ = load_problem(args.problem)
    lam = _parse_pair(args.lam)
    value = delta_direct(problem, lam) if args.order == 0 else delta_derivative(problem, lam, args.order)
    err.write(f"Delta^({args.order})({lam}) = {value}\n")
    return {"lambda": lam, "order": args.order, "value": value}


def _cmd_minors(args, err):
    problem, _, _ = load_problem(args.problem)
    p = minors(problem.bc)
    res = relation_residual(p)
    err.write(f"relation residual {res:.3g}\n")
    return {"pluecker": p, "relation_residual": res}


def _cmd_equiv(args, err):
    a, _, _ = load_problem(args.a)
    b, _, _ = load_problem(args.b)
    verdict = equivalent(a.bc, b.bc)
    err.write("equivalent\n" if verdict else "not equivalent\n")
    return {"equivalent": verdict, "pluecker_a": minors(a.bc), "pluecker_b": minors(b.bc)}


def _parse_eigenvalues(items):
    if not isinstance(items, list):
        raise ValidationError("eigenvalues must be a list")
    out = []
    for it in items:
        _check_keys(it, {"re", "im", "multiplicity", "residual"}, "eigenvalue")
        try:
            lam = complex(float(it["re"]), float(it.get("im", 0.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad eigenvalue entry {it!r}") from exc
        m = it.get("multiplicity", 1)
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise ValidationError(f"multiplicity must be a positive integer, got {m!r}")
        out.append((lam, m))
    return out


def outcome_document(pencil: Pencil, out: RecoveryOutcome) -> dict:
    doc = {
        "status": out.status,
        "nullspace_dim": out.nullspace_dim,
        "rank": out.rank,
        "singular_values": list(out.singular_values),
        "conditions": out.conditions.as_dict(),
        "pluecker": out.ray,
        "residual": out.residual,
        "reconstructed": None,
    }
    if out.reconstructed is not None:
        doc["reconstructed"] = problem_document(Problem(pencil, out.reconstructed))
    return doc


def _cmd_recover(args, err):
    d = _read_json(args.input)
    _check_keys(d, _RECOVER_KEYS, "recovery file")
    if "pencil" not in d or "eigenvalues" not in d:
        raise ValidationError("recovery file needs pencil and eigenvalues")
    _check_options(d)
    pencil = parse_pencil(d["pencil"])
    out = recover_from_spectrum(pencil, _parse_eigenvalues(d["eigenvalues"]), _recovery_config(d))
    err.write(f"{out.status.value}: nullspace dimension {out.nullspace_dim}, rank {out.rank}\n")
    return outcome_document(pencil, out)


def _cmd_verify(args, err):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    summary = random_trial(TrialConfig(rng_seed=args.seed, num_trials=args.trials))
    err.write(f"{summary.passes} passed, {summary.failures} failed, {summary.inconclusive} inconclusive\n")
    return summary.as_dict()


def _cmd_examples(args, err):
    variant = {"printed": "as_printed", "corrected": "corrected"}[args.variant]
    ids = [args.id] if args.id is not None else [1, 2, 3, 4, 5]
    reports = [run_example(i, variant) for i in ids]
    for r in reports:
        err.write(f"example {r.example_id} ({r.variant}): {'agrees' if r.agrees_with_paper else 'disagrees'}\n")
    docs = [r.as_dict() for r in reports]
    return docs[0] if args.id is not None else {"reports": docs}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pencilspec", description="Spectra and uniqueness checks for quadratic pencil boundary problems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("spectrum", help="nonzero eigenvalues in a region")
    s.add_argument("problem")
    s.add_argument("--region", help="RE_MIN,RE_MAX,IM_MIN,IM_MAX")
    s.add_argument("--csv", help="also write re,im,multiplicity,residual to this file")
    s.set_defaults(func=_cmd_spectrum)

    s = sub.add_parser("delta", help="characteristic determinant or its derivative")
    s.add_argument("problem")
    s.add_argument("--lambda", dest="lam", required=True, help="RE,IM")
    s.add_argument("--order", type=int, default=0, choices=range(0, 5))
    s.set_defaults(func=_cmd_delta)

    s = sub.add_parser("minors", help="Pluecker vector of the boundary matrix")
    s.add_argument("problem")
    s.set_defaults(func=_cmd_minors)

    s = sub.add_parser("equiv", help="are two boundary matrices row-equivalent")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=_cmd_equiv)

    s = sub.add_parser("recover", help="boundary conditions from a pencil and eigenvalues")
    s.add_argument("input")
    s.set_defaults(func=_cmd_recover)

    s = sub.add_parser("verify", help="randomised uniqueness trials")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=42)
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("examples", help="reproduce the worked examples")
    s.add_argument("--id", type=int, choices=range(1, 6))
    s.add_argument("--variant", choices=("printed", "corrected"), default="printed")
    s.set_defaults(func=_cmd_examples)
    return p


def _fail(err, code: int, kind: str, message: str) -> int:
    err.write(json.dumps({"error": kind, "message": message}, sort_keys=True) + "\n")
    return code


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        doc = args.func(args, err)
    except UsageError as exc:
        return _fail(err, EXIT_USAGE, "UsageError", str(exc))
    except ValidationError as exc:
        return _fail(err, EXIT_VALIDATION, type(exc).__name__, str(exc))
    except PencilError as exc:
        # numerical failures, and internal consistency errors reported as such
        return _fail(err, EXIT_NUMERICAL, type(exc).__name__, str(exc))
    text = dumps(doc)
    out.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
