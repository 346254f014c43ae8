"""Command-line front end.

Exit codes: 0 success / property holds, 1 input error, 2 property fails
(witness in the report), 3 not applicable (e.g. degenerate center).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .construct import DataSet, ExampleId, catalog_ids, example_catalog, from_data_set, validate_data_set
from .errors import (
    DegenerateCenter,
    DegeneratePlane,
    NilmetricError,
    NotTwoStep,
    SchemaError,
    UnknownExample,
)
from .exactlin import rat, unit_vec
from .group import LatticeSpec, lattice_closure_check, malcev_rational
from .io import (
    digest,
    dumps,
    geodesic_csv,
    matrix_json,
    parse_text,
    rat_str,
    serialize as to_document_text,
    to_document,
    vector_json,
)
from .metgeo import (
    MetricNilLieAlgebra,
    center_splitting,
    flatness_check,
    geodesic,
    ricci,
    sectional_curvature,
    speed_squared,
)
from .nilalg import is_nonsingular, structure_report
from .reductive import corank_decomposition, is_ad_invariant, isotropy_algebra, naturally_reductive_check

COMMANDS = (
    "validate", "report", "curvature", "sectional", "ricci", "geodesic", "reductive",
    "isotropy", "adinv", "corank", "construct", "lattice", "catalog",
)
EXIT_OK, EXIT_INPUT, EXIT_FAILS, EXIT_INAPPLICABLE = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # unknown flags are input errors (exit 1)
        raise InputError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nilmetric", description="Metric 2-step nilpotent Lie algebras.")
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--input", help="JSON input file (algebra, data set or lattice)")
    p.add_argument("--catalog", choices=[e.value for e in ExampleId], help="use a built-in example as input")
    p.add_argument("--output", help="write the report (or CSV for geodesic) here instead of stdout")
    p.add_argument("--lattice", help="lattice JSON file for the lattice command")
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-end", type=float, default=5.0)
    p.add_argument("--t-step", type=float, default=0.1)
    p.add_argument("--tolerance", type=float, default=1e-8, help="max allowed geodesic residual")
    p.add_argument("--z0", help="comma-separated central initial velocity (default: first center vector)")
    p.add_argument("--v0", help="comma-separated initial velocity in v (default: first v vector)")
    p.add_argument("--x", help="comma-separated vector for sectional")
    p.add_argument("--y", help="comma-separated vector for sectional")
    p.add_argument("--pipeline", choices=("reductive", "isotropy"), help="after construct, also run this check")
    p.add_argument("--version", action="version", version=f"nilmetric {__version__}")
    return p


def _vector(text: str, n: int) -> tuple:
    try:
        vals = tuple(rat(t.strip()) for t in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad vector {text!r}") from exc
    if len(vals) != n:
        raise InputError(f"vector {text!r} needs {n} entries")
    return vals


def _need_metric(obj) -> MetricNilLieAlgebra:
    if isinstance(obj, DataSet):
        return from_data_set(obj)
    if not isinstance(obj, MetricNilLieAlgebra):
        raise InputError("this command needs a metric algebra or data set input")
    return obj


def _witness_json(w) -> Any:
    if w is None:
        return None
    if isinstance(w, int):
        return w + 1
    if isinstance(w, tuple) and all(isinstance(x, int) for x in w):
        return [x + 1 for x in w]
    try:
        return vector_json(w)
    except (TypeError, ValueError):
        return str(w)


# --------------------------------------------------------------------------
# commands; each returns (exit_code, result dict)


def cmd_validate(obj, args):
    kind = type(obj).__name__
    out: dict = {"kind": kind}
    if isinstance(obj, MetricNilLieAlgebra):
        out["dim"] = obj.dim
    elif isinstance(obj, DataSet):
        out["dim_g"], out["dim_V"] = obj.dim_g, obj.dim_V
        validate_data_set(obj)
    elif isinstance(obj, LatticeSpec):
        out["dim"] = obj.dim
    out["valid"] = True
    return EXIT_OK, out


def cmd_report(obj, args):
    m = _need_metric(obj)
    r = structure_report(m.alg)
    out = {
        "dim": m.dim,
        "step": r.step,
        "center": [vector_json(c) for c in r.center_basis.columns()],
        "commutator": [vector_json(c) for c in r.commutator_basis.columns()],
        "corank": r.corank,
        "signature": list(m.metric.signature()),
        "ad_invariant": bool(is_ad_invariant(m)),
        "rational_constants_lattice_exists": malcev_rational(m.alg),
    }
    if m.alg.is_two_step:
        nondeg = not r.center_basis.ncols or m.metric.restrict(r.center_basis).is_nondegenerate()
        out["center_nondegenerate"] = nondeg
        if nondeg:
            split = center_splitting(m)
            out["j"] = [matrix_json(j) for j in split.j_ops]
            out["j_injective"] = split.j_injective
            ns = is_nonsingular(m.alg, m.metric, split)
            out["nonsingular"] = ns.status
    return EXIT_OK, out


def cmd_curvature(obj, args):
    m = _need_metric(obj)
    n = m.dim
    entries = []
    for (a, b), op in sorted(m.basis_curvature.items()):
        if a < b and not op.is_zero():
            entries.append({"x": a + 1, "y": b + 1, "R": matrix_json(op)})
    flat = flatness_check(m)
    out = {"dim": n, "flat": flat.flat, "nonzero_R": entries}
    if not flat.flat:
        out["witness"] = _witness_json(flat.witness)
    return EXIT_OK, out


def cmd_sectional(obj, args):
    m = _need_metric(obj)
    n = m.dim
    if args.x or args.y:
        if not (args.x and args.y):
            raise InputError("--x and --y go together")
        x, y = _vector(args.x, n), _vector(args.y, n)
        return EXIT_OK, {"K": rat_str(sectional_curvature(m, x, y))}
    planes = []
    for a in range(n):
        for b in range(a + 1, n):
            try:
                k = rat_str(sectional_curvature(m, unit_vec(n, a), unit_vec(n, b)))
            except DegeneratePlane:
                k = "degenerate"
            planes.append({"x": a + 1, "y": b + 1, "K": k})
    return EXIT_OK, {"planes": planes}


def cmd_ricci(obj, args):
    m = _need_metric(obj)
    r = ricci(m)
    return EXIT_OK, {
        "ricci": matrix_json(r.form),
        "transformation": matrix_json(r.transformation),
        "cross_checked": r.cross_checked,
    }


def _t_grid(args) -> list[float]:
    if args.t_step <= 0:
        raise InputError("--t-step must be positive")
    count = int(round((args.t_end - args.t_start) / args.t_step))
    if count < 0:
        raise InputError("--t-end must not precede --t-start")
    return [args.t_start + k * args.t_step for k in range(count + 1)]


def cmd_geodesic(obj, args):
    m = _need_metric(obj)
    split = center_splitting(m)
    n = m.dim
    z0 = _vector(args.z0, n) if args.z0 else (split.z_basis.column(0) if split.p else (0,) * n)
    v0 = _vector(args.v0, n) if args.v0 else (split.v_basis.column(0) if split.q else (0,) * n)
    try:
        samples = geodesic(m, z0, v0, _t_grid(args))
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    speeds = [speed_squared(m, s.velocity) for s in samples]
    max_res = max(s.residual for s in samples)
    out = {
        "samples": len(samples),
        "max_residual": max_res,
        "speed_squared": speeds[0],
        "speed_drift": float(np.max(np.abs(np.array(speeds) - speeds[0]))),
        "tolerance": args.tolerance,
        "within_tolerance": bool(max_res <= args.tolerance),
    }
    table = geodesic_csv(samples, m.alg.basis_names)
    return (EXIT_OK if out["within_tolerance"] else EXIT_FAILS), out, table


def _verdict_json(rep) -> dict:
    out = {
        "verdict": rep.verdict.kind,
        "j_injective": rep.j_injective,
        "closed_under_bracket": rep.closed_under_bracket,
        "tau_skew": rep.tau_skew,
    }
    if rep.verdict.reason:
        out["reason"] = rep.verdict.reason
    if rep.verdict.witness is not None:
        out["witness"] = _witness_json(rep.verdict.witness)
    if rep.tau is not None:
        p = len(rep.tau)
        out["tau"] = [
            {"i": i + 1, "j": j + 1, "coeffs": vector_json(rep.tau[i][j])}
            for i in range(p) for j in range(i + 1, p) if any(rep.tau[i][j])
        ]
    return out


def _verdict_exit(rep) -> int:
    return {"NaturallyReductive": EXIT_OK, "Fails": EXIT_FAILS}.get(rep.verdict.kind, EXIT_INAPPLICABLE)


def cmd_reductive(obj, args):
    rep = naturally_reductive_check(_need_metric(obj))
    return _verdict_exit(rep), _verdict_json(rep)


def cmd_isotropy(obj, args):
    iso = isotropy_algebra(_need_metric(obj))
    return EXIT_OK, {
        "dim": iso.dim,
        "basis": [{"A": matrix_json(a), "B": matrix_json(b)} for a, b in iso.basis],
    }


def cmd_adinv(obj, args):
    r = is_ad_invariant(_need_metric(obj))
    if r.holds:
        return EXIT_OK, {"ad_invariant": True}
    return EXIT_FAILS, {"ad_invariant": False, "witness": _witness_json(r.witness), "value": rat_str(r.value)}


def cmd_corank(obj, args):
    nf = corank_decomposition(_need_metric(obj))
    return EXIT_OK, {
        "corank": nf.corank,
        "z_tilde": [vector_json(c) for c in nf.z_tilde_basis.columns()],
        "n_tilde": [vector_json(c) for c in nf.n_tilde_basis.columns()],
        "z": [vector_json(c) for c in nf.z_basis.columns()],
        "v": [vector_json(c) for c in nf.v_basis.columns()],
        "rho": [matrix_json(r) for r in nf.rho],
        "change_of_basis": [vector_json(c) for c in nf.change_of_basis.columns()],
    }


def cmd_construct(obj, args):
    if not isinstance(obj, DataSet):
        raise InputError("construct needs a data set input")
    m = from_data_set(obj)
    out: dict = {"algebra": to_document(m)}
    code = EXIT_OK
    if args.pipeline == "reductive":
        rep = naturally_reductive_check(m)
        out["reductive"] = _verdict_json(rep)
        code = _verdict_exit(rep)
    elif args.pipeline == "isotropy":
        out["isotropy"] = cmd_isotropy(m, args)[1]
    return code, out


def cmd_lattice(obj, args):
    if not args.lattice:
        raise InputError("lattice needs --lattice <file>")
    spec = _load(args.lattice)[0]
    if not isinstance(spec, LatticeSpec):
        raise InputError("--lattice file is not a lattice spec")
    alg = obj.alg if isinstance(obj, MetricNilLieAlgebra) else obj
    res = lattice_closure_check(alg, spec)
    out = {"status": res.status}
    if not res.closed:
        out["witness"] = _witness_json(res.witness)
        out["correction"] = vector_json(res.correction)
    return (EXIT_OK if res.closed else EXIT_FAILS), out


def cmd_catalog(obj, args):
    if obj is None:
        return EXIT_OK, {"ids": catalog_ids()}
    return EXIT_OK, {"object": to_document(obj)}


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# --------------------------------------------------------------------------


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_text(text), text


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except InputError as exc:
        sys.stderr.write(f"nilmetric: {exc}\n")
        return EXIT_INPUT
    report: dict = {"tool": "nilmetric", "version": __version__, "command": args.command}
    code = EXIT_OK
    table = None
    try:
        if args.input and args.catalog:
            raise InputError("give --input or --catalog, not both")
        obj, source = None, ""
        if args.input:
            obj, source = _load(args.input)
        elif args.catalog:
            obj = example_catalog(args.catalog)
            source = to_document_text(obj)
        elif args.command != "catalog":
            raise InputError("--input or --catalog is required")
        if source:
            report["input_sha256"] = digest(source)
        result = HANDLERS[args.command](obj, args)
        if len(result) == 3:
            code, payload, table = result
        else:
            code, payload = result
        report["result"] = payload
    except (InputError, SchemaError, UnknownExample) as exc:
        code = EXIT_INPUT
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, SchemaError):
            report["error"]["pointer"] = exc.pointer
    except (DegenerateCenter, NotTwoStep) as exc:
        code = EXIT_INAPPLICABLE
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    except NilmetricError as exc:
        code = EXIT_FAILS
        report["error"] = {"type": type(exc).__name__, "message": str(exc), "witness": _witness_json(exc.witness)}
        kinds = getattr(exc, "violations", None)
        if kinds and len(kinds) > 1:
            report["error"]["violations"] = [
                {"type": type(v).__name__, "message": str(v), "witness": _witness_json(v.witness)} for v in kinds
            ]
    report["exit_code"] = code
    text = dumps(report)
    if table is not None:
        if args.output:
            _emit(table, args.output)
            sys.stdout.write(text)
        else:
            sys.stdout.write(table)
            sys.stderr.write(text)
    else:
        _emit(text, args.output)
    if code == EXIT_INPUT and "error" in report:
        sys.stderr.write(f"nilmetric: {report['error']['message']}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
