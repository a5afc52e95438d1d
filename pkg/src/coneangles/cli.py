"""Command-line surface: project, angle, principal, check, cyclic, corpus.

Exit codes: 0 ok, 2 parse error, 3 name-resolution error, 4 numerical
failure, 5 unsupported dimension, 6 theorem hypothesis violated.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import corpus as corpus_mod
from .angles import (
    beta,
    c0,
    c0_oracle,
    c_angle,
    direct_beta_estimate,
    direct_gamma_estimate,
    gamma,
    principal_vectors,
)
from .cones import ToleranceConfig
from .cyclic import TranslatedSet, estimate_rate, run_cyclic, theoretical_rate
from .errors import (
    ConeGeometryError,
    DichotomyFailure,
    DimensionMismatch,
    HypothesisViolated,
    IdentityNotApplicable,
    InsufficientData,
    IterationLimit,
    UnsupportedDimension,
    WitnessNotFound,
    ZeroDirection,
)
from .projections import certify_projection, distance, project
from .scenes import NameResolutionError, SceneParseError, load_scene
from .theorems import (
    check_sum_closedness,
    check_trivial_intersection,
    dichotomy_check,
    polar_intersection_witness,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_RESOLVE = 3
EXIT_NUMERIC = 4
EXIT_UNSUPPORTED_DIM = 5
EXIT_HYPOTHESIS = 6


def _fmt(x) -> str:
    return f"{float(x):.10g}"


def _jsonify(obj):
    """Replace non-finite floats with None so the output is strict JSON."""
    if isinstance(obj, float):
        return obj if np.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    return obj


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_fmt(c) for c in v) + ")"


def _parse_point(text: str, scene, dim: int) -> np.ndarray:
    if scene is not None and text in scene.points:
        return scene.points[text]
    try:
        coords = [float(tok) for tok in text.replace("(", "").replace(")", "").split(",")]
    except ValueError:
        raise SceneParseError(f"cannot parse point literal {text!r}") from None
    p = np.asarray(coords, dtype=float)
    if p.shape[0] != dim:
        raise DimensionMismatch(f"point has dim {p.shape[0]}, scene is {dim}")
    return p


def _emit(args, command: str, inputs: dict, result: dict, lines) -> None:
    if args.json:
        payload = {"command": command, "inputs": inputs, "result": result}
        print(json.dumps(_jsonify(payload), sort_keys=True))
    else:
        for line in lines:
            print(line)


def _config(args) -> ToleranceConfig:
    kw = {}
    if getattr(args, "starts", None) is not None:
        kw["multistarts"] = args.starts
    if getattr(args, "seed", None) is not None:
        kw["rng_seed"] = args.seed
    if getattr(args, "max_iters", None) is not None:
        kw["max_iters"] = args.max_iters
    if getattr(args, "tol", None) is not None:
        kw["tol_iter"] = args.tol
    return ToleranceConfig(**kw)


def cmd_project(args) -> int:
    scene = load_scene(args.scene)
    cone = scene.cone(args.cone)
    x = _parse_point(args.point, scene, scene.dim)
    cfg = _config(args)
    p = project(cone, x, cfg)
    d = distance(cone, x, cfg)
    cert = certify_projection(cone, x, p, cfg)
    _emit(args, "project",
          {"scene": args.scene, "cone": args.cone, "point": x.tolist()},
          {"projection": p.tolist(), "distance": d, "certificate": {
              "membership_residual": cert.membership_residual,
              "orthogonality_residual": cert.orthogonality_residual,
              "polar_residual": cert.polar_residual,
              "passed": cert.passed}},
          [f"projection  {_fmt_vec(p)}",
           f"distance    {_fmt(d)}",
           f"certificate {'pass' if cert.passed else 'FAIL'} "
           f"(membership {_fmt(cert.membership_residual)}, "
           f"orthogonality {_fmt(cert.orthogonality_residual)}, "
           f"polar {_fmt(cert.polar_residual)})"])
    return EXIT_OK if cert.passed else EXIT_NUMERIC


def _report_payload(rep) -> dict:
    pair = None
    if rep.pair is not None:
        pair = [rep.pair[0].tolist(), rep.pair[1].tolist()]
    return {"value": rep.value, "kind": rep.kind, "pair": pair,
            "beta": rep.beta, "gamma": rep.gamma, "method": rep.method,
            "iterations": rep.iterations, "degenerate": rep.degenerate}


def cmd_angle(args) -> int:
    scene = load_scene(args.scene)
    a = scene.cone(args.cone1)
    b = scene.cone(args.cone2)
    cfg = _config(args)
    lines = []
    if args.kind in ("c0", "c"):
        rep = c0(a, b, cfg) if args.kind == "c0" else c_angle(a, b, cfg)
        result = _report_payload(rep)
        lines.append(f"{args.kind}  {_fmt(rep.value)}  method={rep.method} "
                     f"iterations={rep.iterations}")
        if rep.pair is not None:
            lines.append(f"pair x {_fmt_vec(rep.pair[0])}")
            lines.append(f"pair y {_fmt_vec(rep.pair[1])}")
        if args.oracle:
            if args.kind == "c0":
                oracle = c0_oracle(a, b, args.resolution, cfg)
            else:
                oracle = None
            if oracle is not None:
                result["oracle"] = oracle
                result["oracle_deviation"] = abs(oracle - rep.value)
                lines.append(f"oracle {_fmt(oracle)}  deviation "
                             f"{_fmt(abs(oracle - rep.value))}")
    else:
        value = beta(a, b, cfg) if args.kind == "beta" else gamma(a, b, cfg)
        result = {"value": value, "kind": args.kind}
        lines.append(f"{args.kind}  {_fmt(value)}")
        if args.oracle:
            est_fn = direct_beta_estimate if args.kind == "beta" else direct_gamma_estimate
            est = est_fn(a, b, args.resolution, cfg)
            result["sampled_estimate"] = est
            result["sampled_deviation"] = abs(est - value)
            lines.append(f"sampled {_fmt(est)}  deviation {_fmt(abs(est - value))}")
    _emit(args, "angle",
          {"scene": args.scene, "cones": [args.cone1, args.cone2],
           "kind": args.kind}, result, lines)
    return EXIT_OK


def cmd_principal(args) -> int:
    scene = load_scene(args.scene)
    cfg = _config(args)
    rep = principal_vectors(scene.cone(args.cone1), scene.cone(args.cone2), cfg)
    cert = rep.certificate
    result = _report_payload(rep)
    result["certificate"] = {
        "polar_residual_1": cert.polar_residual_1,
        "polar_residual_2": cert.polar_residual_2,
        "projection_identity_residuals": cert.projection_identity_residuals,
        "boundary_violations": cert.boundary_violations,
        "passed": cert.passed,
    }
    _emit(args, "principal",
          {"scene": args.scene, "cones": [args.cone1, args.cone2]}, result,
          [f"value {_fmt(rep.value)}  method={rep.method}",
           f"x {_fmt_vec(rep.pair[0])}",
           f"y {_fmt_vec(rep.pair[1])}",
           f"certificate {'pass' if cert.passed else 'FAIL'} "
           f"(violations={cert.boundary_violations})"])
    return EXIT_OK


def cmd_check(args) -> int:
    scene = load_scene(args.scene)
    a = scene.cone(args.cone1)
    b = scene.cone(args.cone2)
    cfg = _config(args)
    if args.what == "closedness":
        reports = check_sum_closedness(a, b, cfg)
        result = {"conditions": [
            {"id": r.condition_id, "holds": r.holds, "value": r.numeric_value,
             "sum_closed": r.conclusion_sum_closed} for r in reports]}
        lines = [f"{r.condition_id:22s} {'holds' if r.holds else 'fails'}  "
                 f"value={_fmt(r.numeric_value)}" for r in reports]
        lines.append("conclusion: sum closed" if reports[0].conclusion_sum_closed
                     else "conclusion: no closedness certificate")
        _emit(args, "check closedness",
              {"scene": args.scene, "cones": [args.cone1, args.cone2]},
              result, lines)
        return EXIT_OK
    if args.what == "dichotomy":
        branch = dichotomy_check(a, b, cfg)
        _emit(args, "check dichotomy",
              {"scene": args.scene, "cones": [args.cone1, args.cone2]},
              {"branch": branch}, [f"branch {branch}"])
        return EXIT_OK
    if args.what == "polar-witness":
        w1, w2 = polar_intersection_witness(a, b, cfg)
        _emit(args, "check polar-witness",
              {"scene": args.scene, "cones": [args.cone1, args.cone2]},
              {"witness1": w1.tolist(), "witness2": w2.tolist()},
              [f"witness1 {_fmt_vec(w1)}", f"witness2 {_fmt_vec(w2)}"])
        return EXIT_OK
    trivial, witness = check_trivial_intersection(a, b, cfg)
    result = {"trivial": trivial,
              "witness": None if witness is None else witness.tolist()}
    lines = [f"intersection trivial: {trivial}"]
    if witness is not None:
        lines.append(f"witness {_fmt_vec(witness)}")
    _emit(args, "check trivial",
          {"scene": args.scene, "cones": [args.cone1, args.cone2]},
          result, lines)
    return EXIT_OK


def cmd_cyclic(args) -> int:
    scene = load_scene(args.scene)
    a = scene.cone(args.cone1)
    b = scene.cone(args.cone2)
    cfg = _config(args)
    x0 = _parse_point(args.x0, scene, scene.dim)
    anchor = (np.zeros(scene.dim) if args.anchor is None
              else _parse_point(args.anchor, scene, scene.dim))
    trace = run_cyclic(TranslatedSet(a, anchor), TranslatedSet(b, anchor), x0, cfg)
    theo = theoretical_rate(a, b, cfg)
    try:
        est = estimate_rate(trace, cfg)
    except InsufficientData:
        est = None
    cycles = len(trace.errors)
    result = {"cycles": cycles, "converged": trace.converged,
              "limit_estimate": trace.limit_estimate.tolist(),
              "estimated_rate": est, "theoretical_gamma": theo,
              "theoretical_rate": theo * theo, "errors": trace.errors}
    lines = [f"cycles {cycles}  converged={trace.converged}",
             f"limit {_fmt_vec(trace.limit_estimate)}",
             f"theoretical gamma {_fmt(theo)}  rate bound {_fmt(theo * theo)}"]
    lines.append("estimated rate n/a" if est is None else f"estimated rate {_fmt(est)}")
    if args.csv:
        _write_cyclic_csv(args.csv, trace, anchor)
        lines.append(f"csv written to {args.csv}")
        result["csv"] = args.csv
    _emit(args, "cyclic",
          {"scene": args.scene, "cones": [args.cone1, args.cone2],
           "x0": x0.tolist(), "anchor": anchor.tolist()}, result, lines)
    return EXIT_OK


def _write_cyclic_csv(path: str, trace, anchor: np.ndarray) -> None:
    dim = anchor.shape[0]
    header = "k," + ",".join(f"x{i}" for i in range(dim)) + ",err,ratio"
    rows = [header]
    start_err = float(np.linalg.norm(trace.iterates[0] - anchor))
    errs = [start_err] + list(trace.errors)
    for k, point in enumerate(trace.iterates):
        coords = ",".join(repr(float(c)) for c in point)
        err = repr(errs[k])
        ratio = "" if k == 0 or errs[k - 1] == 0.0 else repr(errs[k] / errs[k - 1])
        rows.append(f"{k},{coords},{err},{ratio}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def cmd_corpus(args) -> int:
    cfg = _config(args)
    rows = corpus_mod.run_corpus(cfg)
    failures = [r for r in rows if not r["ok"]]
    if args.json:
        payload = {"command": "corpus", "inputs": {},
                   "result": {"rows": rows, "failures": len(failures)}}
        print(json.dumps(_jsonify(payload), sort_keys=True))
    else:
        width = max(len(r["case"]) for r in rows)
        lwidth = max(len(r["label"]) for r in rows)
        for r in rows:
            mark = "ok  " if r["ok"] else "FAIL"
            print(f"{mark} {r['case']:{width}s} {r['label']:{lwidth}s} "
                  f"expected {_fmt(r['expected']):>13s} computed "
                  f"{_fmt(r['computed']):>13s} tol {_fmt(r['tol'])}")
        print(f"{len(rows) - len(failures)}/{len(rows)} expectations met")
    return EXIT_OK if not failures else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coneangles",
        description="angles, projections and theorem checks for convex cones")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scene=True):
        if scene:
            p.add_argument("--scene", required=True, help="scene JSON file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--starts", type=int, default=None)

    p = sub.add_parser("project", help="project a point onto a cone")
    common(p)
    p.add_argument("cone")
    p.add_argument("--point", required=True, help="comma separated coords or point name")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("angle", help="minimal angle / angle quantities")
    common(p)
    p.add_argument("cone1")
    p.add_argument("cone2")
    p.add_argument("--kind", choices=("c0", "c", "beta", "gamma"), default="c0")
    p.add_argument("--oracle", action="store_true",
                   help="also run the brute-force sweep and print the deviation")
    p.add_argument("--resolution", type=int, default=720)
    p.set_defaults(func=cmd_angle)

    p = sub.add_parser("principal", help="principal vectors with certificate")
    common(p)
    p.add_argument("cone1")
    p.add_argument("cone2")
    p.set_defaults(func=cmd_principal)

    p = sub.add_parser("check", help="theorem checkers")
    p.add_argument("what", choices=("closedness", "dichotomy", "polar-witness", "trivial"))
    common(p)
    p.add_argument("cone1")
    p.add_argument("cone2")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cyclic", help="cyclic projections run")
    common(p)
    p.add_argument("cone1")
    p.add_argument("cone2")
    p.add_argument("--x0", required=True)
    p.add_argument("--anchor", default=None)
    p.add_argument("--max-iters", type=int, default=None, dest="max_iters")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_cyclic)

    p = sub.add_parser("corpus", help="run the built-in worked examples")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--starts", type=int, default=None)
    p.set_defaults(func=cmd_corpus)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SceneParseError, ZeroDirection, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NameResolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLVE
    except UnsupportedDimension as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED_DIM
    except HypothesisViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (IterationLimit, WitnessNotFound, DichotomyFailure,
            IdentityNotApplicable, InsufficientData, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConeGeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
