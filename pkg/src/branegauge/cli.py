"""Command-line interface: model ingestion, computations, reports.

Reports are a single JSON object (or an aligned text rendering of the same
object) and are byte-identical for identical inputs and seeds.  Exit codes:
0 success, 1 identity failure, 2 parse error, 3 rank jump / degree
overflow, 4 obstruction.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys

from .branes import (
    ChainMap,
    cohomology,
    cone,
    gauge_solve,
    hom_complex,
    pidentity,
)
from .dg import Connection, FormVector, JetElement, leibniz_defect
from .errors import (
    DegreeOverflow,
    ModelParseError,
    NotCompatible,
    ObstructedBrane,
    RankJump,
)
from .exact import Matrix, Ring, Scalar, TruncPoly, format_poly, format_scalar, parse_scalar
from .model import ModelFile, load_model
from .randgen import rand_compatible_family, rand_constant_complex
from .schubert import (
    Permutation,
    covering_relations,
    flag3_catalog,
    hom_vanishing_verdict,
    incomparable_pairs,
    is_singular,
    length,
    schubert_closure,
    uniqueness_verdict,
)
from .yang_mills import (
    CurvatureExpansion,
    SolverConfig,
    cone_ym,
    euler_poincare_check,
    gradient_system,
    orthogonality_check,
    sheaf_brane,
    solve_critical,
    stationarity_check,
    ym_brane_family,
    ym_polynomial,
    ym_sheaf,
)

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_OBSTRUCTION = 4


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _matrix_json(M: Matrix):
    return [[format_poly(p) for p in row] for row in M.entries]


def _form_matrix_json(M: Matrix, ring: Ring):
    layers = []
    for k in range(ring.n_vars):
        layers.append(
            [
                [format_poly(e.component((k,))) for e in row]
                for row in M.entries
            ]
        )
    return layers


def _critical_set_json(cs):
    return {
        "mode": cs.mode,
        "m": cs.n_vars,
        "bezout_bound": cs.bezout_bound,
        "points": [
            [[pt.coords[i].real, pt.coords[i].imag] for i in range(cs.n_vars)]
            for pt in cs.points
        ],
        "residuals": [pt.residual for pt in cs.points],
        "jacobian_ranks": [pt.jacobian_rank for pt in cs.points],
        "multiplicities": [pt.multiplicity_estimate for pt in cs.points],
        "isolated_count": len(cs.isolated),
        "nonisolated": cs.nonisolated,
        "witnesses": [
            [[w.real, w.imag] for w in cs.witness]
        ] if cs.witness is not None else [],
    }


def emit(report: dict, output: str) -> None:
    if output == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    lines = []

    def walk(prefix, value):
        if isinstance(value, dict):
            for k in sorted(value):
                walk(f"{prefix}.{k}" if prefix else str(k), value[k])
        elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            for i, v in enumerate(value):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append((prefix, value))

    walk("", report)
    width = max((len(k) for k, _ in lines), default=0)
    for k, v in lines:
        print(f"{k.ljust(width)}  {v}")


def make_report(command: str, inputs: dict, results: dict, flags: dict | None = None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "results": results,
        "flags": flags or {},
    }


# ---------------------------------------------------------------------------
# schubert commands
# ---------------------------------------------------------------------------


def _parse_perm(text: str) -> Permutation:
    try:
        if "," in text:
            return Permutation(int(v) for v in text.split(","))
        return Permutation(int(ch) for ch in text.strip())
    except Exception:
        raise ModelParseError(f"not a permutation: {text!r}", "--perm")


def cmd_schubert(args) -> int:
    if args.sub == "order":
        edges = [
            ["".join(map(str, v.word)), "".join(map(str, w.word))]
            for v, w in covering_relations(args.n)
        ]
        pairs = [
            ["".join(map(str, v.word)), "".join(map(str, w.word))]
            for v, w in incomparable_pairs(args.n)
        ]
        results = {
            "n": args.n,
            "covering_edges": edges,
            "edge_count": len(edges),
            "incomparable_pairs": pairs,
        }
    elif args.sub == "smooth":
        w = _parse_perm(args.perm)
        singular, witness = is_singular(w)
        results = {
            "permutation": "".join(map(str, w.word)),
            "length": length(w),
            "singular": singular,
            "witness_positions": list(witness) if witness else None,
        }
    elif args.sub == "closure":
        w = _parse_perm(args.perm)
        closure = sorted("".join(map(str, v.word)) for v in schubert_closure(w))
        results = {
            "permutation": "".join(map(str, w.word)),
            "closure": closure,
            "cell_dimension": length(w),
        }
    else:  # strata
        cat = flag3_catalog()
        verdicts = {}
        for g in cat.generators:
            for h in cat.generators:
                v = hom_vanishing_verdict(cat, g.label, h.label)
                verdicts[f"{g.label},{h.label}"] = v.reason
        report = uniqueness_verdict(cat)
        results = {
            "generators": [
                {"label": g.label, "support": g.support, "divisor": g.divisor}
                for g in cat.generators
            ],
            "hodge": {g.label: g.h10 for g in cat.generators},
            "tower": [
                {"stratum": name, "cells": sorted(cells), "dimension": dim}
                for name, cells, dim in cat.tower
            ],
            "hom_vanishing": verdicts,
            "verdict": "at_most_one" if report.at_most_one else "not_concluded",
            "conditions": [
                {"name": n, "ok": ok, "detail": detail}
                for n, ok, detail in report.conditions
            ],
        }
    emit(make_report(f"schubert {args.sub}", _args_echo(args), results), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# complex commands
# ---------------------------------------------------------------------------


def cmd_complex(args) -> int:
    model = load_model(args.model)
    F = model.complex
    inputs = _model_echo(args, model)
    if args.sub == "cohomology":
        coh = cohomology(F, model.eval_points)
        results = {
            "ranks": {str(j): coh[j].rank for j in sorted(coh)},
            "representatives": {
                str(j): [[format_scalar(v) for v in rep] for rep in coh[j].representatives]
                for j in sorted(coh)
            },
        }
        emit(make_report("complex cohomology", inputs, results,
                         {"exact": ["ranks", "representatives"]}), args.output)
        return EXIT_OK
    if args.sub == "hom":
        H = hom_complex(F, F, form_degree=1,
                        morphism_degree=F.default_morphism_degree("gauge"))
        results = {
            "h0_rank": H.cohomology_rank(0),
            "morphism_degree": H.morphism_degree,
            "space_dimensions": {
                "hom0": H.space_dimension(0),
                "hom1": H.space_dimension(1),
            },
        }
        emit(make_report("complex hom", inputs, results), args.output)
        return EXIT_OK
    # gauge solve
    res = gauge_solve(F)
    if res.obstructed:
        results = {
            "exists": False,
            "obstruction": "gauge system inconsistent: the obstruction class "
                           "of the complex does not vanish",
        }
        emit(make_report("complex gauge solve", inputs, results), args.output)
        return EXIT_OBSTRUCTION
    results = {
        "exists": True,
        "affine_dimension": res.affine_dimension,
        "morphism_degree": res.morphism_degree,
        "psi_one_form_parts": {
            str(i): _form_matrix_json(res.gauge.A[i], model.ring)
            for i in F.degrees
        },
        "verified": res.gauge.verify(),
    }
    emit(make_report("complex gauge solve", inputs, results,
                     {"exact": ["affine_dimension", "psi_one_form_parts"]}),
         args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# yang-mills commands
# ---------------------------------------------------------------------------


def _sheaf_expansion(model: ModelFile, index: int) -> CurvatureExpansion:
    base = model.base_connections.get(index)
    if base is None:
        base = Connection.flat(model.complex.term(index))
    directions = [v.element for v in model.variations if v.index == index]
    return CurvatureExpansion(base, directions)


def _poly_key(key, mode) -> str:
    if mode == "bilinear":
        return ",".join(map(str, key))
    a, b = key
    return ",".join(map(str, a)) + "|" + ",".join(map(str, b))


def cmd_ym(args) -> int:
    model = load_model(args.model)
    inputs = _model_echo(args, model)
    mode = model.mode
    index = min(model.complex.degrees)
    if args.sub == "polynomial":
        ce = _sheaf_expansion(model, index)
        P = ym_polynomial(ce, mode)
        grads = gradient_system(P)
        results = {
            "mode": mode,
            "m": P.m,
            "degree": P.degree(),
            "coefficients": {
                _poly_key(k, mode): format_scalar(v)
                for k, v in sorted(P.coefficients.items(), key=lambda kv: str(kv[0]))
            },
            "gradient": [format_poly(p) for p in grads],
            "gradient_degrees": [p.degree() for p in grads],
        }
        emit(make_report("ym polynomial", inputs, results,
                         {"exact": ["coefficients", "gradient"]}), args.output)
        return EXIT_OK
    if args.sub == "solve":
        ce = _sheaf_expansion(model, index)
        P = ym_polynomial(ce, mode)
        sys_ = gradient_system(P)
        domain = "complex" if mode == "bilinear" else "real"
        solver = model.solver
        if args.seed is not None or args.tol is not None:
            from dataclasses import replace

            solver = replace(
                solver,
                seed=args.seed if args.seed is not None else solver.seed,
                tol=args.tol if args.tol is not None else solver.tol,
            )
        cs = solve_critical(sys_, solver, domain=domain, mode=mode)
        results = {"critical_set": _critical_set_json(cs)}
        emit(
            make_report("ym solve", inputs, results,
                        {"float": ["critical_set"]}),
            args.output,
        )
        return EXIT_OK
    if args.sub == "value":
        F = model.complex
        if len(F.degrees) == 1:
            conn = model.base_connections.get(
                index, Connection.flat(F.term(index))
            )
            value = ym_sheaf(conn, mode)
        else:
            conns = {
                i: model.base_connections.get(i, Connection.flat(F.term(i)))
                for i in F.degrees
            }
            value = ym_brane_family(F, conns, mode, model.eval_points)
        results = {"mode": mode, "value": format_scalar(value)}
        emit(make_report("ym value", inputs, results, {"exact": ["value"]}),
             args.output)
        return EXIT_OK
    # check: stationarity along a named variation plus orthogonality
    ce = _sheaf_expansion(model, index)
    base = ce.base
    if args.at:
        lams = [parse_scalar(v) for v in args.at.split(",")]
        base = ce.connection_at(lams)
    F, gauge = sheaf_brane(base)
    from .branes import GaugeVariation, pzero

    results = {"mode": mode}
    if args.variation:
        named = model.variation(args.variation)
        var = GaugeVariation(
            {0: pzero(model.ring, base.module.rank, base.module.rank)},
            {0: named.element.matrix},
            {},
        )
        rep = stationarity_check(F, gauge, var, mode)
        results["stationarity"] = {
            "variation": named.name,
            "pairing_side": format_scalar(rep.pairing_side),
            "expected_derivative": [rep.expected_derivative.real,
                                    rep.expected_derivative.imag],
            "fd_derivative": [rep.fd_derivative.real, rep.fd_derivative.imag],
            "agreement": rep.agreement,
            "exactly_zero": rep.exactly_zero,
        }
    directions = [v.element for v in model.variations if v.index == index]
    report = orthogonality_check(base, mode, directions=directions or None)
    results["orthogonality"] = {
        "passed": report.passed,
        "directions_checked": report.n_directions,
        "witness_index": report.witness_index,
        "witness_value": format_scalar(report.witness_value)
        if report.witness_value is not None
        else None,
    }
    emit(
        make_report("ym check", inputs, results, {"float": ["stationarity"]}),
        args.output,
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------


def _identity_suite(model: ModelFile) -> list[dict]:
    F = model.complex
    ring = model.ring
    checks = []

    def record(name, ok, detail=""):
        checks.append({"name": name, "status": "pass" if ok else "fail",
                       "detail": detail})

    defects = F.square_defects()
    square_ok = not defects
    record(
        "differential-squares-to-zero",
        square_ok,
        "" if square_ok else
        f"degree {defects[0][0]} entry {defects[0][1]}: {format_poly(defects[0][2])}",
    )

    for i, conn in sorted(model.base_connections.items()):
        s = FormVector.from_polys(
            conn.module,
            [TruncPoly.constant(ring, k + 1) for k in range(conn.module.rank)],
        )
        defect = leibniz_defect(conn, TruncPoly.variable(ring, 0), s)
        record(f"leibniz[{i}]", defect.is_zero())
        two_paths = conn.curvature() == conn.curvature_by_composition()
        record(f"curvature-two-paths[{i}]", two_paths)
        from .dg import bianchi_check

        record(f"bianchi[{i}]", bianchi_check(conn))

    if not square_ok:
        # everything downstream presupposes a complex; report and stop here
        return checks

    # jet complex differential squares to zero on a probe element
    probe_deg = min(F.degrees)
    if F.differential(probe_deg) is not None:
        from .branes import jet_complex

        J = jet_complex(F)
        module = F.term(probe_deg)
        sigma = FormVector.from_polys(
            module,
            [TruncPoly.variable(ring, 0)] * module.rank,
        )
        j_elt = JetElement(sigma, FormVector.zero(module, 1))
        once = J.delta(probe_deg, j_elt)
        twice = J.delta(probe_deg + 1, once) if once is not None else None
        record("jet-differential-squares-to-zero",
               twice is None or twice.is_zero())

    # mapping cone of the identity squares to zero
    idm = ChainMap(F, F, {i: pidentity(ring, F.rank(i)) for i in F.degrees})
    record("cone-differential-squares-to-zero",
           not cone(idm).complex.square_defects())

    family_complete = all(i in model.base_connections for i in F.degrees)
    if family_complete and len(F.degrees) > 1:
        # these identities hold exactly for the trace pairing
        try:
            ep = euler_poincare_check(
                F, model.base_connections, "bilinear", model.eval_points
            )
            record(
                "euler-poincare",
                ep.equal,
                f"terms {format_scalar(ep.term_sum)} vs cohomology "
                f"{format_scalar(ep.cohomology_sum)}",
            )
            rep = cone_ym(idm, model.base_connections, model.base_connections,
                          "bilinear", model.eval_points)
            record(
                "cone-additivity",
                rep.equal,
                f"target-source {format_scalar(rep.ym_target - rep.ym_source)} "
                f"vs cone {format_scalar(rep.ym_cone)}",
            )
        except NotCompatible as err:
            checks.append({"name": "euler-poincare", "status": "skipped",
                           "detail": str(err)})
    elif len(F.degrees) > 1:
        checks.append({"name": "euler-poincare", "status": "skipped",
                       "detail": "base connections do not cover every term"})
    return checks


def cmd_check(args) -> int:
    results = {}
    failed = False
    if args.fuzz:
        seed = args.seed if args.seed is not None else 1
        rng = random.Random(seed)
        runs = []
        for trial in range(args.fuzz):
            ring = Ring(rng.randint(1, 2), rng.randint(2, 4))
            ranks = [rng.randint(1, 2) for _ in range(rng.randint(2, 3))]
            F = rand_constant_complex(rng, ring, ranks)
            conns = rand_compatible_family(rng, F, max_poly_degree=1)
            fake = ModelFile(
                ring, F, conns, [], "bilinear", SolverConfig(seed=seed),
                [[Scalar(0)] * ring.n_vars], b"",
            )
            checks = _identity_suite(fake)
            bad = [c for c in checks if c["status"] == "fail"]
            failed = failed or bool(bad)
            runs.append({"trial": trial, "ranks": ranks, "checks": checks})
        results["fuzz_runs"] = runs
        inputs = _args_echo(args)
    else:
        model = load_model(args.model, validate_square=False)
        checks = _identity_suite(model)
        failed = any(c["status"] == "fail" for c in checks)
        results["checks"] = checks
        inputs = _model_echo(args, model)
    results["all_passed"] = not failed
    emit(make_report("check", inputs, results), args.output)
    return EXIT_IDENTITY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------


def _args_echo(args) -> dict:
    echo = {k: v for k, v in vars(args).items()
            if k not in ("func",) and v is not None}
    return {"args": {k: str(v) for k, v in sorted(echo.items())}}


def _model_echo(args, model: ModelFile) -> dict:
    echo = _args_echo(args)
    echo["digest"] = _digest(model.raw_bytes)
    return echo


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand; the
    # suppressed defaults keep a late occurrence from clobbering an early one
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "table"),
                        default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(
        prog="branegauge",
        description="exact gauge fields, Yang-Mills polynomials and "
                    "Schubert stratification verdicts on complexes of free modules",
    )
    # top-level copies carry the real defaults; the shared parent keeps
    # SUPPRESS so a subcommand-level occurrence wins without clobbering
    parser.add_argument("--output", choices=("json", "table"), default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    schubert = sub.add_parser("schubert", help="Bruhat order and strata")
    ssub = schubert.add_subparsers(dest="sub", required=True)
    order = ssub.add_parser("order", parents=[common])
    order.add_argument("--n", type=int, required=True)
    smooth = ssub.add_parser("smooth", parents=[common])
    smooth.add_argument("--perm", required=True)
    closure = ssub.add_parser("closure", parents=[common])
    closure.add_argument("--perm", required=True)
    strata = ssub.add_parser("strata", parents=[common])
    strata.add_argument("--flag3", action="store_true")
    schubert.set_defaults(func=cmd_schubert)

    complex_ = sub.add_parser("complex", help="cohomology and gauge fields")
    csub = complex_.add_subparsers(dest="sub", required=True)
    coh = csub.add_parser("cohomology", parents=[common])
    coh.add_argument("--model", required=True)
    hom = csub.add_parser("hom", parents=[common])
    hom.add_argument("--model", required=True)
    gauge = csub.add_parser("gauge")
    gsub = gauge.add_subparsers(dest="gauge_sub", required=True)
    gsolve = gsub.add_parser("solve", parents=[common])
    gsolve.add_argument("--model", required=True)
    complex_.set_defaults(func=cmd_complex)

    ym = sub.add_parser("ym", help="Yang-Mills polynomial and critical points")
    ysub = ym.add_subparsers(dest="sub", required=True)
    for name in ("polynomial", "solve", "value"):
        p = ysub.add_parser(name, parents=[common])
        p.add_argument("--model", required=True)
    ycheck = ysub.add_parser("check", parents=[common])
    ycheck.add_argument("--model", required=True)
    ycheck.add_argument("--variation")
    ycheck.add_argument("--at", help="comma-separated parameter values")
    ym.set_defaults(func=cmd_ym)

    check = sub.add_parser("check", help="run the identity suite",
                           parents=[common])
    check.add_argument("--model")
    check.add_argument("--fuzz", type=int)
    check.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.output is None:
        args.output = "json"
    if args.command == "check" and not args.model and not args.fuzz:
        parser.error("check needs --model or --fuzz")
    try:
        return args.func(args)
    except ModelParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except RankJump as err:
        print(f"rank jump: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except DegreeOverflow as err:
        print(f"degree overflow: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except NotCompatible as err:
        print(f"not compatible: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except ObstructedBrane as err:
        print(f"obstruction: {err}", file=sys.stderr)
        return EXIT_OBSTRUCTION


if __name__ == "__main__":
    raise SystemExit(main())
