"""Command-line front door.

Every analysis is exposed as a subcommand with deterministic, sorted JSON
output (the default) or an aligned text table.  Exit codes: 0 all requested
verifications pass, 1 verification failure, 2 usage error, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import lkrep, monoid, rootsys, scalars, twisted
from .coxeter import parse_sigma_spec, parse_type_spec, validate
from .errors import BudgetExceeded, RootBudgetExceeded, TlkError

HEAVY_DIMENSION = 10  # quotient dimensions at or above this need --heavy

_EIGEN_NAMES = None


def _eigen_names():
    global _EIGEN_NAMES
    if _EIGEN_NAMES is None:
        a, d, dk, f = scalars.a, scalars.d, scalars.dcheck, scalars.f
        _EIGEN_NAMES = {
            d: "d",
            dk: "dcheck",
            f: "f",
            d * d: "d^2",
            d * dk: "d*dcheck",
            dk * dk: "dcheck^2",
            d * f: "d*f",
            d ** 3: "d^3",
        }
    return _EIGEN_NAMES


def render_value(x) -> str:
    names = _eigen_names()
    if x in names:
        return names[x]
    return scalars.render(x)


def parse_params(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for piece in text.split(","):
        if not piece.strip():
            continue
        name, _, value = piece.partition("=")
        if not value:
            raise ValueError(f"bad parameter assignment {piece!r}")
        out[name.strip()] = Fraction(value.strip())
    return out


def _budget(args, name: str, default: int) -> int:
    flag = getattr(args, name, None)
    if flag is not None:
        return flag
    env = os.environ.get("TLK_BUDGET")
    if env:
        return int(env)
    return default


def _emit(args, payload: dict, table_lines=None) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in table_lines or _default_table(payload):
            print(line)


def _default_table(payload, prefix=""):
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{prefix}{key}:")
            lines.extend(_default_table(value, prefix + "  "))
        elif isinstance(value, list):
            lines.append(f"{prefix}{key}: {json.dumps(value, sort_keys=True)}")
        else:
            lines.append(f"{prefix}{key}: {value}")
    return lines


def _context(args):
    return twisted.build_context(args.type, args.sigma, parse_params(args.params))


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------


def cmd_roots(args) -> int:
    matrix = parse_type_spec(args.type)
    diag = validate(matrix)
    rs = rootsys.generate(matrix, root_cap=_budget(args, "root_cap", rootsys.DEFAULT_ROOT_CAP))
    sigma = parse_sigma_spec(matrix, args.sigma)
    graph = rootsys.graph_json(rs, sigma)
    payload = {
        "command": "roots",
        "type": args.type,
        "sigma": args.sigma,
        "diagnostics": diag.as_dict(),
        "root_count": rs.size,
        "graph": graph,
    }
    lines = [f"{matrix.name}: {rs.size} positive roots, {graph['orbit_count']} orbits"]
    by_depth = {}
    for node in graph["nodes"]:
        by_depth.setdefault(node["depth"], []).append(node)
    for depth in sorted(by_depth):
        labels = " ".join(rootsys.root_label(n["coordinates"]) for n in by_depth[depth])
        lines.append(f"depth {depth}: {labels}")
    _emit(args, payload, lines)
    return 0


def cmd_census(args) -> int:
    ctx = _context(args)
    tags = sorted(rootsys.ORBITS_PER_TAG)
    results = {}
    for J in ctx.quotient.orbits:
        results[J.key] = {
            "orbit_type": J.orbit_type,
            "counts": twisted.census_counts(ctx, J),
        }
    payload = {
        "command": "census",
        "type": args.type,
        "sigma": args.sigma,
        "orbit_count": ctx.dimension,
        "census": results,
    }
    present = [t for t in tags if any(t in r["counts"] for r in results.values())]
    width = max(len(k) for k in results) + 2
    lines = ["J".ljust(width) + "type  " + "  ".join(t.rjust(3) for t in present)]
    for key, r in results.items():
        row = key.ljust(width) + r["orbit_type"].ljust(6)
        row += "  ".join(str(r["counts"].get(t, 0)).rjust(3) for t in present)
        lines.append(row)
    _emit(args, payload, lines)
    return 0


CHECK_NAMES = (
    "family",
    "braid",
    "equivariance",
    "decomposition",
    "blocks",
    "annihilator",
    "coupling",
    "spectrum",
    "powerlemma",
)
DEFAULT_CHECKS = CHECK_NAMES[:8]


def cmd_verify(args) -> int:
    checks = tuple(args.check.split(",")) if args.check else DEFAULT_CHECKS
    for name in checks:
        if name not in CHECK_NAMES:
            raise ValueError(f"unknown check {name!r}; choose from {CHECK_NAMES}")
    ctx = _context(args)
    results = {}
    if "family" in checks:
        residuals = lkrep.family_residuals(ctx.lk.family, ctx.spec)
        symmetric = ctx.lk.family.sigma_symmetric(ctx.sigma)
        results["family"] = {
            "residuals_zero": all(not r for r in residuals),
            "sigma_symmetric": symmetric,
            "pass": all(not r for r in residuals) and symmetric,
        }
    if "braid" in checks:
        untwisted = lkrep.verify_braid_relations(ctx.lk)
        quotient = twisted.verify_quotient_braid(ctx)
        results["braid"] = {
            "untwisted": untwisted,
            "quotient": quotient,
            "pass": all(r["pass"] for r in untwisted + quotient),
        }
    if "equivariance" in checks:
        rep = lkrep.verify_equivariance(ctx.lk, ctx.sigma)
        results["equivariance"] = {"checks": rep, "pass": all(r["pass"] for r in rep)}
    if "decomposition" in checks:
        per = []
        for J in ctx.quotient.orbits:
            gen = ctx.gen(J)
            expected = gen.phi + lkrep.outer(gen.theta_pos, gen.form_row, gen.phi.labels)
            if gen.second_form_row is not None:
                expected = expected + lkrep.outer(
                    gen.theta_prime_pos, gen.second_form_row, gen.phi.labels
                )
            per.append({"J": J.key, "pass": expected == gen.psi})
        results["decomposition"] = {"checks": per, "pass": all(r["pass"] for r in per)}
    if "blocks" in checks:
        per = [twisted.verify_blocks(ctx, J) for J in ctx.quotient.orbits]
        results["blocks"] = {
            "checks": [_strip_scalars(r) for r in per],
            "pass": all(r["pass"] for r in per),
        }
    if "annihilator" in checks:
        per = []
        spare = []
        for J in ctx.quotient.orbits:
            _, report = twisted.annihilator(ctx, J)
            per.append(report)
            spare.extend(twisted.spare_annihilator_report(ctx, J))
        ok = all(r["pass"] for r in per) and all(s["annihilates"] for s in spare)
        results["annihilator"] = {"checks": per, "spare": spare, "pass": ok}
    if "coupling" in checks:
        per = []
        ok = True
        for J in ctx.quotient.orbits:
            for K in ctx.quotient.orbits:
                if J.key == K.key:
                    continue
                rep = twisted.coupling_coefficient(ctx, J, K)
                if rep["matches"] is False:
                    ok = False
                per.append(
                    {
                        "J": rep["J"],
                        "K": rep["K"],
                        "m": rep["m"],
                        "value": render_value(rep["value"]),
                        "comparison": rep["comparison"],
                        "matches": rep["matches"],
                    }
                )
        results["coupling"] = {"checks": per, "pass": ok}
    if "spectrum" in checks:
        per = []
        ok = True
        for J in ctx.quotient.orbits:
            if J.orbit_type not in ("A", "B"):
                per.append({"J": J.key, "skipped": f"type {J.orbit_type}"})
                continue
            try:
                table = twisted.spectrum(ctx, J, validate=True)
                per.append(
                    {
                        "J": J.key,
                        "eigenvalues": {render_value(k): v for k, v in table.items()},
                    }
                )
            except AssertionError as exc:
                ok = False
                per.append({"J": J.key, "error": str(exc)})
        results["spectrum"] = {"checks": per, "pass": ok}
    if "powerlemma" in checks:
        ok = lkrep.rank_one_power_check(seed=args.seed, trials=4)
        results["powerlemma"] = {"seed": args.seed, "pass": ok}
    all_pass = all(r["pass"] for r in results.values())
    payload = {
        "command": "verify",
        "type": args.type,
        "sigma": args.sigma,
        "checks": results,
        "pass": all_pass,
    }
    lines = [f"verify {args.type} sigma={args.sigma}"]
    for name in checks:
        lines.append(f"  {name}: {'PASS' if results[name]['pass'] else 'FAIL'}")
    lines.append(f"overall: {'PASS' if all_pass else 'FAIL'}")
    _emit(args, payload, lines)
    return 0 if all_pass else 1


def _strip_scalars(obj):
    if isinstance(obj, dict):
        return {k: _strip_scalars(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_strip_scalars(v) for v in obj]
    if isinstance(obj, scalars.Scalar):
        return render_value(obj)
    return obj


def cmd_spectrum(args) -> int:
    ctx = _context(args)
    tables = {}
    for J in ctx.quotient.orbits:
        if J.orbit_type in ("A", "B"):
            table = twisted.spectrum(ctx, J, validate=not args.no_validate)
            tables[J.key] = {
                "orbit_type": J.orbit_type,
                "eigenvalues": {render_value(k): v for k, v in table.items()},
            }
        else:
            tables[J.key] = {"orbit_type": J.orbit_type, "skipped": True}
    payload = {
        "command": "spectrum",
        "type": args.type,
        "sigma": args.sigma,
        "spectra": tables,
    }
    lines = []
    for key, t in tables.items():
        if t.get("skipped"):
            lines.append(f"{key} (type {t['orbit_type']}): skipped")
        else:
            parts = ", ".join(f"{k}: {v}" for k, v in t["eigenvalues"].items())
            lines.append(f"{key} (type {t['orbit_type']}): {parts}")
    _emit(args, payload, lines)
    return 0


def cmd_annihilator(args) -> int:
    ctx = _context(args)
    reports = []
    spare = []
    for J in ctx.quotient.orbits:
        data, report = twisted.annihilator(ctx, J)
        report = dict(report)
        report["P"] = data.p.render()
        report["Q"] = data.q.render()
        report["form_value"] = render_value(data.form_value)
        reports.append(report)
        spare.extend(twisted.spare_annihilator_report(ctx, J))
    ok = all(r["pass"] for r in reports) and all(s["annihilates"] for s in spare)
    payload = {
        "command": "annihilator",
        "type": args.type,
        "sigma": args.sigma,
        "reports": reports,
        "spare": spare,
        "pass": ok,
    }
    lines = []
    for r in reports:
        lines.append(
            f"J={','.join(r['J'])}: P = {r['P']} | annihilates={r['annihilates']} "
            f"split={r['split_ok']}"
        )
    lines.append(f"overall: {'PASS' if ok else 'FAIL'}")
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_coupling(args) -> int:
    ctx = _context(args)
    reports = []
    ok = True
    for J in ctx.quotient.orbits:
        for K in ctx.quotient.orbits:
            if J.key == K.key:
                continue
            rep = twisted.coupling_coefficient(ctx, J, K)
            if rep["matches"] is False:
                ok = False
            reports.append(
                {
                    "J": rep["J"],
                    "K": rep["K"],
                    "m": rep["m"],
                    "value": render_value(rep["value"]),
                    "closed_form": render_value(rep["closed_form"])
                    if rep["closed_form"] is not None
                    else None,
                    "comparison": rep["comparison"],
                    "matches": rep["matches"],
                }
            )
    payload = {
        "command": "coupling",
        "type": args.type,
        "sigma": args.sigma,
        "pairs": reports,
        "pass": ok,
    }
    lines = [
        f"({','.join(r['J'])})->({','.join(r['K'])}) m={r['m']}: {r['value']}"
        f" [{r['comparison']}: {r['matches']}]"
        for r in reports
    ]
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_irreducible(args) -> int:
    params = parse_params(args.params) or {
        "a": 1,
        "b": 1,
        "d": 2,
        "f": 3,
    }
    ctx = twisted.build_context(args.type, args.sigma, params)
    if ctx.dimension >= HEAVY_DIMENSION and not args.heavy:
        print(
            f"quotient dimension {ctx.dimension} needs --heavy",
            file=sys.stderr,
        )
        return 2
    result = twisted.burnside_certificate(
        ctx, max_products=_budget(args, "product_cap", 64)
    )
    payload = {
        "command": "irreducible",
        "type": args.type,
        "sigma": args.sigma,
        "params": {k: str(v) for k, v in sorted(params.items())},
        "dimension": result["algebra_dimension"],
        "n": result["n"],
        "full_dimension": result["full_dimension"],
        "irreducible": result["irreducible"],
        "prime": result["prime"],
        "rounds": result["rounds"],
    }
    lines = [
        f"n={result['n']} algebra dimension {result['algebra_dimension']}"
        f"/{result['full_dimension']}: "
        + ("irreducible" if result["irreducible"] else "NOT irreducible")
    ]
    _emit(args, payload, lines)
    return 0


def cmd_faithful(args) -> int:
    ctx = _context(args)
    report = monoid.faithfulness_spotcheck(
        ctx, args.max_len, word_cap=_budget(args, "word_cap", monoid.DEFAULT_WORD_CAP)
    )
    payload = {
        "command": "faithful",
        "type": args.type,
        "sigma": args.sigma,
        "max_len": args.max_len,
        "report": report,
    }
    lines = [
        f"length {r['length']}: {r['classes']} classes" for r in report["lengths"]
    ]
    lines.append(
        f"collisions: {len(report['collisions'])}, "
        f"class mismatches: {len(report['class_image_mismatches'])}"
    )
    _emit(args, payload, lines)
    return 0 if report["pass"] else 1


def cmd_equiv(args) -> int:
    ctx_a = twisted.build_context(args.type, args.sigma, parse_params(args.params))
    ctx_b = twisted.build_context(
        args.type2, args.sigma2, parse_params(args.params2)
    )
    verdict = twisted.equivalence_discriminant(ctx_a, ctx_b)
    payload = {
        "command": "equiv",
        "left": {"type": args.type, "sigma": args.sigma, "params": args.params or ""},
        "right": {
            "type": args.type2,
            "sigma": args.sigma2,
            "params": args.params2 or "",
        },
        "verdict": verdict["verdict"],
        "reason": verdict.get("reason"),
        "witness": _strip_scalars(verdict.get("witness")),
    }
    lines = [f"{verdict['verdict']} ({verdict.get('reason')})"]
    _emit(args, payload, lines)
    return 0


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------


def _add_common(p, sigma_default="full"):
    p.add_argument("--type", required=True, help="A<n>, D<n> or E6")
    p.add_argument(
        "--sigma",
        default=sigma_default,
        help="full | order2 | order3 | trivial (default %(default)s)",
    )
    p.add_argument("--params", default=None, help="e.g. a=1,b=1,d=2,f=3")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--root-cap", dest="root_cap", type=int, default=None)
    p.add_argument("--word-cap", dest="word_cap", type=int, default=None)
    p.add_argument("--product-cap", dest="product_cap", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tlk",
        description="Exact computations with twisted Lawrence-Krammer representations.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("roots", help="graded root graph and orbit structure")
    _add_common(p)
    p.set_defaults(handler=cmd_roots)

    p = sub.add_parser("census", help="configuration counts per generator orbit")
    _add_common(p)
    p.set_defaults(handler=cmd_census)

    p = sub.add_parser("verify", help="symbolic verification suites")
    _add_common(p)
    p.add_argument(
        "--check",
        default=None,
        help="comma list from: " + ",".join(CHECK_NAMES),
    )
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("spectrum", help="eigenvalue multiplicity tables")
    _add_common(p)
    p.add_argument("--no-validate", action="store_true")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("annihilator", help="annihilating polynomials and checks")
    _add_common(p)
    p.set_defaults(handler=cmd_annihilator)

    p = sub.add_parser("coupling", help="coupling coefficients for all pairs")
    _add_common(p)
    p.set_defaults(handler=cmd_coupling)

    p = sub.add_parser("irreducible", help="matrix-algebra span certificate")
    _add_common(p)
    p.add_argument("--heavy", action="store_true", help="allow large quotients")
    p.set_defaults(handler=cmd_irreducible)

    p = sub.add_parser("faithful", help="monoid class collision spot-check")
    _add_common(p)
    p.add_argument("--max-len", dest="max_len", type=int, default=4)
    p.set_defaults(handler=cmd_faithful)

    p = sub.add_parser("equiv", help="non-equivalence discriminant")
    _add_common(p)
    p.add_argument("--type2", required=True)
    p.add_argument("--sigma2", default="full")
    p.add_argument("--params2", default=None)
    p.set_defaults(handler=cmd_equiv)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.handler(args)
    except (BudgetExceeded, RootBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TlkError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
