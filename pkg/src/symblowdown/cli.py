"""Command-line front end.

Every subcommand builds (or reads, via ``--json``) a job document, validates
it against the shipped schema and dispatches to :func:`run`.  Exit status is
0 on success, 1 for a well-formed job whose answer is negative (a ball that
does not fit, an unbalanced diagram) and 2 for invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import jsonio
from .diagram import DiagramError, diagram_from_json, validate_threefold_diagram, verdict_to_json
from .domains import (
    DomainError,
    edge_sphere_invariants,
    make_ball_collar_domain,
    make_chain_domain,
    make_general_plumbing_domain,
    make_wedge,
)
from .lattice import LatticeError, Vec, as_rational, chain_convergents, format_rational, lens_from_corner, neg_cf_eval, neg_cf_expand
from .render import (
    RenderOptions,
    render_chain_plumbing,
    render_domain_svg,
    render_fit_figure,
    render_plumbing_svg,
)
from .surgery import (
    SurgeryError,
    ball_feasible,
    blowdown_report,
    chain_budget,
    chain_terms,
    choose_ball,
    embedding_phi1,
    is_negative_definite,
    leading_minors,
    plumbing_matrix,
)

OK, NEGATIVE, INVALID = 0, 1, 2


@dataclass
class JobResult:
    status: int
    document: dict
    svg: Optional[str] = None


def _invariants_json(d) -> list:
    return [
        {"label": inv.label, "area": format_rational(inv.area), "self_intersection": inv.self_intersection}
        for inv in edge_sphere_invariants(d)
    ]


def _cf(job):
    if "terms" in job:
        n, m = neg_cf_eval(job["terms"])
        return OK, {"terms": list(job["terms"]), "n": n, "m": m}
    return OK, {"n": job["n"], "m": job["m"], "terms": neg_cf_expand(job["n"], job["m"])}


def _chain(job):
    c = jsonio.chain_from_json(job["chain"])
    d = make_chain_domain(c.n, c.areas, collar=job.get("collar", False))
    pairs, r = chain_convergents(c.n, c.n - 1)
    return OK, {
        "chain": jsonio.chain_to_json(c),
        "convergents": [list(p) for p in pairs],
        "directions": [[int(v.x), int(v.y)] for v in r],
        "boundary_lens": list(pairs[-1]),
        "budget": format_rational(chain_budget(c)),
        "phi1": embedding_phi1(c).to_json(),
        "domain": d.to_json(),
        "spheres": _invariants_json(d),
    }


def _plumbing(job):
    terms = job["terms"]
    mat = plumbing_matrix(terms)
    n, m = neg_cf_eval(terms)
    doc = {
        "terms": list(terms),
        "matrix": mat,
        "leading_minors": [format_rational(x) for x in leading_minors(mat)],
        "negative_definite": is_negative_definite(mat),
        "boundary_lens": [n, m],
    }
    if "areas" in job:
        d = make_general_plumbing_domain(terms, [as_rational(a) for a in job["areas"]])
        doc["domain"] = d.to_json()
        doc["spheres"] = _invariants_json(d)
    return OK, doc


def _fit(job):
    c = jsonio.chain_from_json(job["chain"])
    b = jsonio.ball_from_json(job["ball"]) if "ball" in job else choose_ball(c)
    report = ball_feasible(c, b)
    doc = {"chain": jsonio.chain_to_json(c), "ball": jsonio.ball_to_json(b),
           "budget": format_rational(chain_budget(c)), "fit": jsonio.fit_to_json(report)}
    return (OK if report.feasible else NEGATIVE), doc


def _blowdown(job):
    c = jsonio.chain_from_json(job["chain"])
    m = jsonio.invariants_from_json(job["invariants"])
    b = jsonio.ball_from_json(job["ball"]) if "ball" in job else None
    if b is not None and c.n > 2:
        fit = ball_feasible(c, b)
        if not fit.feasible:
            return NEGATIVE, {"chain": jsonio.chain_to_json(c), "fit": jsonio.fit_to_json(fit)}
    report = blowdown_report(m, c, b)
    return OK, {"chain": jsonio.chain_to_json(c), "report": jsonio.report_to_json(report)}


def _lens(job):
    n, m = lens_from_corner(Vec(*job["u"]), Vec(*job["v"]))
    return OK, {"u": job["u"], "v": job["v"], "lens": [n, m], "delzant": n == 1}


def _diagram(job):
    if "fixture" in job:
        fixtures = jsonio.load_fixtures()
        if job["fixture"] not in fixtures:
            raise DiagramError(f"unknown fixture {job['fixture']!r}; have {sorted(fixtures)}")
        d = diagram_from_json(fixtures[job["fixture"]])
    else:
        d = diagram_from_json(job["diagram"])
    verdict = validate_threefold_diagram(d)
    return (OK if verdict.valid else NEGATIVE), verdict_to_json(verdict)


def _render(job):
    o = job.get("options", {})
    opts = RenderOptions(
        scale=as_rational(o.get("scale", 20)),
        epsilon=None if "epsilon" not in o else as_rational(o["epsilon"]),
        labels=o.get("labels", True),
        horizon=None if "horizon" not in o else as_rational(o["horizon"]),
        output=o.get("output"),
    )
    fig = job["figure"]

    def need(key):
        if key not in job:
            raise jsonio.SchemaViolation(f"figure {fig!r} needs {key!r}", "")
        return job[key]

    if fig in ("chain", "collar"):
        c = jsonio.chain_from_json(need("chain"))
        svg = render_domain_svg(make_chain_domain(c.n, c.areas, collar=fig == "collar"), (), opts)
    elif fig == "wedge":
        w = need("wedge")
        svg = render_domain_svg(make_wedge(w["n"], w["m"]), (), opts)
    elif fig == "ball":
        c = jsonio.chain_from_json(need("chain"))
        b = jsonio.ball_from_json(job["ball"]) if "ball" in job else choose_ball(c)
        svg = render_domain_svg(make_ball_collar_domain(c.n, b.alpha_plus, b.alpha_minus), (), opts)
    elif fig == "fit":
        c = jsonio.chain_from_json(need("chain"))
        b = jsonio.ball_from_json(job["ball"]) if "ball" in job else choose_ball(c)
        report = ball_feasible(c, b)
        if not report.feasible:
            return NEGATIVE, {"fit": jsonio.fit_to_json(report)}, None
        svg = render_fit_figure(c, b, opts)
    else:
        if "terms" in job:
            svg = render_plumbing_svg(job["terms"], opts)
        else:
            svg = render_chain_plumbing(jsonio.chain_from_json(need("chain")).n, opts)
    doc = {"figure": fig, "bytes": len(svg.encode())}
    if opts.output:
        Path(opts.output).write_text(svg)
        doc["output"] = opts.output
    return OK, doc, svg


HANDLERS = {
    "cf": _cf, "chain": _chain, "plumbing": _plumbing, "fit": _fit,
    "blowdown": _blowdown, "lens": _lens, "diagram": _diagram,
}


def run(config: dict) -> JobResult:
    """Validate and execute one job document."""
    try:
        jsonio.validate_job(config)
        if config["command"] == "render":
            status, doc, svg = _render(config)
            return JobResult(status, doc, svg)
        status, doc = HANDLERS[config["command"]](config)
        return JobResult(status, doc)
    except jsonio.SchemaViolation as exc:
        return JobResult(INVALID, {"error": exc.message, "path": exc.pointer})
    except (LatticeError, DomainError, SurgeryError, DiagramError, ValueError) as exc:
        return JobResult(INVALID, {"error": str(exc), "path": ""})


# --- argparse front end -----------------------------------------------------------------


def _read_json(source: str):
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    return json.loads(text)


def _chain_args(p):
    p.add_argument("--n", type=int)
    p.add_argument("--areas", nargs="+")


def _ball_args(p):
    p.add_argument("--ball", nargs=2, metavar=("ALPHA_PLUS", "ALPHA_MINUS"))


def _render_args(p):
    p.add_argument("--figure", choices=["chain", "collar", "wedge", "ball", "fit", "plumbing"])
    p.add_argument("--wedge", nargs=2, type=int, metavar=("N", "M"))
    p.add_argument("--terms", nargs="+", type=int)
    p.add_argument("--scale")
    p.add_argument("--epsilon")
    p.add_argument("--horizon")
    p.add_argument("--no-labels", action="store_true")
    p.add_argument("-o", "--output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symblowdown", description="Exact toric models for the symplectic rational blowdown.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", metavar="FILE", help="read the job document from FILE ('-' for stdin)")
        return p

    p = add("cf", "negative continued fraction of n/m (or evaluate --terms)")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("m", type=int, nargs="?")
    p.add_argument("--terms", nargs="+", type=int)

    p = add("chain", "domain, convergents and budget of a C_n chain")
    _chain_args(p)
    p.add_argument("--collar", action="store_true")

    p = add("plumbing", "intersection form of a linear plumbing")
    p.add_argument("terms", nargs="*", type=int)
    p.add_argument("--areas", nargs="+")

    p = add("fit", "check whether a ball collar fits under the chain collar")
    _chain_args(p)
    _ball_args(p)

    p = add("blowdown", "volume and invariant changes of the blowdown")
    _chain_args(p)
    _ball_args(p)
    p.add_argument("--invariants", nargs=4, metavar=("EULER", "SIGNATURE", "B2", "VOLUME"))

    p = add("lens", "lens space type of a corner")
    p.add_argument("--u", nargs=2, type=int, required=False)
    p.add_argument("--v", nargs=2, type=int, required=False)

    p = add("diagram", "balance check of a 3-fold sum diagram")
    p.add_argument("--fixture")

    p = add("render", "SVG figure")
    _chain_args(p)
    _ball_args(p)
    _render_args(p)
    return parser


def _job_from_args(args) -> dict:
    job = {"command": args.command}
    if args.command == "cf":
        if args.terms:
            job["terms"] = args.terms
        else:
            job.update({k: v for k, v in (("n", args.n), ("m", args.m)) if v is not None})
        return job
    if args.command == "plumbing":
        job["terms"] = args.terms
        if args.areas:
            job["areas"] = args.areas
        return job
    if args.command == "lens":
        job["u"] = args.u
        job["v"] = args.v
        return job
    if args.command == "diagram":
        job["fixture"] = args.fixture
        return job
    if args.command == "render" and args.figure == "plumbing" and args.n is not None and not args.areas:
        job["terms"] = chain_terms(args.n)
    elif args.n is not None:
        job["chain"] = {"n": args.n, "areas": list(args.areas or [])}
    if getattr(args, "ball", None):
        job["ball"] = {"alpha_plus": args.ball[0], "alpha_minus": args.ball[1]}
    if args.command == "chain" and args.collar:
        job["collar"] = True
    if args.command == "blowdown" and args.invariants:
        e, s, b2, vol = args.invariants
        job["invariants"] = {"euler": int(e), "signature": int(s), "b2": int(b2), "volume": vol}
    if args.command == "render":
        job["figure"] = args.figure
        if args.wedge:
            job["wedge"] = {"n": args.wedge[0], "m": args.wedge[1]}
        if args.terms:
            job["terms"] = args.terms
        opts = {}
        for key in ("scale", "epsilon", "horizon", "output"):
            if getattr(args, key) is not None:
                opts[key] = getattr(args, key)
        if args.no_labels:
            opts["labels"] = False
        if opts:
            job["options"] = opts
    return job


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.json:
        try:
            job = _read_json(args.json)
        except (OSError, json.JSONDecodeError) as exc:
            sys.stdout.write(jsonio.dumps({"error": f"cannot read job: {exc}", "path": ""}))
            return INVALID
        if isinstance(job, dict):
            job.setdefault("command", args.command)
    else:
        job = _job_from_args(args)
    result = run(job)
    if result.svg is not None and not result.document.get("output"):
        sys.stdout.write(result.svg)
    else:
        sys.stdout.write(jsonio.dumps(result.document))
    return result.status


if __name__ == "__main__":
    sys.exit(main())
