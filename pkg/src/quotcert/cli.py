"""Command line driver: ``quotcert <command> <scenario...> [options]``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import jsonschema

from . import __version__
from .actions import nilpotency_index, verify_invariants
from .certify import (
    certify_variety_quotient,
    construction_pipeline,
    invariant_map,
    quadric_counterexample_check,
)
from .errors import (
    DecompositionIncomplete,
    GradingError,
    ImageUnresolved,
    InvariantViolation,
    NilpotencyBoundExceeded,
    NotInvariantError,
    PolynomialSyntaxError,
    QuotcertError,
    ResourceLimitExceeded,
    ScenarioError,
    UnknownVariableError,
    WeightOutsideConeError,
)
from .gitfan import enumerate_git_fan, qualifying_faces, semistable_locus
from .groebner import STATS
from .ideal import Ideal, clear_basis_cache, decompose, jacobian_ideal
from .image import constructible_image, fiber_dimension, image_closure
from .scenario import REPORT_SCHEMA, Scenario, corpus_names, load_schema, load_scenario, validate_scenario

log = logging.getLogger("quotcert")

EXIT_OK, EXIT_INVALID, EXIT_UNRESOLVED, EXIT_INTERNAL = 0, 1, 2, 3

COMMANDS = ["verify", "image", "certify", "gitfan", "semistable", "pipeline", "report", "validate"]

_COMMAND_TASKS = {
    "verify": ["verify"],
    "image": ["image"],
    "certify": ["verify", "certify"],
    "gitfan": ["gitfan"],
    "semistable": ["semistable"],
    "pipeline": ["pipeline"],
}

_INVALID = (ScenarioError, PolynomialSyntaxError, UnknownVariableError, GradingError, NotInvariantError, WeightOutsideConeError)
_UNRESOLVED = (ResourceLimitExceeded, ImageUnresolved, DecompositionIncomplete, NilpotencyBoundExceeded)


# ---------------------------------------------------------------- tasks


def _strs(xs):
    return [str(x) for x in xs]


def task_verify(sc: Scenario, spec) -> dict:
    out = verify_invariants(spec).to_json()
    nil = []
    for D in spec.derivations:
        nil.append({v: nilpotency_index(D, sc.ring.var(v)) for v in sc.ring.variables})
    out["nilpotency"] = nil
    return out


def task_image(sc: Scenario, spec) -> dict:
    phi = invariant_map(spec)
    Y = constructible_image(phi)
    Z = image_closure(phi)
    return {
        "strata": Y.to_json(),
        "closure": _strs(Z.groebner_basis()),
        "dimension": Z.dimension(),
        "open_in_closure": Y.is_open_in_closure(),
    }


def task_certify(sc: Scenario, spec) -> dict:
    out = certify_variety_quotient(spec).to_json()
    flags = {k: bool(sc.flags.get(k, False)) for k in ("factorial_hypothesis", "normal_A", "fraction_field_A")}
    out["hypotheses"] = {k: ("asserted-by-user" if v else "not-asserted") for k, v in flags.items()}
    if not flags["factorial_hypothesis"]:
        out["notes"].append("factorial hypothesis not asserted: the constructible verdict is not a quotient statement")
    if not (flags["normal_A"] and flags["fraction_field_A"]):
        out["notes"].append("normality or fraction-field condition on A not asserted: the variety verdict is conditional")
    return out


def task_fiber(sc: Scenario, spec) -> dict:
    phi = invariant_map(spec)
    points = [{"point": _strs(p), "dimension": fiber_dimension(phi, p)} for p in sc.fiber_points]
    rng = random.Random(0)
    regular = []
    while len(regular) < sc.random_fibers:
        src = [rng.choice([-3, -2, -1, 1, 2, 3]) for _ in sc.ring.variables]
        if not phi.domain().contains_point(src):
            continue
        q = phi(src)
        regular.append({"source": _strs(src), "point": _strs(q), "dimension": fiber_dimension(phi, q)})
    return {"points": points, "random": regular}


def task_singular(sc: Scenario, spec) -> dict:
    Z = image_closure(invariant_map(spec))
    J = jacobian_ideal(Z, Z.codimension())
    comps, certified = decompose(J)
    out = []
    for C, ok in zip(comps, certified):
        entry = {"ideal": _strs(C.groebner_basis()), "dimension": C.dimension(), "certified_prime": ok}
        basis = C.groebner_basis()
        if C.dimension() == 0 and all(g.degree() <= 1 for g in basis):
            pt = {}
            for g in basis:
                (v,) = g.support()
                pt[v] = str(-g.constant_value())
            entry["point"] = [pt[v] for v in C.ring.variables]
        out.append(entry)
    return {"hypersurface": _strs(Z.groebner_basis()), "components": out, "smooth": not out}


def _grading(sc: Scenario, spec):
    if sc.relations is None:
        return sc.grading_data(image_closure(invariant_map(spec)))
    return sc.grading_data()


def task_gitfan(sc: Scenario, spec) -> dict:
    G = _grading(sc, spec)
    fan = enumerate_git_fan(G)
    out = fan.to_json()
    out["full_dimensional"] = len(fan.full_dimensional())
    return out


def task_semistable(sc: Scenario, spec, weights) -> list:
    G = _grading(sc, spec)
    return [
        {
            "weight": list(w),
            "faces": [G.face_names(g) for g in qualifying_faces(G, w)],
            "strata": semistable_locus(G, w).to_json(),
        }
        for w in weights
    ]


def task_pipeline(sc: Scenario, spec, weights) -> list:
    G = _grading(sc, spec)
    return [construction_pipeline(G, w).to_json() for w in weights]


def task_quadric(sc: Scenario, spec) -> dict:
    return quadric_counterexample_check(spec).to_json()


# ---------------------------------------------------------------- driver


def run_scenario(source, command: str = "report", weights=None, localize=None, timing: bool = True) -> tuple:
    """Run one scenario; returns ``(report_dict, exit_code)``."""
    STATS.reset()
    clear_basis_cache()
    started = time.perf_counter()
    name = str(source)
    report: dict = {"scenario": name, "command": command, "status": "ok", "results": {}}
    code = EXIT_OK
    try:
        sc = load_scenario(source)
        name = report["scenario"] = sc.name
        report["flags"] = dict(sorted(sc.flags.items()))
        spec = sc.action_spec(localize)
        tasks = sc.tasks if command == "report" else _COMMAND_TASKS[command]
        ws = [tuple(w) for w in weights] if weights else list(sc.weights_to_test)
        if command in ("semistable", "pipeline") and not ws:
            raise ScenarioError([f"{command} needs --weight or weights_to_test in the scenario"])
        for task in tasks:
            log.info("%s: %s", name, task)
            if task in ("semistable", "pipeline"):
                fn = task_semistable if task == "semistable" else task_pipeline
                report["results"][task] = fn(sc, spec, ws)
            else:
                report["results"][task] = _TASKS[task](sc, spec)
    except _INVALID as exc:
        report["status"], report["error"], code = "invalid", str(exc), EXIT_INVALID
    except _UNRESOLVED as exc:
        report["status"], report["error"], code = "unresolved", str(exc), EXIT_UNRESOLVED
    except InvariantViolation as exc:
        report["status"], report["error"], code = "internal_error", str(exc), EXIT_INTERNAL
    except QuotcertError as exc:
        report["status"], report["error"], code = "internal_error", f"{type(exc).__name__}: {exc}", EXIT_INTERNAL
    report["engine"] = STATS.snapshot()
    if timing:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    return report, code


_TASKS = {
    "verify": task_verify,
    "image": task_image,
    "certify": task_certify,
    "fiber": task_fiber,
    "singular": task_singular,
    "gitfan": task_gitfan,
    "quadric": task_quadric,
}


def _job(args):
    return run_scenario(*args)


def bundle(reports: list) -> dict:
    return {"format": "quotcert-report-v1", "version": __version__, "reports": reports}


def validate_report(doc: dict):
    jsonschema.validate(doc, load_schema(REPORT_SCHEMA))


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def summarize(report: dict) -> list:
    name, res = report["scenario"], report["results"]
    lines = []
    if report["status"] != "ok":
        return [f"{name}: {report['status']}: {report.get('error', '')}"]
    if "verify" in res:
        v = res["verify"]
        lines.append(f"{name}: invariance {'pass' if v['all_pass'] else 'FAIL'} ({v['checked']} checks)")
    if "image" in res:
        r = res["image"]
        lines.append(f"{name}: image has {len(r['strata'])} strata, closure ({', '.join(r['closure'])}), open in closure: {r['open_in_closure']}")
    if "certify" in res:
        c = res["certify"]
        lines.append(
            f"{name}: constructible quotient {c['constructible_quotient_exists']}, variety quotient {c['variety_quotient_exists']}"
        )
    if "fiber" in res:
        dims = [p["dimension"] for p in res["fiber"]["points"]] + [p["dimension"] for p in res["fiber"]["random"]]
        lines.append(f"{name}: fibre dimensions {dims}")
    if "singular" in res:
        s = res["singular"]
        pts = [c.get("point", c["ideal"]) for c in s["components"]]
        lines.append(f"{name}: singular locus {pts if pts else 'empty'}")
    if "gitfan" in res:
        g = res["gitfan"]
        lines.append(f"{name}: {len(g['chambers'])} chambers, {g['full_dimensional']} full-dimensional")
    for entry in res.get("semistable", []):
        lines.append(f"{name}: semistable faces at {entry['weight']}: {entry['faces']}")
    for entry in res.get("pipeline", []):
        lines.append(f"{name}: weight {entry['weight']} all stable {entry['all_stable']}, condition (*) {entry['condition_star']}")
    if "quadric" in res:
        lines.append(f"{name}: quadric non-factorisation witness {'confirmed' if res['quadric']['ok'] else 'NOT confirmed'}")
    return lines


def svg_fan(fan: dict, size: int = 240) -> str:
    """Static picture of a 2-D fan: one wedge per full-dimensional chamber, rays as lines."""
    import math

    c = size / 2
    scale = size * 0.45
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">']
    colours = ["#9ecae1", "#fdae6b", "#a1d99b", "#bcbddc", "#fc9272", "#d9d9d9"]

    def end(v):
        n = math.hypot(*v)
        return c + scale * v[0] / n, c - scale * v[1] / n

    full = [ch for ch in fan["chambers"] if ch["dim"] == 2]
    for k, ch in enumerate(full):
        pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in [(c, c)] + [end(g) for g in ch["generators"]])
        parts.append(f'<polygon points="{pts}" fill="{colours[k % len(colours)]}" stroke="none"/>')
    for ch in fan["chambers"]:
        if ch["dim"] == 1:
            x, y = end(ch["generators"][0])
            parts.append(f'<line x1="{c}" y1="{c}" x2="{x:.1f}" y2="{y:.1f}" stroke="black" stroke-width="2"/>')
    parts.append(f'<circle cx="{c}" cy="{c}" r="3" fill="black"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _weight(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weight must be comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quotcert", description="Certify quotients of group actions from scenario files.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("scenarios", nargs="*", help="scenario files or names of shipped scenarios (default: the whole corpus)")
    p.add_argument("--weight", type=_weight, action="append", help="weight vector a,b (repeatable)")
    p.add_argument("--localize", metavar="F", help="restrict every chart to the principal open D(F)")
    p.add_argument("--jobs", type=int, default=1, help="scenario files to run in parallel")
    p.add_argument("--no-timing", action="store_true", help="omit timing fields (byte-stable output)")
    p.add_argument("--out", type=Path, help="write the JSON report here")
    p.add_argument("--svg", type=Path, help="write a 2-D GIT fan picture (gitfan command)")
    p.add_argument("--json", action="store_true", help="print the JSON report instead of the summary")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"quotcert {__version__}")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not args.scenarios:
        args.scenarios = corpus_names()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.command == "validate":
        code = EXIT_OK
        for s in args.scenarios:
            diags = validate_scenario(s)
            if diags:
                code = EXIT_INVALID
                for d in diags:
                    print(f"{s}: {d}")
            else:
                print(f"{s}: valid")
        return code
    jobs = [(s, args.command, args.weight, args.localize, not args.no_timing) for s in args.scenarios]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]
    reports = [r for r, _ in results]
    doc = bundle(reports)
    try:
        validate_report(doc)
    except jsonschema.ValidationError as exc:
        print(f"internal error: report does not match its schema: {exc.message}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out:
        args.out.write_text(dumps(doc))
    if args.svg:
        fans = [r["results"]["gitfan"] for r in reports if "gitfan" in r["results"]]
        if fans:
            args.svg.write_text(svg_fan(fans[0]))
    try:
        if args.json:
            sys.stdout.write(dumps(doc))
        else:
            for r in reports:
                for line in summarize(r):
                    print(line)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); keep the exit code meaningful
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return max(code for _, code in results)


if __name__ == "__main__":
    sys.exit(main())
