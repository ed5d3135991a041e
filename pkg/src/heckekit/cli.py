"""Command dispatcher: runs pair-language programs against the library.

Each command produces one report envelope (validated against the
shipped schema) and a few human-readable lines.  Exit status is 0 when
every command passes, 1 when any FAIL finding appears, and 2 on usage
errors (bad syntax, unknown identifiers, bad flags).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Dict, List, Optional, Tuple

from . import completion, scale
from .actions import export_schreier_dot, orbit
from .dsl import (
    Binding,
    Command,
    DslError,
    Evaluator,
    parse_program,
    pretty_expr,
)
from .errors import DepthInsufficient, HeckekitError, MissingWitness, UndecidableInclusion
from .pairs import PermutationHeckePair, check_hecke_axioms, commensuration_index
from .rank import apply_rule, assume, build_gn_tower
from .reporting import validate_report

__all__ = ["run", "main", "EXIT_PASS", "EXIT_FAIL", "EXIT_USAGE"]

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(HeckekitError):
    """A semantically invalid command (bad subcommand, missing option)."""


def _finding(severity: str, text: str) -> dict:
    return {"severity": severity, "text": text}


def _report(verb: str, target: str, findings: List[dict], data: dict) -> dict:
    status = "fail" if any(f["severity"] == "FAIL" for f in findings) else "pass"
    return {"verb": verb, "target": target, "status": status, "findings": findings, "data": data}


def _table_pair(pair, verb: str) -> PermutationHeckePair:
    if not isinstance(pair, PermutationHeckePair):
        raise MissingWitness(
            "%s needs a pair with a coset model; %r has none" % (verb, getattr(pair, "name", pair))
        )
    return pair


def _target_text(cmd: Command) -> str:
    parts = []
    for a in cmd.args:
        parts.append(a if isinstance(a, str) else pretty_expr(a))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Verb handlers.  Each returns (findings, data).


def _run_verify(cmd: Command, pair) -> Tuple[List[dict], dict]:
    pair = _table_pair(pair, "verify")
    report = check_hecke_axioms(
        pair,
        depth=cmd.option("depth", 4),
        samples=cmd.option("samples", 12),
        seed=cmd.option("seed", 0),
    )
    findings = []
    for check in report.checks:
        severity = {"pass": "PASS", "fail": "FAIL"}.get(check.status, "INFO")
        text = check.name if not check.detail else "%s: %s" % (check.name, check.detail)
        findings.append(_finding(severity, text))
    return findings, report.to_dict()


def _run_orbits(cmd: Command, pair) -> Tuple[List[dict], dict]:
    pair = _table_pair(pair, "orbits")
    depth = cmd.option("depth", 3)
    ball = pair.ball(depth)
    points = [pair.table.point(c) for c in ball.members]
    u_words = pair.u_generator_words(depth=max(4, depth), points=points)
    seen = set()
    orbits: List[List[int]] = []
    for c in ball.members:
        if c in seen:
            continue
        ids = orbit(pair, u_words, c)
        seen.update(ids)
        orbits.append([int(i) for i in ids])
    findings = [
        _finding("PASS", "%d orbits cover the %d cosets of the radius-%d ball"
                 % (len(orbits), len(ball.members), depth))
    ]
    data = {"depth": depth, "orbits": orbits, "sizes": [len(o) for o in orbits]}
    return findings, data


def _run_index(cmd: Command, pair) -> Tuple[List[dict], dict]:
    pair = _table_pair(pair, "index")
    word = pair.parse_word(cmd.args[1])
    report = commensuration_index(pair, word, depth=cmd.option("depth", 4))
    if report.finite:
        findings = [
            _finding("PASS", "indices of %s: left %d, right %d"
                     % (report.element, report.idx_left, report.idx_right))
        ]
    else:
        findings = [_finding("FAIL", "index computation capped: %s" % report.note)]
    return findings, report.to_dict()


def _run_scale(cmd: Command, pair) -> Tuple[List[dict], dict]:
    pair = _table_pair(pair, "scale")
    word = pair.parse_word(cmd.args[1])
    est = scale.scale_estimate(pair, word, steps=cmd.option("steps", 8))
    if est.status == scale.STABLE:
        findings = [_finding("PASS", "scale reading for %s: %d" % (est.element, est.value))]
    elif est.status == scale.CAP_EXCEEDED:
        findings = [_finding("FAIL", "index growth capped before a reading emerged")]
    else:
        findings = [_finding("INFO", "index ratios did not settle; no reading issued")]
    return findings, est.to_dict()


def _run_ball(cmd: Command, pair, out_dir: Optional[str]) -> Tuple[List[dict], dict]:
    pair = _table_pair(pair, "ball")
    radius = cmd.option("radius", 3)
    fmt = cmd.option("format", "json")
    if fmt not in ("json", "dot"):
        raise UsageError("ball --format takes json or dot, got %r" % fmt)
    ball = pair.ball(radius)
    data: dict = {
        "radius": radius,
        "members": [int(c) for c in ball.members],
        "reps": {str(int(c)): ball.rep_words[c].format() for c in ball.members},
    }
    findings = [_finding("PASS", "radius-%d ball has %d cosets" % (radius, len(ball.members)))]
    if fmt == "dot":
        dot = export_schreier_dot(pair, radius)
        data["dot"] = dot
        out = cmd.option("out")
        if out:
            path = _artifact_path(out, out_dir)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(dot)
            findings.append(_finding("INFO", "wrote %s" % path))
    return findings, data


def _run_complete(cmd: Command, pair) -> Tuple[List[dict], dict]:
    pair = _table_pair(pair, "complete")
    word = pair.parse_word(cmd.args[1])
    depth = cmd.option("depth", 4)
    try:
        chain = completion.chain_of(pair, word, depth)
        left = completion.left_right_exchange(chain)
    except DepthInsufficient as exc:
        return [_finding("FAIL", str(exc))], {}
    findings = [_finding("PASS", "principal chain recorded to depth %d" % chain.depth)]
    return findings, {"chain": chain.to_dict(), "left": left.to_dict()}


def _run_filter(cmd: Command, out_dir: Optional[str]) -> Tuple[List[dict], dict]:
    sub = cmd.args[0]
    if sub != "compare":
        raise UsageError("filter supports the compare subcommand, got %r" % sub)
    specs = []
    for path in cmd.args[1:3]:
        with open(path, "r", encoding="utf-8") as fh:
            specs.append(completion.load_filter_spec(fh.read()))
    lhs, rhs = specs
    predicates = [
        ("factorization", completion.exists_factorization),
        ("injective", completion.exists_injective_factorization),
        ("discrete_kernel", completion.exists_discrete_kernel_factorization),
        ("subset", completion.subset_factorization),
    ]
    findings: List[dict] = []
    data: dict = {"lhs": lhs.label(), "rhs": rhs.label(), "reports": {}, "summary": {}}
    parts = []
    for name, fn in predicates:
        try:
            rep = fn(lhs, rhs)
        except UndecidableInclusion as exc:
            data["reports"][name] = {"undecidable": str(exc)}
            data["summary"][name] = "undecidable"
            parts.append("%s: undecidable" % name)
            continue
        data["reports"][name] = rep
        data["summary"][name] = rep["result"]
        parts.append("%s: %s" % (name, "true" if rep["result"] else "false"))
    findings.insert(0, _finding("PASS", "{%s}" % ", ".join(parts)))
    return findings, data


def _run_rank(cmd: Command, pair) -> Tuple[List[dict], dict]:
    subject = _target_text(cmd)
    md = pair.metadata
    kind_map = [
        ("transitive", md.transitive, "transitive"),
        ("proper", md.proper, "proper"),
        ("finitely_generated", md.finitely_generated, "finitely_generated"),
        ("elementary", md.elementary, "elementary"),
        ("residually_discrete", md.residually_discrete, "residually_discrete"),
        ("perfect", md.perfect, "perfect"),
        ("infinite_U", md.u_infinite, "infinite_U"),
    ]
    facts = [
        assume(subject, kind, note="by construction")
        for _, flag, kind in kind_map
        if flag is True
    ]
    derived = []
    rd = next((f for f in facts if f.kind == "residually_discrete"), None)
    if rd is not None:
        derived.append(apply_rule("rule_residually_discrete", [rd]))
    findings = [
        _finding("PASS", "%d construction facts, %d derived bounds" % (len(facts), len(derived)))
    ]
    data = {
        "facts": [f.statement() for f in facts],
        "derived": [f.statement() for f in derived],
    }
    return findings, data


def _run_tower(cmd: Command, out_dir: Optional[str]) -> Tuple[List[dict], dict]:
    n = cmd.option("n")
    if n is None:
        raise UsageError("tower needs --n <level>")
    seed = cmd.option("seed", "abstract")
    seed_name = "p0" if seed == "abstract" else seed
    cert = build_gn_tower(n, seed_name=seed_name)
    cert.check()
    conclusion = cert.conclusion.statement()
    findings = [_finding("PASS", "%s (certificate re-validated)" % conclusion)]
    data = {
        "n": n,
        "seed": seed_name,
        "conclusion": conclusion,
        "value": cert.value.format(),
        "rule_applications": dict(sorted(cert.rule_applications().items())),
        "tree": cert.render(dedupe=True).splitlines(),
    }
    out = cmd.option("out")
    if out:
        path = _artifact_path(out, out_dir)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(cert.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
        findings.append(_finding("INFO", "wrote %s" % path))
    return findings, data


def _artifact_path(name: str, out_dir: Optional[str]) -> str:
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        return os.path.join(out_dir, name)
    return name


# ---------------------------------------------------------------------------
# Dispatcher


def _dispatch(cmd: Command, ev: Evaluator, out_dir: Optional[str]) -> dict:
    target = _target_text(cmd)
    try:
        if cmd.verb == "filter":
            findings, data = _run_filter(cmd, out_dir)
        elif cmd.verb == "tower":
            findings, data = _run_tower(cmd, out_dir)
        else:
            pair = ev.expr(cmd.args[0])
            handler = {
                "verify": _run_verify,
                "orbits": _run_orbits,
                "index": _run_index,
                "scale": _run_scale,
                "complete": _run_complete,
                "rank": _run_rank,
            }.get(cmd.verb)
            if handler is not None:
                findings, data = handler(cmd, pair)
            else:
                findings, data = _run_ball(cmd, pair, out_dir)
    except UsageError:
        raise
    except HeckekitError as exc:
        findings, data = [_finding("FAIL", str(exc))], {}
    except OSError as exc:
        findings, data = [_finding("FAIL", str(exc))], {}
    return _report(cmd.verb, target, findings, data)


def run(source: str, out_dir: Optional[str] = None, stream=None) -> Tuple[int, List[dict]]:
    """Execute a program; returns (exit code, reports in command order)."""
    out = stream if stream is not None else sys.stdout
    try:
        items = parse_program(source)
    except DslError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE, []
    ev = Evaluator()
    reports: List[dict] = []
    code = EXIT_PASS
    for item in items:
        if isinstance(item, Binding):
            try:
                ev.bind(item)
            except HeckekitError as exc:
                print("error while building %s: %s" % (item.name, exc), file=sys.stderr)
                return EXIT_FAIL, reports
            print("pair %s = %s" % (item.name, pretty_expr(item.expr)), file=out)
            continue
        try:
            report = _dispatch(item, ev, out_dir)
        except (UsageError, DslError) as exc:
            print("error at line %d: %s" % (item.line, exc), file=sys.stderr)
            return EXIT_USAGE, reports
        problems = validate_report(report)
        if problems:
            raise AssertionError("malformed report: %s" % "; ".join(problems))
        reports.append(report)
        print(("== %s %s" % (report["verb"], report["target"])).rstrip(), file=out)
        for f in report["findings"]:
            print("%s %s" % (f["severity"], f["text"]), file=out)
        if item.verb == "tower":
            for line in report["data"].get("tree", []):
                print(line, file=out)
            print("conclusion: %s" % report["data"]["conclusion"], file=out)
        if report["status"] == "fail":
            code = EXIT_FAIL
    return code, reports


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="heckekit",
        description="Run pair-description programs: bindings plus verify/orbits/index/"
        "scale/ball/complete/filter/rank/tower commands.",
    )
    parser.add_argument("program", nargs="?", help="path to a .pairs program file")
    parser.add_argument("-c", "--command", help="program text given inline")
    parser.add_argument("--out-dir", help="directory for report and graph artifacts")
    parser.add_argument(
        "--json", action="store_true", help="also print each report as JSON to stdout"
    )
    args = parser.parse_args(argv)
    if (args.program is None) == (args.command is None):
        parser.print_usage(sys.stderr)
        print("error: give exactly one of a program file or -c text", file=sys.stderr)
        return EXIT_USAGE
    if args.program is not None:
        if not os.path.exists(args.program):
            print("error: no such program file: %s" % args.program, file=sys.stderr)
            return EXIT_USAGE
        with open(args.program, "r", encoding="utf-8") as fh:
            source = fh.read()
    else:
        source = args.command
    code, reports = run(source, out_dir=args.out_dir)
    if args.json:
        for report in reports:
            print(json.dumps(report, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
