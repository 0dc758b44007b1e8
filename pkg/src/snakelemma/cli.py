"""Command-line front end.

    snakelemma check FILE     validate a diagram
    snakelemma snake FILE     long exact sequence and connecting map
    snakelemma ring FILE      kernel-cokernel sequence of a composite and its exact ring
    snakelemma four FILE      the three short exact sequences of the 4-lemma
    snakelemma fuzz ...       random diagrams through the whole invariant suite

Exit codes: 0 ok, 2 invalid input, 3 counterexample, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import traceback

from . import __version__, oracle
from .abgroup import is_injective, is_surjective
from .errors import (
    GenerationExhausted,
    HypothesisFailed,
    InternalError,
    InvalidInput,
    NotCommutative,
    ParseError,
    RowNotExact,
)
from .fileformat import group_to_json, kind_of, matrix_to_json, parse_file, to_document
from .four import FourDiagram, four_lemma, validate_four
from .generate import GenConfig, gen_four, gen_pair, gen_snake
from .snake import (
    SnakeDiagram,
    classical_specialization,
    exact_ring,
    ring_lemma,
    snake_sequence,
    validate,
)
from .suite import alternating_orders_agree, check_any

EXIT = {"ok": 0, "invalid-input": 2, "counterexample": 3, "internal-error": 4}


def _report(command, status="ok", **fields):
    rep = {"command": command, "status": status, "checks": {}, "diagnostics": []}
    rep.update(fields)
    return rep


def _group(g):
    return {"invariant_factors": list(g.invariant_factors), "presentation": group_to_json(g)}


def sequence_json(seq):
    out = []
    for i, t in enumerate(seq.terms):
        entry = _group(t)
        entry["label"] = seq.labels[i] if i < len(seq.labels) else str(i)
        entry["map"] = matrix_to_json(seq.maps[i].matrix) if i < len(seq.maps) else None
        if 0 < i < len(seq.terms) - 1:
            entry["exact"] = seq.certificate[i - 1]
        out.append(entry)
    return out


def _status(checks):
    return "ok" if all(checks.values()) else "counterexample"


def _expect(d, kind):
    if kind_of(d) != kind:
        raise InvalidInput(f"expected a {kind} diagram, got {kind_of(d)}")


# -- commands ----------------------------------------------------------------

def cmd_check(d):
    checks, properties = {}, {}
    if isinstance(d, SnakeDiagram):
        validate(d)
        checks = {"squares commute": True, "rows exact": True}
        properties = {"f1 injective": is_injective(d.f1), "g surjective": is_surjective(d.g)}
    elif isinstance(d, FourDiagram):
        validate_four(d)
        checks = {"alpha surjective": True, "delta injective": True,
                  "squares commute": True, "rows exact": True}
    else:
        checks = {"composable": True}
    return _report("check", checks=checks, properties=properties, kind=kind_of(d))


def cmd_snake(d):
    _expect(d, "snake")
    d = validate(d)
    res = snake_sequence(d)
    seq = res.sequence
    spec = classical_specialization(d, res)
    checks = {f"exact at {seq.labels[k + 1]}": ok for k, ok in enumerate(seq.certificate)}
    alt = alternating_orders_agree(seq)
    if alt is not None:
        checks["alternating order product"] = alt
    for name, ok in spec.checks.items():
        checks["classical: " + name] = ok
    if spec.matches_general is not None:
        checks["classical: same invariant factors as the long sequence"] = spec.matches_general
    conn = res.connecting
    delta = {
        "matrix": matrix_to_json(conn.hom.matrix),
        "domain": dict(_group(conn.domain.group),
                       inclusion=matrix_to_json(conn.domain.inclusion.matrix)),
        "codomain": dict(_group(conn.codomain.group),
                         projection=matrix_to_json(conn.codomain.projection.matrix)),
    }
    classical = {
        "f1_injective": spec.f1_injective,
        "g_surjective": spec.g_surjective,
        "notes": list(spec.notes),
        "sequence": sequence_json(spec.classical) if spec.classical else None,
    }
    return _report("snake", _status(checks), checks=checks, sequence=sequence_json(seq),
                   delta=delta, classical=classical)


def cmd_ring(d):
    _expect(d, "ring")
    seq = ring_lemma(d.alpha, d.beta)
    ring = exact_ring(d.alpha, d.beta)
    checks = {f"exact at {seq.labels[k + 1]}": ok for k, ok in enumerate(seq.certificate)}
    for k, ok in enumerate(ring.exactness):
        checks[f"ring node {k + 1} exact"] = ok
    for name, ok in ring.factorizations.items():
        checks["factorization: " + name] = ok
    checks["ring agrees with ring lemma"] = ring.matches_ring_lemma
    alt = alternating_orders_agree(seq)
    if alt is not None:
        checks["alternating order product"] = alt
    return _report("ring", _status(checks), checks=checks, sequence=sequence_json(seq))


def cmd_four(d):
    _expect(d, "four")
    d = validate_four(d)
    res = four_lemma(d)
    checks = {"es1 exact": res.es1.is_exact, "es2 exact": res.es2.is_exact,
              "esr exact": res.esr.is_exact}
    checks.update(res.checks)
    return _report("four", _status(checks), checks=checks, sequences={
        "es1": sequence_json(res.es1), "es2": sequence_json(res.es2),
        "esr": sequence_json(res.esr)})


COMMANDS = {"check": cmd_check, "snake": cmd_snake, "ring": cmd_ring, "four": cmd_four}
GENERATORS = {"snake": gen_snake, "four": gen_four, "ring": gen_pair}


def cmd_fuzz(count, seed, kind, cap=oracle.DEFAULT_CAP, **bounds):
    if count < 0:
        raise InvalidInput("count must be non-negative")
    if cap <= 0:
        raise InvalidInput("cap must be positive")
    master = random.Random(seed)
    gen = GENERATORS[kind]
    totals = {}
    ran = skipped = with_oracle = 0
    failure = None
    status = "ok"
    for i in range(count):
        case_seed = master.getrandbits(64)
        cfg = GenConfig(seed=case_seed, **bounds)
        try:
            d = gen(cfg)
        except GenerationExhausted:
            skipped += 1
            continue
        ran += 1
        try:
            checks = check_any(d, cap, rng=random.Random(case_seed ^ 0x5DEECE66D))
        except InternalError as exc:
            status = "internal-error"
            failure = {"case": i, "seed": case_seed, "failed": [str(exc)],
                       "diagram": to_document(d)}
            break
        except InvalidInput as exc:
            checks = {f"generated diagram rejected: {exc}": False}
        if any(k.startswith("oracle") for k in checks):
            with_oracle += 1
        for name, ok in checks.items():
            totals[name] = totals.get(name, True) and ok
        bad = [k for k, ok in checks.items() if not ok]
        if bad:
            status = "counterexample"
            failure = {"case": i, "seed": case_seed, "failed": bad, "diagram": to_document(d)}
            break
    return _report("fuzz", status, checks=totals, kind=kind, count=count, seed=seed, cap=cap,
                   cases=ran, skipped=skipped, oracle_cases=with_oracle, failure=failure)


# -- output -------------------------------------------------------------------

def _diagnostic(exc):
    diag = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, NotCommutative):
        diag["square"] = exc.square
    elif isinstance(exc, RowNotExact):
        diag["row"], diag["position"] = exc.row, exc.position
    elif isinstance(exc, HypothesisFailed):
        diag["hypothesis"] = exc.which
    elif isinstance(exc, ParseError):
        diag["position"] = exc.position
    return diag


def dump_json(rep) -> str:
    return json.dumps(rep, indent=2, sort_keys=True) + "\n"


def _fmt_group(entry):
    f = entry["invariant_factors"]
    return " + ".join("Z" if d == 0 else f"Z/{d}" for d in f) or "0"


def _text_sequence(entry_list, out):
    for e in entry_list:
        mark = "" if "exact" not in e else ("  exact" if e["exact"] else "  NOT EXACT")
        out.append(f"  {e['label']:<26} {_fmt_group(e)}{mark}")
        if e["map"] and any(e["map"]):
            out.append(f"  {'':<26}   | {e['map']}")


def format_text(rep) -> str:
    out = [f"{rep['command']}: {rep['status']}"]
    if "sequence" in rep:
        out.append("sequence:")
        _text_sequence(rep["sequence"], out)
    for name, seq in rep.get("sequences", {}).items():
        out.append(f"{name}:")
        _text_sequence(seq, out)
    if rep.get("delta"):
        dl = rep["delta"]
        out.append(f"delta: {_fmt_group(dl['domain'])} -> {_fmt_group(dl['codomain'])}  "
                   f"matrix {dl['matrix']}")
    if rep["command"] == "fuzz":
        out.append(f"cases: {rep['cases']} run, {rep['skipped']} skipped, "
                   f"{rep['oracle_cases']} checked against enumeration")
        if rep["failure"]:
            f = rep["failure"]
            out.append(f"first failure: case {f['case']} (seed {f['seed']}): {', '.join(f['failed'])}")
            out.append(json.dumps(f["diagram"], sort_keys=True))
    for name, ok in rep["checks"].items():
        out.append(f"  [{'ok' if ok else 'FAIL'}] {name}")
    for d in rep["diagnostics"]:
        out.append(f"error: {d['message']}")
    return "\n".join(out) + "\n"


# -- entry point ----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="snakelemma", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        c = sub.add_parser(name)
        c.add_argument("file")
        c.add_argument("--json", action="store_true", help="print the report as JSON")
    f = sub.add_parser("fuzz")
    f.add_argument("--kind", choices=sorted(GENERATORS), default="snake")
    f.add_argument("--count", type=int, default=100)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP)
    f.add_argument("--finite", action="store_true", help="draw finite groups only")
    f.add_argument("--max-gens", type=int, default=GenConfig.max_gens)
    f.add_argument("--entry-bound", type=int, default=GenConfig.entry_bound)
    f.add_argument("--relation-bound", type=int, default=GenConfig.relation_bound)
    f.add_argument("--resample-limit", type=int, default=GenConfig.resample_limit)
    f.add_argument("--json", action="store_true")
    return p


def run(argv=None):
    """Parse ``argv`` and return ``(report, exit_code, as_json)``."""
    args = build_parser().parse_args(argv)
    try:
        if args.command == "fuzz":
            rep = cmd_fuzz(args.count, args.seed, args.kind, args.cap, finite=args.finite,
                           max_gens=args.max_gens, entry_bound=args.entry_bound,
                           relation_bound=args.relation_bound,
                           resample_limit=args.resample_limit)
        else:
            rep = COMMANDS[args.command](parse_file(args.file))
    except (InvalidInput, ValueError) as exc:
        rep = _report(args.command, "invalid-input", diagnostics=[_diagnostic(exc)])
    except InternalError as exc:
        rep = _report(args.command, "internal-error", diagnostics=[_diagnostic(exc)])
    except Exception as exc:  # never crash on bad input; report it instead
        d = _diagnostic(exc)
        d["traceback"] = traceback.format_exc(limit=3)
        rep = _report(args.command, "internal-error", diagnostics=[d])
    return rep, EXIT[rep["status"]], args.json


def main(argv=None):
    rep, code, as_json = run(argv)
    for d in rep["diagnostics"]:
        print(f"snakelemma: {d['error']}: {d['message']}", file=sys.stderr)
    sys.stdout.write(dump_json(rep) if as_json else format_text(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
