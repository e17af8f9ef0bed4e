"""Command line interface.

Subcommands: check (decide validity), render (saturated tree as text or DOT),
oracle (exhaustive model search), corpus (batch decide/oracle agreement over a
formula file or a generated batch).

Exit codes: 0 valid/success, 1 invalid/disagreement, 2 no countermodel within
the bound, 64 parse error, 65 data or fragment error, 70 internal or resource
failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from importlib import resources
from typing import Optional

from .decide import EngineConfig, Invalid, NoCountermodelUpTo, Valid, decide, domain_bound
from .errors import FragmentError, ParseError, ResourceLimitError, SemforceError
from .formulas import Dyadic2Var, Formula, Monadic, classify_fragment, parse_formula
from .gen import random_monadic
from .marking import init_marking, saturate
from .models import Interpretation, Refuted, ValidUpTo, oracle_validity
from .render import render_ascii, render_dot, render_trace
from .tree import build_initial_tree

EXIT_VALID = 0
EXIT_INVALID = 1
EXIT_NO_COUNTERMODEL = 2
EXIT_PARSE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70


def model_json(i: Interpretation) -> dict:
    return {
        "domain": sorted(i.domain),
        "constants": dict(sorted(i.constants.items())),
        "monadic": {p: sorted(m) for p, m in sorted(i.monadic.items())},
        "dyadic": {p: sorted(list(pair) for pair in ext) for p, ext in sorted(i.dyadic.items())},
    }


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    kwargs = {}
    if getattr(args, "branch_limit", None) is not None:
        kwargs["branch_limit"] = args.branch_limit
    return EngineConfig(
        max_individuals=getattr(args, "max_individuals", None),
        allow_direct=getattr(args, "direct", False),
        **kwargs,
    )


def _cmd_check(args: argparse.Namespace) -> int:
    f = parse_formula(args.formula)
    verdict = decide(f, _engine_config(args))
    as_json = args.format == "json"
    if isinstance(verdict, Valid):
        if as_json:
            payload = {"verdict": "valid"}
            if args.trace:
                payload["trace"] = render_trace(verdict.trace).splitlines()
            print(json.dumps(payload, indent=2))
        else:
            print("valid")
            if args.trace:
                print(render_trace(verdict.trace))
        return EXIT_VALID
    if isinstance(verdict, Invalid):
        cm = model_json(verdict.model)
        if as_json:
            payload = {"verdict": "invalid", "countermodel": cm}
            if args.trace:
                payload["trace"] = render_trace(verdict.state.trace).splitlines()
            print(json.dumps(payload, indent=2))
        else:
            print("invalid")
            print(json.dumps(cm, indent=2))
            if args.trace:
                print(render_trace(verdict.state.trace))
        return EXIT_INVALID
    if as_json:
        print(json.dumps({"verdict": "no_countermodel_up_to", "bound": verdict.bound}, indent=2))
    else:
        print(f"no countermodel up to {verdict.bound} individuals")
    return EXIT_NO_COUNTERMODEL


def _cmd_render(args: argparse.Namespace) -> int:
    f = parse_formula(args.formula)
    cfg = _engine_config(args)
    budget = domain_bound(classify_fragment(f), cfg)
    s = init_marking(build_initial_tree(f))
    s.open_supposition(s.tree.root, 0, kind="RR")
    saturate(s, EngineConfig(max_individuals=budget))
    if s.dm is None and not s.unmarked_relevant_ground():
        s.commit_frames()
    text = render_dot(s) if args.format == "dot" else render_ascii(s)
    print(text)
    return EXIT_VALID


def _oracle_bound(f: Formula, flag: Optional[int]) -> Optional[int]:
    if flag is not None:
        return flag
    fragment = classify_fragment(f)
    if isinstance(fragment, Monadic):
        return 2 ** fragment.n
    if isinstance(fragment, Dyadic2Var):
        return 2
    return None


def _cmd_oracle(args: argparse.Namespace) -> int:
    f = parse_formula(args.formula)
    bound = _oracle_bound(f, args.max_domain)
    if bound is None:
        print("an explicit --max-domain is required outside the decidable fragments", file=sys.stderr)
        return EXIT_DATA
    result = oracle_validity(f, bound)
    if isinstance(result, ValidUpTo):
        print(f"valid up to domain size {result.bound}")
        return EXIT_VALID
    print("invalid")
    print(json.dumps(model_json(result.interpretation), indent=2))
    return EXIT_INVALID


def _parse_corpus(text: str) -> list[tuple[str, Optional[str]]]:
    entries = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        expect = None
        if "#" in line:
            line, _, note = line.partition("#")
            line = line.strip()
            note = note.strip()
            if note.startswith("expect:"):
                expect = note.removeprefix("expect:").strip()
        entries.append((line, expect))
    return entries


def _verdict_word(verdict) -> str:
    if isinstance(verdict, Valid):
        return "valid"
    if isinstance(verdict, Invalid):
        return "invalid"
    return f"no-countermodel<={verdict.bound}"


def _check_entry(text: str, expect: Optional[str], cfg: EngineConfig, max_domain: Optional[int]) -> tuple[bool, str]:
    f = parse_formula(text)
    verdict = decide(f, cfg)
    word = _verdict_word(verdict)
    problems = []
    if expect is not None and word != expect:
        problems.append(f"expected {expect}")
    bound = _oracle_bound(f, max_domain)
    if bound is not None:
        oracle = oracle_validity(f, bound)
        if isinstance(verdict, Valid) and isinstance(oracle, Refuted):
            problems.append(f"oracle refutes with {len(oracle.interpretation.domain)} individuals")
        elif isinstance(verdict, Invalid) and isinstance(oracle, ValidUpTo):
            if len(verdict.model.domain) <= oracle.bound:
                problems.append("oracle finds no countermodel at the model's size")
        elif isinstance(verdict, NoCountermodelUpTo) and isinstance(oracle, Refuted):
            if len(oracle.interpretation.domain) <= verdict.bound:
                problems.append("oracle refutes within the search budget")
    ok = not problems
    note = "" if ok else " (" + "; ".join(problems) + ")"
    return ok, f"{'ok  ' if ok else 'FAIL'} {word:<22} {text}{note}"


def _cmd_corpus(args: argparse.Namespace) -> int:
    cfg = _engine_config(args)
    gen_opts = {}
    for item in args.gen or []:
        key, _, val = item.partition("=")
        if not _:
            print(f"--gen expects KEY=VAL, got {item!r}", file=sys.stderr)
            return EXIT_DATA
        gen_opts[key] = val
    entries: list[tuple[str, Optional[str]]]
    if gen_opts:
        rng = random.Random(args.seed)
        count = int(gen_opts.get("count", "100"))
        preds = tuple(gen_opts.get("preds", "P,Q").split(","))
        depth = int(gen_opts.get("depth", "6"))
        entries = [
            (str(random_monadic(rng, preds=preds, max_complexity=depth)), None)
            for _ in range(count)
        ]
    else:
        if args.path is None:
            text = resources.files("semforce").joinpath("data/illustrations.corpus").read_text()
        else:
            try:
                with open(args.path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"cannot read corpus: {exc}", file=sys.stderr)
                return EXIT_DATA
        entries = _parse_corpus(text)
    failures = 0
    for text, expect in entries:
        ok, line = _check_entry(text, expect, cfg, args.max_domain)
        if not ok:
            failures += 1
        print(line)
    print(f"{len(entries)} formulas, {len(entries) - failures} ok, {failures} failing")
    return EXIT_VALID if failures == 0 else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semforce",
        description="Decide validity of predicate-logic formulas by forcing-tree marking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="decide a formula and report verdict or countermodel")
    check.add_argument("formula")
    check.add_argument("--direct", action="store_true", help="try direct forcing of the root first")
    check.add_argument("--max-individuals", type=int, default=None)
    check.add_argument("--branch-limit", type=int, default=None, help="abort after this many search branches")
    check.add_argument("--trace", action="store_true", help="print the marking steps")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.set_defaults(fn=_cmd_check)

    render = sub.add_parser("render", help="render the saturated forcing tree")
    render.add_argument("formula")
    render.add_argument("--format", choices=("ascii", "dot"), default="ascii")
    render.add_argument("--max-individuals", type=int, default=None)
    render.set_defaults(fn=_cmd_render)

    oracle = sub.add_parser("oracle", help="exhaustive countermodel search over small domains")
    oracle.add_argument("formula")
    oracle.add_argument("--max-domain", type=int, default=None)
    oracle.set_defaults(fn=_cmd_oracle)

    corpus = sub.add_parser("corpus", help="run decider and oracle over a formula corpus")
    corpus.add_argument("path", nargs="?", default=None, help="corpus file; bundled examples when omitted")
    corpus.add_argument("--gen", action="append", metavar="KEY=VAL",
                        help="generate formulas instead: count, preds, depth")
    corpus.add_argument("--seed", type=int, default=0)
    corpus.add_argument("--max-domain", type=int, default=None)
    corpus.add_argument("--max-individuals", type=int, default=None)
    corpus.set_defaults(fn=_cmd_corpus)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FragmentError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SemforceError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
