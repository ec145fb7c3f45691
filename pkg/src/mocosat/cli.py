"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bench import run_suite, write_reports
from .common import EngineConfig
from .engines import ENGINES, get_engine
from .generators import GenerationError, gen_random_pb, gen_set_cover
from .metrics import hypervolume, reference_front, relative_hypervolume
from .model import ContractError
from .opb import OpbParseError, read_instance, render_mo_opb
from .oracle import OracleRefused, exact_front

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj, out) -> None:
    text = json.dumps(obj, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    cfg = EngineConfig(seed=args.seed, timeout=args.timeout, anytime_strict=args.anytime_strict,
                       strat_ratio=args.strat_ratio, strat_cap=args.strat_cap)
    result = get_engine(args.engine)(inst, cfg, None)
    doc = result.to_json()
    if args.stats:
        doc["stats"] = result.stats.as_dict()
    _dump(doc, args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    try:
        res = exact_front(inst, cap=args.cap)
    except OracleRefused as e:
        raise UsageError(str(e)) from e
    _dump({
        "status": "complete",
        "img_front": [list(y) for y in res.img_front],
        "arg_front": ["".join("1" if b else "0" for b in x) for x in res.arg_front],
        "offsets": list(inst.normalized().offsets),
    }, args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        if args.family == "set-cover":
            inst = gen_set_cover(args.elements, args.sets, args.objectives, args.density,
                                 args.weight_max, args.seed)
        else:
            inst = gen_random_pb(args.vars, args.objectives, args.constraints, args.weight_max, args.seed)
    except ValueError as e:
        raise UsageError(str(e)) from e
    text = render_mo_opb(inst)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        config = json.loads(Path(args.config).read_text())
    except json.JSONDecodeError as e:
        raise OpbParseError(e.lineno, f"bad config: {e.msg}") from e
    if args.timeout is not None:
        config["timeout"] = args.timeout
    try:
        reports = run_suite(config)
    except (KeyError, ValueError, TypeError) as e:
        raise UsageError(str(e)) from e
    csv_path, json_path = write_reports(reports, args.out)
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK


def cmd_hv(args) -> int:
    fronts = []
    for p in args.fronts:
        try:
            fronts.append([tuple(y) for y in json.loads(Path(p).read_text())["img_front"]])
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise OpbParseError(0, f"{p}: not a front JSON document ({e})") from e
    ref = reference_front(fronts)
    out = {"reference_front": [list(y) for y in ref.front],
           "ref_point": list(ref.ref_point) if ref.ref_point else None,
           "ideal": list(ref.ideal) if ref.ideal else None,
           "fronts": []}
    for p, f in zip(args.fronts, fronts):
        entry = {"file": p, "hv": relative_hypervolume(f, ref)}
        if ref.ref_point is not None:
            v = hypervolume(f, ref.ref_point, ref.ideal)
            entry.update(raw=v.raw, box_normalized=v.normalized, exact=v.exact)
        out["fronts"].append(entry)
    _dump(out, None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mocosat", description="Exact SAT-based multi-objective solvers.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="compute the Pareto front of an MO-OPB instance")
    s.add_argument("instance")
    s.add_argument("-e", "--engine", choices=list(ENGINES), default="core-guided")
    s.add_argument("--timeout", type=float, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--anytime-strict", action="store_true")
    s.add_argument("--strat-ratio", type=float, default=8.0)
    s.add_argument("--strat-cap", type=int, default=16)
    s.add_argument("--stats", action="store_true", help="include solver counters")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="exhaustive front (small instances only)")
    o.add_argument("instance")
    o.add_argument("--cap", type=int, default=20)
    o.add_argument("-o", "--output")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("family", choices=["set-cover", "random-pb"])
    g.add_argument("--elements", type=int, default=6)
    g.add_argument("--sets", type=int, default=8)
    g.add_argument("--vars", type=int, default=10)
    g.add_argument("--constraints", type=int, default=3)
    g.add_argument("-m", "--objectives", type=int, default=2)
    g.add_argument("--density", type=float, default=0.4)
    g.add_argument("--weight-max", type=int, default=5)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="run a benchmark suite from a JSON config")
    b.add_argument("config")
    b.add_argument("--out", default="bench-out")
    b.add_argument("--timeout", type=float, default=None)
    b.set_defaults(func=cmd_bench)

    h = sub.add_parser("hv", help="hypervolume of front JSON files against their union")
    h.add_argument("fronts", nargs="+")
    h.set_defaults(func=cmd_hv)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OpbParseError, ContractError) as e:
        print(f"mocosat: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, FileNotFoundError, GenerationError) as e:
        print(f"mocosat: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:  # noqa: BLE001
        logging.getLogger(__name__).exception("internal error")
        print(f"mocosat: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
