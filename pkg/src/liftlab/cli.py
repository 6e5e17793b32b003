"""``liftlab`` command line: one subcommand per experiment, JSON on stdout.

Exit codes: 0 when every check passes, 1 when an experiment check fails,
2 for bad flags or configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from . import __version__
from .errors import LiftLabError
from .montecarlo.config import ExperimentConfig, run_document
from .montecarlo.harness import DEFAULT_SEED

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _nonneg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return value


def _positive(text: str) -> int:
    value = _nonneg(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, trials: int) -> None:
    p.add_argument("--trials", type=_positive, default=trials)
    p.add_argument("--seed", type=_nonneg, default=DEFAULT_SEED, help=f"master seed (default {DEFAULT_SEED})")
    p.add_argument("--workers", type=_positive, default=1, help="worker processes; never changes results")
    p.add_argument("--csv", metavar="PATH", help="write a plotting table of per-n rows")
    p.add_argument("--band-constant", type=float, default=10.0, help="C in the C/n^l error band")


def _graph(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--family", metavar="NAME:PARAMS", help="named base graph, e.g. cycle:3, bouquet:2, theta")
    g.add_argument("--graph", dest="graph_file", metavar="FILE", help="base graph file")


def _degrees(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=_positive)
    p.add_argument("--ns", type=_int_list, default=(), help="comma-separated lift degrees")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="liftlab", description="Experiments on random graph lifts.")
    parser.add_argument("--version", action="version", version=f"liftlab {__version__}")
    sub = parser.add_subparsers(dest="kind", required=True, parser_class=_Parser)

    p = sub.add_parser("connectivity", help="connectivity of random n-lifts of a base graph")
    _graph(p)
    _degrees(p)
    _common(p, 10_000)

    for name, helptext in (
        ("transitive", "l random permutations generate a transitive group"),
        ("sym-or-alt", "l random permutations generate S_n or A_n"),
    ):
        p = sub.add_parser(name, help=helptext)
        _degrees(p)
        p.add_argument("--l", type=_nonneg, required=True)
        _common(p, 10_000)

    p = sub.add_parser("k-transitive", help="l random permutations generate a k-transitive group")
    _degrees(p)
    p.add_argument("--l", type=_nonneg, required=True)
    p.add_argument("--k", type=_positive, required=True)
    _common(p, 1000)

    p = sub.add_parser("expansion", help="exact edge expansion of random lifts")
    _graph(p)
    _degrees(p)
    _common(p, 200)

    p = sub.add_parser("delta-conn", help="edge connectivity >= delta over several n")
    _graph(p)
    _degrees(p)
    p.add_argument("--delta", type=_positive, help="defaults to the minimum degree of the base")
    _common(p, 200)

    p = sub.add_parser("barbell", help="edge connectivity of n-lifts of the barbell graph")
    p.add_argument("--k", type=_positive, required=True)
    _degrees(p)
    p.add_argument("--exhaustive", action="store_true", help="enumerate every assignment instead")
    _common(p, 100)

    p = sub.add_parser("iterated", help="iterated lifts against stage-by-stage lifts")
    _graph(p)
    p.add_argument("--signature", type=_int_list, required=True)
    _common(p, 2000)

    p = sub.add_parser("wreath", help="l random wreath product elements act transitively")
    p.add_argument("--signature", type=_int_list, required=True)
    p.add_argument("--l", type=_nonneg, required=True)
    _common(p, 10_000)

    p = sub.add_parser("regular", help="random 2d-regular multigraphs")
    p.add_argument("--d", type=_positive, required=True)
    _degrees(p)
    p.add_argument("--expansion-trials", type=_positive, default=1000)
    _common(p, 10_000)

    p = sub.add_parser("homotopy", help="compare lift connectivity across base graphs")
    p.add_argument("--family", dest="families", action="append", required=True, metavar="NAME:PARAMS")
    _degrees(p)
    p.add_argument("--exact-n", type=_positive, default=3)
    _common(p, 10_000)

    p = sub.add_parser("exact", help="exact probability that l permutations act transitively")
    _degrees(p)
    p.add_argument("--l", type=_nonneg, required=True)
    p.add_argument("--method", choices=("recursion", "enumerate", "both"), default="recursion")

    p = sub.add_parser("slope", help="fit the decay exponent of the failure probability")
    _graph(p)
    _degrees(p)
    p.add_argument("--l", type=_nonneg, required=True)
    _common(p, 100_000)
    return parser


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    values = {k: v for k, v in vars(ns).items() if v is not None}
    values.pop("csv", None)
    if "families" in values:
        values["families"] = tuple(values["families"])
    values["band_constant"] = values.pop("band_constant", 10.0)
    return ExperimentConfig.from_dict(values)


CSV_FIELDS = ("n", "p_hat", "ci_low", "ci_high", "formula_value")


def _csv_rows(payload: dict) -> list[dict]:
    if "rows" in payload:
        return payload["rows"]
    if "estimate" in payload:
        return [{"n": payload.get("n"), **payload["estimate"]}]
    if "connectivity" in payload:
        return [{"n": payload.get("n"), **payload["connectivity"]}]
    if "graphs" in payload:
        return [{"n": payload.get("n"), **g} for g in payload["graphs"]]
    return []


def write_csv(path: str, payload: dict) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore")
        w.writeheader()
        for row in _csv_rows(payload):
            w.writerow({k: row.get(k) for k in CSV_FIELDS})


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        doc = run_document(cfg)
    except (LiftLabError, OSError) as exc:
        print(f"liftlab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if ns.kind == "exact":
        p = doc["payload"]["probability"]
        print(f"{p['fraction']} = {p['float']:.12g}", file=sys.stderr)
    if getattr(ns, "csv", None):
        write_csv(ns.csv, doc["payload"])
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    if not doc["payload"].get("ok", True):
        print("liftlab: experiment check failed", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
