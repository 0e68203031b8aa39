"""Command-line interface: quadrature rule dumps and study runs.

``tpfem rules --family gauss --k 3 --d 2`` prints the rule as JSON.
``tpfem study interp --d 1 --k 2 --l 3`` runs a named study and exits 0
iff every assertion of that study passed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from tpfem.quadrature import degree_of_precision, rule_for, tensorize
from tpfem.studies import STUDIES, StudyConfig, run_study


def _parse_p(text: str) -> float:
    if text in ("inf", "infinity", "oo"):
        return math.inf
    value = float(text)
    return int(value) if value.is_integer() else value


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(","))


def _parse_box(text: str) -> tuple[tuple[float, float], ...]:
    vals = [float(part) for part in text.split(",")]
    if len(vals) % 2 or not 2 <= len(vals) <= 6:
        raise argparse.ArgumentTypeError(
            "box must be given as x0,x1[,y0,y1[,z0,z1]]"
        )
    return tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2))


def _rules_command(args: argparse.Namespace) -> int:
    rule = rule_for(args.family, args.k)
    if args.d == 1:
        nodes = [[float(x)] for x in rule.node_array]
        weights = [float(w) for w in rule.weights]
        dop = rule.dop
    else:
        tensor = tensorize(rule, args.d)
        nodes = [[float(c) for c in pt] for pt in tensor.points]
        weights = [float(w) for w in tensor.weights]
        dop = degree_of_precision(tensor)
    payload = {
        "family": rule.family,
        "k": rule.k,
        "d": args.d,
        "nodes": nodes,
        "weights": weights,
        "dop": dop,
    }
    text = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _study_command(args: argparse.Namespace) -> int:
    overrides = {"study": args.name}
    for key in (
        "d",
        "k",
        "r",
        "l",
        "m",
        "seed",
        "field",
        "family",
        "domain",
        "samples",
        "tolerance",
        "gamma",
    ):
        value = getattr(args, key)
        if value is not None:
            overrides[key] = value
    if args.bigK is not None:
        overrides["big_k"] = args.bigK
    if args.p is not None:
        overrides["p"] = args.p
    if args.q is not None:
        overrides["q"] = args.q
    if args.ladder is not None:
        overrides["ladder"] = args.ladder
    if args.k_range is not None:
        overrides["k_range"] = args.k_range
    if args.box is not None:
        overrides["box"] = args.box
    config = StudyConfig(**overrides)
    report = run_study(config)
    if args.format == "json":
        text = json.dumps(report.to_json_dict(), indent=2)
    else:
        text = report.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tpfem",
        description="Tensor-product polynomial approximation studies",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rules = sub.add_parser("rules", help="dump a quadrature rule as JSON")
    rules.add_argument(
        "--family",
        default="gauss",
        choices=("gauss", "gauss-lobatto", "equispaced"),
    )
    rules.add_argument("--k", type=int, required=True)
    rules.add_argument("--d", type=int, default=1, choices=(1, 2, 3))
    rules.add_argument("--out", default=None)
    rules.set_defaults(handler=_rules_command)

    study = sub.add_parser("study", help="run a named study")
    study.add_argument("name", choices=sorted(STUDIES))
    study.add_argument("--d", type=int, default=None)
    study.add_argument("--k", type=int, default=None)
    study.add_argument("--bigK", type=int, default=None)
    study.add_argument("--p", type=_parse_p, default=None)
    study.add_argument("--q", type=_parse_p, default=None)
    study.add_argument("--r", type=int, default=None)
    study.add_argument("--l", type=int, default=None)
    study.add_argument("--m", type=int, default=None)
    study.add_argument("--ladder", type=_parse_int_list, default=None)
    study.add_argument("--k-range", dest="k_range", type=_parse_int_list, default=None)
    study.add_argument("--field", default=None)
    study.add_argument("--family", default=None)
    study.add_argument("--domain", default=None, choices=("element", "face"))
    study.add_argument("--box", type=_parse_box, default=None)
    study.add_argument("--div", type=_parse_int_list, default=None, help="unused for ladder studies; kept for mesh descriptions")
    study.add_argument("--seed", type=int, default=None)
    study.add_argument("--samples", type=int, default=None)
    study.add_argument("--tolerance", type=float, default=None)
    study.add_argument("--gamma", type=float, default=None)
    study.add_argument("--out", default=None)
    study.add_argument("--format", default="json", choices=("json", "csv"))
    study.set_defaults(handler=_study_command)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
