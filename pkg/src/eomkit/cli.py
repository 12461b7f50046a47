"""Command-line front end.

Subcommands build models from flags or spec files, run transformations,
sample, and run the verification suites.  All tables are emitted as JSON
documents with exact "num/den" probability strings, or as CSV; exit codes
are 0 on success, 1 on verification failure, 2 on usage or contract errors.
"""

import argparse
import json
import random
import sys

from . import serialize
from .combinat import enumerate_compositions
from .errors import EomkitError
from .models import (
    WeightFunction,
    builtin_weight,
    label_distribution,
    label_marginal,
    order_statistics_distribution,
    sample,
    weight_model,
)
from .process import sample_path
from .transforms import condition_on_partial_sum, drop_particle, erase_cell
from .verify import run_suite


def _load_weight(spec: str, x_max: int) -> WeightFunction:
    if spec.startswith("@"):
        with open(spec[1:], encoding="utf-8") as fh:
            return serialize.weight_from_spec(json.load(fh), x_max)
    return builtin_weight(spec, x_max)


def _cmd_enumerate(args) -> int:
    space = enumerate_compositions(args.n, args.r)
    if args.format == "csv":
        sys.stdout.write(serialize.compositions_to_csv(space, args.n))
    else:
        doc = {"n": args.n, "r": args.r, "compositions": [list(x) for x in space]}
        print(serialize.to_json(doc))
    return 0


def _cmd_model(args) -> int:
    a = _load_weight(args.weight, args.r)
    d = weight_model(a, args.n, args.r)
    if args.labels:
        doc = serialize.labels_to_doc(label_distribution(d))
    elif args.order_stats:
        doc = serialize.table_doc(d.n, d.r, order_statistics_distribution(d))
    elif args.marginal is not None:
        marg = label_marginal(label_distribution(d), {args.marginal})
        doc = serialize.labels_to_doc(marg)
    else:
        doc = serialize.occupancy_to_doc(d)
    print(serialize.to_json(doc))
    return 0


def _cmd_transform(args) -> int:
    if args.input:
        with open(args.input, encoding="utf-8") as fh:
            d = serialize.occupancy_from_doc(json.load(fh))
    else:
        if args.weight is None or args.n is None or args.r is None:
            raise ValueError("either --input or all of --weight/--n/--r are required")
        d = weight_model(_load_weight(args.weight, args.r), args.n, args.r)
    op = args.op
    if op == "k1":
        out = drop_particle(d)
    elif op == "k2":
        out = erase_cell(d)
    elif op.startswith("cond:"):
        try:
            n_str, s_str = op[5:].split(",")
            sub_n, s = int(n_str), int(s_str)
        except ValueError:
            raise ValueError(f"expected cond:<n>,<s>, got {op!r}") from None
        out = condition_on_partial_sum(d, sub_n, s)
    else:
        raise ValueError(f"unknown transform {op!r} (use k1, k2, or cond:<n>,<s>)")
    print(serialize.to_json(serialize.occupancy_to_doc(out)))
    return 0


def _cmd_verify(args) -> int:
    report = run_suite(
        args.suite,
        seed=args.seed,
        max_n=args.max_n,
        max_r=args.max_r,
        horizon=args.horizon,
    )
    print(serialize.to_json(report.to_doc()))
    return 0 if report.passed else 1


def _cmd_sample(args) -> int:
    with open(args.spec, encoding="utf-8") as fh:
        doc = json.load(fh)
    rng = random.Random(args.seed)
    if "horizon" in doc:
        p = serialize.process_from_doc(doc)
        rows = [sample_path(p, rng) for _ in range(args.paths)]
        sys.stdout.write(serialize.paths_to_csv(rows, p.horizon))
    else:
        try:
            n, r = int(doc["n"]), int(doc["r"])
            weight_spec = doc["weight"]
        except (KeyError, TypeError):
            raise ValueError(
                "sample spec needs either horizon/terminal_law/weight or n/r/weight"
            ) from None
        d = weight_model(serialize.weight_from_spec(weight_spec, r), n, r)
        rows = [sample(d, rng) for _ in range(args.paths)]
        sys.stdout.write(serialize.compositions_to_csv(rows, n))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eomkit",
        description="exact occupancy models, transformations, and counting processes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="list all compositions of r into n cells")
    p_enum.add_argument("--n", type=int, required=True, help="cell count")
    p_enum.add_argument("--r", type=int, required=True, help="particle count")
    p_enum.add_argument("--format", choices=("json", "csv"), default="json")
    p_enum.set_defaults(func=_cmd_enumerate)

    p_model = sub.add_parser("model", help="build a product-form occupancy model")
    p_model.add_argument(
        "--weight",
        required=True,
        help="mb|be|fd|pc:<s> or @file with a weight document",
    )
    p_model.add_argument("--n", type=int, required=True)
    p_model.add_argument("--r", type=int, required=True)
    view = p_model.add_mutually_exclusive_group()
    view.add_argument("--labels", action="store_true", help="emit the label law")
    view.add_argument(
        "--order-stats", action="store_true", help="emit the sorted-label law"
    )
    view.add_argument(
        "--marginal", type=int, metavar="I", help="emit the marginal of label I"
    )
    p_model.set_defaults(func=_cmd_model)

    p_tr = sub.add_parser("transform", help="apply a transformation to a model")
    p_tr.add_argument("--op", required=True, help="k1 | k2 | cond:<n>,<s>")
    p_tr.add_argument("--input", help="JSON distribution document to transform")
    p_tr.add_argument("--weight", help="build the input model from flags instead")
    p_tr.add_argument("--n", type=int)
    p_tr.add_argument("--r", type=int)
    p_tr.set_defaults(func=_cmd_transform)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument(
        "--suite", required=True, choices=("eom", "transforms", "theorem", "classic")
    )
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--max-n", type=int, default=4)
    p_ver.add_argument("--max-r", type=int, default=4)
    p_ver.add_argument("--horizon", type=int, default=3)
    p_ver.set_defaults(func=_cmd_verify)

    p_sm = sub.add_parser("sample", help="draw seeded samples as CSV")
    p_sm.add_argument("--spec", required=True, help="JSON model or process spec file")
    p_sm.add_argument("--paths", type=int, default=1, help="number of draws")
    p_sm.add_argument("--seed", type=int, default=0)
    p_sm.set_defaults(func=_cmd_sample)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EomkitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
