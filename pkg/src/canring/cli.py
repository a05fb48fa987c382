"""Command-line driver: ``canring <subcommand> [--config F] [--seed N] [--out F]``.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import families as fam
from . import pipeline as pl
from .groebner import ideal_equal
from .linalg import quotient_dims
from .matrix import sub_pfaffians
from .poly import ParseError, RingSpec

SUBCOMMAND_CHECKS = {
    "hilbert": ["hilbert", "rtilde"],
    "pfaffians": ["pfaffians"],
    "check-equal": ["formats"],
    "deform": ["deformation"],
    "bpf": ["bpf"],
    "verify-all": list(pl.CHECKS),
}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--seed", type=int, action="append", help="family seed (repeatable)")
    p.add_argument("--out", help="write the JSON report or artifacts here")
    p.add_argument("--json", action="store_true", help="print JSON instead of the summary")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="canring", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="emit the three format artifacts for a seed")
    _common(b)

    h = sub.add_parser("hilbert", help="Hilbert function and cokernel dimension checks")
    _common(h)
    h.add_argument("--max-degree", type=int)

    p = sub.add_parser("pfaffians", help="select 9 generating sub-Pfaffians")
    _common(p)
    p.add_argument("--opaque", action="store_true", help="use the opaque ring")

    c = sub.add_parser("check-equal", help="format triangle, or equality of two ideal files")
    _common(c)
    c.add_argument("--left", help="ideal JSON file")
    c.add_argument("--right", help="ideal JSON file")

    d = sub.add_parser("deform", help="deformation checks per t")
    _common(d)
    d.add_argument("--t", action="append", dest="t_values", help="t value (repeatable)")
    d.add_argument("--opaque", action="store_true")

    f = sub.add_parser("bpf", help="base-point-free case checks")
    _common(f)

    v = sub.add_parser("verify-all", help="run every check")
    _common(v)
    v.add_argument("--slow", action="store_true", help="include the septic-limit elimination")
    v.add_argument("--opaque", action="store_true")
    return ap


def _config(args, checks) -> pl.RunConfig:
    base = {}
    if args.config:
        base = pl.RunConfig.load(args.config).to_json()
    if args.seed:
        base["seeds"] = args.seed
    if getattr(args, "t_values", None):
        base["t_values"] = args.t_values
    if getattr(args, "max_degree", None) is not None:
        base["max_degree"] = args.max_degree
    if getattr(args, "slow", False):
        base["slow"] = True
    if getattr(args, "opaque", False):
        base["mode"] = "opaque"
    if args.command != "verify-all" or "checks" not in base:
        base["checks"] = checks
    return pl.RunConfig.from_mapping(base)


def _emit(args, text_lines, payload) -> None:
    blob = json.dumps(payload, indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(blob + "\n")
    if args.json:
        print(blob)
    else:
        for line in text_lines:
            print(line)


def _load_ideal(path: str):
    with open(path) as fh:
        d = json.load(fh)
    ring = RingSpec.from_json(d["ring"])
    return ring, [ring.parse(g) for g in d["generators"]]


def cmd_build(args) -> int:
    cfg = _config(args, [])
    out = {"schema": "canring-artifacts/1", "seeds": []}
    lines = []
    for seed in cfg.seeds:
        data = fam.sample_family_data(seed, cfg.family)
        rf = fam.build_rolling(data)
        A, M = fam.build_amta(data)
        x = fam.derive_extrasym(data)
        P = fam.build_extrasym(x)
        sel = fam.select_generating_pfaffians(P)
        out["seeds"].append(
            {
                "seed": seed,
                "family": data.to_json(),
                "ring": fam.R.to_json(),
                "rolling": {"A": rf.A.to_json(), "relations": [str(p) for p in rf.ideal]},
                "amta": {"A": A.to_json(), "M": M.to_json(), "relations": [str(p) for p in fam.amta_ideal(A, M)]},
                "extrasym": {
                    "data": x.to_json(),
                    "P": P.to_json(),
                    "selected_subsets": [[i + 1 for i in s] for s in sel.subsets],
                    "pfaffians": [str(p) for p in sel.chosen],
                },
                "sextic": str(fam.sextic_equation(data)),
            }
        )
        lines.append(f"seed {seed}: built 9 rolling relations, A, M, and the 6x6 extrasymmetric P")
    _emit(args, lines, out)
    return 0


def cmd_check_equal(args) -> int:
    if bool(args.left) != bool(args.right):
        print("check-equal needs both --left and --right", file=sys.stderr)
        return 2
    if args.left:
        try:
            rl, left = _load_ideal(args.left)
            rr, right = _load_ideal(args.right)
        except (OSError, KeyError, ValueError) as exc:
            print(f"cannot load ideals: {exc}", file=sys.stderr)
            return 2
        if rl != rr:
            print("the two ideals live in different rings", file=sys.stderr)
            return 2
        eq = ideal_equal(left, right)
        _emit(args, [f"{'PASS' if eq else 'FAIL'} ideals equal: {eq}"], {"equal": eq})
        return 0 if eq else 1
    return _run(args, SUBCOMMAND_CHECKS["check-equal"])


def _run(args, checks) -> int:
    cfg = _config(args, checks)
    report = pl.run_pipeline(cfg)
    _emit(args, report.summary_lines(), report.to_json())
    return 0 if report.status == "pass" else 1


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.command == "build":
            return cmd_build(args)
        if args.command == "check-equal":
            return cmd_check_equal(args)
        return _run(args, SUBCOMMAND_CHECKS[args.command])
    except (pl.ConfigError, ParseError, fam.GenericityError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
