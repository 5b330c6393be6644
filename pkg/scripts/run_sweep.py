#!/usr/bin/env python3
"""Reproduce the ten-dataset experiment: addition cost per deployment and key
method, primary retrieval cost, and traversal stability.

Writes dataset files and CSVs into --workdir and prints the designated key
method's comparison-count reduction against random and original selection.
"""

from __future__ import annotations

import argparse
import collections
import csv
import sys
from pathlib import Path

from mlix.cli import main as mlix

METHODS = "original,random,designated"


def parse_args() -> argparse.Namespace:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--workdir", default="sweep", help="output directory")
    p.add_argument("--datasets", type=int, default=10)
    p.add_argument("--base-seed", type=int, default=1)
    p.add_argument("--params", type=int, default=1000)
    p.add_argument("--services", type=int, default=20000)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--r", type=int, default=32)
    p.add_argument("--requests", type=int, default=100)
    p.add_argument("--stability-requests", type=int, default=1000)
    p.add_argument("--reps", type=int, default=1, help="timing repetitions per cell")
    return p.parse_args()


def run(*argv: str) -> None:
    code = mlix(list(argv))
    if code:
        sys.exit(code)


def summarize(add_csv: Path) -> None:
    totals: dict[tuple[str, str], int] = collections.defaultdict(int)
    with open(add_csv, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["metric"] == "parameter_comparisons":
                totals[row["deployment"], row["key_method"]] += int(row["value"])
    for dep in ("primary", "partial", "full"):
        d = totals[dep, "designated"]
        cells = [f"{dep:8s} designated={d}"]
        for other in ("random", "original"):
            o = totals[dep, other]
            if o:
                cells.append(f"vs {other}: {1 - d / o:.1%} fewer comparisons")
        print("  ".join(cells))


def main() -> None:
    args = parse_args()
    work = Path(args.workdir)
    work.mkdir(parents=True, exist_ok=True)
    add_rows, retrieve_rows = [], []
    for i in range(args.datasets):
        seed = args.base_seed + i
        data = work / f"dataset_{seed}.txt"
        run("generate", "--params", str(args.params), "--services", str(args.services), "--n", str(args.n),
            "--m", str(args.m), "--requests", str(args.requests), "--r", str(args.r), "--seed", str(seed),
            "--out", str(data))
        add_out, ret_out = work / f"add_{seed}.csv", work / f"retrieve_{seed}.csv"
        run("bench-add", "--dataset", str(data), "--deployment", "all", "--key-method", METHODS,
            "--reps", str(args.reps), "--seed", str(seed), "--out", str(add_out))
        run("bench-retrieve", "--dataset", str(data), "--deployment", "primary", "--key-method", METHODS,
            "--reps", str(args.reps), "--seed", str(seed), "--out", str(ret_out))
        add_rows.append(add_out)
        retrieve_rows.append(ret_out)
        print(f"dataset {i + 1}/{args.datasets} (seed {seed}) done", file=sys.stderr)

    stab_data = work / "stability.txt"
    run("generate", "--params", str(args.params), "--services", str(args.services), "--n", str(args.n),
        "--m", str(args.m), "--requests", str(args.stability_requests), "--r", str(args.r),
        "--seed", str(args.base_seed), "--out", str(stab_data))
    run("stability", "--dataset", str(stab_data), "--deployment", "primary", "--key-methods", METHODS,
        "--requests", str(args.stability_requests), "--seed", str(args.base_seed),
        "--out", str(work / "stability.csv"))

    for name, parts in (("add.csv", add_rows), ("retrieve.csv", retrieve_rows)):
        with open(work / name, "w", newline="") as out:
            for k, part in enumerate(parts):
                lines = part.read_text().splitlines(keepends=True)
                out.writelines(lines if k == 0 else lines[1:])
    summarize(work / "add.csv")


if __name__ == "__main__":
    main()
