"""Command-line benchmark harness.

Subcommands: generate, bench-add, bench-retrieve, stability, expect, verify.
Results are CSV with header ``experiment,dataset_id,deployment,key_method,
metric,value,rep``. Metrics ending in ``_ns`` are wall-clock times; every
other row is exactly reproducible for fixed flags.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass
from typing import Callable, Iterator, Sequence

from mlix.datagen import Dataset, DatasetFormatError, DatasetSpec, generate, read_dataset, write_dataset
from mlix.expectation import ExpectationError, ExpectationInputs, expected_addition, expected_retrieval
from mlix.experiments import build, mean_sizes, median_ns, run_requests, verify
from mlix.keys import Strategy
from mlix.model import Deployment, IndexModel

CSV_HEADER = ["experiment", "dataset_id", "deployment", "key_method", "metric", "value", "rep"]
DEPLOYMENTS = [d.value for d in Deployment]
METHODS = [s.value for s in Strategy]
SEED_ENV = "MLIX_SEED"


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    dataset: str
    deployments: list[str]
    methods: list[str]
    out: str = "-"
    reps: int = 5
    seed: int = 0
    dataset_id: str = ""

    def __post_init__(self):
        if not self.deployments or not self.methods:
            raise UsageError("select at least one deployment and one key method")
        if self.reps < 1:
            raise UsageError("--reps must be at least 1")


def _choices(raw: Sequence[str] | None, allowed: list[str], flag: str) -> list[str]:
    picked: list[str] = []
    for chunk in raw or []:
        for name in chunk.split(","):
            name = name.strip().lower()
            if not name:
                continue
            if name == "all":
                picked.extend(allowed)
            elif name in allowed:
                picked.append(name)
            else:
                raise UsageError(f"{flag}: unknown value {name!r} (choose from {', '.join(allowed)})")
    return list(dict.fromkeys(picked))


def _seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def _load(path: str) -> Dataset:
    try:
        return read_dataset(path)
    except FileNotFoundError:
        raise UsageError(f"dataset not found: {path}") from None
    except DatasetFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _config(args: argparse.Namespace, methods_attr: str = "key_method") -> ExperimentConfig:
    return ExperimentConfig(
        dataset=args.dataset,
        deployments=_choices(args.deployment, DEPLOYMENTS, "--deployment"),
        methods=_choices(getattr(args, methods_attr), METHODS, "--" + methods_attr.replace("_", "-")),
        out=args.out,
        reps=getattr(args, "reps", 1),
        seed=_seed(args),
        dataset_id=args.dataset_id or "",
    )


@contextlib.contextmanager
def _csv_out(path: str) -> Iterator[Callable[..., None]]:
    fh = sys.stdout if path == "-" else open(path, "w", encoding="utf-8", newline="")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)

        def emit(experiment, dataset_id, deployment, method, metric, value, rep=0):
            if isinstance(value, float):
                value = f"{value:.6f}"
            writer.writerow([experiment, dataset_id, deployment, method, metric, value, rep])

        yield emit
    finally:
        if fh is not sys.stdout:
            fh.close()


def _dataset_id(cfg: ExperimentConfig, dataset: Dataset) -> str:
    return cfg.dataset_id or str(dataset.spec.seed)


def cmd_generate(args: argparse.Namespace) -> int:
    spec = DatasetSpec(
        parameter_count=args.params,
        service_count=args.services,
        inputs_per_service=args.n,
        outputs_per_service=args.m,
        request_count=args.requests,
        request_size=args.r,
        seed=_seed(args),
    )
    try:
        dataset = generate(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    write_dataset(dataset, args.out)
    return 0


def _stats_record(index: IndexModel, method: str, dataset: Dataset) -> dict:
    n, m, r = mean_sizes(dataset)
    st = index.stats
    return {
        "deployment": index.deployment.value,
        "key_method": method,
        "P": st.parameter_count,
        "S": st.service_count,
        "K": st.key_count,
        "R2": st.input_similar_count,
        "R1": st.similar_count,
        "n": n,
        "m": m,
        "r": r,
    }


def cmd_bench_add(args: argparse.Namespace) -> int:
    cfg = _config(args)
    dataset = _load(cfg.dataset)
    did = _dataset_id(cfg, dataset)
    n, m, _ = mean_sizes(dataset)
    dumps = []
    with _csv_out(cfg.out) as emit:
        for dep in cfg.deployments:
            for method in cfg.methods:
                walls = []
                for rep in range(cfg.reps):
                    result = build(dataset, dep, method, seed=cfg.seed)
                    walls.append(result.wall_ns)
                    emit("add", did, dep, method, "wall_ns", result.wall_ns, rep)
                emit("add", did, dep, method, "median_wall_ns", median_ns(walls))
                st = result.stats
                count = st.service_count
                emit("add", did, dep, method, "parameter_comparisons", result.parameter_comparisons)
                emit("add", did, dep, method, "key_directory_comparisons", result.key_directory_comparisons)
                emit("add", did, dep, method, "classes_scanned", result.classes_scanned)
                for name, value in asdict(st).items():
                    emit("add", did, dep, method, name, value)
                if count:
                    emit("add", did, dep, method, "comparisons_per_service", result.parameter_comparisons / count)
                if method in ("random", "designated") and st.key_count and st.parameter_count:
                    x = ExpectationInputs.from_stats(st, n=n, m=m)
                    emit("add", did, dep, method, "expected_comparisons_per_service",
                         expected_addition(dep, method, x))
                dumps.append(_stats_record(result.index, method, dataset))
    if args.stats_out:
        with open(args.stats_out, "w", encoding="utf-8") as fh:
            json.dump(dumps, fh, indent=2)
            fh.write("\n")
    return 0


_REQUEST_METRICS = ("traversed_services", "traversed_classes", "parameter_comparisons", "results")


def cmd_bench_retrieve(args: argparse.Namespace) -> int:
    cfg = _config(args)
    dataset = _load(cfg.dataset)
    if not dataset.requests:
        raise UsageError(f"{cfg.dataset} contains no retrieval requests")
    did = _dataset_id(cfg, dataset)
    _, _, r = mean_sizes(dataset)
    with _csv_out(cfg.out) as emit:
        for dep in cfg.deployments:
            for method in cfg.methods:
                index = build(dataset, dep, method, seed=cfg.seed).index
                walls = []
                for rep in range(cfg.reps):
                    run = run_requests(index, dataset.requests)
                    walls.append(run.wall_ns)
                    emit("retrieve", did, dep, method, "wall_ns", run.wall_ns, rep)
                emit("retrieve", did, dep, method, "median_wall_ns", median_ns(walls))
                for i, rep_ in enumerate(run.reports):
                    for metric in _REQUEST_METRICS:
                        emit("retrieve-request", did, dep, method, metric, getattr(rep_, metric), i)
                for metric in _REQUEST_METRICS:
                    emit("retrieve", did, dep, method, "mean_" + metric, run.mean(metric))
                st = index.stats
                if st.parameter_count:
                    x = ExpectationInputs.from_stats(st, r=r)
                    emit("retrieve", did, dep, method, "expected_traversed", expected_retrieval(dep, x))
    return 0


def cmd_stability(args: argparse.Namespace) -> int:
    cfg = _config(args, methods_attr="key_methods")
    dataset = _load(cfg.dataset)
    if args.requests < 1:
        raise UsageError("--requests must be at least 1")
    if len(dataset.requests) < args.requests:
        raise UsageError(f"{cfg.dataset} has {len(dataset.requests)} requests, {args.requests} asked for")
    requests = dataset.requests[: args.requests]
    did = _dataset_id(cfg, dataset)
    with _csv_out(cfg.out) as emit:
        for dep in cfg.deployments:
            for method in cfg.methods:
                index = build(dataset, dep, method, seed=cfg.seed).index
                run = run_requests(index, requests)
                for i, rep in enumerate(run.reports):
                    emit("stability-request", did, dep, method, "traversed_services", rep.traversed_services, i)
                    if dep != "primary":
                        emit("stability-request", did, dep, method, "traversed_classes", rep.traversed_classes, i)
                metrics = ["traversed_services"] + (["traversed_classes"] if dep != "primary" else [])
                for metric in metrics:
                    emit("stability", did, dep, method, "mean_" + metric, run.mean(metric))
                    emit("stability", did, dep, method, "std_" + metric, run.std(metric))
    return 0


_SYMBOLS = ("r", "n", "m", "P", "S", "K", "R2", "R1")


def _needed(args: argparse.Namespace) -> tuple[str, ...]:
    dep = args.deployment
    if args.retrieval:
        return ("r", "P", "S") if dep == "primary" else ("r", "P", "R2")
    if dep == "primary":
        return ("K",)
    need = ("n", "P", "K", "R2")
    return need + ("R1", "m") if dep == "full" else need


def _from_stats(path: str, deployment: str, method: str | None) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            records = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--from-stats: cannot read {path}: {exc}") from None
    if isinstance(records, dict):
        records = [records]
    matches = [rec for rec in records if rec.get("deployment") == deployment]
    if method:
        matches = [rec for rec in matches if rec.get("key_method") == method] or matches
    if not matches:
        raise UsageError(f"--from-stats: no {deployment} index in {path}")
    return matches[0]


def cmd_expect(args: argparse.Namespace) -> int:
    if args.deployment not in DEPLOYMENTS:
        raise UsageError(f"--deployment must be one of {', '.join(DEPLOYMENTS)}")
    values: dict[str, float] = {}
    if args.from_stats:
        rec = _from_stats(args.from_stats, args.deployment, args.method)
        values.update({k: float(rec[k]) for k in _SYMBOLS if k in rec})
    for sym in _SYMBOLS:
        v = getattr(args, sym)
        if v is not None:
            values[sym] = v
    missing = [s for s in _needed(args) if s not in values]
    if missing:
        raise UsageError(f"missing required symbol(s) for this formula: {', '.join('--' + s for s in missing)}")
    if args.addition and args.method not in ("random", "designated"):
        raise UsageError("--addition needs --method random or --method designated")
    try:
        x = ExpectationInputs(**values)
        if args.retrieval:
            value = expected_retrieval(args.deployment, x)
        else:
            value = expected_addition(args.deployment, args.method, x)
    except ExpectationError as exc:
        raise UsageError(str(exc)) from None
    print(f"{value:.6g}")
    return 0


def cmd_verify(args: argparse.Namespace, tamper: Callable[[IndexModel], None] | None = None) -> int:
    """Oracle sweep. ``tamper`` mutates each built index before checking, so
    tests can confirm that a broken index is caught."""
    cfg = _config(args)
    dataset = _load(cfg.dataset)
    if not dataset.requests:
        print(f"warning: {cfg.dataset} has no requests; nothing to verify", file=sys.stderr)
    failed = False
    for dep in cfg.deployments:
        for method in cfg.methods:
            index = build(dataset, dep, method, seed=cfg.seed).index
            if tamper is not None:
                tamper(index)
            mismatches = verify(index, dataset)
            if not mismatches:
                print(f"PASS {dep} {method} ({len(dataset.requests)} requests)")
                continue
            failed = True
            first = mismatches[0]
            print(f"FAIL {dep} {method}: {len(mismatches)} of {len(dataset.requests)} requests differ")
            print(f"  request #{first.request_index}: {' '.join(map(str, first.request))}")
            print(f"  missing: {sorted(first.missing)} extra: {sorted(first.extra)}")
    return 1 if failed else 0


def _add_cell_flags(p: argparse.ArgumentParser, methods_flag: str = "--key-method") -> None:
    p.add_argument("--dataset", required=True, help="dataset file, or - for stdin")
    p.add_argument("--deployment", action="append", help="primary|partial|full|all; comma lists allowed")
    p.add_argument(methods_flag, action="append",
                   help="original|random|maximum|minimum|designated|all; comma lists allowed")
    p.add_argument("--seed", type=int, default=None, help=f"random key seed (default ${SEED_ENV} or 0)")
    p.add_argument("--dataset-id", default="", help="dataset_id column (default: the dataset's seed)")
    p.add_argument("--out", default="-", help="CSV output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlix", description="Multilevel service index benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic dataset")
    g.add_argument("--params", type=int, required=True, help="|P|, number of parameters")
    g.add_argument("--services", type=int, required=True, help="|S|, number of services")
    g.add_argument("--n", type=int, required=True, help="inputs per service")
    g.add_argument("--m", type=int, required=True, help="outputs per service")
    g.add_argument("--requests", type=int, default=0, help="number of retrieval requests")
    g.add_argument("--r", type=int, default=0, help="parameters per request")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("bench-add", help="time and count service additions")
    _add_cell_flags(a)
    a.add_argument("--reps", type=int, default=5)
    a.add_argument("--stats-out", default="", help="write final index stats as JSON (for expect --from-stats)")
    a.set_defaults(func=cmd_bench_add)

    r = sub.add_parser("bench-retrieve", help="run every request and report traversal counts")
    _add_cell_flags(r)
    r.add_argument("--reps", type=int, default=5)
    r.set_defaults(func=cmd_bench_retrieve)

    s = sub.add_parser("stability", help="per-request traversal spread across key methods")
    _add_cell_flags(s, "--key-methods")
    s.add_argument("--requests", type=int, default=1000)
    s.set_defaults(func=cmd_stability, deployment_default=["primary"],
                   key_methods_default=["original,random,designated"])

    e = sub.add_parser("expect", help="evaluate an expected-cost formula")
    kind = e.add_mutually_exclusive_group(required=True)
    kind.add_argument("--retrieval", action="store_true")
    kind.add_argument("--addition", action="store_true")
    e.add_argument("--deployment", required=True)
    e.add_argument("--method", default=None, help="random|designated (addition only)")
    for sym in _SYMBOLS:
        e.add_argument(f"--{sym}", type=float, default=None)
    e.add_argument("--from-stats", default="", help="JSON written by bench-add --stats-out")
    e.set_defaults(func=cmd_expect)

    v = sub.add_parser("verify", help="check retrieval against the brute-force oracle")
    _add_cell_flags(v)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for attr in ("deployment", "key_methods"):
        default = getattr(args, attr + "_default", None)
        if default and not getattr(args, attr, None):
            setattr(args, attr, default)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"mlix {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
