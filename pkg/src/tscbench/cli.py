"""Command-line interface: run benchmarks, compare results, export rank data.

Exit codes: 0 on success, 1 on configuration problems, 2 when a run
finished but some tasks failed.
"""

from __future__ import annotations

import argparse
import sys

from .errors import TscError
from .experiments import (
    ExperimentConfig,
    discover_datasets,
    fold_accuracies,
    read_results,
    results_to_table,
    run_experiment,
)
from .registry import classifier_names
from .stats import (
    friedman_test,
    nemenyi_critical_difference,
    pairwise_summary,
    sign_test,
    wilcoxon_signrank,
)

_CONFIG_KEYS = {
    "data_dir", "output", "classifiers", "datasets", "folds", "seed", "znormalize", "threads",
}


def _parse_config_file(path: str) -> dict:
    """key=value lines; blank lines and # comments are ignored."""
    values = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise TscError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise TscError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def _as_bool(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise TscError(f"expected a boolean, got {value!r}")


def _split_names(value) -> tuple:
    if value is None:
        return ()
    if isinstance(value, str):
        return tuple(part.strip() for part in value.split(",") if part.strip())
    return tuple(value)


def _build_config(args) -> ExperimentConfig:
    file_values = _parse_config_file(args.config) if args.config else {}
    def pick(flag, key, default=None):
        if flag is not None:
            return flag
        if key in file_values:
            return file_values[key]
        return default

    data_dir = pick(args.data_dir, "data_dir")
    if data_dir is None:
        raise TscError("a data directory is required (--data-dir or data_dir=)")
    output = pick(args.output, "output")
    if output is None:
        raise TscError("an output file is required (--output or output=)")
    classifiers = _split_names(pick(args.classifiers, "classifiers"))
    if not classifiers:
        raise TscError("at least one classifier is required (--classifiers or classifiers=)")
    datasets = _split_names(pick(args.datasets, "datasets"))
    if not datasets:
        datasets = tuple(discover_datasets(data_dir))
        if not datasets:
            raise TscError(f"no datasets found under {data_dir!r}")
    znorm = _as_bool(file_values["znormalize"]) if "znormalize" in file_values else True
    if args.no_znormalize:
        znorm = False
    return ExperimentConfig(
        data_dir=data_dir,
        output=output,
        classifiers=classifiers,
        datasets=datasets,
        folds=int(pick(args.folds, "folds", 1)),
        seed=int(pick(args.seed, "seed", 0)),
        znormalize=znorm,
        threads=int(pick(args.threads, "threads", 1)),
    )


def _cmd_run(args) -> int:
    config = _build_config(args)
    report = run_experiment(config)
    print(
        f"completed {report.completed}, skipped {report.skipped}, failed {report.failed}"
    )
    for failure in report.failures:
        print(f"  failed: {failure}", file=sys.stderr)
    return report.exit_code


def _cmd_compare(args) -> int:
    rows = read_results(args.results)
    names = list(_split_names(args.classifiers)) or None
    table = results_to_table(rows, names)
    joint = friedman_test(table)
    print(f"classifiers={joint.classifier_count} datasets={joint.dataset_count}")
    print(f"friedman chi2={joint.chi2:.6f} p={joint.chi2_pvalue:.6g}")
    print(f"iman-davenport f={joint.iman_davenport_f:.6f} p={joint.f_pvalue:.6g}")
    order = sorted(
        range(len(table.classifiers)), key=lambda j: joint.mean_ranks[j]
    )
    print("mean ranks:")
    for j in order:
        print(f"  {table.classifiers[j]} {joint.mean_ranks[j]:.4f}")
    folds = fold_accuracies(rows)
    if len(table.classifiers) == 2:
        a, b = table.classifiers
        w = wilcoxon_signrank(table.accuracies[:, 0], table.accuracies[:, 1])
        s = sign_test(table.accuracies[:, 0], table.accuracies[:, 1])
        print(f"wilcoxon {a} vs {b}: statistic={w.statistic:g} p={w.pvalue:.6g}")
        print(f"sign test {a} vs {b}: wins={s.statistic:g} p={s.pvalue:.6g}")
        summary = pairwise_summary(folds[a], folds[b])
        print(
            f"per-dataset: better={summary.better} worse={summary.worse} "
            f"tied={summary.tied} significant={summary.significant_better}/"
            f"{summary.significant_worse} mean_diff={summary.mean_difference:+.4f}"
        )
    return 0


def _cmd_cd(args) -> int:
    rows = read_results(args.results)
    names = list(_split_names(args.classifiers)) or None
    table = results_to_table(rows, names)
    joint = friedman_test(table)
    cd = nemenyi_critical_difference(
        joint.classifier_count, joint.dataset_count, args.alpha
    )
    order = sorted(range(len(table.classifiers)), key=lambda j: joint.mean_ranks[j])
    lines = [
        "alpha,k,N,cd",
        f"{args.alpha:g},{joint.classifier_count},{joint.dataset_count},{cd:.6f}",
        "classifier,mean_rank",
    ]
    lines.extend(
        f"{table.classifiers[j]},{joint.mean_ranks[j]:.6f}" for j in order
    )
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tscbench",
        description="time-series classification benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run classifiers over datasets and folds")
    run.add_argument("--config", help="key=value configuration file")
    run.add_argument("--data-dir", help="directory of <Name>/<Name>_TRAIN.txt datasets")
    run.add_argument("--output", help="results CSV to create or extend")
    run.add_argument("--classifiers", help=f"comma list from: {', '.join(classifier_names())}")
    run.add_argument("--datasets", help="comma list; default: all under the data dir")
    run.add_argument("--folds", type=int, help="resample folds per dataset (default 1)")
    run.add_argument("--seed", type=int, help="base random seed (default 0)")
    run.add_argument("--threads", type=int, help="worker processes (default 1)")
    run.add_argument(
        "--no-znormalize", action="store_true",
        help="feed classifiers the raw series instead of z-normalized ones",
    )
    run.set_defaults(func=_cmd_run)

    compare = sub.add_parser("compare", help="joint and pairwise tests on a results file")
    compare.add_argument("--results", required=True, help="results CSV from a run")
    compare.add_argument("--classifiers", help="comma subset to compare (default: all)")
    compare.set_defaults(func=_cmd_compare)

    cd = sub.add_parser("cd", help="export mean ranks and the critical difference")
    cd.add_argument("--results", required=True, help="results CSV from a run")
    cd.add_argument("--classifiers", help="comma subset (default: all)")
    cd.add_argument("--alpha", type=float, default=0.05, help="0.05 or 0.10")
    cd.add_argument("--output", help="write the data file here instead of stdout")
    cd.set_defaults(func=_cmd_cd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TscError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
