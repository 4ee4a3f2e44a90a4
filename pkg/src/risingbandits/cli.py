"""Command-line front end.

``run`` executes a configured experiment and writes three artifacts into the
output directory: a per-pull trace CSV, a summary report JSON, and a run
manifest (seeds, config echo, timestamp).  ``verify`` executes one of the
named invariant suites.  Outputs are byte-for-byte reproducible for a fixed
base seed, except for the manifest's timestamp field.

Exit codes: 0 success, 1 configuration error, 2 invariant violation.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import os
import sys
import time

from . import __version__
from .arms import ConfigurationError
from .bandit import PolicyTrace
from .config import ExperimentConfig, load_experiment
from .harness import PolicyResult, build_report, regret, simulate
from .verify import SUITES, run_suite

TRACE_COLUMNS = (
    "step",
    "policy",
    "replication",
    "arm",
    "reward",
    "cost",
    "candidate_set_size",
    "best_so_far",
)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _run_one(config: ExperimentConfig, policy_name: str, replication: int) -> PolicyTrace:
    policy = next(p for p in config.build_policies() if p.name == policy_name)
    return simulate(policy, config.instance, config.bandit, config.base_seed, replication)


def _write_trace(path: str, runs: list[tuple[str, int, PolicyTrace]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(TRACE_COLUMNS)
        for policy_name, replication, trace in runs:
            best = 0.0
            for step in trace.steps:
                best = max(best, step.reward)
                writer.writerow(
                    (
                        step.t,
                        policy_name,
                        replication,
                        step.arm,
                        _fmt(step.reward),
                        _fmt(step.cost),
                        step.candidate_set_size,
                        _fmt(best),
                    )
                )


def run_experiment(config_path: str, output_dir: str, jobs: int = 1, seed: int | None = None) -> int:
    config = load_experiment(config_path)
    if seed is None and "RB_SEED" in os.environ:
        seed = int(os.environ["RB_SEED"])
    if seed is not None:
        config.base_seed = seed
    os.makedirs(output_dir, exist_ok=True)

    tasks = [
        (policy_name, replication)
        for policy_name in config.policy_names
        for replication in range(config.replications)
    ]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(_run_one, [config] * len(tasks), *zip(*tasks)))
    else:
        traces = [_run_one(config, name, rep) for name, rep in tasks]
    runs = [(name, rep, trace) for (name, rep), trace in zip(tasks, traces)]

    _write_trace(os.path.join(output_dir, "trace.csv"), runs)

    results: dict[str, PolicyResult] = {}
    for name, _, trace in runs:
        results.setdefault(name, PolicyResult()).j_values.append(trace.final_j)
    report = build_report(config.instance, config.bandit, results)
    for note in report.interpretation_notes:
        print(f"note: {note}")
    with open(os.path.join(output_dir, "report.json"), "w", encoding="utf-8") as handle:
        json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
        handle.write("\n")

    with open(config_path, "r", encoding="utf-8") as handle:
        config_echo = handle.read()
    manifest = {
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "base_seed": config.base_seed,
        "seed_scheme": "SeedSequence(base_seed, spawn_key=(crc32(policy), replication, arm))",
        "policies": config.policy_names,
        "replications": config.replications,
        "config_echo": config_echo,
    }
    with open(os.path.join(output_dir, "manifest.json"), "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")

    # Sanity gate: no policy may beat the analytic oracle beyond tolerance.
    if report.j_oracle is not None:
        for name, res in report.policies.items():
            if res.j_mean > report.j_oracle + config.bandit.epsilon:
                print(
                    f"invariant violation: policy {name!r} mean value {res.j_mean} "
                    f"exceeds the oracle {report.j_oracle}",
                    file=sys.stderr,
                )
                return 2
    print(f"wrote trace.csv, report.json, manifest.json to {output_dir}")
    return 0


def run_verify(suite_name: str) -> int:
    try:
        result = run_suite(suite_name)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for failure in result.failures:
        print(f"FAIL {result.name}: {failure}")
    print(f"{result.name}: {result.passed}/{result.total} checks passed")
    return 0 if result.ok else 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="rising-bandits",
        description="Elimination-based selection for rising reward processes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run a configured experiment")
    run_parser.add_argument("config", help="experiment configuration file")
    run_parser.add_argument("--output", default="results", help="output directory")
    run_parser.add_argument("--jobs", type=int, default=1, help="parallel replications")
    run_parser.add_argument("--seed", type=int, default=None, help="override the base seed")

    verify_parser = sub.add_parser("verify", help="run a named invariant suite")
    verify_parser.add_argument("suite", help=f"one of: {', '.join(sorted(SUITES))}")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return run_experiment(args.config, args.output, jobs=args.jobs, seed=args.seed)
        return run_verify(args.suite)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
