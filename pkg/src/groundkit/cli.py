"""Command line entry point.

Subcommands: extract (drive an in-page extractor script), synthesize,
adapt, stats, downsample, eval, plan-res. Exit codes: 0 success, 1 usage
error, 2 data error, 3 remote-service error. All randomness flows from
--seed; with --mock-llm two identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

from .adapters import AdapterError, SourceName, SourceSpec, adapt_source, load_profile, read_records
from .augment import AugmentationClient, AugmentationConfig, AugmentationError
from .evaluate import evaluate_files, format_report_table
from .expressions import SynthesisPolicy
from .pipeline import PipelineSettings, process_snapshot
from .resolution import plan_grid
from .sampling import (
    GroundingSample,
    LABEL_DOWNSAMPLE_CAP,
    PAGE_ELEMENT_CAP,
    build_record,
    corpus_stats,
    downsample_labels,
    sample_from_json,
)
from .snapshot import (
    PageSnapshot,
    SnapshotParseError,
    SnapshotValidationError,
    parse_snapshot,
    validate_snapshot,
)
from .spatial import MAX_RELATIVE_DISTANCE
from .classify import SIMILARITY_THRESHOLD

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_REMOTE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


class DataError(Exception):
    pass


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load_config_defaults(path: Optional[str]) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise DataError("config file must hold a JSON object")
    return data


def _merged(args: argparse.Namespace, key: str, default):
    """Flag beats config file beats default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    return args_config(args).get(key, default)


def args_config(args: argparse.Namespace) -> dict:
    if not hasattr(args, "_config_cache"):
        args._config_cache = _load_config_defaults(getattr(args, "config", None))
    return args._config_cache


def _load_snapshots(path: str) -> List[Tuple[str, PageSnapshot]]:
    """Snapshots from a directory of *.json files (sorted by name) or one
    JSONL file (line order)."""
    items: List[Tuple[str, str]] = []
    if os.path.isdir(path):
        for name in sorted(os.listdir(path)):
            if name.endswith(".json"):
                full = os.path.join(path, name)
                with open(full, "rb") as fh:
                    items.append((full, fh.read().decode("utf-8")))
    else:
        with open(path, "r", encoding="utf-8") as fh:
            for i, line in enumerate(fh, 1):
                if line.strip():
                    items.append((f"{path}:{i}", line))
    out = []
    for origin, text in items:
        try:
            out.append((origin, parse_snapshot(text)))
        except (SnapshotParseError, SnapshotValidationError) as exc:
            raise DataError(f"{origin}: {exc}") from exc
    return out


def _build_policy(args: argparse.Namespace) -> SynthesisPolicy:
    policy_path = _merged(args, "policy", None)
    policy = SynthesisPolicy.load(policy_path) if policy_path else SynthesisPolicy()
    seed = _merged(args, "seed", None)
    if seed is not None:
        policy = dataclasses.replace(policy, seed=seed)
    return policy


def _write_jsonl(path: str, records) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")
            n += 1
    return n


def _read_sample_records(path: str) -> List[Tuple[dict, List[GroundingSample]]]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                samples = [
                    sample_from_json(entry, record["snapshot_id"], record["screenshot_ref"])
                    for entry in record["samples"]
                ]
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError(f"{path}:{i}: bad sample record: {exc}") from exc
            out.append((record, samples))
    return out


def _regroup_records(
    ordered_ids: List[Tuple[str, str]], samples: List[GroundingSample]
) -> List[dict]:
    by_snapshot: Dict[str, List[GroundingSample]] = {}
    for s in samples:
        by_snapshot.setdefault(s.snapshot_id, []).append(s)
    records = []
    for snapshot_id, screenshot_ref in ordered_ids:
        record = build_record(snapshot_id, screenshot_ref, by_snapshot.get(snapshot_id, []))
        if record is not None:
            records.append(record)
    return records


# -- subcommands -------------------------------------------------------------


def _cmd_synthesize(args: argparse.Namespace) -> int:
    started = time.monotonic()
    snapshots = _load_snapshots(args.input)
    for origin, snap in snapshots:
        violations = validate_snapshot(snap)
        if violations:
            v = violations[0]
            raise DataError(f"{origin}: element {v.element_id}: {v.rule}: {v.detail}")
    policy = _build_policy(args)
    settings = PipelineSettings(
        policy=policy,
        similarity_threshold=_merged(args, "sim_threshold", SIMILARITY_THRESHOLD),
        max_relative_distance=_merged(args, "rel_dist", MAX_RELATIVE_DISTANCE),
        page_element_cap=_merged(args, "page_elems", PAGE_ELEMENT_CAP),
        use_mllm=True,
    )
    mock = bool(_merged(args, "mock_llm", False)) or AugmentationConfig.from_env().mock
    client = AugmentationClient(
        dataclasses.replace(AugmentationConfig.from_env(), mock=mock)
    )
    jobs = _merged(args, "jobs", None) or os.cpu_count() or 1
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(lambda item: process_snapshot(item[1], settings, client), snapshots))
    drops: Dict[str, int] = {}
    samples: List[GroundingSample] = []
    for res in results:
        samples.extend(res.samples)
        for reason, count in res.drops.items():
            drops[reason] = drops.get(reason, 0) + count
    before = len(samples)
    samples = downsample_labels(
        samples, cap=_merged(args, "label_cap", LABEL_DOWNSAMPLE_CAP), seed=policy.seed
    )
    if before > len(samples):
        drops["label_downsampled"] = before - len(samples)
    ordered = [(snap.snapshot_id, snap.screenshot_ref) for _, snap in snapshots]
    written = _write_jsonl(args.out, _regroup_records(ordered, samples))
    elapsed = max(time.monotonic() - started, 1e-9)
    _log(
        f"synthesize: snapshots={len(snapshots)} records={written} samples={len(samples)} "
        f"elapsed={elapsed:.2f}s rate={len(snapshots) / elapsed:.1f}/s "
        f"drops={json.dumps(drops, sort_keys=True)}"
    )
    return EXIT_OK


def _cmd_adapt(args: argparse.Namespace) -> int:
    name = SourceName(args.source)
    if args.profile:
        with open(args.profile, "r", encoding="utf-8") as fh:
            profile = json.load(fh)
    else:
        profile = load_profile(name)
    spec = SourceSpec(name=name, path=args.input, profile=profile)
    records = read_records(args.input)
    samples, report = adapt_source(spec, records, seed=_merged(args, "seed", 0))
    if not report.conserved():
        raise DataError("adapter conservation check failed")
    seen: List[Tuple[str, str]] = []
    seen_ids = set()
    for s in samples:
        if s.snapshot_id not in seen_ids:
            seen_ids.add(s.snapshot_id)
            seen.append((s.snapshot_id, s.screenshot_ref))
    written = _write_jsonl(args.out, _regroup_records(seen, samples))
    _log(
        f"adapt[{name.value}]: input={report.input} adapted={report.adapted} "
        f"samples={report.emitted_samples} records={written} "
        f"drops={json.dumps(report.dropped, sort_keys=True)}"
    )
    return EXIT_OK


def _cmd_stats(args: argparse.Namespace) -> int:
    samples: List[GroundingSample] = []
    for _, batch in _read_sample_records(args.input):
        samples.extend(batch)
    report = corpus_stats(samples).to_json()
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    _log(f"stats: samples={report['total']}")
    return EXIT_OK


def _cmd_downsample(args: argparse.Namespace) -> int:
    pairs = _read_sample_records(args.input)
    samples = [s for _, batch in pairs for s in batch]
    kept = downsample_labels(samples, cap=args.cap, seed=_merged(args, "seed", 0))
    ordered = []
    seen = set()
    for record, _ in pairs:
        if record["snapshot_id"] not in seen:
            seen.add(record["snapshot_id"])
            ordered.append((record["snapshot_id"], record["screenshot_ref"]))
    written = _write_jsonl(args.out, _regroup_records(ordered, kept))
    _log(f"downsample: in={len(samples)} kept={len(kept)} records={written}")
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    report = evaluate_files(args.preds, args.gold)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    _log(format_report_table(report))
    return EXIT_OK


def _cmd_plan_res(args: argparse.Namespace) -> int:
    plan = plan_grid(args.width, args.height)
    print(json.dumps(plan.to_json(), sort_keys=True))
    return EXIT_OK


def _cmd_extract(args: argparse.Namespace) -> int:
    """Run an in-page extractor script through an external driver command;
    the driver must print the snapshot JSON on stdout."""
    cmd = args.driver_cmd.split() + [args.script, args.url]
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=args.timeout)
    except (OSError, subprocess.TimeoutExpired) as exc:
        _log(f"extract: driver failed: {exc}")
        return EXIT_REMOTE
    if proc.returncode != 0:
        _log(f"extract: driver exited {proc.returncode}: {proc.stderr.strip()}")
        return EXIT_REMOTE
    try:
        snap = parse_snapshot(proc.stdout)
    except (SnapshotParseError, SnapshotValidationError) as exc:
        raise DataError(f"driver output: {exc}") from exc
    violations = validate_snapshot(snap)
    if violations:
        v = violations[0]
        raise DataError(f"driver output: element {v.element_id}: {v.rule}: {v.detail}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(proc.stdout if proc.stdout.endswith("\n") else proc.stdout + "\n")
    _log(f"extract: {args.url} -> {args.out} ({len(snap.elements)} elements)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="groundkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--config", default=None, help="JSON config mirroring flags; flags win")

    p = sub.add_parser("synthesize", help="snapshots -> grounding samples JSONL")
    common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--policy", default=None, help="synthesis policy JSON")
    p.add_argument("--mock-llm", dest="mock_llm", action="store_const", const=True, default=None)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--page-elems", dest="page_elems", type=int, default=None)
    p.add_argument("--label-cap", dest="label_cap", type=int, default=None)
    p.add_argument("--rel-dist", dest="rel_dist", type=int, default=None)
    p.add_argument("--sim-threshold", dest="sim_threshold", type=float, default=None)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("adapt", help="third-party source -> samples JSONL")
    common(p)
    p.add_argument("--source", required=True, choices=[s.value for s in SourceName])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--profile", default=None, help="field-map profile JSON override")
    p.set_defaults(func=_cmd_adapt)

    p = sub.add_parser("stats", help="corpus statistics for a samples file")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("downsample", help="cap per-label sample frequency")
    common(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--cap", type=int, default=LABEL_DOWNSAMPLE_CAP)
    p.set_defaults(func=_cmd_downsample)

    p = sub.add_parser("eval", help="score predictions against gold boxes")
    evalsub = p.add_subparsers(dest="eval_command", required=True)
    pg = evalsub.add_parser("ground", help="point-in-box grounding accuracy")
    pg.add_argument("--preds", required=True)
    pg.add_argument("--gold", required=True)
    pg.add_argument("--out", default=None)
    pg.set_defaults(func=_cmd_eval)

    p = sub.add_parser("plan-res", help="grid plan for a screenshot size")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.set_defaults(func=_cmd_plan_res)

    p = sub.add_parser("extract", help="drive an in-page extractor script")
    p.add_argument("--driver-cmd", required=True, help="command that evaluates a script in a page")
    p.add_argument("--script", required=True, help="extractor script path")
    p.add_argument("--url", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--timeout", type=float, default=60.0)
    p.set_defaults(func=_cmd_extract)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DataError as exc:
        _log(f"data error: {exc}")
        return EXIT_DATA
    except (SnapshotParseError, SnapshotValidationError, AdapterError, FileNotFoundError) as exc:
        _log(f"data error: {exc}")
        return EXIT_DATA
    except AugmentationError as exc:
        _log(f"remote-service error: {exc}")
        return EXIT_REMOTE


if __name__ == "__main__":
    sys.exit(main())
