"""Command-line driver: gen, validate, perturb, dataset, score, compile, craft.

Exit codes: 0 success, 1 domain findings or failures, 2 usage or
configuration error, 3 transport error.

Endpoints come from WC_CHAT_URL, WC_CHAT_KEY, WC_JUDGE_URL and WC_IMAGE_URL,
overridable by flags. An optional TOML file (``--config``) supplies defaults
for any long flag, keyed by the flag name with dashes as underscores, e.g.::

    workers = 4
    max_rounds = 4
    judge_url = "http://localhost:8000/v1/chat/completions"

    [priors]            # procgen priors for gen and dataset
    room_area_max = 60
    aspect_ratio_max = 1.5
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .chat import ConfigError, HttpChatClient, StubClient, TransportError

logger = logging.getLogger("tilescape")

EXIT_OK, EXIT_FINDINGS, EXIT_USAGE, EXIT_TRANSPORT = 0, 1, 2, 3
ROOM_RANGE = (3, 8)
DIM_RANGE = (24, 40)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class UsageError(Exception):
    pass


def _workers(requested: int | None, jobs: int) -> int:
    cap = os.cpu_count() or 1
    n = requested if requested else jobs
    return max(1, min(n, cap, max(jobs, 1)))


def _map(fn, items, workers: int):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _read_layout(path: str):
    from .layout import loads_lenient

    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    return loads_lenient(text)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _golden_args(seed: int, rooms, width, height):
    """Fixed dims when given, otherwise sampled per seed from the sweep ranges."""
    rng = random.Random(seed)
    n = rooms if rooms is not None else rng.randint(*ROOM_RANGE)
    w = width if width is not None else rng.randint(*DIM_RANGE)
    h = height if height is not None else rng.randint(*DIM_RANGE)
    return n, w, h


def _priors(overrides):
    """ProcgenPriors from a config ``[priors]`` table (lists become tuples)."""
    from .procgen import ProcgenPriors

    if not overrides:
        return None
    try:
        return ProcgenPriors(**{k: tuple(v) if isinstance(v, list) else v for k, v in overrides.items()})
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad [priors] table: {exc}") from None


# gen -----------------------------------------------------------------------

def _gen_one(job):
    from .layout import serialize_layout, validate
    from .metrics import cfr, rcs
    from .procgen import InfeasibleLayoutError, generate_golden

    seed, n, w, h, out, with_z, priors = job
    row = {"seed": seed, "rooms": n, "width": w, "height": h}
    try:
        res = generate_golden(seed, n, w, h, _priors(priors))
    except InfeasibleLayoutError as exc:
        return dict(row, status="infeasible", error=str(exc), cfr=None, rcs=None, placed_rooms=0)
    layout = res.layout
    report = validate(layout)
    row.update(cfr=cfr(layout, report), rcs=rcs(layout), placed_rooms=len(res.structure.rooms),
               hard=len(report.hard), status="ok")
    if res.infeasible:
        row["status"] = "infeasible"
    if report.hard:
        row["status"] = "invalid"
    if out is not None:
        _write(Path(out) / f"{layout.metadata.scene_name}.json", serialize_layout(layout))
        if with_z and not report.hard:
            from .guild import describe

            _write(Path(out) / f"{layout.metadata.scene_name}.z.txt", describe(layout))
    return row


def cmd_gen(args) -> int:
    jobs = []
    for i in range(args.count):
        seed = args.seed + i
        jobs.append((seed, *_golden_args(seed, args.rooms, args.width, args.height),
                     args.out, args.z, args.priors))
    rows = _map(_gen_one, jobs, _workers(args.workers, len(jobs)))
    if rows:
        print(f"{'scene':<16} {'rooms':>5} {'grid':>7} {'cfr':>6} {'rcs':>6}  status")
    for r in rows:
        cf = "-" if r["cfr"] is None else f"{r['cfr']:.3f}"
        rc = "-" if r["rcs"] is None else f"{r['rcs']:.3f}"
        grid = f"{r['width']}x{r['height']}"
        print(f"procgen_{r['seed']:<8} {r['placed_rooms']:>2}/{r['rooms']:<2} {grid:>7} {cf:>6} {rc:>6}  {r['status']}")
    if rows and all(r["status"] != "ok" for r in rows):
        return EXIT_FINDINGS
    return EXIT_OK


# validate ------------------------------------------------------------------

def cmd_validate(args) -> int:
    from .layout import validate

    layout = _read_layout(args.input)
    report = validate(layout)
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
    else:
        for kind, items in (("hard", report.hard), ("warning", report.warnings)):
            for f in items:
                print(f"{kind}\t{f.code}\t{f.asset_id or '-'}\t{f.message}")
        print(f"{len(report.hard)} hard finding(s), {len(report.warnings)} warning(s)")
    return EXIT_OK if not report.hard else EXIT_FINDINGS


# perturb -------------------------------------------------------------------

def cmd_perturb(args) -> int:
    from .dataforge import corrupt

    layout = _read_layout(args.input)
    record = corrupt(layout, k=args.issues, seed=args.seed, allow_small=args.allow_small)
    text = json.dumps(record.to_dict(), sort_keys=True, indent=1) + "\n"
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    if record.shortfall:
        logger.warning("only %d of %d issues could be injected", len(record.ops), record.requested)
    return EXIT_OK


# dataset -------------------------------------------------------------------

def _dataset_entry(job):
    from .dataforge import GoldenEntry, corrupt
    from .guild import describe
    from .procgen import InfeasibleLayoutError, generate_golden

    seed, n, w, h, corruptions, priors = job
    try:
        res = generate_golden(seed, n, w, h, _priors(priors))
    except InfeasibleLayoutError:
        return None
    z = describe(res.layout)
    records = tuple(corrupt(res.layout, seed=seed * 1000 + j) for j in range(corruptions))
    return GoldenEntry(res.layout, z, records, seed)


def cmd_dataset(args) -> int:
    from .dataforge import DENSITIES, emit_dataset_a, emit_dataset_b, simulate_instruction

    corruptions = args.corruptions if args.kind == "a" else 0
    jobs = [(s, *_golden_args(s, args.rooms, args.width, args.height), corruptions, args.priors)
            for s in range(args.seed, args.seed + args.count)]
    entries = [e for e in _map(_dataset_entry, jobs, _workers(args.workers, len(jobs))) if e is not None]
    if args.kind == "a":
        path = emit_dataset_a(entries, args.out)
    else:
        pairs = [(simulate_instruction(e.z, d), e.z, d) for e in entries for d in DENSITIES]
        path = emit_dataset_b(pairs, args.out, seeds=[e.seed for e in entries])
    print(f"wrote {path} ({len(entries)} golden layout(s))")
    return EXIT_OK if entries or not jobs else EXIT_FINDINGS


# score ---------------------------------------------------------------------

def _judge_client(args):
    url = args.judge_url or os.environ.get("WC_JUDGE_URL")
    if args.judge_stub:
        return StubClient()
    if not args.judge:
        return None
    if not url:
        raise ConfigError("--judge needs --judge-url or WC_JUDGE_URL")
    return HttpChatClient(url=url, api_key=os.environ.get("WC_CHAT_KEY"), model=args.judge_model)


def cmd_score(args) -> int:
    from .metrics import required_from_z, score_layout, summary_csv
    from .zdesc import parse_z

    judge = _judge_client(args)
    required = None
    if args.z:
        required = required_from_z(parse_z(Path(args.z).read_text(encoding="utf-8")))
    reports = [score_layout(_read_layout(p), required=required, judge=judge) for p in args.input]
    if args.csv:
        _write(Path(args.csv), summary_csv(reports))
    if len(reports) == 1 and not args.csv:
        sys.stdout.write(reports[0].to_json())
    else:
        sys.stdout.write(summary_csv(reports))
    return EXIT_OK


# compile -------------------------------------------------------------------

def cmd_compile(args) -> int:
    from .assetlib import build_index, bundled_library
    from .guild import artist
    from .scaffold import SceneCompileError, compile_scene, tree_hash

    layout = _read_layout(args.input)
    library = build_index(args.assets) if args.assets else bundled_library()
    art = artist(layout, library)
    try:
        out = compile_scene(layout, art.resolution, args.out, force=args.force)
    except SceneCompileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    print(f"{out} {tree_hash(out)}")
    return EXIT_OK


# craft ---------------------------------------------------------------------

def cmd_craft(args) -> int:
    from .assetlib import build_index
    from .guild import PipelineConfig, run_pipeline

    if args.prompt_file:
        prompt = Path(args.prompt_file).read_text(encoding="utf-8")
    elif args.prompt is not None:
        prompt = args.prompt
    else:
        raise UsageError("craft needs --prompt or --prompt-file")
    if args.stub:
        client = StubClient(fixtures_dir=args.fixtures)
    else:
        url = args.endpoint or os.environ.get("WC_CHAT_URL")
        if not url:
            raise ConfigError("no chat endpoint: pass --endpoint, set WC_CHAT_URL, or use --stub")
        client = HttpChatClient(url=url, api_key=os.environ.get("WC_CHAT_KEY"), model=args.model)
    config = PipelineConfig(
        client=client,
        judge=_judge_client(args),
        t_max=args.max_rounds,
        out_dir=args.out,
        library=build_index(args.assets) if args.assets else None,
        image_url=args.image_url or os.environ.get("WC_IMAGE_URL"),
    )
    state = run_pipeline(prompt, config)
    print(f"status={state.status} rounds={state.round}" + (f" stage={state.stage} error={state.error}" if state.stage else ""))
    if state.status == "failed":
        return EXIT_TRANSPORT if state.transport_error else EXIT_FINDINGS
    return EXIT_OK


# parser --------------------------------------------------------------------

def _add_dims(p):
    p.add_argument("--rooms", type=int, help="room count (default: sampled per seed in 3..8)")
    p.add_argument("--width", type=int, help="grid width (default: sampled per seed in 24..40)")
    p.add_argument("--height", type=int, help="grid height (default: sampled per seed in 24..40)")
    p.add_argument("--workers", type=int, help="parallel workers, capped at the logical core count")
    p.set_defaults(priors=None)


def _add_judge(p):
    p.add_argument("--judge", action="store_true", help="score judge metrics through --judge-url or WC_JUDGE_URL")
    p.add_argument("--judge-url", help="judge chat endpoint (overrides WC_JUDGE_URL)")
    p.add_argument("--judge-model", default="default", help="judge model name")
    p.add_argument("--judge-stub", action="store_true", help="use the offline stub judge")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tilescape", description="Scene layout engine.")
    parser.add_argument("--config", help="TOML file with flag defaults")
    parser.add_argument("--log-level", default="WARNING", help="logging level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate golden layouts")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--count", type=int, default=1, help="number of layouts (seeds seed..seed+count-1)")
    p.add_argument("--out", help="output directory for layout files")
    p.add_argument("--z", action="store_true", help="also write a template description per layout")
    _add_dims(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="validate a layout file")
    p.add_argument("--in", dest="input", required=True, help="layout JSON file")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("perturb", help="inject leveled defects into a clean layout")
    p.add_argument("--in", dest="input", required=True, help="golden layout JSON file")
    p.add_argument("--issues", type=int, help="issue count (default: uniform in 2..15)")
    p.add_argument("--seed", type=int, default=0, help="corruption seed")
    p.add_argument("--allow-small", action="store_true", help="allow a single issue")
    p.add_argument("--out", help="record file (default: stdout)")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("dataset", help="emit training datasets")
    p.add_argument("kind", choices=("a", "b"), help="a: Z->G and correction records; b: instruction->Z triples")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--count", type=int, default=10, help="number of golden layouts")
    p.add_argument("--corruptions", type=int, default=1, help="corrupted copies per golden (dataset a)")
    p.add_argument("--out", required=True, help="output JSONL path")
    _add_dims(p)
    p.set_defaults(func=cmd_dataset)

    p = sub.add_parser("score", help="compute layout metrics")
    p.add_argument("--in", dest="input", nargs="+", required=True, help="layout JSON file(s)")
    p.add_argument("--z", help="description file listing the required components")
    p.add_argument("--csv", help="write a summary CSV here")
    _add_judge(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compile", help="compile a layout into a scene bundle")
    p.add_argument("--in", dest="input", required=True, help="layout JSON file")
    p.add_argument("--assets", help="tile library directory with manifest.csv (default: bundled library)")
    p.add_argument("--out", required=True, help="bundle directory")
    p.add_argument("--force", action="store_true", help="compile despite hard findings")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("craft", help="run the full design loop from a prompt")
    p.add_argument("--prompt", help="instruction text")
    p.add_argument("--prompt-file", help="file holding the instruction")
    p.add_argument("--endpoint", help="chat endpoint URL (overrides WC_CHAT_URL)")
    p.add_argument("--model", default="default", help="chat model name")
    p.add_argument("--stub", action="store_true", help="use the offline stub client")
    p.add_argument("--fixtures", help="stub fixture directory (<stage>.json files)")
    p.add_argument("--image-url", help="image endpoint URL (overrides WC_IMAGE_URL)")
    p.add_argument("--assets", help="tile library directory (default: bundled library)")
    p.add_argument("--max-rounds", type=int, default=4, help="critic/refine round limit")
    p.add_argument("--out", required=True, help="run output directory")
    _add_judge(p)
    p.set_defaults(func=cmd_craft)
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config, "rb") as fh:
            values = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot load config {known.config}: {exc}") from None
    priors = values.pop("priors", None)
    if priors is not None:
        if not isinstance(priors, dict):
            raise UsageError("config key 'priors' must be a table")
        _priors(priors)
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            dests = {a.dest for a in sp._actions}
            sp.set_defaults(**{k: v for k, v in values.items() if k in dests})
            if priors is not None:
                sp.set_defaults(priors=priors)


def main(argv=None) -> int:
    from .dataforge import CorruptionError
    from .layout import LayoutParseError
    from .procgen import InfeasibleLayoutError
    from .zdesc import ZGrammarError

    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TransportError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_TRANSPORT
    except (LayoutParseError, ZGrammarError, CorruptionError, InfeasibleLayoutError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FINDINGS


if __name__ == "__main__":
    sys.exit(main())
