"""Command line interface: run, serve, eval, explain."""
from __future__ import annotations

import argparse
import random
import sys

from .config import SimConfig, load_config
from .controller import read_log, run_episode, write_log
from .evaluate import corpus_report
from .explain import explain_confidence, explain_why, explain_why_not
from .phrases import DEFAULT_TABLE, action_phrase
from .spatial import SpatialModel
from .world import Pose, load_world


def _load_targets(path: str) -> list[tuple[float, float]]:
    targets = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] != "target" or len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'target <x> <y>'")
            targets.append((float(parts[1]), float(parts[2])))
    return targets


def _load_world_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return load_world(fh.read(), name=path)


def _config_from(args) -> SimConfig:
    return load_config(args.config) if args.config else SimConfig()


def cmd_run(args) -> int:
    world = _load_world_file(args.world)
    targets = _load_targets(args.targets)
    config = _config_from(args)
    rng = random.Random(args.seed)
    model = SpatialModel()
    minx, miny, maxx, maxy = world.bounds
    pose = (Pose(args.start[0], args.start[1], args.start[2]) if args.start
            else Pose((minx + maxx) / 2, (miny + maxy) / 2, 0.0))

    all_records = []
    reached = 0
    for i, target in enumerate(targets):
        result = run_episode(world, pose, target, model, config, rng)
        all_records.extend(result.records)
        reached += result.reached
        status = "reached" if result.reached else "unreached"
        print(f"episode {i}: target ({target[0]:.2f}, {target[1]:.2f}) "
              f"{status} in {len(result.records)} cycles")
        pose = result.final_pose
    write_log(all_records, args.log)
    print(f"\n{reached}/{len(targets)} targets reached; "
          f"{len(all_records)} decisions logged to {args.log}")
    if all_records:
        print()
        print(corpus_report(all_records).to_text())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    world = _load_world_file(args.world)
    config = _config_from(args)
    start = Pose(*args.start) if args.start else None
    app = create_app(world, config, args.seed, start)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_eval(args) -> int:
    records = read_log(args.log)
    print(corpus_report(records).to_text())
    return 0


def cmd_explain(args) -> int:
    records = read_log(args.log)
    if args.cycle is not None:
        records = [r for r in records if r.cycle_index == args.cycle]
        if not records:
            print(f"no record with cycle {args.cycle}", file=sys.stderr)
            return 1
    for rec in records:
        print(f"[cycle {rec.cycle_index}] chose {action_phrase(rec.chosen)} "
              f"({rec.decided_by})")
        print("  why:        " + explain_why(rec, DEFAULT_TABLE).text)
        print("  confidence: " + explain_confidence(rec, DEFAULT_TABLE).text)
        if args.alternative is not None:
            alts = [a for a in rec.candidates
                    if a.intensity_index == args.alternative
                    and a.key() != rec.chosen.key()]
            for alt in alts:
                print("  why not " + action_phrase(alt) + ": "
                      + explain_why_not(rec, alt, DEFAULT_TABLE).text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="navex")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run batch episodes and write a decision log")
    run.add_argument("--world", required=True)
    run.add_argument("--targets", required=True)
    run.add_argument("--seed", type=int, required=True)
    run.add_argument("--log", required=True)
    run.add_argument("--config")
    run.add_argument("--start", type=float, nargs=3, metavar=("X", "Y", "THETA"))
    run.set_defaults(func=cmd_run)

    serve = sub.add_parser("serve", help="serve the live session API")
    serve.add_argument("--world", required=True)
    serve.add_argument("--seed", type=int, default=0)
    serve.add_argument("--config")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8777)
    serve.add_argument("--start", type=float, nargs=3, metavar=("X", "Y", "THETA"))
    serve.set_defaults(func=cmd_serve)

    ev = sub.add_parser("eval", help="summarize a decision log")
    ev.add_argument("--log", required=True)
    ev.set_defaults(func=cmd_eval)

    ex = sub.add_parser("explain", help="replay explanations from a log")
    ex.add_argument("--log", required=True)
    ex.add_argument("--cycle", type=int)
    ex.add_argument("--alternative", type=int,
                    help="intensity index of the alternative for why-not")
    ex.set_defaults(func=cmd_explain)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
