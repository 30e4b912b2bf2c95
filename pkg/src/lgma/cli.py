"""Command line entry points: gen, train, eval, run, lesion, serve."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from lgma.config import Config, default_config, load_config


def _cfg(args) -> Config:
    return load_config(args.config) if args.config else default_config()


def cmd_gen(args) -> int:
    from lgma.engine.checkpoint import write_records
    from lgma.orchestrator.datasets import gen_dataset
    from lgma.orchestrator.resources import Resources

    cfg = _cfg(args)
    res = Resources(cfg)
    records = gen_dataset(args.generator, args.count, args.seed, res)
    out = args.out or (cfg.path("dataset_dir") / f"{args.generator}.bin")
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    write_records(args.generator, records, out)
    print(f"wrote {len(records)} records to {out}")
    return 0


def cmd_train(args) -> int:
    from lgma.engine.checkpoint import read_records
    from lgma.orchestrator.datasets import gen_dataset
    from lgma.orchestrator.resources import Resources
    from lgma.orchestrator.training import CURRICULUM, train_module

    cfg = _cfg(args)
    res = Resources(cfg)
    names = CURRICULUM if args.module == "all" else [args.module]
    for name in names:
        if args.dataset:
            _, records = read_records(args.dataset)
        else:
            count = cfg.require_int(f"{name}.samples")
            records = gen_dataset(name, count, int(cfg["seed"]), res)
        path, losses = train_module(name, records, cfg, res)
        print(f"{name}: {len(losses)} epochs, final loss {losses[-1]:.6f} -> {path}")
    return 0


def cmd_eval(args) -> int:
    from lgma.orchestrator.evaluation import SUITES, run_suites, write_report
    from lgma.orchestrator.resources import Resources

    cfg = _cfg(args)
    names = list(SUITES) if args.suite == "all" else args.suite.split(",")
    res = Resources(cfg)
    results = run_suites(names, cfg, res)
    out = args.out or (cfg.path("report_dir") / "eval.csv")
    write_report(results, out)
    all_pass = True
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        all_pass &= result.passed
        print(f"[{status}] {result.name} ({result.elapsed:.1f}s)")
        for module, metric, value, _ in result.rows:
            print(f"    {module}/{metric} = {value:.6g}")
    print(f"report: {out}")
    return 0 if all_pass else 1


def cmd_run(args) -> int:
    from lgma.orchestrator.resources import Resources
    from lgma.orchestrator.tasks import make_task, run_task

    cfg = _cfg(args)
    res = Resources(cfg)
    spec = make_task(args.task, args.seed)
    for inj in args.inject or []:
        tick, _, utterance = inj.partition(":")
        spec.inject[int(tick)] = utterance
    report = run_task(spec, res)
    print(json.dumps(report, indent=2))
    return 0 if report["success"] else 1


def cmd_lesion(args) -> int:
    from lgma.orchestrator.evaluation import lesion_experiment
    from lgma.orchestrator.resources import Resources

    cfg = _cfg(args)
    res = Resources(cfg)
    ns = tuple(int(x) for x in args.n.split(","))
    table, constant_full, t2_full = lesion_experiment(res, ns, args.masks)
    print("n,wer")
    for n, wer in table:
        print(f"{n},{wer:.4f}")
    if 256 in dict(table):
        print(f"full lesion constant output: {constant_full}; decodes to t2: {t2_full}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from lgma.orchestrator.resources import Resources
    from lgma.service.bridge import create_app

    cfg = _cfg(args)
    res = Resources(cfg)
    app = create_app(res, task=args.task, seed=args.seed, tick_ms=args.tick_ms)
    try:
        uvicorn.run(app, host="127.0.0.1", port=args.port, log_level="warning")
    except OSError as exc:
        print(f"PortInUse: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lgma",
                                     description="language-guided modular arm")
    parser.add_argument("--config", help="config file (key = value lines)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a training dataset")
    p.add_argument("--generator", required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("train", help="train one module or 'all' in curriculum order")
    p.add_argument("--module", required=True)
    p.add_argument("--dataset", help="pre-generated dataset file")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="run evaluation suites")
    p.add_argument("--suite", default="all")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("run", help="run a task scenario")
    p.add_argument("--task", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject", action="append",
                   help='"tick:utterance", may repeat')
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("lesion", help="Broca lesion sweep")
    p.add_argument("--n", default="0,25,64,128,192,256")
    p.add_argument("--masks", type=int, default=20)
    p.set_defaults(func=cmd_lesion)

    p = sub.add_parser("serve", help="start the live bridge service")
    p.add_argument("--port", type=int, default=8700)
    p.add_argument("--task", default="fetch_big")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tick-ms", type=int, default=100)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
