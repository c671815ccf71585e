"""Command-line front door: ``treembed diary|embed|proj``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
parse errors.  Output is deterministic for a fixed seed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import h2embed, projcomplex
from .diary import alice_trace_json
from .words import sentence_from_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return v


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be nonnegative")
    return v


def workers() -> int:
    env = os.environ.get("TREEMBED_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"TREEMBED_THREADS={env!r} is not an integer") from None
    return os.cpu_count() or 1


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(text: str, out: str | None, suffix: str = "") -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out + suffix).write_text(text, encoding="utf-8")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# -- diary -------------------------------------------------------------------------


def cmd_diary(args) -> int:
    if args.kappa is None:
        raise UsageError("diary needs --kappa")
    try:
        docs = json.loads(_read(args.input))
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from None
    if not isinstance(docs, list):
        raise UsageError("input must be a JSON list of sentence documents")
    traces = []
    for i, doc in enumerate(docs):
        try:
            alphabet, alpha = sentence_from_json(doc)
        except (ValueError, TypeError) as exc:
            raise UsageError(f"sentence {i}: {exc}") from None
        traces.append(alice_trace_json(alphabet, alpha, args.kappa))
    _emit(_dump(traces), args.out)
    return EXIT_OK


# -- embed -------------------------------------------------------------------------


def cmd_embed(args) -> int:
    diary = h2embed.coxeter_diary(kappa=args.kappa)
    try:
        report = h2embed.distortion_report(args.radius, args.pairs, args.seed, diary=diary)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    summary = report.summary()
    if args.kappa is not None:
        summary["kappa_override"] = True
    text = _dump(summary)
    if args.out is None:
        sys.stdout.write(text)
    else:
        _emit(report.to_csv(), args.out, ".csv")
        _emit(text, args.out, ".json")
    return EXIT_OK if report.ok else EXIT_FAIL


# -- proj --------------------------------------------------------------------------

AXIOMS = "axioms"


def _run_instance(job: tuple) -> dict:
    label, source, K, checks, seed, n_triples = job
    sys_ = projcomplex.instance_from_json(source)
    out = {"instance": label, "indices": sys_.n, "vertices": sys_.total_vertices, "K": K}
    ok = True
    if checks is None or AXIOMS in checks:
        ax = projcomplex.verify_axioms(sys_)
        out["axioms"] = ax.to_json(sys_.names)
        ok &= ax.ok
        if not ax.ok:
            out["ok"] = False
            return out
    rest = None if checks is None else [c for c in checks if c != AXIOMS]
    if rest is None or rest:
        k = K if K is not None else max(2, 4 * sys_.theta + 1)
        out["K"] = k
        bundle = projcomplex.build_complexes(sys_, k, 0, seed)
        rep = projcomplex.verify_section5(sys_, bundle, rest, n_triples=n_triples, seed=seed)
        out["checks"] = rep["checks"]
        ok &= rep["ok"]
    out["ok"] = bool(ok)
    return out


def _instance_jobs(args) -> list:
    if args.instance is not None:
        try:
            doc = json.loads(_read(args.instance))
            projcomplex.instance_from_json(doc)  # validate before fanning out
        except (json.JSONDecodeError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad instance {args.instance}: {exc}") from None
        return [(args.instance, doc, args.big_k, args.checks, args.seed, args.triples)]
    jobs = []
    for seed in range(args.seed, args.seed + args.count):
        try:
            sys_ = projcomplex.tree_segments_instance(seed, args.n_vertices, args.n_segments)
        except ValueError as exc:
            raise UsageError(f"seed {seed}: {exc}") from None
        jobs.append((f"tree_segments(seed={seed})", projcomplex.instance_to_json(sys_), args.big_k, args.checks, seed, args.triples))
    return jobs


def cmd_proj(args) -> int:
    if args.checks is not None:
        known = set(projcomplex.ALL_CHECKS) | {AXIOMS}
        bad = [c for c in args.checks if c not in known]
        if bad:
            raise UsageError(f"unknown checks {bad}; choose from {sorted(known)}")
    jobs = _instance_jobs(args)
    n = min(workers(), len(jobs))
    if n > 1:
        with ProcessPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(_run_instance, jobs))
    else:
        results = [_run_instance(j) for j in jobs]
    ok = all(r["ok"] for r in results)
    _emit(_dump({"ok": ok, "instances": results}), args.out)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treembed", description="Diaries, tree embeddings and projection complexes.")
    p.add_argument("--config", help="JSON file whose keys mirror the long flags")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diary", help="run Alice's Diary on sentences and emit provenance traces")
    d.add_argument("--input", default="-", help="JSON list of {alphabet, sentence} documents (default stdin)")
    d.add_argument("--kappa", type=_positive_int)
    d.add_argument("--out")
    d.set_defaults(run=cmd_diary)

    e = sub.add_parser("embed", help="distortion of the Coxeter group embedding into two trees")
    e.add_argument("--radius", type=_nonneg_int, default=3)
    e.add_argument("--pairs", type=_positive_int, default=10000)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--kappa", type=_positive_int, help="override the pages-per-day constant")
    e.add_argument("--out", help="output prefix; writes PREFIX.csv and PREFIX.json")
    e.set_defaults(run=cmd_embed)

    q = sub.add_parser("proj", help="verify projection-complex properties on instances")
    q.add_argument("--instance", help="instance JSON file; default generates tree-segment instances")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--count", type=_positive_int, default=1)
    q.add_argument("--n-vertices", type=_positive_int, default=60)
    q.add_argument("--n-segments", type=_positive_int, default=8)
    q.add_argument("--big-k", type=_positive_int)
    q.add_argument("--triples", type=_positive_int, default=1000)
    q.add_argument("--checks", type=lambda s: [c.strip() for c in s.split(",") if c.strip()])
    q.add_argument("--out")
    q.set_defaults(run=cmd_proj)
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        cfg = json.loads(_read(args.config))
    except json.JSONDecodeError as exc:
        raise UsageError(f"config is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    # flags given on the command line win over the config file
    given = {a.split("=")[0].lstrip("-").replace("-", "_") for a in argv if a.startswith("--")}
    for key, value in cfg.items():
        k = key.replace("-", "_")
        if k in ("command", "run", "config") or not hasattr(args, k):
            raise UsageError(f"unknown config key {key!r}")
        if k not in given:
            if k == "checks" and isinstance(value, str):
                value = [c.strip() for c in value.split(",") if c.strip()]
            setattr(args, k, value)
    return args


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.run(args)
    except UsageError as exc:
        print(f"treembed: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
