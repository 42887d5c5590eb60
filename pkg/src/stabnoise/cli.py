"""Command-line orchestration: instance generation, reductions, oracles,
advantage verification, the mixing lab, and the counting calculators.

Every command is fully determined by its flags plus --seed; numeric reports
embed the resolved configuration.  Invalid parameters exit nonzero with a
machine-readable JSON error on stderr.  STABNOISE_THREADS caps the worker
pool for verify trial loops (per-trial seeds are derived by spawning the
seed sequence, so results are identical to a sequential run).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from . import oracles, problems, reductions
from .gf2 import BitVec
from .mixing import ChainConfig, tv_curve_exact, tv_curve_montecarlo
from .stats import advantage_ci
from .symplectic import PauliVec, count_codes, count_tableaus, sparse_bound


def _dump(obj, path=None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _trace_json(trace: reductions.ReductionTrace) -> dict:
    def conv(v):
        if isinstance(v, Fraction):
            return str(v)
        if isinstance(v, BitVec):
            return {"n": v.n, "hex": v.to_hex()}
        if isinstance(v, PauliVec):
            return v.to_json()
        if isinstance(v, list):
            return [conv(x) for x in v]
        return v

    return {
        "name": trace.name,
        "params": {k: conv(v) for k, v in trace.params.items()},
        "draws": {k: conv(v) for k, v in trace.draws.items()},
    }


def cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    structured = not args.unstructured
    p = Fraction(args.p)
    if args.problem == "lpn":
        inst = problems.sample_lpn(args.k, args.n, p, structured, rng)
    elif args.problem == "symplpn":
        inst = problems.sample_symplpn(args.n, p, structured, rng)
    elif args.problem == "lsn":
        inst = problems.sample_lsn_classical(args.k, args.n, p, args.m, structured, rng)
    elif args.problem == "lsn-quantum":
        inst = problems.sample_lsn_quantum(args.k, args.n, p, args.m, structured, rng)
    elif args.problem == "qsdp":
        inst = problems.sample_qsdp(args.n, args.k, args.w, rng)
    else:
        raise ValueError(f"unknown problem {args.problem!r}")
    doc = problems.instance_to_json(inst, include_hidden=not args.no_hidden)
    doc["seed"] = args.seed
    _dump(doc, args.out)
    return 0


_REDUCTION_PAIRS = {
    ("lpn", "symplpn"): "lpn-symplpn",
    ("symplpn", "lsn"): "symplpn-lsn",
    ("lsn", "lsn-quantum"): "classical-to-quantum",
    ("lsn-quantum", "lsn"): "quantum-to-classical",
}


def cmd_reduce(args) -> int:
    rng = np.random.default_rng(args.seed)
    with open(args.infile) as fh:
        inst = problems.instance_from_json(json.load(fh))
    if args.reduction is None:
        if not (args.src and args.dst):
            raise ValueError("give either --reduction or both --from and --to")
        try:
            args.reduction = _REDUCTION_PAIRS[(args.src, args.dst)]
        except KeyError:
            raise ValueError(f"no reduction from {args.src!r} to {args.dst!r}") from None
    trace = None
    if args.reduction == "lpn-symplpn":
        target = Fraction(args.target_p) if args.target_p else None
        out, trace = reductions.lpn_to_symplpn(inst, Fraction(args.eps), rng, target_p=target)
    elif args.reduction == "symplpn-lsn":
        out, trace = reductions.symplpn_to_lsn_multi(inst, args.k, args.m, rng)
    elif args.reduction == "increase-noise":
        out, trace = reductions.increase_noise(inst, Fraction(args.target_p), rng)
    elif args.reduction == "rerandomize-secret":
        out, shift = reductions.rerandomize_secret(inst, rng)
        trace = reductions.ReductionTrace("rerandomize_secret", draws={"shift": shift})
    elif args.reduction == "classical-to-quantum":
        out = reductions.lsn_quantum_of_classical(inst, rng)
    elif args.reduction == "quantum-to-classical":
        out, shift = reductions.lsn_classical_of_quantum(inst, rng)
        trace = reductions.ReductionTrace("lsn_classical_of_quantum", draws={"shift": shift})
    else:
        raise ValueError(f"unknown reduction {args.reduction!r}")
    doc = problems.instance_to_json(out, include_hidden=not args.no_hidden)
    doc["seed"] = args.seed
    doc["reduction"] = args.reduction
    _dump(doc, args.out)
    if args.trace and trace is not None:
        _dump(_trace_json(trace), args.trace)
    return 0


def cmd_solve(args) -> int:
    with open(args.infile) as fh:
        inst = problems.instance_from_json(json.load(fh))
    report = oracles.solve_report(args.oracle, inst)
    _dump(
        {
            "oracle": args.oracle,
            "answer": report.answer,
            "log_likelihoods": report.log_likelihoods,
            "runtime_s": report.runtime_s,
            "params": report.params,
        },
        args.out,
    )
    return 0


def _verify_trial(payload) -> tuple:
    """One paired structured/unstructured trial; returns the distinguisher's
    two verdicts (1 = said structured)."""
    chain, cfg, child_seed = payload
    rng = np.random.default_rng(child_seed)
    k, n, p, m = cfg["k"], cfg["n"], cfg["p"], cfg["m"]
    said = []
    for structured in (True, False):
        if chain == "lsn":
            inst = problems.sample_lsn_classical(k, n, p, m, structured, rng)
            said.append(oracles.lsn_lr_decision(inst))
        elif chain == "symplpn":
            inst = problems.sample_symplpn(n, p, structured, rng)
            said.append(oracles.symplpn_lr_decision(inst))
        elif chain == "symplpn-lsn":
            src = problems.sample_symplpn(n, p, structured, rng)
            inst, _ = reductions.symplpn_to_lsn_multi(src, k, m, rng)
            said.append(oracles.lsn_lr_decision(inst))
        elif chain == "lpn-symplpn":
            src = problems.sample_lpn(cfg["ell"], cfg["lpn_rows"], cfg["p_in"], structured, rng)
            inst, _ = reductions.lpn_to_symplpn(src, cfg["eps"], rng, target_p=cfg["target_p"])
            said.append(oracles.symplpn_lr_decision(inst))
        elif chain == "lpn-symplpn-lsn":
            src = problems.sample_lpn(cfg["ell"], cfg["lpn_rows"], cfg["p_in"], structured, rng)
            mid, _ = reductions.lpn_to_symplpn(src, cfg["eps"], rng, target_p=cfg["target_p"])
            inst, _ = reductions.symplpn_to_lsn_multi(mid, k, m, rng)
            said.append(oracles.lsn_lr_decision(inst))
        elif chain == "roundtrip":
            inst = problems.sample_lsn_classical(k, n, p, m, structured, rng)
            q = reductions.lsn_quantum_of_classical(inst, rng)
            back, _ = reductions.lsn_classical_of_quantum(q, rng)
            said.append(oracles.lsn_lr_decision(back))
        else:
            raise ValueError(f"unknown chain {chain!r}")
    return int(said[0]), int(said[1])


def cmd_verify(args) -> int:
    p = Fraction(args.p)
    cfg = {
        "k": args.k,
        "n": args.n,
        "p": p,
        "m": args.m,
    }
    if args.chain in ("lpn-symplpn", "lpn-symplpn-lsn"):
        eps = Fraction(args.eps)
        ell = args.ell
        m_pad = int(Fraction(ell) * (1 + eps))
        cfg.update(
            {
                "ell": ell,
                "eps": eps,
                "lpn_rows": 2 * args.n - m_pad,
                "p_in": Fraction(args.p_in) if args.p_in else p / 6,
                "target_p": p if args.exact_target else None,
            }
        )
    seeds = np.random.SeedSequence(args.seed).spawn(args.trials)
    payloads = [(args.chain, cfg, s) for s in seeds]
    threads = int(os.environ.get("STABNOISE_THREADS", "1"))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_verify_trial, payloads, chunksize=64))
    else:
        results = [_verify_trial(p) for p in payloads]
    said_s = sum(r[0] for r in results)
    said_u = sum(r[1] for r in results)
    est = advantage_ci(said_s, args.trials, said_u, args.trials, args.alpha)
    report = {
        "chain": args.chain,
        "config": {
            k: (str(v) if isinstance(v, Fraction) else v) for k, v in cfg.items()
        },
        "trials": args.trials,
        "seed": args.seed,
        "alpha": args.alpha,
        "p_structured": est.p_structured,
        "p_unstructured": est.p_unstructured,
        "advantage": est.advantage,
        "ci_halfwidth": est.ci_halfwidth,
        "threads": threads,
    }
    _dump(report, args.out)
    # Acceptance predicate: the two-sided Hoeffding band excludes zero.
    return 0 if est.advantage - 2 * est.ci_halfwidth > 0 else 1


def cmd_mix(args) -> int:
    cfg = ChainConfig(args.n, args.t)
    rng = np.random.default_rng(args.seed)
    lines = ["step,start_class,tv,ci_low,ci_high"]
    for w in range(1, args.n + 1):
        start = tuple(1 if i < w else 0 for i in range(args.n))
        if args.method == "exact":
            curve = tv_curve_exact(cfg, start, max_steps=args.steps, stop_at=args.eps)
            for step, tv in enumerate(curve):
                lines.append(f"{step},{w},{tv:.10f},{tv:.10f},{tv:.10f}")
        else:
            out = tv_curve_montecarlo(cfg, start, args.steps, args.trials, rng)
            for step, (tv, lo, hi) in enumerate(
                zip(out["tv"], out["ci_low"], out["ci_high"])
            ):
                lines.append(f"{step},{w},{tv:.10f},{lo:.10f},{hi:.10f}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_count(args) -> int:
    if args.tableaus:
        n, m = args.tableaus
        _dump({"tableaus": str(count_tableaus(n, m)), "n": n, "m": m}, args.out)
    elif args.codes:
        n, k = args.codes
        _dump({"codes": str(count_codes(n, k)), "n": n, "k": k}, args.out)
    elif args.sparse:
        n, d = args.sparse
        lo, hi = sparse_bound(n, d)
        _dump({"log2_codes": lo, "log2_sparse_upper": hi, "n": n, "d": d}, args.out)
    else:
        raise ValueError("choose one of --tableaus/--codes/--sparse")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stabnoise")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="sample a problem instance to JSON")
    g.add_argument("--problem", required=True,
                   choices=["lpn", "symplpn", "lsn", "lsn-quantum", "qsdp"])
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=str, default="0.1")
    g.add_argument("--m", type=int, default=1)
    g.add_argument("--w", type=int, default=1)
    g.add_argument("--structured", action="store_true", default=True)
    g.add_argument("--unstructured", action="store_true")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", default=None)
    g.add_argument("--no-hidden", action="store_true")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reduce", help="apply a named reduction")
    r.add_argument("--reduction", default=None,
                   choices=["lpn-symplpn", "symplpn-lsn", "increase-noise",
                            "rerandomize-secret", "classical-to-quantum",
                            "quantum-to-classical"])
    r.add_argument("--from", dest="src", default=None,
                   choices=["lpn", "symplpn", "lsn", "lsn-quantum"])
    r.add_argument("--to", dest="dst", default=None,
                   choices=["symplpn", "lsn", "lsn-quantum"])
    r.add_argument("--in", dest="infile", required=True)
    r.add_argument("--out", default=None)
    r.add_argument("--trace", default=None)
    r.add_argument("--seed", type=int, required=True)
    r.add_argument("--eps", default="1/3")
    r.add_argument("--target-p", dest="target_p", default=None)
    r.add_argument("--k", type=int, default=1)
    r.add_argument("--m", type=int, default=1)
    r.add_argument("--no-hidden", action="store_true")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="run an exact oracle, emit a report")
    s.add_argument("--oracle", required=True,
                   choices=["lpn-ml", "lsn-ml", "lsn-lr", "symplpn-lr",
                            "qsdp-min-weight"])
    s.add_argument("--in", dest="infile", required=True)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="paired-trial advantage measurement")
    v.add_argument("--chain", required=True,
                   choices=["lsn", "symplpn", "symplpn-lsn", "lpn-symplpn",
                            "lpn-symplpn-lsn", "roundtrip"])
    v.add_argument("--k", type=int, default=1)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--p", type=str, required=True)
    v.add_argument("--m", type=int, default=1)
    v.add_argument("--ell", type=int, default=1)
    v.add_argument("--eps", default="1/3")
    v.add_argument("--p-in", dest="p_in", default=None)
    v.add_argument("--exact-target", action="store_true",
                   help="top the lpn pipeline up to exactly --p")
    v.add_argument("--trials", type=int, required=True)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--alpha", type=float, default=0.05)
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    m = sub.add_parser("mix", help="TV-to-uniform curves for the Clifford chain")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--t", type=int, default=2)
    m.add_argument("--eps", type=float, default=None)
    m.add_argument("--method", choices=["exact", "montecarlo"], default="exact")
    m.add_argument("--steps", type=int, default=200)
    m.add_argument("--trials", type=int, default=100_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--out", default=None)
    m.set_defaults(func=cmd_mix)

    c = sub.add_parser("count", help="exact counting calculators")
    c.add_argument("--tableaus", type=int, nargs=2, metavar=("N", "M"))
    c.add_argument("--codes", type=int, nargs=2, metavar=("N", "K"))
    c.add_argument("--sparse", type=int, nargs=2, metavar=("N", "D"))
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_count)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        sys.stderr.write(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n"
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
