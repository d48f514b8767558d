"""Command-line entry point.

Subcommands: lattice, decode, simulate, rk, enumerate, bound, threshold,
plotdata.  Options may come from flags or a simple key=value config file
(flags win).  Every output directory gets a manifest.json echoing the
full configuration and seed, from which the run can be reproduced
bit-for-bit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .combinatorics import (
    ResourceCapExceeded,
    asymptotic_threshold,
    bound_AdFk,
    bound_ratio,
    count_AdF,
    threshold_trace,
)
from .decoder import matching_to_correction
from .lattice import COLOUR_INDEX, COLOUR_NAMES, build_lattice, dump_lattice
from .matcher import OracleTooLarge, decode_match
from .montecarlo import SimConfig, estimate_rk, sweep
from .noise import DetectionEvents
from .syndrome_graph import build_hypergraph


def _ints(text):
    return [int(x) for x in text.split(",") if x != ""]


def _floats(text):
    return [float(x) for x in text.split(",") if x != ""]


def read_syndrome_file(path):
    """Parse `e <plaq> <round> <colour>` / `m <plaq> <round> <count>`."""
    events = []
    meta = {}
    n_rounds = 1
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0] == "#":
                continue
            if parts[0] == "e":
                pid, rnd = int(parts[1]), int(parts[2])
                colour = COLOUR_INDEX[parts[3]] if parts[3] in COLOUR_INDEX \
                    else int(parts[3])
                events.append((pid, rnd, colour))
                n_rounds = max(n_rounds, rnd + 1)
            elif parts[0] == "m":
                pid, rnd, cnt = int(parts[1]), int(parts[2]), int(parts[3])
                meta[(pid, rnd)] = cnt
                n_rounds = max(n_rounds, rnd + 1)
            else:
                raise ValueError("bad syndrome line: %r" % line.rstrip())
    return DetectionEvents(events=events, toggle_meta=meta,
                           n_rounds=n_rounds)


def write_syndrome_file(path, events):
    with open(path, "w") as fh:
        for (pid, rnd, colour) in events.events:
            fh.write("e %d %d %s\n" % (pid, rnd, COLOUR_NAMES[colour]))
        for (pid, rnd), cnt in sorted(events.toggle_meta.items()):
            fh.write("m %d %d %d\n" % (pid, rnd, cnt))


def _manifest(outdir, subcommand, config):
    os.makedirs(outdir, exist_ok=True)
    body = {
        "subcommand": subcommand,
        "config": config,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    with open(os.path.join(outdir, "manifest.json"), "w") as fh:
        json.dump(body, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_lattice(args):
    lat = build_lattice(args.d)
    text = dump_lattice(lat)
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_decode(args):
    lat = build_lattice(args.d)
    events = read_syndrome_file(args.syndrome)
    temporal = events.n_rounds > 1
    h = build_hypergraph(events, lat, temporal=temporal)
    out = decode_match(h, trials_per_variant=args.trials, seed=args.seed)
    corr = matching_to_correction(out, h)
    final_round = max((r for (_, r, _) in events.events), default=0)
    for q in corr.qubits():
        print("c %d %d" % (q, final_round))
    print("W_mimic %d" % out.w_mimic)
    print("W_trial %d" % out.w_trial)
    print("certificate %d" % (1 if out.certificate else 0))
    return 0


def cmd_simulate(args):
    configs = []
    for d in args.d:
        for p0 in args.p:
            configs.append(SimConfig(d=d, p0=p0, mode=args.mode,
                                     instances=args.instances,
                                     max_rounds=args.max_rounds,
                                     seed=args.seed,
                                     trials_per_variant=args.trials))
    res = sweep(configs, workers=args.workers)
    os.makedirs(args.out, exist_ok=True)
    by_curve = {}
    for pt in res.points:
        by_curve.setdefault((pt.d, pt.mode), []).append(pt)
    for (d, mode), pts in sorted(by_curve.items()):
        path = os.path.join(args.out, "curve_d%d_%s.csv" % (d, mode))
        with open(path, "w") as fh:
            fh.write("d,p0,mode,instances,mean_rounds,stderr,censored\n")
            for pt in sorted(pts, key=lambda x: x.p0):
                fh.write("%d,%g,%s,%d,%g,%g,%d\n"
                         % (pt.d, pt.p0, pt.mode, pt.instances,
                            pt.mean_rounds, pt.stderr, pt.censored))
        ratepath = os.path.join(args.out, "rate_d%d_%s.csv" % (d, mode))
        with open(ratepath, "w") as fh:
            fh.write("d,p0,mode,failures,total_rounds,rate,rate_err\n")
            for pt in sorted(pts, key=lambda x: x.p0):
                fh.write("%d,%g,%s,%d,%d,%g,%g\n"
                         % (pt.d, pt.p0, pt.mode, pt.failures,
                            pt.total_rounds, pt.rate, pt.rate_err))
    _manifest(args.out, "simulate", {
        "d": args.d, "p": args.p, "mode": args.mode,
        "instances": args.instances, "max_rounds": args.max_rounds,
        "seed": args.seed, "trials": args.trials, "workers": args.workers,
    })
    return 0


def cmd_rk(args):
    r, err = estimate_rk(args.d, args.k, args.samples, seed=args.seed,
                         decoder=args.decoder, trials_per_variant=args.trials)
    print("r_%d %.6f stderr %.6f" % (args.k, r, err))
    return 0


def cmd_enumerate(args):
    lat = build_lattice(args.d)
    try:
        n = count_AdF(lat) if args.maxlen is None else None
        if n is None:
            from .combinatorics import enumerate_logical_operators
            ops = enumerate_logical_operators(lat, args.maxlen)
            print("operators %d" % len(ops))
            n = count_AdF(lat)
    except ResourceCapExceeded as exc:
        print("resource cap exceeded: %s" % exc, file=sys.stderr)
        return 1
    print("AdF %d" % n)
    if args.out:
        with open(args.out, "a") as fh:
            fh.write("%d,%d\n" % (args.d, n))
    return 0


def cmd_bound(args):
    rows = []
    for d in args.d:
        for k in range(0, args.kmax + 1):
            plain = bound_AdFk(d, k, lam=args.lam, clamped=False)
            clamp = bound_AdFk(d, k, lam=args.lam, clamped=True)
            rows.append((d, k, args.lam, plain, clamp))
    text = "d,k,lambda,bound,clamped\n" + "\n".join(
        "%d,%d,%d,%d,%d" % r for r in rows) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_threshold(args):
    print(threshold_trace())
    print(float(asymptotic_threshold()))
    if args.ratio_check:
        for d in (11, 51, 201, 801):
            print("ratio d=%d at p_th: %.6f" % (d, bound_ratio(d, 0.0625)))
    return 0


def cmd_plotdata(args):
    import csv as _csv
    os.makedirs(args.out, exist_ok=True)
    made = []
    for name in sorted(os.listdir(args.inp)):
        if not (name.startswith("rate_") and name.endswith(".csv")):
            continue
        rows = []
        with open(os.path.join(args.inp, name)) as fh:
            for row in _csv.DictReader(fh):
                rate = float(row["rate"])
                err = float(row["rate_err"])
                life = float("inf") if rate == 0 else 1.0 / rate
                life_err = float("nan") if rate == 0 else err / rate ** 2
                rows.append((float(row["p0"]), life, life_err))
        outname = name.replace("rate_", "lifetime_")
        with open(os.path.join(args.out, outname), "w") as fh:
            fh.write("p0,lifetime,lifetime_err\n")
            for p0, life, err in sorted(rows):
                fh.write("%g,%g,%g\n" % (p0, life, err))
        made.append(outname)
    _manifest(args.out, "plotdata", {"in": args.inp, "files": made})
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="colourcode",
                                 description=__doc__.splitlines()[0])
    ap.add_argument("--config", help="key=value file; flags take precedence")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("lattice", help="build and dump a lattice")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--dump")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("decode", help="decode a syndrome dump")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--syndrome", required=True)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="memory-lifetime Monte Carlo")
    p.add_argument("--d", type=_ints, required=True)
    p.add_argument("--p", type=_floats, required=True)
    p.add_argument("--mode", choices=("ideal", "circuit"), default="ideal")
    p.add_argument("--instances", type=int, default=10000)
    p.add_argument("--max-rounds", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rk", help="failure-ratio sampling")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decoder", choices=("approx", "oracle"),
                   default="approx")
    p.add_argument("--trials", type=int, default=25)
    p.set_defaults(func=cmd_rk)

    p = sub.add_parser("enumerate", help="exact dangerous-syndrome count")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--maxlen", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("bound", help="analytic A_d(F+k) bounds")
    p.add_argument("--d", type=_ints, required=True)
    p.add_argument("--lambda", dest="lam", type=int, default=0)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--clamped", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("threshold", help="analytic asymptotic threshold")
    p.add_argument("--ratio-check", action="store_true")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("plotdata", help="per-curve files for plotting")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plotdata)
    return ap


def _apply_config_file(ap, argv):
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    path = argv[i + 1]
    overrides = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            overrides[key.strip()] = val.strip()
    # config values become defaults; explicit flags still win
    rest = argv[:i] + argv[i + 2:]
    extra = []
    for key, val in overrides.items():
        flag = "--" + key.replace("_", "-")
        if flag not in rest:
            extra.extend([flag, val])
    return rest + extra


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        argv = _apply_config_file(ap, argv)
    except OSError as exc:
        print("cannot read config: %s" % exc, file=sys.stderr)
        return 2
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (ResourceCapExceeded, OracleTooLarge) as exc:
        print("resource cap: %s" % exc, file=sys.stderr)
        return 1
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
