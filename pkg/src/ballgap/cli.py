"""Command-line interface: ``ballgap {volumes,moments,net,audit,sweep}``.

Exit status is 0 on success, 1 when a reported check fails, 2 on usage or
I/O errors.
"""

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
import warnings

from . import serialize
from .approx import NetConfig, build_qn, c_hat, greedy_net, hausdorff_gap, net_height_bound
from .audit import AuditReport, CSV_FIELDS, theorem1_audit, upper_bound_audit
from .ballmath import (
    ball_volume,
    ball_volume_upper,
    mc_orthant_moment,
    orthant_moment_cross,
    orthant_moment_power,
    orthant_moment_square,
    sphere_surface,
)
from .exceptions import BallgapError, RegimeViolation
from .hull import convex_hull, polytope_volume

log = logging.getLogger("ballgap")

HEADERS = {
    "volumes": ["d", "ball_volume", "sphere_surface", "volume_upper_bound", "bound_holds"],
    "moments": ["moment", "closed_form", "mc_value", "stderr", "z_score"],
    "net": ["d", "n_actual", "theta", "hausdorff", "net_bound", "passed"],
    "audit": ["audit"] + CSV_FIELDS,
    "sweep": ["d", "n", "gap", "c_hat", "lower", "upper", "passed"],
}

EPILOG = "CSV headers:\n" + "\n".join(f"  {k}: {','.join(v)}" for k, v in HEADERS.items())


class UsageError(Exception):
    pass


def _samples(text):
    value = int(float(text))
    if not 10_000 <= value <= 100_000_000:
        raise argparse.ArgumentTypeError("samples must lie in [1e4, 1e8]")
    return value


def _dim(text):
    value = int(text)
    if not 2 <= value <= 8:
        raise argparse.ArgumentTypeError("dimension must lie in [2, 8]")
    return value


def _dim_range(text):
    m = re.fullmatch(r"\s*(\d+)\s*(?:(?:\.\.|-|:)\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}; use e.g. 2..5")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) else lo
    if lo < 1 or hi > 100:
        raise argparse.ArgumentTypeError("dimensions must lie in [1, 100]")
    return range(lo, hi + 1)


def _n_list(text):
    try:
        values = [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not values:
        raise argparse.ArgumentTypeError("empty n list")
    return values


def emit(rows, header, fmt, out=None, meta=None):
    if fmt == "json":
        text = json.dumps({"metadata": meta or {}, "rows": rows}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_volumes(args):
    dims = args.dim
    if len(dims) == 0:
        raise UsageError("empty dimension range")
    rows = []
    for d in dims:
        v = ball_volume(d)
        ub = ball_volume_upper(d)
        rows.append(
            {"d": d, "ball_volume": v, "sphere_surface": sphere_surface(d),
             "volume_upper_bound": ub, "bound_holds": v <= ub}
        )
    emit(rows, HEADERS["volumes"], args.format, args.out, {"dims": [dims.start, dims.stop - 1]})
    return 0 if all(r["bound_holds"] for r in rows) else 1


def cmd_moments(args):
    d, k = args.dim, args.k
    if d < 1 or k < 0:
        raise UsageError("need dim >= 1 and k >= 0")
    rows = []

    def row(name, closed, est):
        rows.append({"moment": name, "closed_form": closed, "mc_value": est.value,
                     "stderr": est.stderr, "z_score": est.zscore(closed)})

    row(f"power_{k}", orthant_moment_power(d, k),
        mc_orthant_moment(d, "power", k, samples=args.samples, seed=args.seed))
    row("square", orthant_moment_square(d), mc_orthant_moment(d, "square", samples=args.samples, seed=args.seed))
    ok = all(abs(r["z_score"]) <= 3 for r in rows)
    residual = None
    if d >= 2:
        row("cross", orthant_moment_cross(d), mc_orthant_moment(d, "cross", samples=args.samples, seed=args.seed))
        p2 = orthant_moment_power(d, 2)
        residual = abs(p2 - orthant_moment_square(d) - (d * d - d) * orthant_moment_cross(d)) / p2
        rows.append({"moment": "identity_residual", "closed_form": residual, "mc_value": "", "stderr": "",
                     "z_score": ""})
        ok = ok and abs(rows[-2]["z_score"]) <= 3 and residual <= 1e-12
    emit(rows, HEADERS["moments"], args.format, args.out,
         {"d": d, "k": k, "samples": args.samples, "seed": args.seed})
    return 0 if ok else 1


def cmd_net(args):
    d = args.dim
    if args.n is None and args.theta is None:
        raise UsageError("give --n or --theta")
    if args.n is not None and args.n < 2 * d:
        raise UsageError(f"--n {args.n} is below 2d = {2 * d}")
    cfg = NetConfig(d=d, n=args.n, theta=None if args.n is not None else args.theta,
                    seed=args.seed, pool_size=args.pool_size)
    net = greedy_net(cfg)
    P = convex_hull(net.points, seed=args.seed)
    n = len(net.points)
    d_h = hausdorff_gap(P)
    bound = net_height_bound(d, n)
    if args.polytope_out:
        serialize.save(P, args.polytope_out)
    row = {"d": d, "n_actual": n, "theta": net.theta, "hausdorff": d_h, "net_bound": bound,
           "passed": d_h <= bound}
    emit([row], HEADERS["net"], args.format, args.out, {"seed": args.seed, "pool_size": cfg.pool})
    return 0 if row["passed"] else 1


def _audit_rows(reports):
    rows = []
    for rep in reports:
        for c in rep.checks:
            r = {k: getattr(c, k) for k in CSV_FIELDS}
            r["audit"] = rep.kind
            rows.append(r)
    return rows


def cmd_audit(args):
    if args.polytope:
        try:
            P = serialize.load(args.polytope)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read polytope {args.polytope}: {exc}") from exc
        n = args.n if args.n is not None else P.n_vertices
    else:
        if args.dim is None or args.n is None:
            raise UsageError("give --polytope FILE or both --dim and --n")
        P = build_qn(args.dim, args.n, seed=args.seed, pool_size=args.pool_size)
        n = args.n
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RegimeViolation)
        t1 = theorem1_audit(P, n, samples=args.facet_samples, seed=args.seed, effective=args.effective_n)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    ub = upper_bound_audit(P, n, samples=args.samples, seed=args.seed, facet_samples=args.facet_samples)
    reports = [t1, ub]
    in_regime = t1.metadata["in_regime"]
    if args.format == "json":
        doc = {"passed": all(r.passed for r in reports), "in_regime": in_regime,
               "audits": [r.to_dict() for r in reports]}
        text = json.dumps(doc, indent=2) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        emit(_audit_rows(reports), HEADERS["audit"], "csv", args.out)
    for r in reports:
        print(r.summary(), file=sys.stderr)
    failing = [r for r in reports if not r.passed and (r.kind != "theorem1" or in_regime)]
    return 1 if failing else 0


def cmd_sweep(args):
    d = args.dim
    rows = []
    lower, upper = 2.0**-36, 64.0 / 7.0 * math.pi
    for n in args.n_list:
        if n < 2 * d:
            raise UsageError(f"n={n} is below 2d = {2 * d}")
        P = build_qn(d, n, seed=args.seed, pool_size=args.pool_size)
        gap = ball_volume(d) - polytope_volume(P)
        ch = c_hat(gap, d, n)
        rows.append({"d": d, "n": n, "gap": gap, "c_hat": ch, "lower": lower, "upper": upper,
                     "passed": lower <= ch <= upper})
    emit(rows, HEADERS["sweep"], args.format, args.out, {"seed": args.seed})
    return 0 if all(r["passed"] for r in rows) else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="ballgap",
        description="Inscribed polytopes of the unit ball: volumes, nets and bound audits.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, samples=True):
        sp.add_argument("--seed", type=int, default=1)
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--out", metavar="PATH")
        if samples:
            sp.add_argument("--samples", type=_samples, default=1_000_000)

    sp = sub.add_parser("volumes", help="ball volumes and the Stirling-type upper bound")
    sp.add_argument("--dim", type=_dim_range, default=range(2, 11), help="range such as 2..10")
    common(sp, samples=False)
    sp.set_defaults(func=cmd_volumes)

    sp = sub.add_parser("moments", help="orthant Gaussian moments, closed form vs Monte Carlo")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--k", type=int, default=0)
    common(sp)
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("net", help="build a net polytope and write it as JSON")
    sp.add_argument("--dim", type=_dim, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--pool-size", type=int)
    sp.add_argument("--polytope-out", metavar="PATH", help="where to write the polytope JSON")
    common(sp, samples=False)
    sp.set_defaults(func=cmd_net)

    sp = sub.add_parser("audit", help="run the lower- and upper-bound audits")
    sp.add_argument("--polytope", metavar="FILE")
    sp.add_argument("--dim", type=_dim)
    sp.add_argument("--n", type=int)
    sp.add_argument("--pool-size", type=int)
    sp.add_argument("--effective-n", choices=["n", "2n"], default="2n")
    sp.add_argument("--facet-samples", type=_samples, default=10_000)
    common(sp)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("sweep", help="normalized volume gap over a list of vertex counts")
    sp.add_argument("--dim", type=_dim, required=True)
    sp.add_argument("--n-list", type=_n_list, required=True)
    sp.add_argument("--pool-size", type=int)
    common(sp, samples=False)
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, BallgapError, OSError) as exc:
        print(f"ballgap {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
