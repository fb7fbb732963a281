"""Command line: classification runs, identity sweeps and point counts.

Every record is one JSON object per line carrying "schema": "dworklab/1";
``--format csv`` projects the same fields.  Exit codes: 0 success,
2 unresolved verdict, 3 resource bound, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import count as C
from . import verify as V
from .dwork import DworkParams, classify_md
from .ff import FieldTooLarge, field_of_order, prime_power
from .grp import BoundViolated, DegreeBoundExceeded

SCHEMA = "dworklab/1"
EXIT_OK, EXIT_UNRESOLVED, EXIT_RESOURCE, EXIT_USAGE = 0, 2, 3, 64

IDENTITIES = ("reci", "quartic-parity", "appendixC", "dtotal", "isogeny", "discriminants",
              "theta-image", "decomposition", "galois")
VARIETIES = ("zt", "quintic", "hyperD", "hyperC", "quartic", "superA", "superB", "trinomial")


class UsageError(Exception):
    pass


class Emitter:
    """Buffers records and writes them as JSON lines or CSV."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout
        self.rows: list[dict] = []

    def emit(self, rec: dict):
        rec = {"schema": SCHEMA, **rec}
        if self.fmt == "json":
            self.stream.write(json.dumps(rec, sort_keys=False) + "\n")
        else:
            self.rows.append(rec)

    def close(self):
        if self.fmt != "csv" or not self.rows:
            return
        keys: list[str] = []
        for r in self.rows:
            keys += [k for k in r if k not in keys]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
        self.stream.write(buf.getvalue())


def _t_arg(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("DWORKLAB_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dworklab", description=__doc__.splitlines()[0])
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: $DWORKLAB_THREADS or 1)")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify the residual monodromy group")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--N", type=int, default=None, help="degree (default n+1)")
    c.add_argument("--p", type=int, default=2)
    c.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="sweep a trace identity over prime powers")
    v.add_argument("identity")
    v.add_argument("--n", type=int, default=4)
    v.add_argument("--t", type=_t_arg, default=Fraction(2))
    v.add_argument("--q-min", type=int, default=2)
    v.add_argument("--q-max", type=int, default=100, help="exclusive upper end of the q range")
    v.add_argument("--variant", choices=("t3", "t5", "both"), default="both")
    v.add_argument("--poly", choices=("f_t", "Q_t", "Psi"), default="f_t")
    v.add_argument("--prime-budget", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)

    k = sub.add_parser("count", help="count points of one variety over F_q")
    k.add_argument("variety")
    k.add_argument("--n", type=int, default=4)
    k.add_argument("--t", type=_t_arg, default=Fraction(2))
    k.add_argument("--q", type=int, required=True)
    return ap


def cmd_classify(args, out: Emitter) -> int:
    N = args.N if args.N is not None else args.n + 1
    try:
        params = DworkParams(args.n, N, args.p)
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = classify_md(params, seed=args.seed)
    out.emit({"kind": "classify", **res.as_dict()})
    return EXIT_OK if res.resolved else EXIT_UNRESOLVED


def _q_range(args) -> list[int]:
    if args.q_max <= args.q_min:
        raise UsageError("--q-max must exceed --q-min")
    return V.prime_powers(args.q_min, args.q_max)


def cmd_verify(args, out: Emitter) -> int:
    ident = args.identity
    if ident not in IDENTITIES:
        raise UsageError(f"unknown identity {ident!r}; choose from {', '.join(IDENTITIES)}")
    th = args.threads
    t = args.t
    extra: dict | None = None
    if ident == "galois":
        ev = V.galois_sample(args.poly, t, args.prime_budget, n=args.n)
        out.emit({"kind": "galois", **ev.as_dict()})
        return EXIT_OK if ev.verdict != "inconsistent" else 1
    if ident == "reci":
        try:
            reports = V.check_reci(args.n, t, _q_range(args), th)
        except ValueError as e:
            raise UsageError(str(e)) from None
    elif ident == "quartic-parity":
        try:
            reports = V.check_quartic_parity(t, _q_range(args), th)
        except ValueError as e:
            raise UsageError(str(e)) from None
    elif ident == "appendixC":
        reports = V.check_appendixC(t, _q_range(args), th)
    elif ident == "dtotal":
        reports = V.check_dtotal(t, _q_range(args), th)
    elif ident == "decomposition":
        reports = V.check_decomposition(t, _q_range(args), th)
    elif ident == "isogeny":
        reports = V.check_isogeny_AtBt(t, _q_range(args), args.variant, threads=th)
        extra = {"kind": "variant", "resolution": V.resolve_A_variant(reports)}
    elif ident == "discriminants":
        reports = V.check_discriminants()
    else:
        try:
            reports = [V.check_theta_image(args.n, seed=args.seed)]
        except ValueError as e:
            raise UsageError(str(e)) from None
    for r in reports:
        out.emit({"kind": "report", **r.as_dict()})
    if extra:
        out.emit(extra)
    tot = V.summarize(reports)
    out.emit({"kind": "summary", "identity": ident, **tot})
    return EXIT_OK if tot["fail"] == 0 else 1


def cmd_count(args, out: Emitter) -> int:
    if args.variety not in VARIETIES:
        raise UsageError(f"unknown variety {args.variety!r}; choose from {', '.join(VARIETIES)}")
    if prime_power(args.q) is None:
        raise UsageError(f"{args.q} is not a prime power")
    ctx = field_of_order(args.q)
    t, n = args.t, args.n
    var = args.variety
    if var == "zt":
        res = C.count_Zt(n, t, ctx)
    elif var == "trinomial":
        res = C.count_trinomial(n, t, ctx)
    elif var == "quintic":
        res = C.count_quintic_threefold(t, ctx)
    elif var == "hyperD":
        res = C.count_D(t, ctx)
    elif var == "hyperC":
        res = C.count_C(t, ctx)
    elif var == "quartic":
        res = C.count_plane_quartic(t, ctx)
    elif var == "superA":
        res = C.count_superelliptic(C.curve_A(t, "t5"), ctx, "superA", t)
    else:
        res = C.count_superelliptic(C.curve_B(t), ctx, "superB", t)
    out.emit({"kind": "count", **res.as_dict()})
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.threads is None:
        args.threads = _default_threads()
    if args.threads < 1:
        print("dworklab: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    out = Emitter(args.format)
    handler = {"classify": cmd_classify, "verify": cmd_verify, "count": cmd_count}[args.command]
    try:
        code = handler(args, out)
    except UsageError as e:
        print(f"dworklab: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (C.BudgetExceeded, DegreeBoundExceeded, BoundViolated, FieldTooLarge) as e:
        print(f"dworklab: resource bound: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    finally:
        out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
