"""Sweep the trace identities over a range of q and print totals.

    python3 scripts/sweep_identities.py --q-max 200 --threads 4
"""

import argparse
import os
from fractions import Fraction

from dworklab import verify as V


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q-max", type=int, default=200)
    ap.add_argument("--threads", type=int, default=int(os.environ.get("DWORKLAB_THREADS", "1")))
    ap.add_argument("--verbose", action="store_true", help="print every failing report")
    args = ap.parse_args()
    qs = V.prime_powers(2, args.q_max)
    runs = []
    for t in (0, 2, 3, -1, Fraction(3, 2)):
        runs.append((f"reci n=4 t={t}", V.check_reci(4, t, qs, args.threads)))
    for t in (2, 3):
        runs.append((f"quartic-parity t={t}", V.check_quartic_parity(t, qs, args.threads)))
    for t in (0, 2, 3):
        runs.append((f"appendixC t={t}", V.check_appendixC(t, qs, args.threads)))
    for t in (2, 3):
        runs.append((f"dtotal t={t}", V.check_dtotal(t, qs, args.threads)))
        runs.append((f"decomposition t={t}", V.check_decomposition(t, qs, args.threads)))
        iso = V.check_isogeny_AtBt(t, qs, threads=args.threads)
        runs.append((f"isogeny t={t} {V.resolve_A_variant(iso)}", iso))
    runs.append(("discriminants", V.check_discriminants()))
    for name, reps in runs:
        s = V.summarize(reps)
        print(f"{name:45s} pass={s['pass']:4d} skip={s['skip']:4d} fail={s['fail']:4d}")
        if args.verbose:
            for r in reps:
                if r.passed is False:
                    print(f"    q={r.q}: {r.lhs} != {r.rhs} (mod {r.modulus or 'exact'})")


if __name__ == "__main__":
    main()
