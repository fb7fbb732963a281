"""Print the residual monodromy classification for N = n+1, p = 2.

    python3 scripts/md_table.py --n-max 14
"""

import argparse
import json
import time

from dworklab.dwork import DworkParams, classify_md


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=14)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--N-offset", type=int, default=1, help="use N = n + offset (odd)")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()
    for n in range(2, args.n_max + 1, 2):
        N = n + args.N_offset
        if N % 2 == 0 or N % args.p == 0:
            continue
        t0 = time.perf_counter()
        res = classify_md(DworkParams(n, N, args.p))
        dt = time.perf_counter() - t0
        if args.json:
            print(json.dumps({**res.as_dict(), "seconds": round(dt, 3)}))
        else:
            print(f"n={n:2d} N={N:2d}  {res.verdict:10s} |G|={res.order:<24d} "
                  f"form={res.form_type:9s} {dt:6.2f}s")


if __name__ == "__main__":
    main()
