"""Plot data for the scaling-function transform as a partial product.

Emits one CSV row per frequency sample: the partial product at each requested
truncation depth J, and for the two-tap lowpass also the closed-form value, so
the convergence of the product is visible directly in the plotted columns.

    python3 scripts/scaling_function_sweep.py --points 120 --depths 5 10 20 40
"""

import argparse
import csv
import sys

from wavefock.corpus import haar_bank
from wavefock.subdivision import fourier_product, haar_scaling_transform


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=120, help="frequency samples")
    ap.add_argument("--step", type=float, default=0.1)
    ap.add_argument("--depths", type=int, nargs="+", default=[5, 10, 20, 40])
    ap.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    args = ap.parse_args(argv)

    m0 = haar_bank().filters[0]
    fields = ["t"] + [f"abs_J{j}" for j in args.depths] + ["abs_exact", "error_Jmax"]
    deepest = max(args.depths)

    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    writer = csv.DictWriter(out, fieldnames=fields)
    writer.writeheader()
    worst = 0.0
    for k in range(1, args.points + 1):
        t = args.step * k
        row = {"t": f"{t:.6f}"}
        for j in args.depths:
            row[f"abs_J{j}"] = repr(abs(fourier_product(m0, 2, t, J=j)))
        exact = haar_scaling_transform(t)
        err = abs(fourier_product(m0, 2, t, J=deepest) - exact)
        worst = max(worst, err)
        row["abs_exact"] = repr(abs(exact))
        row["error_Jmax"] = repr(err)
        writer.writerow(row)
    if out is not sys.stdout:
        out.close()

    print(f"max |product - closed form| at J={deepest}: {worst:.3e}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
