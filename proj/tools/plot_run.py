#!/usr/bin/env python3
"""Quick look at pllsim CSV output.

    plot_run.py trajectory.csv [out.png]   g(t) and the (theta_delta, x) path
    plot_run.py basin.csv [out.png]        lock map
"""
import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__)
        return 2
    path = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else path.rsplit(".", 1)[0] + ".png"

    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        print("empty file")
        return 4

    if "verdict" in rows[0]:
        colors = {"locked": "tab:green", "not_locked": "tab:red", "undecided": "tab:orange"}
        fig, ax = plt.subplots(figsize=(6, 5))
        for verdict, color in colors.items():
            xs = [float(r["theta0"]) for r in rows if r["verdict"] == verdict]
            ys = [float(r["x0"]) for r in rows if r["verdict"] == verdict]
            ax.scatter(xs, ys, s=14, c=color, label=verdict)
        ax.set_xlabel("theta0 [rad]")
        ax.set_ylabel("x0")
        ax.legend()
    elif "t" in rows[0]:
        t = [float(r["t"]) for r in rows]
        g = [float(r["g"]) for r in rows]
        th = [float(r["theta_delta"]) for r in rows]
        x = [float(r["x"]) for r in rows]
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
        ax1.plot(t, g, lw=0.7)
        ax1.set_xlabel("t [s]")
        ax1.set_ylabel("loop filter output g(t)")
        ax2.plot(th, x, lw=0.7)
        ax2.set_xlabel("theta_delta [rad]")
        ax2.set_ylabel("x")
    else:  # portrait file: theta_delta_mod,x
        th = [float(r["theta_delta_mod"]) for r in rows]
        x = [float(r["x"]) for r in rows]
        fig, ax = plt.subplots(figsize=(6, 5))
        ax.plot(th, x, ".", ms=1.5)
        ax.set_xlabel("theta_delta mod 2pi [rad]")
        ax.set_ylabel("x")

    fig.tight_layout()
    fig.savefig(out, dpi=130)
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
