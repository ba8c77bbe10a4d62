"""Compare the closed-form curvature with holonomy around small loops.

The loop side eps is swept; the error falls off faster than eps^2.
"""

import argparse
import sys

import numpy as np

from nkcp3.config import seed
from nkcp3.nk_structure import holonomy_curvature, random_horizontal, random_point, riemann_at


def main():
    ap = argparse.ArgumentParser(description="Curvature from parallel transport around small loops.")
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--eps", type=float, nargs="+", default=[1.6e-2, 8e-3, 4e-3, 2e-3])
    ap.add_argument("--seed", type=int, default=seed())
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    cases = []
    for _ in range(args.samples):
        p = random_point(rng)
        x, y, z = (a / np.linalg.norm(a) for a in (random_horizontal(rng, p) for _ in range(3)))
        cases.append((p, x, y, z, riemann_at(p, x, y, z)))
    print(f"{'eps':>9} {'max error':>11}")
    for eps in args.eps:
        err = max(np.abs(holonomy_curvature(p, x, y, z, eps=eps) - R).max() for p, x, y, z, R in cases)
        print(f"{eps:9.1e} {err:11.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
