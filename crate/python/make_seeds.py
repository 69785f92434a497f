"""Non-certified collocation runs producing the sampled seed profiles in configs/seeds.

The proofs only use these files as initial guesses for Newton.
"""

import argparse
import json
from pathlib import Path

import numpy as np
from scipy.integrate import solve_bvp


def swift_hohenberg(r_out, r_max=80.0, step=0.02):
    b1, b2, b3, b4 = -0.6, np.sqrt(6.0), -0.1, 1.0

    def rhs(r, y):
        u1, p1, u2, p2 = y
        return np.vstack([p1, -b4 * u1 + u2, p2, -b4 * u2 + b1 * u1 + b2 * u1**2 + b3 * u1**3])

    def bc(a, b):
        return np.array([a[1], a[3], b[0], b[2]])

    sing = np.zeros((4, 4))
    sing[1, 1] = sing[3, 3] = -1.0
    r = np.linspace(0.0, r_max, 2000)
    # ring guess: oscillation under a Gaussian envelope centred at the origin
    u = 1.5 * np.exp(-((r / 6.0) ** 2)) * np.cos(r)
    up = np.gradient(u, r)
    u2 = b4 * u + np.gradient(up, r) + up / np.maximum(r, 1e-3)
    guess = np.vstack([u, up, u2, np.gradient(u2, r)])
    sol = solve_bvp(rhs, bc, r, guess, S=sing, tol=1e-6, max_nodes=200000)
    sol = solve_bvp(rhs, bc, sol.x, sol.y, S=sing, tol=1e-10, max_nodes=400000)
    if not sol.success:
        raise RuntimeError(sol.message)
    grid = np.arange(0.0, r_out + step / 2, step)
    y = sol.sol(grid)
    return [[float(g), float(a), float(b)] for g, a, b in zip(grid, y[0], y[2])]


def fitzhugh_nagumo(r_out, r_max=40.0, step=0.01):
    eps, b1, b2, b3, b4 = 0.3, 0.5, 0.5, 1.0, 3.0
    cs = -(5.0 + np.sqrt(145.0)) / 20.0

    def rhs(r, y):
        u1, p1, u2, p2, u3, p3 = y
        n1 = (u1 - u1**3) / eps**2 - (b1 + b2 * u2 + b3 * u3) / eps
        return np.vstack([p1, -n1, p2, -(u1 - u2), p3, -(u1 - u3) / b4**2])

    def bc(a, b):
        return np.array([a[1], a[3], a[5], b[0] - cs, b[2] - cs, b[4] - cs])

    sing = np.zeros((6, 6))
    sing[1, 1] = sing[3, 3] = sing[5, 5] = -1.0
    r = np.linspace(0.0, r_max, 4000)
    front = 0.5 * (1.0 - np.tanh((r - 3.0) / (np.sqrt(2.0) * eps)))
    u1 = cs + (1.0 - cs) * front
    u2 = cs + 0.8 * (1.0 - cs) * front
    u3 = cs + 0.4 * (1.0 - cs) * np.exp(-((r / 8.0) ** 2))
    guess = np.vstack([u1, np.gradient(u1, r), u2, np.gradient(u2, r), u3, np.gradient(u3, r)])
    sol = solve_bvp(rhs, bc, r, guess, S=sing, tol=1e-6, max_nodes=400000)
    sol = solve_bvp(rhs, bc, sol.x, sol.y, S=sing, tol=1e-10, max_nodes=800000)
    if not sol.success:
        raise RuntimeError(sol.message)
    grid = np.arange(0.0, r_out + step / 2, step)
    y = sol.sol(grid)
    return [[float(g), float(a), float(b), float(c)] for g, a, b, c in zip(grid, y[0], y[2], y[4])]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "configs" / "seeds")
    ap.add_argument("--sh-r0", type=float, default=42.0)
    ap.add_argument("--fn-r0", type=float, default=26.0)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name, rows in [
        ("sh_ring.json", swift_hohenberg(args.sh_r0)),
        ("fhn3_spot.json", fitzhugh_nagumo(args.fn_r0)),
    ]:
        (args.out / name).write_text(json.dumps(rows))
        print(f"{name}: {len(rows)} samples, u(0) = {rows[0][1:]}, u(r0) = {rows[-1][1:]}")


if __name__ == "__main__":
    main()
