"""Where does the noisy rigid body turn chaotic?

Scans the top Lyapunov exponent over noise amplitudes at fixed friction.
Pure dissipation is contracting; cranking the noise up pushes the
exponent through zero.  Writes a sweep CSV that stochrigid-viz renders as
a heatmap with the zero contour marked.

Takes a few minutes: each grid point is a long tangent-dynamics run.
"""

import os

from stochrigid import InertiaTensor, NoiseModel, SimParams, sweep, write_sweep_csv

base = SimParams(
    inertia=InertiaTensor(1.0, 2.0, 3.0),
    noise=NoiseModel(sigma=0.5),
    theta=0.5,
    dt=0.01,
    t_end=1.0,
    seed=1,
)

rows = sweep(
    base,
    sigmas=(0.0, 0.25, 0.5, 1.0, 1.5),
    thetas=(0.1, 0.3, 0.5, 1.0),
    t_total=400.0,
    burn_in=20.0,
    seeds=(1, 2),
)

for r in rows:
    flag = "chaotic" if r["lambda"] > 2 * r["stderr"] else ""
    print(
        f"sigma={r['sigma']:.2f} theta={r['theta']:.2f}: "
        f"lambda={r['lambda']:+.4f} +- {r['stderr']:.4f}  {flag}"
    )

outdir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(outdir, exist_ok=True)
path = os.path.join(outdir, "lyapunov_sweep.csv")
write_sweep_csv(rows, path)
print(f"\nwrote {path}; render with: stochrigid-viz --input {path} --output sweep.png")
