"""Relaxation of a particle ensemble onto its stationary law.

Without friction the uniform measure on the sphere is invariant; with
double-bracket friction the ensemble settles onto the Gibbs density
exp(-2 theta h / sigma^2) / Z instead.  The script advances 20,000
particles and prints the L1 distance to the predicted law as it decays
toward the sampling floor.
"""

from stochrigid import (
    InertiaTensor,
    NoiseModel,
    SimParams,
    advance,
    compare,
    histogram,
    init_uniform,
)

params = SimParams(
    inertia=InertiaTensor(1.0, 2.0, 3.0),
    noise=NoiseModel(sigma=0.5),
    theta=0.5,
    dt=0.01,
    t_end=40.0,
    seed=7,
)

ens = init_uniform(20_000, 1.0, 7)
print("t      L1-to-Gibbs   KL")
for t in (0.0, 2.0, 5.0, 10.0, 20.0, 40.0):
    ens = advance(ens, t, params)
    d = compare(histogram(ens, 13), params)
    print(f"{t:5.1f}  {d.l1:10.4f}  {d.kl:8.5f}")

# the uniform start is far from Gibbs (L1 ~ 0.29); by t ~ 20 the distance
# reaches the N = 2e4 sampling floor of roughly 0.08
