"""Structure-preserving stochastic simulation of free rigid-body dynamics
with double-bracket friction and multiplicative noise on the momentum
sphere: geometric integrators, invariant-measure diagnostics, Lyapunov
exponent estimation, and deterministic parallel ensembles.
"""

from .dynamics import (
    InertiaTensor,
    NoiseModel,
    SimParams,
    casimir,
    drift_deterministic,
    drift_dissipative,
    energy,
    energy_decay_rate,
    generator_apply,
    gibbs_log_density,
    ito_correction,
    omega,
    partition_function,
    sphere_integral,
)
from .ensemble import (
    DistributionDistance,
    Ensemble,
    SphereHistogram,
    advance,
    compare,
    histogram,
    init_gibbs,
    init_uniform,
    merge_histograms,
    read_particles,
    snapshot_export,
    step_positions,
)
from .integrators import (
    State,
    TangentState,
    step_euler_maruyama,
    step_split,
    step_tangent,
)
from .lyapunov import LyapunovEstimate, estimate_top, sweep, write_sweep_csv
from .so3 import cross, pairing, rotate, sample_uniform_sphere

__version__ = "0.1.0"

__all__ = [
    "InertiaTensor",
    "NoiseModel",
    "SimParams",
    "omega",
    "energy",
    "casimir",
    "drift_deterministic",
    "drift_dissipative",
    "ito_correction",
    "energy_decay_rate",
    "gibbs_log_density",
    "partition_function",
    "generator_apply",
    "sphere_integral",
    "State",
    "TangentState",
    "step_split",
    "step_euler_maruyama",
    "step_tangent",
    "Ensemble",
    "SphereHistogram",
    "DistributionDistance",
    "init_uniform",
    "init_gibbs",
    "advance",
    "step_positions",
    "histogram",
    "merge_histograms",
    "compare",
    "snapshot_export",
    "read_particles",
    "LyapunovEstimate",
    "estimate_top",
    "sweep",
    "write_sweep_csv",
    "cross",
    "pairing",
    "rotate",
    "sample_uniform_sphere",
    "__version__",
]
