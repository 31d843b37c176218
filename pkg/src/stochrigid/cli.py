"""Command-line front end.

Four subcommands produce every file artifact this package knows how to make:

    simulate        one trajectory -> trajectory.csv
    ensemble        particle cloud with snapshot exports -> particle/histogram CSVs
    gibbs-check     long-run ensemble vs analytic stationary law -> report.csv
    lyapunov-sweep  exponent over a (sigma, theta) grid -> sweep.csv

Runs are configured by a flat key = value file (see _SCHEMA for the full key
list); `--set key=value` overrides individual entries.  Every key is
validated up front with an error naming the key, unknown keys are rejected,
and nothing is written until the config is fully validated.  Each run
writes a manifest.txt into the output directory recording the command, the
produced files, the complete effective config, and its hash.  Outputs land
only inside output_dir, and all CSVs are byte-deterministic functions of
the config.

Exit codes: 0 success (and gate passed), 1 quantitative gate failure,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import math
import os
import sys

import numpy as np

from . import rng as _rng
from .dynamics import InertiaTensor, NoiseModel, SimParams
from .ensemble import (
    _fmt,
    _write_atomic,
    advance,
    compare,
    histogram,
    init_uniform,
    snapshot_export,
)
from .integrators import _Plan, _split_kernel
from .lyapunov import sweep, write_sweep_csv

__all__ = ["main", "ConfigError"]


class ConfigError(Exception):
    """Invalid usage or configuration; maps to exit code 2."""


def _p_float(key, s):
    try:
        v = float(s)
    except ValueError:
        raise ConfigError(f"config key '{key}': not a number: {s!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"config key '{key}': must be finite, got {s!r}")
    return v


def _p_pos_float(key, s):
    v = _p_float(key, s)
    if v <= 0.0:
        raise ConfigError(f"config key '{key}': must be > 0, got {s!r}")
    return v


def _p_nonneg_float(key, s):
    v = _p_float(key, s)
    if v < 0.0:
        raise ConfigError(f"config key '{key}': must be >= 0, got {s!r}")
    return v


def _p_int(key, s):
    try:
        return int(s, 0)
    except ValueError:
        raise ConfigError(f"config key '{key}': not an integer: {s!r}") from None


def _p_pos_int(key, s):
    v = _p_int(key, s)
    if v < 1:
        raise ConfigError(f"config key '{key}': must be >= 1, got {s!r}")
    return v


def _p_bands(key, s):
    v = _p_int(key, s)
    if v < 4:
        raise ConfigError(f"config key '{key}': must be >= 4, got {s!r}")
    return v


def _p_blocks(key, s):
    v = _p_int(key, s)
    if v < 2:
        raise ConfigError(f"config key '{key}': must be >= 2, got {s!r}")
    return v


def _p_seed(key, s):
    v = _p_int(key, s)
    try:
        return _rng.check_seed(v)
    except ValueError as e:
        raise ConfigError(f"config key '{key}': {e}") from None


def _p_bool(key, s):
    low = s.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise ConfigError(f"config key '{key}': expected true/false, got {s!r}")


def _p_str(key, s):
    if not s:
        raise ConfigError(f"config key '{key}': must not be empty")
    return s


def _split_csv(key, s):
    parts = [p.strip() for p in s.split(",")]
    if any(not p for p in parts):
        raise ConfigError(f"config key '{key}': empty element in list {s!r}")
    return parts


def _p_floats(key, s):
    return tuple(_p_float(key, p) for p in _split_csv(key, s))


def _p_nonneg_floats(key, s):
    return tuple(_p_nonneg_float(key, p) for p in _split_csv(key, s))


def _p_seeds(key, s):
    return tuple(_p_seed(key, p) for p in _split_csv(key, s))


def _p_inertia(key, s):
    vals = _p_floats(key, s)
    if len(vals) != 3:
        raise ConfigError(f"config key '{key}': expected three values I1,I2,I3")
    if any(v <= 0.0 for v in vals):
        raise ConfigError(f"config key '{key}': moments must be > 0, got {s!r}")
    return vals


def _p_pi0(key, s):
    vals = _p_floats(key, s)
    if len(vals) != 3:
        raise ConfigError(f"config key '{key}': expected three values px,py,pz")
    if vals == (0.0, 0.0, 0.0):
        raise ConfigError(f"config key '{key}': must be nonzero")
    return vals


# The complete configuration vocabulary.  A key may be present in any
# command's config file; each command reads the subset it needs.
_SCHEMA = {
    "inertia": _p_inertia,  # I1,I2,I3 principal moments
    "sigma": _p_nonneg_float,  # noise amplitude
    "theta": _p_nonneg_float,  # friction coefficient
    "dt": _p_pos_float,  # step size
    "t_end": _p_pos_float,  # simulated horizon
    "seed": _p_seed,  # master RNG seed (64-bit unsigned)
    "n_particles": _p_pos_int,  # ensemble size
    "n_bands": _p_bands,  # histogram latitude bands (default 13)
    "snapshot_times": _p_floats,  # comma list; default: t_end only
    "output_dir": _p_str,  # all outputs land here
    "l1_gate": _p_pos_float,  # gibbs-check pass threshold (default 0.05)
    "workers": _p_pos_int,  # thread count (never affects values)
    "radius": _p_pos_float,  # momentum sphere radius (default 1)
    "pi0": _p_pi0,  # initial momentum for simulate / sweeps
    "stride": _p_pos_int,  # trajectory sampling stride (default 1)
    "common_noise": _p_bool,  # one shared noise path for the whole ensemble
    "reference_theta": _p_nonneg_float,  # gibbs-check reference (default theta)
    "t_total": _p_pos_float,  # exponent estimation horizon
    "burn_in": _p_nonneg_float,  # exponent burn-in time (default 10)
    "n_blocks": _p_blocks,  # stderr blocks (default 20)
    "sigmas": _p_nonneg_floats,  # sweep grid; default: sigma
    "thetas": _p_nonneg_floats,  # sweep grid; default: theta
    "seeds": _p_seeds,  # sweep seeds; default: seed
}


def _load_config(path: str, overrides) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file: {e}") from None
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key in raw:
            raise ConfigError(f"{path}:{lineno}: duplicate config key '{key}'")
        raw[key] = value
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        raw[key.strip()] = value.strip()
    cfg = {}
    for key, value in raw.items():
        parser = _SCHEMA.get(key)
        if parser is None:
            raise ConfigError(f"unknown config key '{key}'")
        cfg[key] = parser(key, value)
    return cfg


def _require(cfg: dict, command: str, keys) -> None:
    for k in keys:
        if k not in cfg:
            raise ConfigError(f"command '{command}' requires config key '{k}'")


def _canonical_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt(v)
    if isinstance(v, tuple):
        return ",".join(_canonical_value(x) for x in v)
    return str(v)


def _config_text(eff: dict) -> str:
    return "".join(f"{k} = {_canonical_value(eff[k])}\n" for k in sorted(eff))


def _write_manifest(outdir: str, command: str, eff: dict, files) -> str:
    text = _config_text(eff)
    digest = hashlib.sha256(text.encode()).hexdigest()

    def lines():
        yield f"command: {command}"
        yield f"config_sha256: {digest}"
        yield "files:"
        for f in files:
            yield f"  {f}"
        yield "config:"
        for line in text.splitlines():
            yield f"  {line}"

    path = os.path.join(outdir, "manifest.txt")
    _write_atomic(path, lines())
    return path


def _prepare_outdir(cfg: dict) -> str:
    outdir = cfg["output_dir"]
    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as e:
        raise ConfigError(f"config key 'output_dir': cannot create: {e}") from None
    return outdir


def _build_params(cfg: dict, t_end: float, snapshot_times=()) -> SimParams:
    try:
        return SimParams(
            inertia=InertiaTensor(*cfg["inertia"]),
            noise=NoiseModel(sigma=cfg["sigma"]),
            theta=cfg["theta"],
            dt=cfg["dt"],
            t_end=t_end,
            seed=cfg["seed"],
            snapshot_times=snapshot_times,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None


def cmd_simulate(cfg: dict) -> int:
    _require(
        cfg, "simulate", ["inertia", "sigma", "theta", "dt", "t_end", "seed", "output_dir", "pi0"]
    )
    stride = cfg.get("stride", 1)
    params = _build_params(cfg, cfg["t_end"])
    outdir = _prepare_outdir(cfg)
    n_steps = int(round(params.t_end / params.dt))
    if n_steps < 1:
        raise ConfigError("config key 't_end': shorter than one dt step")

    plan = _Plan(params)
    sqdt = math.sqrt(params.dt)
    inv1, inv2, inv3 = plan.inv1, plan.inv2, plan.inv3
    px, py, pz = cfg["pi0"]

    def row(k, px, py, pz):
        h = 0.5 * (px * px * inv1 + py * py * inv2 + pz * pz * inv3)
        cas = px * px + py * py + pz * pz
        return (
            f"{_fmt(k * params.dt)},{_fmt(px)},{_fmt(py)},{_fmt(pz)},"
            f"{_fmt(h)},{_fmt(cas)}"
        )

    rows = [row(0, px, py, pz)]
    chunk = 16384
    for k0 in range(0, n_steps, chunk):
        k1 = min(k0 + chunk, n_steps)
        if plan.noise:
            g = _rng.normals3(
                params.seed, _rng.PATH_NOISE, np.arange(k0, k1, dtype=np.uint64), 0
            )
            gx = (g[0] * sqdt).tolist()
            gy = (g[1] * sqdt).tolist()
            gz = (g[2] * sqdt).tolist()
        else:
            gx = gy = gz = [0.0] * (k1 - k0)
        for j in range(k1 - k0):
            px, py, pz = _split_kernel(px, py, pz, plan, gx[j], gy[j], gz[j])
            k = k0 + j + 1
            if k % stride == 0 or k == n_steps:
                rows.append(row(k, px, py, pz))

    path = os.path.join(outdir, "trajectory.csv")
    _write_atomic(path, iter(["t,px,py,pz,energy,casimir"] + rows))

    eff = {k: cfg[k] for k in ("inertia", "sigma", "theta", "dt", "t_end", "seed", "output_dir", "pi0")}
    eff["stride"] = stride
    _write_manifest(outdir, "simulate", eff, ["trajectory.csv"])
    return 0


def cmd_ensemble(cfg: dict) -> int:
    _require(
        cfg,
        "ensemble",
        ["inertia", "sigma", "theta", "dt", "t_end", "seed", "output_dir", "n_particles"],
    )
    radius = cfg.get("radius", 1.0)
    n_bands = cfg.get("n_bands", 13)
    workers = cfg.get("workers", os.cpu_count() or 1)
    common = cfg.get("common_noise", False)
    snaps = cfg.get("snapshot_times", (cfg["t_end"],))
    params = _build_params(cfg, cfg["t_end"], snapshot_times=snaps)
    outdir = _prepare_outdir(cfg)

    ens = init_uniform(cfg["n_particles"], radius, cfg["seed"])
    files = []
    for i, ts in enumerate(params.snapshot_times):
        advance(ens, ts, params, common_noise=common, workers=workers)
        base = os.path.join(outdir, f"snapshot_{i:02d}")
        ppath, hpath = snapshot_export(ens, base, n_bands=n_bands)
        files.append(os.path.basename(ppath))
        files.append(os.path.basename(hpath))

    eff = {
        k: cfg[k]
        for k in ("inertia", "sigma", "theta", "dt", "t_end", "seed", "output_dir", "n_particles")
    }
    eff.update(
        radius=radius,
        n_bands=n_bands,
        workers=workers,
        common_noise=common,
        snapshot_times=tuple(params.snapshot_times),
    )
    _write_manifest(outdir, "ensemble", eff, files)
    return 0


def cmd_gibbs_check(cfg: dict) -> int:
    _require(
        cfg,
        "gibbs-check",
        ["inertia", "sigma", "theta", "dt", "t_end", "seed", "output_dir", "n_particles"],
    )
    if cfg["sigma"] <= 0.0:
        raise ConfigError(
            "config key 'sigma': gibbs-check needs sigma > 0 "
            "(no stationary density without noise)"
        )
    radius = cfg.get("radius", 1.0)
    n_bands = cfg.get("n_bands", 13)
    workers = cfg.get("workers", os.cpu_count() or 1)
    gate = cfg.get("l1_gate", 0.05)
    ref_theta = cfg.get("reference_theta", cfg["theta"])
    params = _build_params(cfg, cfg["t_end"])
    outdir = _prepare_outdir(cfg)

    ens = init_uniform(cfg["n_particles"], radius, cfg["seed"])
    advance(ens, params.t_end, params, workers=workers)
    hist = histogram(ens, n_bands)
    try:
        ref_params = SimParams(
            inertia=params.inertia,
            noise=params.noise,
            theta=ref_theta,
            dt=params.dt,
            t_end=params.t_end,
            seed=params.seed,
        )
        dist = compare(hist, ref_params)
    except ValueError as e:
        raise ConfigError(str(e)) from None

    summary = (
        f"inertia={_canonical_value(cfg['inertia'])};sigma={_fmt(cfg['sigma'])};"
        f"theta={_fmt(cfg['theta'])};reference_theta={_fmt(ref_theta)};"
        f"dt={_fmt(cfg['dt'])};seed={cfg['seed']};radius={_fmt(radius)};"
        f"l1_gate={_fmt(gate)}"
    )
    report = [
        "l1,kl,n,bands,t_end,params",
        f"{_fmt(dist.l1)},{_fmt(dist.kl)},{len(ens)},{n_bands},"
        f"{_fmt(params.t_end)},{summary}",
    ]
    _write_atomic(os.path.join(outdir, "report.csv"), iter(report))

    eff = {
        k: cfg[k]
        for k in ("inertia", "sigma", "theta", "dt", "t_end", "seed", "output_dir", "n_particles")
    }
    eff.update(
        radius=radius, n_bands=n_bands, workers=workers, l1_gate=gate,
        reference_theta=ref_theta,
    )
    _write_manifest(outdir, "gibbs-check", eff, ["report.csv"])
    return 0 if dist.l1 < gate else 1


def cmd_lyapunov_sweep(cfg: dict) -> int:
    _require(cfg, "lyapunov-sweep", ["inertia", "dt", "output_dir", "t_total"])
    if "sigma" not in cfg and "sigmas" not in cfg:
        raise ConfigError("command 'lyapunov-sweep' requires config key 'sigma' or 'sigmas'")
    if "theta" not in cfg and "thetas" not in cfg:
        raise ConfigError("command 'lyapunov-sweep' requires config key 'theta' or 'thetas'")
    if "seed" not in cfg and "seeds" not in cfg:
        raise ConfigError("command 'lyapunov-sweep' requires config key 'seed' or 'seeds'")
    sigmas = cfg.get("sigmas", (cfg.get("sigma"),))
    thetas = cfg.get("thetas", (cfg.get("theta"),))
    seeds = cfg.get("seeds", (cfg.get("seed"),))
    burn_in = cfg.get("burn_in", 10.0)
    n_blocks = cfg.get("n_blocks", 20)
    t_total = cfg["t_total"]
    pi0 = cfg.get("pi0")
    outdir = _prepare_outdir(cfg)

    try:
        base = SimParams(
            inertia=InertiaTensor(*cfg["inertia"]),
            noise=NoiseModel(sigma=sigmas[0]),
            theta=thetas[0],
            dt=cfg["dt"],
            t_end=t_total,
            seed=seeds[0],
        )
        rows = sweep(
            base, sigmas, thetas, t_total, seeds,
            burn_in=burn_in, n_blocks=n_blocks,
            pi0=np.array(pi0) if pi0 is not None else None,
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None
    write_sweep_csv(rows, os.path.join(outdir, "sweep.csv"))

    eff = {
        "inertia": cfg["inertia"],
        "dt": cfg["dt"],
        "output_dir": cfg["output_dir"],
        "t_total": t_total,
        "sigmas": tuple(sigmas),
        "thetas": tuple(thetas),
        "seeds": tuple(seeds),
        "burn_in": burn_in,
        "n_blocks": n_blocks,
    }
    if pi0 is not None:
        eff["pi0"] = pi0
    _write_manifest(outdir, "lyapunov-sweep", eff, ["sweep.csv"])
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "ensemble": cmd_ensemble,
    "gibbs-check": cmd_gibbs_check,
    "lyapunov-sweep": cmd_lyapunov_sweep,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="stochrigid",
        description="Stochastic rigid-body dynamics on the momentum sphere.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("config", help="path to a key = value config file")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config entry (repeatable)",
        )
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config, args.set)
        return _COMMANDS[args.command](cfg)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
