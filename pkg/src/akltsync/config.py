"""Experiment configuration: schema, validation, resource estimates, manifest.

One JSON config describes one run. Top-level keys mirror the domain types:

    recipe          one of RECIPES
    chain           ChainSpec fields: N, B, epsilon, Bx, Jmax, Bmax, seed
    dissipators     DissipatorSpec fields: gamma, kappa
    initial_state   dfs-superposition | random-pure |
                    ground-infinite-temperature | custom-amplitudes
    t_max, dt_record, h, seed, output_dir
    amplitudes      4 [re, im] pairs (custom-amplitudes only), ordered
                    (0,0), (1,-1), (1,0), (1,1)
    epsilons        list (spectrum / heisenberg-sync)
    spectrum        {delta_m, k, tau, dense_cutoff, method, prop_h}
    sweep           {n_seeds, fit_t_min}
    circuit         {n_qutrits, lambda, dt, steps, trajectories,
                     record_every, emit_records}
    cavity          {n_qutrits, lambda, Gamma, Omega, n_max, gamma_t_max,
                     n_record, doubled_check}

"ground-infinite-temperature" draws a seeded Haar-random superposition of
the four manifold states (its ensemble average is the maximally mixed
manifold state; a literally mixed initial state has no coherence and
therefore no oscillation signal).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .model import ChainSpec, DissipatorSpec
from .operators import site_magnetizations
from .serialize import config_hash

RECIPES = ("ground-states", "evolve", "spectrum", "heisenberg-sync",
           "disorder-sweep", "trajectory", "cavity")

INITIAL_STATES = ("dfs-superposition", "random-pure",
                  "ground-infinite-temperature", "custom-amplitudes")

ENV_OUTPUT_DIR = "AKLTSYNC_OUTPUT_DIR"


class ConfigError(ValueError):
    """Schema violation; maps to exit code 2."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


@dataclass
class ExperimentConfig:
    recipe: str
    raw: dict
    chain: ChainSpec | None = None
    dissipators: DissipatorSpec = field(default_factory=DissipatorSpec)

    @property
    def seed(self) -> int:
        return int(self.raw.get("seed", 0))

    @property
    def initial_state(self) -> str:
        return self.raw.get("initial_state", "dfs-superposition")

    @property
    def t_max(self) -> float:
        return float(self.raw.get("t_max", 0.0))

    @property
    def dt_record(self) -> float:
        return float(self.raw.get("dt_record", 1.0))

    @property
    def h(self) -> float | None:
        v = self.raw.get("h")
        return None if v is None else float(v)

    @property
    def output_dir(self) -> str:
        return self.raw.get("output_dir") or os.environ.get(ENV_OUTPUT_DIR, "out")

    def hash(self) -> str:
        return config_hash(self.raw)


def _chain_from(d: dict) -> ChainSpec:
    allowed = {"N", "B", "epsilon", "Bx", "Jmax", "Bmax", "seed"}
    unknown = set(d) - allowed
    _require(not unknown, f"unknown chain keys: {sorted(unknown)}")
    _require("N" in d, "chain.N is required")
    try:
        return ChainSpec(**d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid chain spec: {exc}") from exc


def _dissipators_from(d: dict) -> DissipatorSpec:
    allowed = {"gamma", "kappa"}
    unknown = set(d) - allowed
    _require(not unknown, f"unknown dissipator keys: {sorted(unknown)}")
    try:
        return DissipatorSpec(**d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid dissipators: {exc}") from exc


def load_config(source) -> ExperimentConfig:
    """Parse and validate a config from a path, JSON string or dict."""
    if isinstance(source, dict):
        raw = dict(source)
    else:
        text = Path(source).read_text() if Path(str(source)).exists() else str(source)
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    _require(isinstance(raw, dict), "config must be a JSON object")
    recipe = raw.get("recipe")
    _require(recipe in RECIPES, f"recipe must be one of {RECIPES}, got {recipe!r}")

    cfg = ExperimentConfig(recipe=recipe, raw=raw)
    needs_chain = recipe in ("ground-states", "evolve", "spectrum",
                             "heisenberg-sync", "disorder-sweep")
    if needs_chain:
        _require("chain" in raw, f"recipe {recipe} requires a chain section")
        cfg.chain = _chain_from(raw["chain"])
    if "dissipators" in raw:
        cfg.dissipators = _dissipators_from(raw["dissipators"])

    if recipe in ("evolve", "heisenberg-sync", "disorder-sweep"):
        _require(cfg.t_max > 0, f"recipe {recipe} requires t_max > 0")
        _require(cfg.dt_record > 0, "dt_record must be positive")
        _require(cfg.h is None or cfg.h > 0, "h must be positive when given")
    if recipe == "evolve":
        _require(cfg.initial_state in INITIAL_STATES,
                 f"initial_state must be one of {INITIAL_STATES}")
        if cfg.initial_state == "custom-amplitudes":
            amps = raw.get("amplitudes")
            _require(isinstance(amps, list) and len(amps) == 4
                     and all(len(a) == 2 for a in amps),
                     "custom-amplitudes needs 4 [re, im] pairs")
    if recipe == "spectrum":
        spec = raw.get("spectrum", {})
        _require("delta_m" in spec, "spectrum.delta_m is required")
        _require(int(spec.get("k", 1)) >= 1, "spectrum.k must be >= 1")
        eps = raw.get("epsilons", [cfg.chain.epsilon])
        _require(all(0 <= e <= 1 / 6 + 1e-15 for e in eps),
                 "epsilons must lie in [0, 1/6]")
    if recipe == "heisenberg-sync":
        eps = raw.get("epsilons")
        _require(isinstance(eps, list) and eps, "heisenberg-sync needs epsilons")
        _require(cfg.dissipators.kappa == 0.0,
                 "heisenberg-sync uses only the global dissipator (kappa = 0)")
        _require(cfg.chain.B == 0.0, "heisenberg-sync runs at B = 0")
    if recipe == "disorder-sweep":
        sweep = raw.get("sweep", {})
        _require(int(sweep.get("n_seeds", 0)) >= 1, "sweep.n_seeds must be >= 1")
    if recipe == "trajectory":
        circ = raw.get("circuit")
        _require(isinstance(circ, dict), "trajectory requires a circuit section")
        for key in ("n_qutrits", "lambda", "dt", "steps", "trajectories"):
            _require(key in circ, f"circuit.{key} is required")
        _require(circ["lambda"] > 0 and circ["dt"] > 0, "lambda and dt must be > 0")
        _require(circ["lambda"] * circ["dt"] < 0.1,
                 "circuit needs lambda*dt < 0.1")
    if recipe == "cavity":
        cav = raw.get("cavity")
        _require(isinstance(cav, dict), "cavity requires a cavity section")
        for key in ("n_qutrits", "lambda", "Gamma"):
            _require(key in cav, f"cavity.{key} is required")
        _require(cav["Gamma"] > 0, "Gamma must be positive")
        _require(int(cav.get("n_max", 4)) >= 2, "n_max must be >= 2")
    _require(cfg.seed >= 0, "seed must be a nonnegative integer")
    return cfg


def resource_report(cfg: ExperimentConfig) -> dict:
    """Dry-run estimate: Hilbert dimensions, block sizes, projected memory."""
    report: dict = {"recipe": cfg.recipe, "config_hash": cfg.hash()}
    if cfg.chain is not None:
        dim = cfg.chain.dim
        report["state_dim"] = dim
        report["density_entries"] = dim * dim
        # engine working set: rho + 4 stage buffers + stage scratch + output
        # + two jump scratch matrices, 16 bytes per complex entry
        n_buffers = 9
        report["memory_bytes_estimate"] = n_buffers * dim * dim * 16
        if cfg.recipe == "spectrum":
            m = site_magnetizations(cfg.chain.N)
            dm = int(cfg.raw["spectrum"]["delta_m"])
            sizes = {mm: int((m == mm).sum()) for mm in set(m)}
            block = sum(sizes[mi] * sizes[mi - dm]
                        for mi in sizes if (mi - dm) in sizes)
            report["block_dim"] = block
            report["block_memory_bytes_estimate"] = 16 * block * block \
                if block <= int(cfg.raw["spectrum"].get("dense_cutoff", 6000)) \
                else 16 * block * 40
    if cfg.recipe in ("evolve", "heisenberg-sync", "disorder-sweep") and cfg.t_max:
        report["record_points"] = int(math.floor(cfg.t_max / cfg.dt_record)) + 1
    if cfg.recipe == "trajectory":
        circ = cfg.raw["circuit"]
        dq = 3 ** int(circ["n_qutrits"])
        report["register_dim"] = dq
        report["memory_bytes_estimate"] = \
            16 * (2 * dq * int(circ["trajectories"])
                  + int(circ["steps"]) * int(circ["trajectories"]) // 2)
    if cfg.recipe == "cavity":
        cav = cfg.raw["cavity"]
        dim = 3 ** int(cav["n_qutrits"]) * (int(cav.get("n_max", 4)) + 1)
        report["state_dim"] = dim
        report["memory_bytes_estimate"] = 9 * dim * dim * 16
    return report
