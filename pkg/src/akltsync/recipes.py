"""Named experiment recipes behind the CLI.

Each recipe consumes a validated ExperimentConfig, runs the computation and
writes CSV/JSON artifacts plus a RunManifest into the output directory.
All randomness is seeded through the config, so reruns are byte-identical.
"""

from __future__ import annotations

import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import __version__
from .cavity import CavityModel, adiabatic_comparison, trace_distance
from .circuit import CircuitSpec, run_ensemble, total_spin_state
from .config import ConfigError, ExperimentConfig, resource_report
from .lindblad import (
    EvolveOptions,
    LindbladModel,
    SpectrumOptions,
    evolve,
    overlap_coefficients,
    random_pure_state,
    spectrum_near_axis,
)
from .manifold import compute_manifold, edge_profile, symmetry_operator_A
from .model import (
    ChainSpec,
    build_global_dissipator,
    build_hamiltonian,
    build_local_dissipators,
)
from .operators import Operator, embed, spin1_local, total_ops
from .serialize import write_csv, write_json
from .sync import anti_sync_error, build_sync_report, inversion_parity_check

_OBS_AXIS = "x"


def build_model(chain: ChainSpec, diss, convention: str = "factor2") -> LindbladModel:
    jumps = []
    if diss.gamma > 0:
        jumps.append(build_global_dissipator(diss, chain.N))
    if diss.kappa > 0:
        jumps.extend(build_local_dissipators(diss, chain.N))
    return LindbladModel(hamiltonian=build_hamiltonian(chain),
                         jumps=tuple(jumps), convention=convention)


def transverse_spin_observables(n: int) -> dict:
    sx = spin1_local()["Sx"]
    return {f"Sx_{j}": embed(sx, j, n) for j in range(1, n + 1)}


def field_free(chain: ChainSpec) -> ChainSpec:
    """The manifold-defining chain: same bonds, no fields, no field disorder."""
    return replace(chain, B=0.0, Bx=0.0, Bmax=0.0)


def manifold_superposition(man, seed: int) -> np.ndarray:
    """Haar-random pure state within the four-state ground manifold."""
    rng = np.random.Generator(np.random.Philox(key=seed))
    c = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    c = c / np.linalg.norm(c)
    g = np.column_stack(man.states)
    return g @ c


def initial_density_matrix(cfg: ExperimentConfig, man) -> np.ndarray:
    kind = cfg.initial_state
    if kind == "dfs-superposition":
        psi = (man.state(0, 0) + man.state(1, -1)) / np.sqrt(2.0)
    elif kind == "random-pure":
        psi = random_pure_state(3 ** man.n_sites, cfg.seed)
    elif kind == "ground-infinite-temperature":
        psi = manifold_superposition(man, cfg.seed)
    elif kind == "custom-amplitudes":
        amps = np.array([complex(re, im) for re, im in cfg.raw["amplitudes"]])
        nrm = np.linalg.norm(amps)
        if nrm == 0:
            raise ConfigError("custom amplitudes must not all vanish")
        psi = np.column_stack(man.states) @ (amps / nrm)
    else:
        raise ConfigError(f"unknown initial_state {kind!r}")
    return np.outer(psi, psi.conj())


def _grid(cfg: ExperimentConfig) -> np.ndarray:
    n_rec = int(np.floor(cfg.t_max / cfg.dt_record + 1e-9))
    return np.linspace(0.0, n_rec * cfg.dt_record, n_rec + 1)


def _site_matrix(ts, n: int) -> np.ndarray:
    return np.column_stack([ts.observables[f"Sx_{j}"].real for j in range(1, n + 1)])


# ---------------------------------------------------------------------------
# recipes


def run_ground_states(cfg: ExperimentConfig, out: Path) -> list[dict]:
    chain = cfg.chain
    man = compute_manifold(build_hamiltonian(field_free(chain)), chain.N)
    prof = edge_profile(man, _OBS_AXIS)
    a_op = symmetry_operator_A(man)
    payload = {
        "N": chain.N,
        "epsilon": chain.epsilon,
        "labels": [list(l) for l in man.labels],
        "energies": list(man.energies),
        "zeeman_shifted_energies": [
            e + chain.B / chain.N * m for (s, m), e in zip(man.labels, man.energies)],
        "singlet_triplet_gap": man.singlet_triplet_gap,
        "edge_profile_re": [float(a.real) for a in prof],
        "edge_profile_im": [float(a.imag) for a in prof],
        "inversion_parity_of_A": inversion_parity_check(a_op, chain.N),
        "config_hash": cfg.hash(),
    }
    write_json(out / "ground_states.json", payload)
    return [{"path": "ground_states.json", "kind": "json",
             "schema": sorted(payload)}]


def _run_evolution(cfg: ExperimentConfig, chain: ChainSpec, rho0, man,
                   out: Path, stem: str, fit_t_min=None, omega_hint=None,
                   write: bool = True):
    model = build_model(chain, cfg.dissipators)
    n = chain.N
    grid = _grid(cfg)
    ts = evolve(model, rho0, grid,
                EvolveOptions(h=cfg.h, observables=transverse_spin_observables(n)))
    sites = _site_matrix(ts, n)
    asr = anti_sync_error(grid, sites)
    if omega_hint is None:
        omega_hint = abs((man.energy(1, -1) - chain.B / n) - man.energy(0, 0))
    report = build_sync_report(grid, sites, predicted_frequency=omega_hint,
                               reference_rate=2.0 * cfg.dissipators.gamma,
                               fit_t_min=fit_t_min)

    artifacts = []
    if write:
        columns = {"t": grid}
        for j in range(1, n + 1):
            columns[f"Sx_{j}"] = sites[:, j - 1]
        columns["trace"] = ts.trace
        columns["min_eig"] = ts.min_eig
        columns["anti_sync_error"] = asr.error
        write_csv(out / f"{stem}.csv", columns,
                  comments=[f"config_hash={cfg.hash()}", f"recipe={cfg.recipe}"])
        write_json(out / f"{stem}_sync.json", report.as_dict() | {
            "config_hash": cfg.hash(), "step": ts.step, "n_steps": ts.n_steps})
        artifacts = [
            {"path": f"{stem}.csv", "kind": "csv", "columns": list(columns)},
            {"path": f"{stem}_sync.json", "kind": "json",
             "schema": sorted(report.as_dict())},
        ]
    return ts, report, artifacts


def run_evolve(cfg: ExperimentConfig, out: Path) -> list[dict]:
    chain = cfg.chain
    man = compute_manifold(build_hamiltonian(field_free(chain)), chain.N)
    rho0 = initial_density_matrix(cfg, man)
    coeffs = overlap_coefficients(man, rho0)
    _, _, artifacts = _run_evolution(cfg, chain, rho0, man, out, "evolve",
                                     fit_t_min=cfg.raw.get("fit_t_min"))
    write_json(out / "overlaps.json", coeffs.as_dict() | {
        "config_hash": cfg.hash(), "initial_state": cfg.initial_state,
        "seed": cfg.seed})
    artifacts.append({"path": "overlaps.json", "kind": "json",
                      "schema": ["c0", "c1", "c10", "c01"]})
    return artifacts


def run_spectrum(cfg: ExperimentConfig, out: Path) -> list[dict]:
    chain = cfg.chain
    sopts = cfg.raw.get("spectrum", {})
    opts = SpectrumOptions(
        tau=float(sopts.get("tau", 1.0)),
        dense_cutoff=int(sopts.get("dense_cutoff", 6000)),
        method=sopts.get("method"),
        prop_h=sopts.get("prop_h"),
        maxiter=int(sopts.get("maxiter", 5000)),
        ncv=sopts.get("ncv"),
        arnoldi_tol=float(sopts.get("arnoldi_tol", 1e-10)),
    )
    delta_m = int(sopts["delta_m"])
    k = int(sopts.get("k", 4))
    epsilons = cfg.raw.get("epsilons", [chain.epsilon])
    results = []
    for eps in epsilons:
        model = build_model(replace(chain, epsilon=float(eps)), cfg.dissipators)
        res = spectrum_near_axis(model, chain.N, delta_m, k, opts)
        results.append({"epsilon": float(eps)} | res.as_dict())
    payload = {"config_hash": cfg.hash(), "delta_m": delta_m, "k": k,
               "results": results}
    write_json(out / "spectrum.json", payload)
    return [{"path": "spectrum.json", "kind": "json",
             "schema": ["delta_m", "k", "results"]}]


def run_heisenberg_sync(cfg: ExperimentConfig, out: Path) -> list[dict]:
    """Biquadratic-reduced chains at B=0 with only the global dissipator."""
    artifacts = []
    summary = []
    for eps in cfg.raw["epsilons"]:
        chain = replace(cfg.chain, epsilon=float(eps))
        man = compute_manifold(build_hamiltonian(chain), chain.N)
        gap = man.singlet_triplet_gap
        psi = manifold_superposition(man, cfg.seed)
        rho0 = np.outer(psi, psi.conj())
        stem = f"heisenberg_eps{eps:.6g}"
        _, report, arts = _run_evolution(cfg, chain, rho0, man, out, stem,
                                         fit_t_min=cfg.raw.get("fit_t_min"),
                                         omega_hint=gap)
        artifacts.extend(arts)
        summary.append({"epsilon": float(eps), "gap": gap,
                        "fitted_frequency": report.fitted_frequency,
                        "decay": report.decay, "flag": report.flag})
    write_json(out / "heisenberg_summary.json",
               {"config_hash": cfg.hash(), "results": summary})
    artifacts.append({"path": "heisenberg_summary.json", "kind": "json",
                      "schema": ["results"]})
    return artifacts


def run_disorder_sweep(cfg: ExperimentConfig, out: Path) -> list[dict]:
    """Per-seed synchronization reports for a disordered chain family."""
    sweep = cfg.raw.get("sweep", {})
    n_seeds = int(sweep.get("n_seeds", 10))
    fit_t_min = sweep.get("fit_t_min")
    base = cfg.chain
    man = compute_manifold(build_hamiltonian(field_free(base)), base.N)

    rows = {k: [] for k in ("seed", "omega_fit", "decay", "tau", "amplitude")}
    flags, artifacts = [], []
    for i in range(n_seeds):
        chain = replace(base, seed=base.seed + i)
        psi = manifold_superposition(man, cfg.seed + i)
        rho0 = np.outer(psi, psi.conj())
        stem = f"sweep_seed{i}"
        # full series kept only for the first seed (figure material)
        ts, report, arts = _run_evolution(cfg, chain, rho0, man, out, stem,
                                          fit_t_min=fit_t_min, write=(i == 0))
        artifacts.extend(arts)
        rows["seed"].append(chain.seed)
        rows["omega_fit"].append(report.fitted_frequency)
        rows["decay"].append(report.decay)
        rows["tau"].append(report.transient_time if report.transient_time
                           is not None else np.nan)
        rows["amplitude"].append(report.amplitudes[0])
        flags.append(report.flag)

    write_csv(out / "sweep_summary.csv", rows,
              comments=[f"config_hash={cfg.hash()}",
                        f"Jmax={base.Jmax}", f"Bmax={base.Bmax}",
                        f"Bx={base.Bx}", "flags=" + ",".join(flags)])
    write_json(out / "sweep_summary.json", {
        "config_hash": cfg.hash(), "flags": flags,
        "decays": rows["decay"], "omegas": rows["omega_fit"],
        "chain": {"N": base.N, "B": base.B, "Jmax": base.Jmax,
                  "Bmax": base.Bmax, "Bx": base.Bx}})
    artifacts += [
        {"path": "sweep_summary.csv", "kind": "csv", "columns": list(rows)},
        {"path": "sweep_summary.json", "kind": "json",
         "schema": ["flags", "decays", "omegas"]},
    ]
    return artifacts


def run_trajectory(cfg: ExperimentConfig, out: Path) -> list[dict]:
    circ = cfg.raw["circuit"]
    spec = CircuitSpec(
        n_qutrits=int(circ["n_qutrits"]), lam=float(circ["lambda"]),
        dt=float(circ["dt"]), steps=int(circ["steps"]),
        trajectories=int(circ["trajectories"]), seed=cfg.seed,
        record_every=int(circ.get("record_every", 1)))
    n = spec.n_qutrits
    psi0 = (total_spin_state(n, 0, 0) + total_spin_state(n, 1, -1)) / np.sqrt(2)
    if "initial_coeffs" in circ:
        terms = [complex(re, im) * total_spin_state(n, int(s), int(m))
                 for s, m, re, im in circ["initial_coeffs"]]
        psi0 = np.sum(terms, axis=0)
        psi0 = psi0 / np.linalg.norm(psi0)

    ens = run_ensemble(spec, psi0)

    # master-equation twin: half convention, H = 0, rate gamma per step,
    # integrated in step time
    dq = 3 ** n
    sm = total_ops(n)["Sm_tot"]
    model = LindbladModel(
        hamiltonian=Operator(sp.csr_matrix((dq, dq), dtype=complex)),
        jumps=(np.sqrt(ens.gamma) * sm,), convention="half")
    rho0 = np.outer(psi0, psi0.conj())
    grid = ens.steps.astype(float)
    ts = evolve(model, rho0, grid, EvolveOptions(h=0.5, record_states=True))

    tds = np.array([trace_distance(ra, rl)
                    for ra, (_, rl) in zip(ens.rho_avg, ts.states)])

    expected_rate = ens.gamma * ens.spsm_expect
    write_csv(out / "trajectory.csv", {
        "step": np.arange(1, spec.steps + 1),
        "jump_fraction": ens.jump_fraction,
        "expected_jump_probability": expected_rate,
        "binomial_sem": ens.spsm_sem,
    }, comments=[f"config_hash={cfg.hash()}",
                 f"gamma_per_step={ens.gamma}",
                 f"trajectories={spec.trajectories}"])
    write_csv(out / "trajectory_comparison.csv", {
        "step": grid, "trace_distance": tds,
    }, comments=[f"config_hash={cfg.hash()}", f"gamma_per_step={ens.gamma}"])
    write_json(out / "trajectory_report.json", {
        "config_hash": cfg.hash(), "gamma_per_step": ens.gamma,
        "trajectories": spec.trajectories,
        "max_trace_distance": float(tds.max()),
        "trace_distance_at_end": float(tds[-1]),
        "mean_jump_fraction": float(ens.jump_fraction.mean())})
    artifacts = [
        {"path": "trajectory.csv", "kind": "csv",
         "columns": ["step", "jump_fraction", "expected_jump_probability",
                     "binomial_sem"]},
        {"path": "trajectory_comparison.csv", "kind": "csv",
         "columns": ["step", "trace_distance"]},
        {"path": "trajectory_report.json", "kind": "json",
         "schema": ["gamma_per_step", "max_trace_distance"]},
    ]

    n_records = int(circ.get("emit_records", 0))
    if n_records > 0:
        import json as _json
        from .circuit import run_trajectory
        from .serialize import _json_safe
        lines = []
        for tr in range(min(n_records, spec.trajectories)):
            rec = run_trajectory(spec, psi0, traj_index=tr)
            lines.append(_json.dumps(_json_safe({
                "trajectory": tr,
                "steps": rec.steps,
                "outcomes": rec.outcomes,
                "jump_steps": rec.jump_steps,
                "jump_count": rec.jump_count,
                "sz_expect": rec.sz_expect,
                "spsm_expect": rec.spsm_expect,
            }), sort_keys=True))
        (out / "records.jsonl").write_text("\n".join(lines) + "\n")
        artifacts.append({"path": "records.jsonl", "kind": "jsonl",
                          "schema": ["trajectory", "steps", "outcomes",
                                     "jump_steps", "jump_count"]})
    return artifacts


def run_cavity(cfg: ExperimentConfig, out: Path) -> list[dict]:
    cav = cfg.raw["cavity"]
    cm = CavityModel(n_qutrits=int(cav["n_qutrits"]), lam=float(cav["lambda"]),
                     Gamma=float(cav["Gamma"]), Omega=float(cav.get("Omega", 0.0)),
                     n_max=int(cav.get("n_max", 4)))
    n = cm.n_qutrits
    psi0 = (total_spin_state(n, 0, 0) + total_spin_state(n, 1, 1)) / np.sqrt(2)
    rho0 = np.outer(psi0, psi0.conj())
    t_end = float(cav.get("gamma_t_max", 3.0)) / cm.gamma_effective
    grid = np.linspace(0.0, t_end, int(cav.get("n_record", 61)))
    comp = adiabatic_comparison(cm, rho0, grid, h=cfg.h)
    write_csv(out / "cavity.csv", {
        "t": comp.times, "gamma_t": comp.times * cm.gamma_effective,
        "trace_distance": comp.trace_distance,
        "boson_population": comp.boson_population,
    }, comments=[f"config_hash={cfg.hash()}",
                 f"gamma_effective={cm.gamma_effective}",
                 f"Gamma_over_lambda={cm.Gamma / cm.lam}"])
    payload = {"config_hash": cfg.hash(),
               "gamma_effective": cm.gamma_effective,
               "max_trace_distance": float(comp.trace_distance.max()),
               "max_boson_population": float(comp.boson_population.max()),
               "truncation_warning": comp.truncation_warning}
    if cav.get("doubled_check"):
        cm2 = CavityModel(n_qutrits=n, lam=float(np.sqrt(cm.gamma_effective
                                                         * 2 * cm.Gamma) / 2),
                          Gamma=2 * cm.Gamma, Omega=cm.Omega, n_max=cm.n_max)
        comp2 = adiabatic_comparison(cm2, rho0, grid, h=cfg.h)
        payload["doubled_Gamma_max_trace_distance"] = \
            float(comp2.trace_distance.max())
    write_json(out / "cavity_report.json", payload)
    return [
        {"path": "cavity.csv", "kind": "csv",
         "columns": ["t", "gamma_t", "trace_distance", "boson_population"]},
        {"path": "cavity_report.json", "kind": "json",
         "schema": sorted(payload)},
    ]


_RUNNERS = {
    "ground-states": run_ground_states,
    "evolve": run_evolve,
    "spectrum": run_spectrum,
    "heisenberg-sync": run_heisenberg_sync,
    "disorder-sweep": run_disorder_sweep,
    "trajectory": run_trajectory,
    "cavity": run_cavity,
}


def run_config(cfg: ExperimentConfig, output_dir=None) -> dict:
    """Execute a recipe and write its artifacts plus the run manifest."""
    out = Path(output_dir if output_dir is not None else cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    started = time.time()
    artifacts = _RUNNERS[cfg.recipe](cfg, out)
    manifest = {
        "config_hash": cfg.hash(),
        "code_version": __version__,
        "recipe": cfg.recipe,
        "seed": cfg.seed,
        "wall_time_s": round(time.time() - started, 3),
        "outputs": artifacts,
        "resources": resource_report(cfg),
    }
    write_json(out / "manifest.json", manifest)
    return manifest
