"""Acceptance suite: one test per criterion, one printed line per criterion.

Heavy runs execute the shipped configs from configs/ exactly once per
session and leave their artifacts in artifacts/ (the same files the figure
front end consumes). Three sub-criteria are implemented literally but are
contradicted by the model's actual spectra; they fail with pointers to
notes/decisions.md (criteria marked KNOWN-DEFECT below).
"""

import json
import time
from pathlib import Path

import numpy as np
import pytest
import scipy.linalg as la

from akltsync.config import load_config
from akltsync.lindblad import (
    EvolveOptions,
    LindbladModel,
    SpectrumOptions,
    apply_liouvillian,
    evolve,
    overlap_coefficients,
    random_pure_state,
    restricted_generator,
    spectrum_near_axis,
)
from akltsync.manifold import compute_manifold, edge_profile, symmetry_operator_A
from akltsync.model import (
    ChainSpec,
    DissipatorSpec,
    build_global_dissipator,
    build_hamiltonian,
    build_local_dissipators,
)
from akltsync.recipes import run_config
from akltsync.serialize import read_csv
from akltsync.sync import verify_dynamical_symmetry

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
ARTIFACTS = ROOT / "artifacts"

_runs: dict = {}


def shipped(stem: str) -> dict:
    """Run a shipped config once per session; returns its manifest."""
    if stem not in _runs:
        cfg = load_config(CONFIGS / f"{stem}.json")
        t0 = time.time()
        manifest = run_config(cfg, output_dir=ROOT / cfg.output_dir)
        manifest["_elapsed"] = time.time() - t0
        manifest["_outdir"] = ROOT / cfg.output_dir
        _runs[stem] = manifest
    return _runs[stem]


def report(name: str, ok: bool, detail: str = "") -> None:
    print(f"{'PASS' if ok else 'FAIL'}: {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def man6():
    return compute_manifold(build_hamiltonian(ChainSpec(N=6)), 6)


@pytest.fixture(scope="module")
def model6():
    diss = DissipatorSpec(gamma=0.2, kappa=0.2)
    jumps = [build_global_dissipator(diss, 6)] + build_local_dissipators(diss, 6)
    return LindbladModel(hamiltonian=build_hamiltonian(ChainSpec(N=6, B=0.2)),
                         jumps=tuple(jumps))


def test_ground_manifold():
    t0 = time.time()
    man = compute_manifold(build_hamiltonian(ChainSpec(N=6)), 6)
    elapsed = time.time() - t0
    ok = (sorted(man.labels) == [(0, 0), (1, -1), (1, 0), (1, 1)]
          and max(abs(e) for e in man.energies) < 1e-10
          and elapsed < 60.0)
    report("ground manifold: 4 zero-energy labelled states at N=6", ok,
           f"max|E|={max(abs(e) for e in man.energies):.1e}, {elapsed:.1f}s")
    # shipped recipe exposes the same content as JSON
    m = shipped("ground_states_n6")
    data = json.loads((m["_outdir"] / "ground_states.json").read_text())
    assert sorted(map(tuple, data["labels"])) == [(0, 0), (1, -1), (1, 0), (1, 1)]


def test_steady_states(man6, model6):
    devs = []
    for lbl in [(0, 0), (1, -1)]:
        s = man6.state(*lbl)
        rho = np.outer(s, s.conj())
        devs.append(np.abs(apply_liouvillian(model6, rho)).max())
    report("steady states: ||L[rho_0]||, ||L[rho_1]|| < 1e-10", max(devs) < 1e-10,
           f"max={max(devs):.2e}")


def test_dynamical_symmetry(man6, model6):
    a = symmetry_operator_A(man6)
    g00 = man6.state(0, 0)
    rho0 = np.outer(g00, g00.conj())
    rho10 = a.matrix.toarray() @ rho0
    dev = np.abs(apply_liouvillian(model6, rho10)
                 - 1j * (0.2 / 6) * rho10).max()
    rep = verify_dynamical_symmetry(model6, a, rho0)
    ok = (dev < 1e-9 and rep.max_jump_residual < 1e-9
          and rep.eigen_residual < 1e-9
          and abs(abs(rep.omega) - 1.0 / 30.0) < 1e-9)
    report("dynamical symmetry: L[A rho0] = +i(B/N) A rho0, B/N = 1/30", ok,
           f"eig dev={dev:.2e}, r1={rep.max_jump_residual:.2e}, "
           f"r2={rep.eigen_residual:.2e}, |omega|={abs(rep.omega):.6f}")


def test_fig1c_reproduction(man6):
    m = shipped("fig1c_dfs")
    cols, _ = read_csv(m["_outdir"] / "evolve.csv")
    sync = json.loads((m["_outdir"] / "evolve_sync.json").read_text())
    checks = {}
    checks["fitted omega within 1% of 1/30"] = \
        abs(sync["fitted_frequency"] - 1 / 30) < 0.01 / 30
    checks["undamped (decay < 1e-6)"] = abs(sync["decay"]) < 1e-6
    checks["anti-sync error < 1e-8 at all recorded times"] = \
        cols["anti_sync_error"].max() < 1e-8
    amp = np.array(sync["amplitudes"])
    checks["amplitudes mirror-symmetric"] = \
        np.abs(amp - amp[::-1]).max() < 1e-3 * amp.max()
    checks["amplitudes decay monotonically into the bulk"] = \
        amp[0] > amp[1] > amp[2] > 0
    # anti-symmetry of the signal itself under j <-> N+1-j
    sites = np.column_stack([cols[f"Sx_{j}"] for j in range(1, 7)])
    checks["site series antisymmetric under inversion"] = \
        np.abs(sites + sites[:, ::-1]).max() < 1e-8
    checks["runtime < 10 min"] = m["_elapsed"] < 600.0
    ok = all(checks.values())
    report("Fig 1(c): DFS initial state, undamped anti-synchronized oscillation",
           ok, "; ".join(k for k, v in checks.items() if not v)
           or f"omega={sync['fitted_frequency']:.6f}, "
              f"runtime={m['_elapsed']:.0f}s")


def test_fig1ab_reproduction(man6):
    m = shipped("fig1ab_random")
    cols, _ = read_csv(m["_outdir"] / "evolve.csv")
    sync = json.loads((m["_outdir"] / "evolve_sync.json").read_text())
    tau = sync["transient_time"]
    ok_tau = tau is not None and 0 < tau < 220
    e = cols["anti_sync_error"]
    t = cols["t"]
    late = t >= (tau if tau else 0)
    ok_stays = e[late].max() < 1e-4
    c01s = []
    for seed in range(10):
        psi = random_pure_state(729, seed=1000 + seed)
        c = overlap_coefficients(man6, np.outer(psi, psi.conj()))
        c01s.append(abs(c.c01))
    ok_c01 = max(c01s) < 0.1
    ok = ok_tau and ok_stays and ok_c01
    report("Fig 1(a,b): random state anti-synchronizes after finite transient",
           ok, f"tau={tau}, max late error={e[late].max():.2e}, "
               f"max|C01|={max(c01s):.4f}")


def test_ground_subspace_gap(man6, model6):
    mat = restricted_generator(model6, man6.states)
    w = la.eigvals(mat)
    re = np.sort(np.unique(np.round(w.real, 10)))[::-1]
    ok = abs(re[0]) < 1e-9 and abs(re[1] + 0.4) < 1e-9
    report("ground-subspace Liouvillian gap = 2*gamma", ok,
           f"slowest nonzero decay {re[1]:.10f}")


def _fig2a_results():
    m = shipped("fig2a_spectrum_n4")
    data = json.loads((m["_outdir"] / "spectrum.json").read_text())
    out = {}
    for row in data["results"]:
        lead = row["eigenvalues"][0]
        out[round(row["epsilon"], 6)] = complex(lead["re"], lead["im"])
    return out


def test_fig2a_trend_n4():
    leads = _fig2a_results()
    e0 = leads[0.0]
    e_pos = [leads[round(e, 6)] for e in (0.05, 0.1, 1 / 6)]
    checks = {}
    checks["epsilon=0 eigenvalue on the axis"] = abs(e0.real) < 1e-8
    checks["Re < -1e-4 for all epsilon > 0"] = all(v.real < -1e-4 for v in e_pos)
    res = [abs(v.real) for v in e_pos]
    ims = [abs(v.imag) for v in e_pos]
    checks["|Re| monotone increasing across the three points"] = \
        res[0] < res[1] < res[2]
    checks["|Im| monotone increasing across the three points"] = \
        ims[0] < ims[1] < ims[2]
    ok = all(checks.values())
    report("Fig 2(a) at N=4: axis departure and monotone drift in epsilon", ok,
           "; ".join(k for k, v in checks.items() if not v)
           or ", ".join(f"eps>0: {v.real:+.2e}{v.imag:+.3f}j" for v in e_pos))


def test_fig2a_frequency_exceeds_clean_value():
    # KNOWN-DEFECT: at epsilon=0.05 the singlet-triplet gap nearly cancels
    # the Zeeman splitting B/N, so |Im| drops *below* the epsilon=0 value
    # (see notes/decisions.md); the claim holds at 0.1 and 1/6.
    leads = _fig2a_results()
    base = abs(leads[0.0].imag)
    ims = {e: abs(leads[round(e, 6)].imag) for e in (0.05, 0.1, 1 / 6)}
    ok = all(v > base for v in ims.values())
    report("Fig 2(a): |Im| strictly above B/N for eps in {0.05, 0.1, 1/6}",
           ok, ", ".join(f"eps={e:.2f}: {v:.4f} vs {base:.4f}"
                         for e, v in ims.items()))


def test_fig2a_arnoldi_matches_dense_n3():
    diss = DissipatorSpec(gamma=0.2, kappa=0.2)
    jumps = [build_global_dissipator(diss, 3)] + build_local_dissipators(diss, 3)
    model = LindbladModel(hamiltonian=build_hamiltonian(ChainSpec(N=3, B=0.2)),
                          jumps=tuple(jumps))
    dense = spectrum_near_axis(model, 3, -1, 4, SpectrumOptions(method="dense"))
    arn = spectrum_near_axis(model, 3, -1, 4,
                             SpectrumOptions(method="arnoldi", tau=1.0,
                                             prop_h=0.002))
    dev = max(np.abs(dense.eigenvalues - v).min() for v in arn.eigenvalues)
    report("Fig 2(a): Arnoldi matches dense block eigenvalues at N=3 (1e-7)",
           dev < 1e-7, f"max dev={dev:.2e}")


def test_fig2bc_reproduction():
    m = shipped("fig2bc_heisenberg")
    summary = json.loads((m["_outdir"] / "heisenberg_summary.json").read_text())
    rows = {round(r["epsilon"], 6): r for r in summary["results"]}
    r01, r16 = rows[0.1], rows[round(1 / 6, 6)]
    checks = {}
    for tag, row in [("eps=0.1", r01), ("eps=1/6", r16)]:
        checks[f"{tag} undamped"] = row["flag"] == "stable"
        checks[f"{tag} frequency matches gap within 1%"] = \
            abs(row["fitted_frequency"] - row["gap"]) < 0.01 * row["gap"]
    checks["frequency grows with epsilon"] = \
        r16["fitted_frequency"] > r01["fitted_frequency"]
    for tag in ("heisenberg_eps0.1", "heisenberg_eps0.166667"):
        cols, _ = read_csv(m["_outdir"] / f"{tag}.csv")
        post = cols["t"] >= 40.0   # transient decays at >= 2*gamma
        checks[f"{tag} anti-synchronized"] = \
            cols["anti_sync_error"][post].max() < 1e-4
    ok = all(checks.values())
    report("Fig 2(b,c): gap-locked undamped oscillations at B=0, kappa=0", ok,
           "; ".join(k for k, v in checks.items() if not v)
           or f"omega(0.1)={r01['fitted_frequency']:.5f} vs gap {r01['gap']:.5f}; "
              f"omega(1/6)={r16['fitted_frequency']:.5f} vs gap {r16['gap']:.5f}")


def test_s1_bond_disorder_stable():
    m = shipped("s1a_bond_disorder")
    data = json.loads((m["_outdir"] / "sweep_summary.json").read_text())
    decays = np.abs(np.array(data["decays"]))
    ok = (decays < 1e-6).all() and len(decays) == 10
    report("Supplement S1(a): Jmax=0.5, 10 seeds, all stable (eta < 1e-6)",
           ok, f"max eta={decays.max():.2e}, flags={set(data['flags'])}")


def test_s1_field_disorder_stable():
    # KNOWN-DEFECT: the inhomogeneous field dresses the manifold and the
    # coherence acquires Re(lambda) ~ -1.5e-5 (verified spectrally at N=3,4);
    # eta < 1e-6 is unattainable at Bmax = 0.2 B (see notes/decisions.md)
    m = shipped("s1b_field_disorder")
    data = json.loads((m["_outdir"] / "sweep_summary.json").read_text())
    decays = np.abs(np.array(data["decays"]))
    ok = (decays < 1e-6).all() and len(decays) == 10
    report("Supplement S1(b): +Bmax=0.2B, 10 seeds, all stable (eta < 1e-6)",
           ok, f"max eta={decays.max():.2e}, flags={set(data['flags'])}")


def test_s1_transverse_field_damped():
    # KNOWN-DEFECT: at Bx = 0.1 B the measured damping is ~3e-5 (second
    # order in Bx/(N*gap)), an order below the 1e-4 threshold; the
    # qualitative stable -> metastable flip does occur (flags check)
    m = shipped("s1c_transverse_field")
    data = json.loads((m["_outdir"] / "sweep_summary.json").read_text())
    decays = np.abs(np.array(data["decays"]))
    ok = (decays > 1e-4).all() and len(decays) == 10
    report("Supplement S1(c): +Bx=0.1B, 10 seeds, all damped (eta > 1e-4)",
           ok, f"min eta={decays.min():.2e}, flags={set(data['flags'])}")


def test_s1_flags_flip_metastable():
    # the qualitative content of S1: breaking all protecting symmetries
    # makes synchronization decay while disorder alone leaves it stable
    a = json.loads((shipped("s1a_bond_disorder")["_outdir"]
                    / "sweep_summary.json").read_text())
    c = json.loads((shipped("s1c_transverse_field")["_outdir"]
                    / "sweep_summary.json").read_text())
    eta_a = np.abs(np.array(a["decays"]))
    eta_c = np.abs(np.array(c["decays"]))
    ok = (set(a["flags"]) == {"stable"}
          and set(c["flags"]) == {"metastable"}
          and (eta_c > 10 * np.maximum(eta_a, 1e-9)).all())
    report("Supplement S1: transverse field flips all seeds stable -> metastable",
           ok, f"eta(a) max={eta_a.max():.1e}, eta(c) min={eta_c.min():.1e}")


def test_trajectory_equivalence():
    m = shipped("trajectory_2q")
    rep = json.loads((m["_outdir"] / "trajectory_report.json").read_text())
    cols, _ = read_csv(m["_outdir"] / "trajectory.csv")
    checks = {}
    checks["trace distance < 0.02 at gamma*t = 1"] = \
        rep["trace_distance_at_end"] < 0.02
    dev = np.abs(cols["jump_fraction"] - cols["expected_jump_probability"])
    sem = np.maximum(cols["binomial_sem"], 1e-12)
    # 3 standard errors plus the O((lam dt)^2) per-step systematic
    checks["E[dN] = gamma <S+S-> within 3 sigma"] = \
        (dev < 3.0 * sem + 10 * rep["gamma_per_step"] ** 2).all()
    from akltsync.circuit import exact_step_unitary, trotter_unitary
    theta = np.sqrt(0.05) / 4.0
    err = lambda th: la.norm(trotter_unitary(2, th)
                             - exact_step_unitary(2, th), 2)
    ratio = err(2 * theta) / err(theta)
    checks["Trotter error ~ theta^3 (x8 per halving, within 20%)"] = \
        abs(ratio - 8.0) < 1.6
    ok = all(checks.values())
    report("trajectory circuit: ensemble average reproduces collective decay",
           ok, "; ".join(k for k, v in checks.items() if not v)
           or f"TD={rep['trace_distance_at_end']:.4f}, x8 ratio={ratio:.2f}")


def test_cavity_elimination():
    m = shipped("cavity_bad_limit")
    rep = json.loads((m["_outdir"] / "cavity_report.json").read_text())
    checks = {
        "max trace distance < 0.05 over gamma*t in [0,3]":
            rep["max_trace_distance"] < 0.05,
        "error strictly decreases when Gamma is doubled at fixed gamma":
            rep["doubled_Gamma_max_trace_distance"] < rep["max_trace_distance"],
        "no truncation warning": not rep["truncation_warning"],
    }
    ok = all(checks.values())
    report("cavity adiabatic elimination: gamma = 4 lambda^2 / Gamma", ok,
           "; ".join(k for k, v in checks.items() if not v)
           or f"TD={rep['max_trace_distance']:.4f} -> "
              f"{rep['doubled_Gamma_max_trace_distance']:.4f}")


def test_engine_properties_on_shipped_runs():
    checks = {}
    for stem in ("fig1c_dfs", "fig1ab_random"):
        m = shipped(stem)
        cols, _ = read_csv(m["_outdir"] / "evolve.csv")
        t = cols["t"]
        drift = np.abs(cols["trace"] - 1.0)
        checks[f"{stem}: trace drift < 1e-9 * t"] = \
            (drift[1:] < 1e-9 * np.maximum(t[1:], 1.0)).all()
        checks[f"{stem}: min eigenvalue >= -1e-7"] = \
            np.nanmin(cols["min_eig"]) >= -1e-7
    # Hermiticity is exact by construction; verify on a fresh short run
    diss = DissipatorSpec(gamma=0.2, kappa=0.2)
    jumps = [build_global_dissipator(diss, 4)] + build_local_dissipators(diss, 4)
    model = LindbladModel(hamiltonian=build_hamiltonian(ChainSpec(N=4, B=0.2)),
                          jumps=tuple(jumps))
    psi = random_pure_state(81, seed=0)
    ts = evolve(model, np.outer(psi, psi.conj()), np.linspace(0, 2, 5),
                EvolveOptions(h=0.01, record_states=True))
    checks["Hermiticity exact after each step"] = all(
        np.abs(r - r.conj().T).max() == 0.0 for _, r in ts.states)
    # spectral invariants: left half plane and conjugate pairing
    data = json.loads((shipped("fig2a_spectrum_n4")["_outdir"]
                       / "spectrum.json").read_text())
    eigs = [complex(e["re"], e["im"]) for row in data["results"]
            for e in row["eigenvalues"]]
    checks["all reported eigenvalues in the left half plane"] = \
        max(v.real for v in eigs) < 1e-8
    diss4 = DissipatorSpec(gamma=0.2, kappa=0.2)
    jumps4 = [build_global_dissipator(diss4, 4)] + build_local_dissipators(diss4, 4)
    model4 = LindbladModel(hamiltonian=build_hamiltonian(ChainSpec(N=4, B=0.2)),
                           jumps=tuple(jumps4))
    plus = spectrum_near_axis(model4, 4, +1, 4, SpectrumOptions(method="dense"))
    minus = spectrum_near_axis(model4, 4, -1, 4, SpectrumOptions(method="dense"))
    checks["conjugate pairing between +Dm and -Dm blocks"] = all(
        np.abs(plus.eigenvalues - v.conjugate()).min() < 1e-8
        for v in minus.eigenvalues)
    ok = all(checks.values())
    report("engine properties: trace, positivity, Hermiticity, spectrum", ok,
           "; ".join(k for k, v in checks.items() if not v))
