"""Command-line front end: scenario orchestration and report emission.

Subcommands: validate, zero-detuning, large-detuning, adiabatic-sweep, qfunc.
Configuration comes from a flat key=value file (--config) overridden by CLI
flags; units follow the g = 1 convention unless explicit frequencies are
given, so times are in units of 1/g. Every scenario writes
<out>/timeseries.csv and <out>/summary.json; qfunc adds <out>/qgrid.csv.
Exit codes: 0 success, 2 config error, 3 numeric/validity error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import __version__
from .analysis import DensityMatrix, PhaseSpaceGrid, husimi_q
from .dynamics import (
    HamiltonianSpec,
    HermitianPropagator,
    SystemState,
    build_hamiltonian,
    cat_target,
    adiabatic_residual,
    dispersive_hamiltonian,
    elimination_operator_residuals,
    evolve_effective,
    evolve_exact_jc,
    excitation_number,
    half_revival_time,
    measure_atom,
    product_state,
    protocol_time,
)
from .errors import ConfigInvalid, NormViolation, QuasicatError
from .fock import basis_state, coherent_state, suggested_dim
from .modes import (
    AmplitudePair,
    decouple_params,
    mode_rotation_unitary,
    quasi_phase_amplitudes,
    rotate_amplitudes,
    rotation_params,
    squeeze_composition,
    squeeze_identity_residual,
    total_photon_shell_indices,
)

SCHEMA_VERSION = 1

INV_SQRT2 = 1.0 / math.sqrt(2.0)

COMMON_DEFAULTS = {
    "out": "quasicat-out",
    "seed": 12345,
    "leak_tol": 1e-10,
    "dim": None,
}

SCENARIO_DEFAULTS = {
    "validate": {
        "trials": 3,
        "g1": 1.0,
        "g2": 0.7,
        "delta": 0.5,
        "t": 2.3,
        "dim": 12,
    },
    "zero-detuning": {
        "nbar": 25.0,
        "g1": 1.0,
        "g2": 1.0,
        "alpha_re": None,
        "alpha_im": None,
        "beta_re": None,
        "beta_im": None,
        "gamma_re": 1.0,
        "gamma_im": 0.0,
        "delta_amp_re": 0.0,
        "delta_amp_im": 0.0,
        "t_max": None,
        "t_steps": 240,
        "dim2": None,
        "convention": 0,
    },
    "large-detuning": {
        "nbar": 4.0,
        "g": 1.0,
        "ratio": 50.0,
        "gamma_re": INV_SQRT2,
        "gamma_im": 0.0,
        "delta_amp_re": INV_SQRT2,
        "delta_amp_im": 0.0,
        "t_steps": 120,
        "basis": "plusminus",
    },
    "adiabatic-sweep": {
        "g": 1.0,
        "ratios": "20,40,80,160",
        "n_max": 10,
        "dim": 40,
    },
    "qfunc": {
        "nbar": 9.0,
        "mu_re": None,
        "mu_im": None,
        "convention": 1,
        "grid_points": 101,
    },
}

_INT_KEYS = {
    "seed",
    "dim",
    "dim2",
    "t_steps",
    "n_max",
    "grid_points",
    "trials",
    "convention",
}
_STR_KEYS = {"out", "basis", "ratios"}


@dataclass
class ScenarioConfig:
    """Fully resolved scenario parameters (defaults < file < flags)."""

    scenario: str
    values: dict

    def __getitem__(self, key):
        return self.values[key]


@dataclass
class RunReport:
    scenario: str
    config: dict
    summary: dict
    timeseries_header: list
    timeseries_rows: list
    qgrid: Optional[PhaseSpaceGrid] = None
    seed: int = 0
    wall_clock_s: float = 0.0


def _convert(key: str, raw: str):
    if key in _STR_KEYS:
        return raw
    try:
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigInvalid(f"cannot parse {key}={raw!r}: {exc}") from None


def parse_config_file(path: str) -> dict:
    """Flat key=value lines; blank lines and # comments ignored."""
    if not os.path.exists(path):
        raise ConfigInvalid(f"config file not found: {path}")
    out = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigInvalid(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def resolve_config(scenario: str, namespace: argparse.Namespace) -> ScenarioConfig:
    defaults = dict(COMMON_DEFAULTS)
    defaults.update(SCENARIO_DEFAULTS[scenario])
    values = dict(defaults)
    config_path = getattr(namespace, "config", None)
    if config_path:
        for key, raw in parse_config_file(config_path).items():
            if key not in defaults:
                raise ConfigInvalid(f"unknown config key {key!r} for {scenario}")
            values[key] = _convert(key, raw)
    for key in defaults:
        flag_value = getattr(namespace, key, None)
        if flag_value is not None:
            values[key] = flag_value
    return ScenarioConfig(scenario, values)


def _atom_amps(cfg) -> np.ndarray:
    atom = np.array(
        [
            cfg["gamma_re"] + 1j * cfg["gamma_im"],
            cfg["delta_amp_re"] + 1j * cfg["delta_amp_im"],
        ],
        dtype=np.complex128,
    )
    nrm = np.linalg.norm(atom)
    if abs(nrm - 1.0) > 1e-8:
        raise NormViolation("|gamma|^2 + |delta_amp|^2 must be 1")
    return atom


def _atom_purity(tensor) -> float:
    rho = np.einsum("ijs,ijt->st", tensor, np.conj(tensor))
    return float(np.vdot(rho, rho).real)


def _cat_fidelity(tensor, cat_amps) -> float:
    # <cat|rho_I|cat> without forming rho_I
    proj = np.einsum("i,ijs->js", np.conj(cat_amps), tensor)
    return float(np.sum(np.abs(proj) ** 2))


def run_validate(cfg: ScenarioConfig) -> RunReport:
    rng = np.random.default_rng(cfg["seed"])
    dim = cfg["dim"]
    checks = {}

    rot = rotation_params(cfg["g1"], cfg["g2"])
    # amplitude round trip and norm preservation
    worst_round = 0.0
    worst_norm = 0.0
    for _ in range(cfg["trials"]):
        pair = AmplitudePair(
            complex(rng.normal(), rng.normal()) * 0.5,
            complex(rng.normal(), rng.normal()) * 0.5,
        )
        quasi = rotate_amplitudes(rot, pair, "forward")
        back = rotate_amplitudes(rot, quasi, "inverse")
        worst_round = max(
            worst_round,
            abs(back.first - pair.first) + abs(back.second - pair.second),
        )
        worst_norm = max(
            worst_norm,
            abs(
                abs(quasi.first) ** 2
                + abs(quasi.second) ** 2
                - abs(pair.first) ** 2
                - abs(pair.second) ** 2
            ),
        )
    checks["amplitude_round_trip"] = worst_round
    checks["amplitude_norm_preserved"] = worst_norm

    # operator realization against the amplitude map; radii bounded so the
    # truncation tail stays far below leak_tol at this dim
    rotation = mode_rotation_unitary(rot, dim, dim)
    worst_fid = 0.0
    for _ in range(cfg["trials"]):
        alpha = rng.uniform(0.2, 0.6) * np.exp(2j * np.pi * rng.uniform())
        beta = rng.uniform(0.2, 0.6) * np.exp(2j * np.pi * rng.uniform())
        quasi = rotate_amplitudes(rot, AmplitudePair(alpha, beta), "forward")
        prod = np.kron(
            coherent_state(alpha, dim).amps, coherent_state(beta, dim).amps
        )
        target = np.kron(
            coherent_state(quasi.first, dim).amps,
            coherent_state(quasi.second, dim).amps,
        )
        worst_fid = max(worst_fid, 1.0 - abs(np.vdot(target, rotation @ prod)) ** 2)
    checks["rotation_operator_vs_amplitudes"] = worst_fid

    # the rotated coupling concentrates on quasi mode I; the rotation is only
    # exact on complete total-photon shells, so compare on trusted columns
    ham_int = build_hamiltonian(
        HamiltonianSpec.interaction(cfg["g1"], cfg["g2"], cfg["delta"]), dim, dim
    )
    ham_quasi = build_hamiltonian(
        HamiltonianSpec.quasi_jc(rot.g, cfg["delta"]), dim, dim
    )
    rotation_full = np.kron(rotation, np.eye(2))
    shell = total_photon_shell_indices(dim, dim, dim - 2)
    cols = np.concatenate([2 * shell, 2 * shell + 1])
    conjugated = rotation_full @ ham_int @ rotation_full.conj().T
    scale = np.linalg.norm(ham_quasi[:, cols], 2)
    checks["quasi_jc_rotation"] = float(
        np.linalg.norm(conjugated[:, cols] - ham_quasi[:, cols], 2) / scale
    )

    number_op = excitation_number(dim, dim)
    checks["excitation_commutator"] = float(
        np.linalg.norm(ham_int @ number_op - number_op @ ham_int, 2)
    )

    # random-state basis equivalence: oracle in the physical basis versus
    # rotate, analytic blocks, rotate back
    cap = dim - 2
    worst_equiv = 0.0
    propagator = HermitianPropagator(ham_int)
    for _ in range(cfg["trials"]):
        tensor = rng.normal(size=(dim, dim, 2)) + 1j * rng.normal(size=(dim, dim, 2))
        n1 = np.arange(dim)[:, None, None]
        n2 = np.arange(dim)[None, :, None]
        tensor[(n1 + n2 > cap).repeat(2, axis=2)] = 0.0
        tensor /= np.linalg.norm(tensor)
        state = SystemState(tensor, "physical")
        direct = propagator.evolve(state, cfg["t"])
        quasi_flat = rotation @ state.tensor.reshape(dim * dim, 2)
        quasi_state = SystemState(quasi_flat.reshape(dim, dim, 2), "quasi")
        evolved = evolve_exact_jc(quasi_state, cfg["t"], rot.g, cfg["delta"])
        back_flat = rotation.conj().T @ evolved.tensor.reshape(dim * dim, 2)
        back = back_flat.reshape(dim, dim, 2)
        worst_equiv = max(
            worst_equiv,
            1.0 - abs(np.vdot(direct.tensor, back)) ** 2,
        )
    checks["basis_equivalence_evolution"] = worst_equiv

    # squeeze composition scalars and the operator identity on a small space
    p, q = squeeze_composition(rot, 0.3 + 0.1j, 0.3 + 0.1j)
    checks["squeeze_equal_params"] = abs(p) + abs(q - (0.3 + 0.1j))
    checks["squeeze_operator_identity"] = squeeze_identity_residual(
        rotation_params(1.0, 1.0), 0.25, 0.25, dim=24, input_cap=6
    )

    # phasing quasi mode I splits into two branches of equal total energy
    seed_pair = AmplitudePair(0.5 + 0.1j, -0.3 + 0.2j)
    branch_up = quasi_phase_amplitudes(rot, 1j, seed_pair)
    branch_dn = quasi_phase_amplitudes(rot, -1j, seed_pair)
    checks["phase_branch_energy"] = abs(
        abs(branch_up.first) ** 2
        + abs(branch_up.second) ** 2
        - abs(branch_dn.first) ** 2
        - abs(branch_dn.second) ** 2
    )

    # decoupling eigenvalues against the quadratic-form matrix
    d1, d2 = cfg["delta"], 1.6 * cfg["delta"]
    params = decouple_params(cfg["g1"], cfg["g2"], d1, d2)
    cross = cfg["g1"] * cfg["g2"] * (d1 + d2) / (2.0 * d1 * d2)
    form = np.array(
        [
            [cfg["g1"] ** 2 / d1, cross],
            [cross, cfg["g2"] ** 2 / d2],
        ]
    )
    eigs = np.linalg.eigvalsh(form)
    checks["decouple_eigenvalues"] = float(
        min(
            abs(params.lambda_mode - eigs[0]) + abs(params.zeta_mode - eigs[1]),
            abs(params.lambda_mode - eigs[1]) + abs(params.zeta_mode - eigs[0]),
        )
    )

    summary = {
        "checks": checks,
        "max_residual": max(checks.values()),
        "all_passed": bool(max(checks.values()) < 1e-6),
        "dim": dim,
    }
    rows = [(float(i), float(v)) for i, v in enumerate(checks.values())]
    return RunReport(
        "validate",
        dict(cfg.values),
        summary,
        ["check_index", "residual"],
        rows,
        seed=cfg["seed"],
    )


def run_zero_detuning(cfg: ScenarioConfig) -> RunReport:
    rot = rotation_params(cfg["g1"], cfg["g2"])
    if cfg["alpha_re"] is not None or cfg["alpha_im"] is not None:
        alpha = complex(cfg["alpha_re"] or 0.0, cfg["alpha_im"] or 0.0)
        beta = complex(cfg["beta_re"] or 0.0, cfg["beta_im"] or 0.0)
        quasi_pair = rotate_amplitudes(rot, AmplitudePair(alpha, beta), "forward")
        mu, nu = quasi_pair.first, quasi_pair.second
        nbar = abs(mu) ** 2
    else:
        nbar = cfg["nbar"]
        if nbar <= 0:
            raise ConfigInvalid("need a positive mean photon number")
        mu = -1j * math.sqrt(nbar)
        nu = 0.0
        physical = rotate_amplitudes(
            rot, AmplitudePair(mu, nu, "quasi"), "inverse"
        )
        alpha, beta = physical.first, physical.second
    if nbar <= 0:
        raise ConfigInvalid("need a positive mean photon number")

    atom = _atom_amps(cfg)
    dim1 = cfg["dim"] or suggested_dim(mu) + 12
    dim2 = cfg["dim2"] or (1 if abs(nu) < 1e-12 else suggested_dim(nu) + 12)
    mode2 = (
        basis_state(0, 1)
        if dim2 == 1
        else coherent_state(nu, dim2, cfg["leak_tol"])
    )
    state = product_state(
        coherent_state(mu, dim1, cfg["leak_tol"]), mode2, atom, "quasi"
    )

    revival = half_revival_time(nbar, rot.g)
    t_star = protocol_time(nbar, rot.g)
    t_max = cfg["t_max"] if cfg["t_max"] is not None else revival
    steps = cfg["t_steps"]
    if steps < 2:
        raise ConfigInvalid("t_steps must be >= 2")
    times = np.linspace(0.0, t_max, steps)
    dt = times[1] - times[0]

    conventions = (1, -1) if cfg["convention"] == 0 else (cfg["convention"],)
    cats = {
        conv: cat_target(mu, nbar, conv, dim1, cfg["leak_tol"]).amps
        for conv in conventions
    }

    rows = []
    current = state
    for k, t in enumerate(times):
        if k > 0:
            current = evolve_exact_jc(current, dt, rot.g, 0.0)
        tensor = current.tensor
        inversion = float(
            np.sum(np.abs(tensor[:, :, 1]) ** 2) - np.sum(np.abs(tensor[:, :, 0]) ** 2)
        )
        fid = max(_cat_fidelity(tensor, c) for c in cats.values())
        n_mean = float(
            np.sum(
                np.arange(dim1)[:, None, None] * np.abs(tensor) ** 2
            )
        )
        rows.append((t, inversion, _atom_purity(tensor), fid, n_mean))

    star_state = evolve_exact_jc(state, t_star, rot.g, 0.0)
    fid_by_conv = {
        conv: _cat_fidelity(star_state.tensor, c) for conv, c in cats.items()
    }
    best_conv = max(fid_by_conv, key=fid_by_conv.get)
    summary = {
        "nbar": nbar,
        "g_total": rot.g,
        "theta": rot.theta,
        "alpha": [alpha.real, alpha.imag],
        "beta": [beta.real, beta.imag],
        "mu": [complex(mu).real, complex(mu).imag],
        "nu": [complex(nu).real, complex(nu).imag],
        "dim1": dim1,
        "dim2": dim2,
        "revival_time": revival,
        "protocol_time": t_star,
        "atomic_purity_at_protocol": _atom_purity(star_state.tensor),
        "cat_fidelity_at_protocol": fid_by_conv[best_conv],
        "cat_convention_best": best_conv,
        "branch_overlap": math.exp(-2.0 * nbar),
    }
    return RunReport(
        "zero-detuning",
        dict(cfg.values),
        summary,
        [
            "t",
            "atomic_inversion",
            "atomic_purity",
            "cat_fidelity",
            "mean_photon_mode_i",
        ],
        rows,
        seed=cfg["seed"],
    )


def run_large_detuning(cfg: ScenarioConfig) -> RunReport:
    g = cfg["g"]
    if g <= 0:
        raise ConfigInvalid("coupling g must be positive")
    delta = cfg["ratio"] * g
    nbar = cfg["nbar"]
    if nbar <= 0:
        raise ConfigInvalid("need a positive mean photon number")
    mu = math.sqrt(nbar)
    atom = _atom_amps(cfg)
    dim1 = cfg["dim"] or suggested_dim(mu) + 12
    dim2 = 2  # spectator slot kept minimal
    t_prime = math.pi * delta / (2.0 * g * g)

    init = product_state(
        coherent_state(mu, dim1, cfg["leak_tol"]), basis_state(0, dim2), atom, "quasi"
    )
    ham = build_hamiltonian(HamiltonianSpec.quasi_jc(g, delta), dim1, dim2)
    propagator = HermitianPropagator(ham)

    times = np.linspace(0.0, t_prime, cfg["t_steps"])
    rows = []
    for t in times:
        oracle_state = propagator.evolve(init, t)
        effective_state = evolve_effective(init, t, g, delta)
        fid = abs(np.vdot(oracle_state.tensor, effective_state.tensor)) ** 2
        inversion = float(
            np.sum(np.abs(oracle_state.tensor[:, :, 1]) ** 2)
            - np.sum(np.abs(oracle_state.tensor[:, :, 0]) ** 2)
        )
        rows.append((t, float(fid), inversion))

    # branch analysis on the dispersive prediction: the protocol's two
    # entangled-coherent outputs live there; the oracle enters through the
    # fidelity track and the diagnostic overlap below
    final = propagator.evolve(init, t_prime)
    effective_final = evolve_effective(init, t_prime, g, delta)
    plus, minus = measure_atom(effective_final, cfg["basis"])
    if plus.post_state is not None and minus.post_state is not None:
        post_overlap = abs(
            np.vdot(plus.post_state.tensor, minus.post_state.tensor)
        )
    else:
        post_overlap = 0.0
    oracle_plus, oracle_minus = measure_atom(final, cfg["basis"])
    if oracle_plus.post_state is not None and oracle_minus.post_state is not None:
        oracle_overlap = abs(
            np.vdot(oracle_plus.post_state.tensor, oracle_minus.post_state.tensor)
        )
    else:
        oracle_overlap = 0.0
    summary = {
        "ratio": cfg["ratio"],
        "delta": delta,
        "nbar": nbar,
        "mu": mu,
        "dim1": dim1,
        "t_prime": t_prime,
        "prob_plus": plus.probability,
        "prob_minus": minus.probability,
        "prob_sum": plus.probability + minus.probability,
        "post_state_overlap": float(post_overlap),
        "oracle_post_state_overlap": float(oracle_overlap),
        "oracle_prob_plus": oracle_plus.probability,
        "oracle_prob_minus": oracle_minus.probability,
        "branch_overlap": math.exp(-2.0 * nbar),
        "effective_fidelity_at_t_prime": float(
            abs(np.vdot(final.tensor, effective_final.tensor)) ** 2
        ),
        "measurement_basis": cfg["basis"],
    }
    return RunReport(
        "large-detuning",
        dict(cfg.values),
        summary,
        ["t", "effective_vs_oracle_fidelity", "atomic_inversion"],
        rows,
        seed=cfg["seed"],
    )


def _parse_ratios(raw: str):
    try:
        ratios = [float(tok) for tok in raw.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigInvalid(f"bad ratios list {raw!r}: {exc}") from None
    if not ratios:
        raise ConfigInvalid("ratios list is empty")
    return ratios


def run_adiabatic_sweep(cfg: ScenarioConfig) -> RunReport:
    g = cfg["g"]
    ratios = _parse_ratios(cfg["ratios"])
    n_max = cfg["n_max"]
    dim = cfg["dim"]
    rows = []
    residuals = []
    for ratio in ratios:
        delta = ratio * g
        residual = adiabatic_residual(g, delta, dim, n_max)
        keep = (np.arange(dim) <= n_max).astype(np.float64)
        proj = np.kron(np.diag(keep), np.eye(2))
        h_disp = dispersive_hamiltonian(g, delta, dim)
        h_norm = float(np.linalg.norm(proj @ h_disp @ proj, 2))
        ops = elimination_operator_residuals(g, delta, dim, n_max)
        residuals.append(residual)
        rows.append(
            (
                ratio,
                residual,
                residual / h_norm,
                ops["mode"],
                ops["lowering"],
                ops["inversion"],
            )
        )
    factors = [
        residuals[i] / residuals[i + 1] if residuals[i + 1] > 0 else float("inf")
        for i in range(len(residuals) - 1)
    ]
    summary = {
        "g": g,
        "ratios": ratios,
        "n_max": n_max,
        "dim": dim,
        "residuals": residuals,
        "shrink_factors": factors,
    }
    return RunReport(
        "adiabatic-sweep",
        dict(cfg.values),
        summary,
        [
            "delta_over_g",
            "residual",
            "residual_relative",
            "mode_residual",
            "lowering_residual",
            "inversion_residual",
        ],
        rows,
        seed=cfg["seed"],
    )


def _grid_peaks(grid: PhaseSpaceGrid, top: int = 2, min_separation: float = 0.5):
    values = grid.values
    found = []
    for i in range(1, values.shape[0] - 1):
        for j in range(1, values.shape[1] - 1):
            v = values[i, j]
            if v < 1e-4:
                continue
            if (
                v >= values[i - 1, j]
                and v >= values[i + 1, j]
                and v >= values[i, j - 1]
                and v >= values[i, j + 1]
            ):
                found.append((float(v), float(grid.re_axis[j]), float(grid.im_axis[i])))
    found.sort(reverse=True)
    picked = []
    for v, re, im in found:
        if all(
            math.hypot(re - p["re"], im - p["im"]) > min_separation for p in picked
        ):
            picked.append({"q": v, "re": re, "im": im})
        if len(picked) == top:
            break
    return picked


def run_qfunc(cfg: ScenarioConfig) -> RunReport:
    if cfg["mu_re"] is not None or cfg["mu_im"] is not None:
        mu = complex(cfg["mu_re"] or 0.0, cfg["mu_im"] or 0.0)
        nbar = abs(mu) ** 2
    else:
        nbar = cfg["nbar"]
        if nbar <= 0:
            raise ConfigInvalid("need a positive mean photon number")
        mu = math.sqrt(nbar)
    dim = cfg["dim"] or suggested_dim(mu) + 12
    cat = cat_target(mu, nbar, cfg["convention"], dim, cfg["leak_tol"])
    rho = DensityMatrix(
        np.outer(cat.amps, np.conj(cat.amps)), (dim,), "mode1"
    )
    grid = husimi_q(rho, count=cfg["grid_points"])
    peaks = _grid_peaks(grid)
    mid = int(np.argmin(np.abs(grid.re_axis)))
    rows = [(float(im), float(grid.values[i, mid])) for i, im in enumerate(grid.im_axis)]
    summary = {
        "mu": [complex(mu).real, complex(mu).imag],
        "nbar": nbar,
        "dim": dim,
        "convention": cfg["convention"],
        "q_max": float(grid.values.max()),
        "grid_integral": grid.integral(),
        "peaks": peaks,
        "expected_lobes": [
            [(1j * mu).real, (1j * mu).imag],
            [(-1j * mu).real, (-1j * mu).imag],
        ],
    }
    return RunReport(
        "qfunc",
        dict(cfg.values),
        summary,
        ["im", "q_along_imag_axis"],
        rows,
        qgrid=grid,
        seed=cfg["seed"],
    )


SCENARIOS = {
    "validate": run_validate,
    "zero-detuning": run_zero_detuning,
    "large-detuning": run_large_detuning,
    "adiabatic-sweep": run_adiabatic_sweep,
    "qfunc": run_qfunc,
}


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    return obj


def write_timeseries(path: str, header, rows):
    with open(path, "w") as handle:
        handle.write(",".join(header) + "\n")
        for row in rows:
            handle.write(",".join(format(float(v), ".17e") for v in row) + "\n")


def write_summary(path: str, report: RunReport):
    payload = {
        "scenario": report.scenario,
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "seed": report.seed,
        "config": _plain(report.config),
        "summary": _plain(report.summary),
        "wall_clock_s": report.wall_clock_s,
    }
    with open(path, "w") as handle:
        json.dump(payload, handle, sort_keys=True, indent=2)
        handle.write("\n")


def write_qgrid(path: str, grid: PhaseSpaceGrid):
    """Re axis as the header row, im axis as the leading column."""
    with open(path, "w") as handle:
        handle.write(
            "im/re," + ",".join(format(v, ".17e") for v in grid.re_axis) + "\n"
        )
        for i, im in enumerate(grid.im_axis):
            handle.write(
                format(im, ".17e")
                + ","
                + ",".join(format(v, ".17e") for v in grid.values[i])
                + "\n"
            )


def emit(report: RunReport, out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    write_timeseries(
        os.path.join(out_dir, "timeseries.csv"),
        report.timeseries_header,
        report.timeseries_rows,
    )
    write_summary(os.path.join(out_dir, "summary.json"), report)
    if report.qgrid is not None:
        write_qgrid(os.path.join(out_dir, "qgrid.csv"), report.qgrid)


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=str, default=None, help="key=value file")
    parser.add_argument("--out", type=str, default=None, help="output directory")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--leak-tol", dest="leak_tol", type=float, default=None)
    parser.add_argument("--dim", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasicat",
        description="Two-mode cavity simulator: quasi-mode reduction and "
        "entangled coherent state preparation.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)

    p = sub.add_parser("validate", help="transformation identity checks")
    _add_common(p)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--g1", type=float, default=None)
    p.add_argument("--g2", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--t", type=float, default=None)

    p = sub.add_parser("zero-detuning", help="resonant cat preparation")
    _add_common(p)
    p.add_argument("--nbar", type=float, default=None)
    p.add_argument("--g1", type=float, default=None)
    p.add_argument("--g2", type=float, default=None)
    p.add_argument("--alpha-re", dest="alpha_re", type=float, default=None)
    p.add_argument("--alpha-im", dest="alpha_im", type=float, default=None)
    p.add_argument("--beta-re", dest="beta_re", type=float, default=None)
    p.add_argument("--beta-im", dest="beta_im", type=float, default=None)
    p.add_argument("--gamma-re", dest="gamma_re", type=float, default=None)
    p.add_argument("--gamma-im", dest="gamma_im", type=float, default=None)
    p.add_argument("--delta-amp-re", dest="delta_amp_re", type=float, default=None)
    p.add_argument("--delta-amp-im", dest="delta_amp_im", type=float, default=None)
    p.add_argument("--t-max", dest="t_max", type=float, default=None)
    p.add_argument("--t-steps", dest="t_steps", type=int, default=None)
    p.add_argument("--dim2", type=int, default=None)
    p.add_argument(
        "--convention",
        type=int,
        choices=(-1, 0, 1),
        default=None,
        help="cat branch sign; 0 reports the better of the two",
    )

    p = sub.add_parser("large-detuning", help="dispersive preparation + measurement")
    _add_common(p)
    p.add_argument("--nbar", type=float, default=None)
    p.add_argument("--g", type=float, default=None)
    p.add_argument("--ratio", type=float, default=None, help="delta / g")
    p.add_argument("--gamma-re", dest="gamma_re", type=float, default=None)
    p.add_argument("--gamma-im", dest="gamma_im", type=float, default=None)
    p.add_argument("--delta-amp-re", dest="delta_amp_re", type=float, default=None)
    p.add_argument("--delta-amp-im", dest="delta_amp_im", type=float, default=None)
    p.add_argument("--t-steps", dest="t_steps", type=int, default=None)
    p.add_argument("--basis", type=str, choices=("plusminus", "energy"), default=None)

    p = sub.add_parser("adiabatic-sweep", help="elimination residual scaling")
    _add_common(p)
    p.add_argument("--g", type=float, default=None)
    p.add_argument("--ratios", type=str, default=None, help="comma list of delta/g")
    p.add_argument("--n-max", dest="n_max", type=int, default=None)

    p = sub.add_parser("qfunc", help="Husimi-Q grid of the cat target")
    _add_common(p)
    p.add_argument("--nbar", type=float, default=None)
    p.add_argument("--mu-re", dest="mu_re", type=float, default=None)
    p.add_argument("--mu-im", dest="mu_im", type=float, default=None)
    p.add_argument("--convention", type=int, choices=(-1, 1), default=None)
    p.add_argument("--grid-points", dest="grid_points", type=int, default=None)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    namespace = parser.parse_args(argv)
    try:
        cfg = resolve_config(namespace.scenario, namespace)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    started = time.perf_counter()
    try:
        report = SCENARIOS[cfg.scenario](cfg)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QuasicatError as exc:
        print(f"run error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    report.wall_clock_s = time.perf_counter() - started
    emit(report, cfg["out"])
    print(
        f"{cfg.scenario}: wrote {os.path.join(cfg['out'], 'summary.json')}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
