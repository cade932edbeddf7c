"""Hamiltonians and time evolution for two field modes and one two-level atom.

Layout conventions used throughout:

* System tensors have shape (dim1, dim2, atom) with atom axis size 2 in the
  order (lower, upper), or size 1 for field-only states.
* The basis tag says whether the two mode slots are the physical modes 1, 2
  or the rotated quasi modes I, II. In the quasi basis all atom-field
  coupling lives on the first slot.
* Time evolution is exp(-iHt) everywhere. Analytic evolutions below are
  phase-consistent with the brute-force oracle under that convention.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import (
    BadSubsystem,
    BasisMismatch,
    BothCouplingsZero,
    DegenerateCat,
    DetuningRatioWarning,
    DetuningTooSmall,
    DimensionMismatch,
    DimTooSmall,
    InvalidVariantParams,
    NonFiniteInput,
    NonPositiveInput,
    NormViolation,
    ParameterOutOfRange,
)
from .fock import (
    LEAK_TOL,
    ComplexMatrix,
    FockVector,
    basis_state,
    coherent_state,
    expm_antihermitian,
    ladder_matrix,
    suggested_dim,
)
from .modes import (
    PHYSICAL,
    QUASI,
    AmplitudePair,
    ModeRotation,
    decouple_params,
    mode_rotation_unitary,
    quasi_phase_amplitudes,
    rotate_amplitudes,
)

# Atom basis order (lower, upper).
SIGMA_Z = np.diag([-1.0 + 0j, 1.0 + 0j])
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=np.complex128)
SIGMA_MINUS = SIGMA_PLUS.conj().T

# Effective (dispersive) variants are trustworthy for |delta| >= RATIO_MIN * g;
# between 5 and 10 they warn, below 5 they refuse.
RATIO_MIN = 10.0
RATIO_HARD_FLOOR = 5.0

VARIANTS = (
    "lab",
    "interaction",
    "quasiJC",
    "effectiveEqualFreq",
    "effectiveFalse",
    "effectiveCorrect",
    "decoupled",
)


@dataclass
class SystemState:
    """Normalized amplitude tensor over mode1 x mode2 x atom, basis-tagged."""

    tensor: np.ndarray
    basis: str = PHYSICAL

    def __post_init__(self):
        self.tensor = np.asarray(self.tensor, dtype=np.complex128)
        if self.tensor.ndim != 3:
            raise DimensionMismatch("SystemState expects a (dim1, dim2, atom) tensor")
        if self.tensor.shape[2] not in (1, 2):
            raise DimensionMismatch("atom axis must have size 1 or 2")
        if self.basis not in (PHYSICAL, QUASI):
            raise BasisMismatch(f"unknown basis tag {self.basis!r}")
        if not np.all(np.isfinite(self.tensor.view(np.float64))):
            raise NonFiniteInput("non-finite amplitude in SystemState")
        nrm = float(np.linalg.norm(self.tensor))
        if abs(nrm - 1.0) > 1e-6:
            raise NormViolation(f"SystemState norm {nrm} too far from 1")
        self.tensor = self.tensor / nrm

    @property
    def dims(self):
        return self.tensor.shape

    def flat(self) -> np.ndarray:
        return self.tensor.reshape(-1)


@dataclass
class MeasurementOutcome:
    """One branch of an atomic measurement; post_state keeps the field only
    (atom axis reduced to size 1) and is None below probability 1e-15."""

    outcome: str
    probability: float
    post_state: Optional[SystemState]


def product_state(
    mode1: FockVector, mode2: FockVector, atom_amps, basis: str = PHYSICAL
) -> SystemState:
    """Product state mode1 x mode2 x atom. atom_amps has length 2 in the
    order (lower, upper), or length 1 for a field-only container."""
    atom = np.asarray(atom_amps, dtype=np.complex128).reshape(-1)
    if atom.size not in (1, 2):
        raise DimensionMismatch("atom_amps must have length 1 or 2")
    tensor = np.einsum("i,j,s->ijs", mode1.amps, mode2.amps, atom)
    return SystemState(tensor, basis)


@dataclass
class HamiltonianSpec:
    """Tagged model variant plus the parameters that variant actually uses."""

    variant: str
    g: Optional[float] = None
    g1: Optional[float] = None
    g2: Optional[float] = None
    delta: Optional[float] = None
    delta1: Optional[float] = None
    delta2: Optional[float] = None
    atom_freq: Optional[float] = None
    omega1: Optional[float] = None
    omega2: Optional[float] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidVariantParams(f"unknown variant {self.variant!r}")

    @classmethod
    def lab(cls, g1, g2, atom_freq, omega1, omega2):
        return cls(
            "lab", g1=g1, g2=g2, atom_freq=atom_freq, omega1=omega1, omega2=omega2
        )

    @classmethod
    def interaction(cls, g1, g2, delta):
        return cls("interaction", g1=g1, g2=g2, delta=delta)

    @classmethod
    def quasi_jc(cls, g, delta):
        return cls("quasiJC", g=g, delta=delta)

    @classmethod
    def effective_equal_freq(cls, g, delta):
        _check_dispersive(abs(g), (delta,))
        return cls("effectiveEqualFreq", g=g, delta=delta)

    @classmethod
    def effective_false(cls, g1, g2, delta1, delta2):
        _check_dispersive(math.hypot(g1, g2), (delta1, delta2))
        return cls("effectiveFalse", g1=g1, g2=g2, delta1=delta1, delta2=delta2)

    @classmethod
    def effective_correct(cls, g1, g2, delta1, delta2):
        _check_dispersive(math.hypot(g1, g2), (delta1, delta2))
        return cls("effectiveCorrect", g1=g1, g2=g2, delta1=delta1, delta2=delta2)

    @classmethod
    def decoupled(cls, g1, g2, delta1, delta2):
        _check_dispersive(math.hypot(g1, g2), (delta1, delta2))
        return cls("decoupled", g1=g1, g2=g2, delta1=delta1, delta2=delta2)


def _check_dispersive(g_total: float, deltas, ratio_min: float = RATIO_MIN):
    if g_total == 0.0:
        return
    for d in deltas:
        if d is None or d == 0.0:
            raise DetuningTooSmall("dispersive variant needs nonzero detuning")
        ratio = abs(d) / g_total
        if ratio < RATIO_HARD_FLOOR:
            raise DetuningTooSmall(
                f"|delta|/g = {ratio:.2f} < {RATIO_HARD_FLOOR}; effective model invalid"
            )
        if ratio < ratio_min:
            warnings.warn(
                f"|delta|/g = {ratio:.2f} below {ratio_min}; effective model marginal",
                DetuningRatioWarning,
                stacklevel=3,
            )


def _require(spec: HamiltonianSpec, *names):
    vals = []
    for name in names:
        v = getattr(spec, name)
        if v is None:
            raise InvalidVariantParams(f"variant {spec.variant!r} needs {name}")
        vals.append(float(v))
    return vals


def _effective_detuning(g1, g2, delta1, delta2):
    # free atomic term chosen so g2 = 0 reduces to the single-mode dispersive
    # form with delta1, and equal couplings/detunings reduce to delta
    shifts = g1 * g1 / delta1 + g2 * g2 / delta2
    if shifts == 0.0:
        raise InvalidVariantParams("intensity shifts cancel; detuning ill-defined")
    return (g1 * g1 + g2 * g2) / shifts


def build_hamiltonian(spec: HamiltonianSpec, dim1: int, dim2: int) -> ComplexMatrix:
    """Dense Hermitian matrix for the requested variant on
    (dim1 x dim2 x 2), flattened in C order."""
    if dim1 < 2 or dim2 < 2:
        raise DimTooSmall("build_hamiltonian needs dims >= 2")
    a = ladder_matrix(dim1)
    b = ladder_matrix(dim2)
    id1 = np.eye(dim1, dtype=np.complex128)
    id2 = np.eye(dim2, dtype=np.complex128)
    id_atom = np.eye(2, dtype=np.complex128)
    num1 = a.conj().T @ a
    num2 = b.conj().T @ b

    def emb(m1, m2, atom):
        return np.kron(np.kron(m1, m2), atom)

    sz = emb(id1, id2, SIGMA_Z)
    up_proj = emb(id1, id2, SIGMA_PLUS @ SIGMA_MINUS)

    variant = spec.variant
    if variant == "lab":
        g1, g2, atom_freq, omega1, omega2 = _require(
            spec, "g1", "g2", "atom_freq", "omega1", "omega2"
        )
        raising = g1 * emb(a, id2, SIGMA_PLUS) + g2 * emb(id1, b, SIGMA_PLUS)
        return (
            0.5 * atom_freq * sz
            + omega1 * emb(num1, id2, id_atom)
            + omega2 * emb(id1, num2, id_atom)
            + raising
            + raising.conj().T
        )
    if variant == "interaction":
        g1, g2, delta = _require(spec, "g1", "g2", "delta")
        raising = g1 * emb(a, id2, SIGMA_PLUS) + g2 * emb(id1, b, SIGMA_PLUS)
        return 0.5 * delta * sz + raising + raising.conj().T
    if variant == "quasiJC":
        g, delta = _require(spec, "g", "delta")
        raising = g * emb(a, id2, SIGMA_PLUS)
        return 0.5 * delta * sz + raising + raising.conj().T
    if variant == "effectiveEqualFreq":
        g, delta = _require(spec, "g", "delta")
        shift = g * g / delta
        return 0.5 * delta * sz + shift * emb(num1, id2, SIGMA_Z) + shift * up_proj
    if variant in ("effectiveFalse", "effectiveCorrect"):
        g1, g2, delta1, delta2 = _require(spec, "g1", "g2", "delta1", "delta2")
        if g1 == 0.0 and g2 == 0.0:
            raise BothCouplingsZero("effective variants need a nonzero coupling")
        delta_eff = _effective_detuning(g1, g2, delta1, delta2)
        ham = (
            0.5 * delta_eff * sz
            + (g1 * g1 / delta1) * emb(num1, id2, SIGMA_Z)
            + (g2 * g2 / delta2) * emb(id1, num2, SIGMA_Z)
        )
        if variant == "effectiveCorrect":
            cross = 0.5 * g1 * g2 * (1.0 / delta1 + 1.0 / delta2)
            hop = emb(a.conj().T, b, id_atom)
            ham = ham + cross * ((hop + hop.conj().T) @ sz)
            ham = ham + (g1 * g1 / delta1 + g2 * g2 / delta2) * up_proj
        return ham
    if variant == "decoupled":
        g1, g2, delta1, delta2 = _require(spec, "g1", "g2", "delta1", "delta2")
        if g1 == 0.0 and g2 == 0.0:
            raise BothCouplingsZero("decoupled variant needs a nonzero coupling")
        params = decouple_params(g1, g2, delta1, delta2)
        delta_eff = _effective_detuning(g1, g2, delta1, delta2)
        return (
            0.5 * delta_eff * sz
            + params.lambda_mode * emb(num1, id2, SIGMA_Z)
            + params.zeta_mode * emb(id1, num2, SIGMA_Z)
            + (params.lambda_mode + params.zeta_mode) * up_proj
        )
    raise InvalidVariantParams(f"unknown variant {variant!r}")


def excitation_number(dim1: int, dim2: int) -> ComplexMatrix:
    """Conserved excitation count: sigma_z/2 + n1 + n2 on the full space."""
    a = ladder_matrix(dim1)
    b = ladder_matrix(dim2)
    id1 = np.eye(dim1, dtype=np.complex128)
    id2 = np.eye(dim2, dtype=np.complex128)
    return (
        0.5 * np.kron(np.kron(id1, id2), SIGMA_Z)
        + np.kron(np.kron(a.conj().T @ a, id2), np.eye(2))
        + np.kron(np.kron(id1, b.conj().T @ b), np.eye(2))
    )


class HermitianPropagator:
    """Reusable exp(-iHt) from a single Hermitian eigendecomposition.

    Exactly unitary up to roundoff; the decomposition is shared across all
    evolution times, which is what makes dense oracle time series cheap.
    """

    def __init__(self, ham: np.ndarray):
        ham = np.asarray(ham, dtype=np.complex128)
        if ham.ndim != 2 or ham.shape[0] != ham.shape[1]:
            raise DimensionMismatch("Hamiltonian must be square")
        scale = max(1.0, float(np.abs(ham).max()))
        if not np.allclose(ham, ham.conj().T, atol=1e-12 * scale):
            raise DimensionMismatch("Hamiltonian is not Hermitian")
        self.energies, self.vectors = np.linalg.eigh(ham)

    @property
    def dim(self) -> int:
        return self.energies.size

    def evolve_flat(self, vec: np.ndarray, t: float) -> np.ndarray:
        vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
        if vec.size != self.dim:
            raise DimensionMismatch(
                f"state size {vec.size} does not match dim {self.dim}"
            )
        phases = np.exp(-1j * self.energies * float(t))
        return self.vectors @ (phases * (self.vectors.conj().T @ vec))

    def evolve(self, state: SystemState, t: float) -> SystemState:
        out = self.evolve_flat(state.flat(), t)
        return SystemState(out.reshape(state.dims), state.basis)


def evolve_oracle(ham: ComplexMatrix, state: SystemState, t: float) -> SystemState:
    """Brute-force exp(-iHt) |state>. Builds a fresh eigendecomposition; use
    HermitianPropagator directly for many times under one Hamiltonian."""
    return HermitianPropagator(ham).evolve(state, t)


def evolve_exact_jc(
    state: SystemState, t: float, g: float, delta: float = 0.0
) -> SystemState:
    """Analytic block evolution in the quasi basis.

    Equivalent to the oracle on the quasiJC Hamiltonian but O(dim) per time.
    Quasi mode II is untouched by construction.
    """
    if state.basis != QUASI:
        raise BasisMismatch("evolve_exact_jc expects a quasi-basis state")
    if state.tensor.shape[2] != 2:
        raise DimensionMismatch("state needs an atom axis of size 2")
    out = _kernels.jc_propagate(state.tensor, g, delta, t)
    return SystemState(out, QUASI)


def half_revival_time(nbar: float, g: float) -> float:
    """The 2 pi sqrt(nbar) / g timescale of the inversion revival.

    The cat preparation protocol evolves to half this value, where atom and
    field disentangle. (The name keeps the conventional label; the revival
    peak itself sits at this full value.)
    """
    if nbar <= 0.0 or g <= 0.0:
        raise NonPositiveInput("half_revival_time needs nbar > 0 and g > 0")
    return 2.0 * math.pi * math.sqrt(nbar) / g


def protocol_time(nbar: float, g: float) -> float:
    """Preparation instant: half of half_revival_time."""
    return 0.5 * half_revival_time(nbar, g)


def large_amplitude_state(
    t: float,
    mu: complex,
    nbar: float,
    gamma: complex,
    delta_amp: complex,
    g: float,
    dim: int,
    mode2: Optional[FockVector] = None,
    leak_tol: float = LEAK_TOL,
) -> SystemState:
    """Closed-form large-amplitude approximation to the resonant evolution.

    The initial state is |mu> on quasi mode I times the atom
    gamma |lower> + delta_amp |upper|>. The square roots of the excitation
    ladder are expanded around nbar = |mu|^2, which splits the state into
    two counter-rotating coherent branches mu e^{-+ i g t / (2 sqrt(nbar))}
    with branch phases e^{-+ i g t sqrt(nbar)/2}; at half the revival
    timescale the branches are +-i mu and the atom factors out. Accuracy
    improves with nbar. General (gamma, delta_amp) follows by linearity.
    mode2 fills the spectator slot (vacuum of size 1 when omitted).
    """
    mu = complex(mu)
    if abs(abs(gamma) ** 2 + abs(delta_amp) ** 2 - 1.0) > 1e-10:
        raise NormViolation("|gamma|^2 + |delta_amp|^2 must be 1")
    if nbar <= 0.0:
        raise NonPositiveInput("large-amplitude form needs nbar > 0")
    if abs(nbar - abs(mu) ** 2) > 1e-8 * max(1.0, nbar):
        raise ParameterOutOfRange("nbar must equal |mu|^2")
    phi = -np.angle(mu)
    branch_phase = 0.5 * g * t * math.sqrt(nbar)
    chirp = 0.5 * g * t / math.sqrt(nbar)
    field_a = coherent_state(mu * np.exp(-1j * chirp), dim, leak_tol).amps
    field_b = coherent_state(mu * np.exp(+1j * chirp), dim, leak_tol).amps
    eip = np.exp(1j * phi)
    eim = np.conj(eip)
    pre_a = 0.5 * np.exp(-1j * branch_phase)
    pre_b = 0.5 * np.exp(+1j * branch_phase)
    upper = pre_a * field_a * (gamma * eim + delta_amp) * np.exp(-1j * chirp) + (
        pre_b * field_b * (delta_amp - gamma * eim) * np.exp(+1j * chirp)
    )
    lower = pre_a * field_a * (gamma + delta_amp * eip) + pre_b * field_b * (
        gamma - delta_amp * eip
    )
    if mode2 is None:
        mode2 = basis_state(0, 1)
    tensor = np.zeros((dim, mode2.dim, 2), dtype=np.complex128)
    tensor[:, :, 0] = lower[:, None] * mode2.amps[None, :]
    tensor[:, :, 1] = upper[:, None] * mode2.amps[None, :]
    tensor /= np.linalg.norm(tensor)
    return SystemState(tensor, QUASI)


def cat_target(
    mu: complex,
    nbar: float,
    convention: int = 1,
    dim: Optional[int] = None,
    leak_tol: float = LEAK_TOL,
) -> FockVector:
    """Target single-mode cat reached at half the revival timescale:
    proportional to e^{i pi nbar} |i mu> - convention * e^{-i pi nbar} |-i mu>.

    The normalization keeps the branch overlap (no orthogonality assumption).
    convention in {+1, -1} selects the relative branch sign, which is the
    only freedom left by the global-phase convention of the evolution.
    """
    mu = complex(mu)
    if convention not in (1, -1):
        raise ParameterOutOfRange("convention must be +1 or -1")
    if abs(nbar - abs(mu) ** 2) > 1e-8 * max(1.0, nbar):
        raise ParameterOutOfRange("nbar must equal |mu|^2")
    if dim is None:
        dim = suggested_dim(mu) + 2
    plus_branch = coherent_state(1j * mu, dim, leak_tol).amps
    minus_branch = coherent_state(-1j * mu, dim, leak_tol).amps
    vec = (
        np.exp(1j * math.pi * nbar) * plus_branch
        - convention * np.exp(-1j * math.pi * nbar) * minus_branch
    )
    norm_sq = float(np.vdot(vec, vec).real)
    if norm_sq <= 1e-12:
        raise DegenerateCat("branches cancel; superposition collapsed to one ray")
    return FockVector(vec / math.sqrt(norm_sq), dim)


def two_mode_cat_target(
    alpha: complex,
    beta: complex,
    rot: ModeRotation,
    nbar: float,
    dim1: int,
    dim2: int,
    convention: int = 1,
    leak_tol: float = LEAK_TOL,
) -> SystemState:
    """Entangled two-mode target in the physical basis: the quasi-mode cat
    expressed on modes 1 and 2.

    The two branches are coherent products whose amplitudes come from
    phasing the quasi-mode-I amplitude by +i and -i and rotating back.
    Equals the mode rotation unitary applied to cat x |nu> up to truncation.
    """
    pair = AmplitudePair(alpha, beta, PHYSICAL)
    quasi = rotate_amplitudes(rot, pair, "forward")
    if abs(nbar - abs(quasi.first) ** 2) > 1e-8 * max(1.0, nbar):
        raise ParameterOutOfRange("nbar must equal |mu|^2 of the rotated amplitude")
    if convention not in (1, -1):
        raise ParameterOutOfRange("convention must be +1 or -1")
    branch_up = quasi_phase_amplitudes(rot, 1j, pair)
    branch_dn = quasi_phase_amplitudes(rot, -1j, pair)
    vec_up = np.einsum(
        "i,j->ij",
        coherent_state(branch_up.first, dim1, leak_tol).amps,
        coherent_state(branch_up.second, dim2, leak_tol).amps,
    )
    vec_dn = np.einsum(
        "i,j->ij",
        coherent_state(branch_dn.first, dim1, leak_tol).amps,
        coherent_state(branch_dn.second, dim2, leak_tol).amps,
    )
    field = (
        np.exp(1j * math.pi * nbar) * vec_up
        - convention * np.exp(-1j * math.pi * nbar) * vec_dn
    )
    norm_sq = float(np.vdot(field, field).real)
    if norm_sq <= 1e-12:
        raise DegenerateCat("branches cancel; superposition collapsed to one ray")
    return SystemState((field / math.sqrt(norm_sq))[:, :, None], PHYSICAL)


def evolve_effective(
    state: SystemState, t: float, g: float, delta: float, ratio_min: float = RATIO_MIN
) -> SystemState:
    """Dispersive-regime evolution, diagonal in the quasi-I photon number.

    Lower-level amplitudes pick up e^{+i(delta/2 + g^2 n / delta) t}; upper
    ones e^{-i(delta/2 + g^2/delta + g^2 n / delta) t}. A coherent |mu> on
    the lower branch therefore stays coherent with amplitude rotating as
    mu e^{+i g^2 t / delta}, and the two branches counter-rotate.
    """
    if state.basis != QUASI:
        raise BasisMismatch("evolve_effective expects a quasi-basis state")
    if state.tensor.shape[2] != 2:
        raise DimensionMismatch("state needs an atom axis of size 2")
    _check_dispersive(abs(g), (delta,), ratio_min)
    n = np.arange(state.tensor.shape[0], dtype=np.float64)
    shift = g * g / delta
    lower_phase = np.exp(1j * (0.5 * delta + shift * n) * t)
    upper_phase = np.exp(-1j * (0.5 * delta + shift + shift * n) * t)
    out = state.tensor.copy()
    out[:, :, 0] *= lower_phase[:, None]
    out[:, :, 1] *= upper_phase[:, None]
    return SystemState(out, QUASI)


def measure_atom(state: SystemState, basis: str = "plusminus"):
    """Project the atom onto (lower +- upper)/sqrt(2) ("plusminus") or onto
    the bare levels ("energy"). Returns the (plus, minus) outcome pair with
    renormalized field-only post states."""
    if state.tensor.shape[2] != 2:
        raise BadSubsystem("state carries no atom to measure")
    tensor = state.tensor
    if basis == "plusminus":
        branch_plus = (tensor[:, :, 0] + tensor[:, :, 1]) / math.sqrt(2.0)
        branch_minus = (tensor[:, :, 0] - tensor[:, :, 1]) / math.sqrt(2.0)
    elif basis == "energy":
        branch_plus = tensor[:, :, 1]
        branch_minus = tensor[:, :, 0]
    else:
        raise BadSubsystem(f"unknown measurement basis {basis!r}")

    def outcome(label, field):
        prob = float(np.vdot(field, field).real)
        if prob < 1e-15:
            return MeasurementOutcome(label, prob, None)
        post = SystemState(field[:, :, None] / math.sqrt(prob), state.basis)
        return MeasurementOutcome(label, prob, post)

    return outcome("plus", branch_plus), outcome("minus", branch_minus)


def _single_mode_atom_ops(dim: int):
    a = ladder_matrix(dim)
    id_f = np.eye(dim, dtype=np.complex128)
    return (
        np.kron(a, np.eye(2)),
        np.kron(id_f, SIGMA_Z),
        np.kron(id_f, SIGMA_PLUS),
        np.kron(id_f, SIGMA_MINUS),
    )


def _elimination_pieces(g: float, delta: float, dim: int, n_max: int):
    if n_max + 8 > dim:
        raise DimTooSmall("need dim >= n_max + 8 so the projector stays interior")
    _check_dispersive(abs(g), (delta,))
    a, sz, sp, sm = _single_mode_atom_ops(dim)
    lam = g / delta
    unitary = expm_antihermitian(lam * ((a @ sp) - (a.conj().T @ sm)))
    keep = (np.arange(dim) <= n_max).astype(np.float64)
    proj = np.kron(np.diag(keep), np.eye(2))
    return a, sz, sp, sm, lam, unitary, proj


def dispersive_hamiltonian(g: float, delta: float, dim: int) -> ComplexMatrix:
    """Single-mode dispersive form: delta/2 sz + (g^2/delta)(n sz + upper)."""
    a, sz, sp, sm = _single_mode_atom_ops(dim)
    shift = g * g / delta
    number = a.conj().T @ a
    return 0.5 * delta * sz + shift * (number @ sz) + shift * (sp @ sm)


def adiabatic_residual(g: float, delta: float, dim: int, n_max: int) -> float:
    """Spectral-norm residual of the adiabatic elimination on photon numbers
    <= n_max: || P (e^S H e^-S - H_dispersive) P || with
    S = (g/delta)(a sigma+ - a+ sigma-).

    Scales as O(g^3/delta^2): doubling delta at fixed g cuts it ~4x.
    """
    a, sz, sp, sm, lam, unitary, proj = _elimination_pieces(g, delta, dim, n_max)
    ham = 0.5 * delta * sz + g * ((a @ sp) + (a.conj().T @ sm))
    transformed = unitary @ ham @ unitary.conj().T
    diff = proj @ (transformed - dispersive_hamiltonian(g, delta, dim)) @ proj
    return float(np.linalg.norm(diff, 2))


def elimination_operator_residuals(g: float, delta: float, dim: int, n_max: int):
    """Residuals of the transformed-operator expansions on the projected
    block, keyed by operator. "mode" and "lowering" are accurate through
    first order in lambda = g/delta (residual O(lambda^2)); "inversion"
    through second order (residual O(lambda^3))."""
    a, sz, sp, sm, lam, unitary, proj = _elimination_pieces(g, delta, dim, n_max)
    number = a.conj().T @ a

    def resid(op, approx):
        return float(
            np.linalg.norm(proj @ (unitary @ op @ unitary.conj().T - approx) @ proj, 2)
        )

    return {
        "mode": resid(a, a + lam * sm),
        "lowering": resid(sm, sm + lam * (a @ sz)),
        "inversion": resid(
            sz,
            sz
            - 2.0 * lam * (a.conj().T @ sm + a @ sp)
            - 2.0 * lam * lam * (number @ sz)
            - 2.0 * lam * lam * (sp @ sm),
        ),
    }
