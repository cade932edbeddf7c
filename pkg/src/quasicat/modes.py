"""Quasi-mode machinery for two field modes coupled to one atom.

When the two couplings are real, a single orthogonal rotation of the mode
operators concentrates all the atom-field coupling into quasi mode I and
leaves quasi mode II a spectator. This module owns that rotation: its
parameters, its action on coherent amplitudes, its realization as a
two-mode (beam-splitter-type) unitary, the induced composition law for
squeeze operators, and the analogous rotation that decouples the two
dispersively shifted oscillators when the detunings differ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BasisMismatch,
    BothCouplingsZero,
    DimTooSmall,
    NonFiniteInput,
    NonUnitPhase,
    ZeroDetuning,
)
from .fock import ComplexMatrix, ladder_matrix

PHYSICAL = "physical"
QUASI = "quasi"


@dataclass
class ModeRotation:
    """Rotation angle and couplings defining the quasi-mode basis.

    Invariants: g = sqrt(g1^2 + g2^2) > 0 and cos(theta) = g1 / g.
    """

    theta: float
    g: float
    g1: float
    g2: float


@dataclass
class AmplitudePair:
    """Coherent amplitudes of a two-mode product state, tagged by basis."""

    first: complex
    second: complex
    basis: str = PHYSICAL

    def __post_init__(self):
        if self.basis not in (PHYSICAL, QUASI):
            raise BasisMismatch(f"unknown basis tag {self.basis!r}")
        self.first = complex(self.first)
        self.second = complex(self.second)


@dataclass
class DecoupleParams:
    """Rotation angle and the two frequency-like eigenvalues that decouple
    the dispersively shifted oscillator pair."""

    eta: float
    lambda_mode: float
    zeta_mode: float


def rotation_params(g1: float, g2: float) -> ModeRotation:
    """Build the quasi-mode rotation from two real couplings.

    theta lands in [0, pi/2] for nonnegative couplings; g2 = 0 means quasi
    mode I coincides with physical mode 1.
    """
    g1 = float(g1)
    g2 = float(g2)
    if not (math.isfinite(g1) and math.isfinite(g2)):
        raise NonFiniteInput("couplings must be finite")
    gsq = g1 * g1 + g2 * g2
    if gsq == 0.0:
        raise BothCouplingsZero("g1 = g2 = 0 leaves the rotation undefined")
    return ModeRotation(math.atan2(g2, g1), math.sqrt(gsq), g1, g2)


def rotate_amplitudes(
    rot: ModeRotation, pair: AmplitudePair, direction: str = "forward"
) -> AmplitudePair:
    """Map coherent amplitudes between physical and quasi bases.

    forward: (alpha, beta) -> (mu, nu) = (c a + s b, -s a + c b).
    inverse applies the transpose. |first|^2 + |second|^2 is preserved
    exactly (the rotation is orthogonal).
    """
    c = math.cos(rot.theta)
    s = math.sin(rot.theta)
    if direction == "forward":
        if pair.basis != PHYSICAL:
            raise BasisMismatch("forward rotation expects physical amplitudes")
        return AmplitudePair(
            c * pair.first + s * pair.second,
            -s * pair.first + c * pair.second,
            QUASI,
        )
    if direction == "inverse":
        if pair.basis != QUASI:
            raise BasisMismatch("inverse rotation expects quasi amplitudes")
        return AmplitudePair(
            c * pair.first - s * pair.second,
            s * pair.first + c * pair.second,
            PHYSICAL,
        )
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


# Eigendecomposition of the mixing generator depends only on the dims, so it
# is cached and reused across rotation angles.
_mixer_eig_cache: dict = {}


def mode_rotation_unitary(rot: ModeRotation, dim1: int, dim2: int) -> ComplexMatrix:
    """Two-mode unitary R = exp(theta (a+ b - a b+)) realizing the rotation.

    Sign convention (fixed once against a small-dim oracle):
    R+ a R = cos(theta) a + sin(theta) b, and R|alpha, beta> is the coherent
    product with forward-rotated amplitudes.
    """
    if dim1 < 2 or dim2 < 2:
        raise DimTooSmall("mode_rotation_unitary needs dims >= 2")
    key = (dim1, dim2)
    if key not in _mixer_eig_cache:
        a = np.kron(ladder_matrix(dim1), np.eye(dim2))
        b = np.kron(np.eye(dim1), ladder_matrix(dim2))
        mixer = a.conj().T @ b - a @ b.conj().T
        _mixer_eig_cache[key] = np.linalg.eigh(1j * mixer)
    w, vecs = _mixer_eig_cache[key]
    return (vecs * np.exp(-1j * rot.theta * w)) @ vecs.conj().T


def squeeze_composition(rot: ModeRotation, z1: complex, z2: complex):
    """Quasi-basis parameters (p, q) of the product S_1(z1) S_2(z2).

    p = sin(2 theta)(z2 - z1)/2 feeds the cross two-mode squeeze
    exp(p* A B - p A+ B+); q = z1 cos^2 + z2 sin^2 is the quasi-mode-I
    squeeze. The factorized form exp(cross) S_I(q) S_II(q) reproduces the
    product exactly when z1 = z2 (any theta) or when theta = pi/4 with real
    parameters; elsewhere the second quasi mode would need the complementary
    coefficient z1 sin^2 + z2 cos^2 and the factors stop commuting.
    """
    z1 = complex(z1)
    z2 = complex(z2)
    p = math.sin(2.0 * rot.theta) * (z2 - z1) / 2.0
    q = z1 * math.cos(rot.theta) ** 2 + z2 * math.sin(rot.theta) ** 2
    return p, q


def quasi_phase_amplitudes(
    rot: ModeRotation, phase_on_mode_i: complex, pair: AmplitudePair
) -> AmplitudePair:
    """Rotate to the quasi basis, phase the mode-I amplitude, rotate back.

    This is how a number-conditioned phase on quasi mode I shows up on the
    physical coherent amplitudes. phase_on_mode_i must sit on the unit
    circle.
    """
    phase_on_mode_i = complex(phase_on_mode_i)
    if abs(abs(phase_on_mode_i) - 1.0) > 1e-12:
        raise NonUnitPhase(f"|phase| = {abs(phase_on_mode_i)!r} is not 1")
    quasi = rotate_amplitudes(rot, pair, "forward")
    shifted = AmplitudePair(phase_on_mode_i * quasi.first, quasi.second, QUASI)
    return rotate_amplitudes(rot, shifted, "inverse")


def total_photon_shell_indices(dim1: int, dim2: int, cap: int) -> np.ndarray:
    """Flat indices of the two-mode basis states with n1 + n2 <= cap.

    Complete total-photon shells form the trusted block for two-mode
    operator identities: the rotation preserves total photon number, so a
    state supported there cannot have been contaminated by the truncation
    edge under any of the operators compared.
    """
    n1 = np.arange(dim1)[:, None]
    n2 = np.arange(dim2)[None, :]
    return np.flatnonzero((n1 + n2 <= cap).ravel())


def squeeze_identity_residual(
    rot: ModeRotation,
    z1: complex,
    z2: complex,
    dim: int,
    input_cap: int = 8,
    row_cap: int = None,
) -> float:
    """Residual of the squeeze composition law on the trusted block.

    Applies S_1(z1) S_2(z2) and exp(p* A B - p A+ B+) S_I(q) S_II(q) to the
    complete-shell basis columns with n1 + n2 <= input_cap and returns the
    2-norm of the difference restricted to rows with n1 + n2 <= row_cap
    (default: input_cap). Uses sparse Krylov exponentials so dim ~ 60 per
    mode stays cheap.
    """
    import scipy.sparse as sp
    from scipy.sparse.linalg import expm_multiply

    if row_cap is None:
        row_cap = input_cap
    z1 = complex(z1)
    z2 = complex(z2)
    p, q = squeeze_composition(rot, z1, z2)
    ident = sp.identity(dim, format="csr")
    a = sp.kron(sp.csr_matrix(ladder_matrix(dim)), ident, format="csr")
    b = sp.kron(ident, sp.csr_matrix(ladder_matrix(dim)), format="csr")
    c = math.cos(rot.theta)
    s = math.sin(rot.theta)
    mode_i = c * a + s * b
    mode_ii = -s * a + c * b

    def squeeze_gen(z, op):
        return 0.5 * (np.conj(z) * (op @ op) - z * (op.conj().T @ op.conj().T))

    cols = total_photon_shell_indices(dim, dim, input_cap)
    probe = np.zeros((dim * dim, cols.size), dtype=np.complex128)
    probe[cols, np.arange(cols.size)] = 1.0

    left = expm_multiply(squeeze_gen(z2, b), probe)
    left = expm_multiply(squeeze_gen(z1, a), left)

    right = expm_multiply(squeeze_gen(q, mode_ii), probe)
    right = expm_multiply(squeeze_gen(q, mode_i), right)
    if p != 0:
        cross = np.conj(p) * (mode_i @ mode_ii) - p * (
            mode_i.conj().T @ mode_ii.conj().T
        )
        right = expm_multiply(cross, right)

    rows = total_photon_shell_indices(dim, dim, row_cap)
    return float(np.linalg.norm((left - right)[rows, :], 2))


def decouple_params(
    g1: float, g2: float, delta1: float, delta2: float
) -> DecoupleParams:
    """Rotation that diagonalizes the dispersive two-oscillator coupling.

    The intensity-shift quadratic form has matrix
    [[g1^2/d1, c], [c, g2^2/d2]] with c = g1 g2 (d1 + d2) / (2 d1 d2);
    eta is chosen with a quadrant-aware arctangent so the degenerate case
    g1^2 d2 = g2^2 d1 lands on eta = pi/4, and (lambda_mode, zeta_mode) are
    the exact eigenvalues along the rotated modes.
    """
    if delta1 == 0.0 or delta2 == 0.0:
        raise ZeroDetuning("decoupling divides by both detunings")
    g1 = float(g1)
    g2 = float(g2)
    m11 = g1 * g1 / delta1
    m22 = g2 * g2 / delta2
    cross = g1 * g2 * (delta1 + delta2) / (2.0 * delta1 * delta2)
    eta = 0.5 * math.atan2(2.0 * cross, m11 - m22)
    co = math.cos(eta)
    si = math.sin(eta)
    lam = co * co * m11 + si * si * m22 + 2.0 * si * co * cross
    zet = si * si * m11 + co * co * m22 - 2.0 * si * co * cross
    return DecoupleParams(eta, lam, zet)
