"""Truncated Fock-space states and operators for a single bosonic mode.

States are complex amplitude arrays over photon numbers 0..dim-1.
Constructors renormalize after truncation and record how much probability
mass fell beyond the edge; they refuse to proceed when that mass reaches
``leak_tol``, because silent truncation is the dominant numerical hazard
in everything built on top of this module.

Gate matrices (displacement, squeeze) are built by exact eigendecomposition
of the finite antihermitian generator, so they are unitary to roundoff on
the whole retained space (trusted-block buffer 0), not just away from the
edge. The canonical commutator [a, a+] still breaks on the last row; tests
that probe it must stop at n < dim - 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    DimTooSmall,
    NonFiniteInput,
    ParameterOutOfRange,
)

# Default ceiling on probability mass allowed beyond the truncation edge.
LEAK_TOL = 1e-10

# Squeezed-vacuum tails decay like tanh(r)^{2m} / (sqrt(pi m) cosh r), so
# |z| <= 1.5 keeps the tail below LEAK_TOL for dim >= 60.
SQUEEZE_CAP = 1.5

# Role-agnostic container for operator matrices.
ComplexMatrix = np.ndarray


@dataclass
class TruncationReport:
    """What was asked for, at what dimension, and what leaked past the edge."""

    requested: tuple
    dim: int
    tail_mass: float


@dataclass
class FockVector:
    """Single-mode state over photon numbers 0..dim-1."""

    amps: np.ndarray
    dim: int
    report: TruncationReport | None = None

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.dim < 1:
            raise DimTooSmall("FockVector needs dim >= 1")
        if self.amps.shape != (self.dim,):
            raise DimensionMismatch(
                f"amps shape {self.amps.shape} does not match dim {self.dim}"
            )
        if not np.all(np.isfinite(self.amps.view(np.float64))):
            raise NonFiniteInput("non-finite amplitude in FockVector")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def mean_photon(self) -> float:
        return float(np.sum(np.arange(self.dim) * np.abs(self.amps) ** 2))

    def overlap(self, other: "FockVector") -> complex:
        """Inner product <self|other>."""
        if self.dim != other.dim:
            raise DimensionMismatch("FockVector dims differ")
        return complex(np.vdot(self.amps, other.amps))


def _check_finite_scalar(value: complex, name: str) -> complex:
    value = complex(value)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise NonFiniteInput(f"{name} = {value!r}")
    return value


def suggested_dim(alpha: complex) -> int:
    """Heuristic truncation for a coherent amplitude: |a|^2 + 5|a| + 10."""
    r = abs(alpha)
    return int(math.ceil(r * r + 5.0 * r + 10.0))


def basis_state(n: int, dim: int) -> FockVector:
    if dim < 1:
        raise DimTooSmall("dim must be >= 1")
    if not 0 <= n < dim:
        raise DimensionMismatch(f"photon number {n} outside 0..{dim - 1}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[n] = 1.0
    return FockVector(amps, dim, TruncationReport((n,), dim, 0.0))


def coherent_state(alpha: complex, dim: int, leak_tol: float = LEAK_TOL) -> FockVector:
    """Coherent state |alpha> truncated to dim levels.

    Amplitudes follow c_{n+1} = c_n * alpha / sqrt(n+1) with
    c_0 = exp(-|alpha|^2 / 2), i.e. the ratio law
    c_{n+1}/c_n = e^{-i phi} sqrt(nbar/(n+1)) for alpha = sqrt(nbar) e^{-i phi}.
    Sizing heuristic: dim >= |alpha|^2 + 5|alpha| + 10 keeps the tail far
    below default leak_tol; the binding check is the tail mass itself.
    """
    alpha = _check_finite_scalar(alpha, "alpha")
    if dim < 1:
        raise DimTooSmall("dim must be >= 1")
    amps = np.empty(dim, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if tail >= leak_tol:
        raise DimTooSmall(
            f"coherent tail mass {tail:.3e} >= leak_tol {leak_tol:.1e} at dim"
            f" {dim}; try dim >= {max(suggested_dim(alpha), dim + 8)}"
        )
    amps /= np.linalg.norm(amps)
    return FockVector(amps, dim, TruncationReport((alpha,), dim, tail))


def squeezed_vacuum(z: complex, dim: int, leak_tol: float = LEAK_TOL) -> FockVector:
    """Squeezed vacuum S(z)|0> truncated to dim levels.

    Only even photon numbers are populated. |z| is capped at SQUEEZE_CAP;
    beyond that the slowly decaying even-n tail cannot be held at desk-scale
    dims (tail per term ~ tanh(r)^{2m} / (sqrt(pi m) cosh r)).
    """
    z = _check_finite_scalar(z, "z")
    if dim < 2:
        raise DimTooSmall("squeezed vacuum needs dim >= 2")
    r = abs(z)
    if r > SQUEEZE_CAP:
        raise ParameterOutOfRange(f"|z| = {r:.3f} exceeds cap {SQUEEZE_CAP}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[0] = 1.0 / math.sqrt(math.cosh(r))
    if r > 0.0:
        factor = -(z / r) * math.tanh(r)
        c = amps[0]
        for m in range(1, (dim - 1) // 2 + 1):
            c = c * factor * math.sqrt((2 * m - 1) * (2 * m)) / (2 * m)
            amps[2 * m] = c
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amps) ** 2)))
    if tail >= leak_tol:
        raise DimTooSmall(
            f"squeezed tail mass {tail:.3e} >= leak_tol {leak_tol:.1e} at dim {dim}"
        )
    amps /= np.linalg.norm(amps)
    return FockVector(amps, dim, TruncationReport((z,), dim, tail))


def ladder_matrix(dim: int) -> ComplexMatrix:
    """Annihilation operator: sqrt(n) at positions (n-1, n). Creation is the
    conjugate transpose."""
    if dim < 2:
        raise DimTooSmall("ladder_matrix needs dim >= 2")
    return np.diag(np.sqrt(np.arange(1, dim, dtype=np.float64)), k=1).astype(
        np.complex128
    )


def expm_antihermitian(gen: np.ndarray) -> ComplexMatrix:
    """exp(gen) for antihermitian gen, via eigendecomposition of i*gen.

    Exactly unitary up to roundoff, unlike a truncated power series.
    """
    gen = np.asarray(gen, dtype=np.complex128)
    herm = 1j * gen
    scale = max(1.0, float(np.abs(herm).max()))
    if not np.allclose(herm, herm.conj().T, atol=1e-12 * scale):
        raise NonFiniteInput("generator is not antihermitian")
    w, vecs = np.linalg.eigh(herm)
    return (vecs * np.exp(-1j * w)) @ vecs.conj().T


def displacement_matrix(
    alpha: complex, dim: int, leak_tol: float = LEAK_TOL
) -> ComplexMatrix:
    """Displacement D(alpha) = exp(alpha a+ - alpha* a) on the truncated space."""
    # reuse the coherent-state tail check for sizing
    coherent_state(alpha, dim, leak_tol)
    a = ladder_matrix(dim)
    gen = alpha * a.conj().T - np.conj(alpha) * a
    return expm_antihermitian(gen)


def squeeze_matrix(z: complex, dim: int, leak_tol: float = LEAK_TOL) -> ComplexMatrix:
    """Squeeze S(z) = exp((z* a^2 - z a+^2)/2) on the truncated space."""
    squeezed_vacuum(z, dim, leak_tol)
    a = ladder_matrix(dim)
    gen = 0.5 * (np.conj(z) * (a @ a) - z * (a.conj().T @ a.conj().T))
    return expm_antihermitian(gen)


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """Analytic <alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta)."""
    alpha = _check_finite_scalar(alpha, "alpha")
    beta = _check_finite_scalar(beta, "beta")
    return cmath.exp(
        -0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + np.conj(alpha) * beta
    )
