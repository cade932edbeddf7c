"""State diagnostics: reduced density matrices, entropy and purity, pure-state
fidelity, atomic inversion, and Husimi-Q phase-space grids."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import (
    BadSubsystem,
    BasisMismatch,
    DimensionMismatch,
    GridTooSmall,
    NormViolation,
)
from .fock import FockVector
from .dynamics import SystemState

SUBSYSTEMS = ("mode1", "mode2", "atom")

# Eigenvalues below this are roundoff negativity and skipped in x ln x.
ENTROPY_CLAMP = 1e-14


@dataclass
class DensityMatrix:
    """Hermitian PSD matrix of unit trace over one or more subsystems.

    dims records the factor dimensions (in state layout order) so the
    matrix can be partially traced again.
    """

    matrix: np.ndarray
    dims: tuple
    label: str = ""

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        size = int(np.prod(self.dims))
        if self.matrix.shape != (size, size):
            raise DimensionMismatch(
                f"matrix shape {self.matrix.shape} does not match dims {self.dims}"
            )
        scale = max(1.0, float(np.abs(self.matrix).max()))
        if not np.allclose(self.matrix, self.matrix.conj().T, atol=1e-8 * scale):
            raise DimensionMismatch("density matrix is not Hermitian")
        tr = float(np.trace(self.matrix).real)
        if abs(tr - 1.0) > 1e-8:
            raise NormViolation(f"density matrix trace {tr} too far from 1")


def _normalize_keep(keep) -> tuple:
    if isinstance(keep, str):
        keep = (keep,)
    keep = tuple(keep)
    for name in keep:
        if name not in SUBSYSTEMS:
            raise BadSubsystem(f"unknown subsystem {name!r}")
    if not keep:
        raise BadSubsystem("must keep at least one subsystem")
    # preserve state layout order regardless of argument order
    return tuple(name for name in SUBSYSTEMS if name in keep)


def partial_trace(
    state: Union[SystemState, DensityMatrix], keep
) -> DensityMatrix:
    """Reduced density matrix over the kept subsystems.

    Subsystem order in the output follows the state layout
    (mode1, mode2, atom), not the order of the keep argument.
    """
    keep = _normalize_keep(keep)
    kept_axes = [SUBSYSTEMS.index(name) for name in keep]
    if isinstance(state, SystemState):
        tensor = state.tensor
        dims = tensor.shape
        letters = "abc"
        out_left = "".join(letters[i] for i in kept_axes)
        conj_letters = "".join(
            letters[i].upper() if i in kept_axes else letters[i] for i in range(3)
        )
        rho = np.einsum(f"abc,{conj_letters}->{out_left}{out_left.upper()}", tensor, np.conj(tensor))
    elif isinstance(state, DensityMatrix):
        dims = state.dims
        if len(dims) != 3:
            raise BadSubsystem("partial_trace over a DensityMatrix needs 3 factors")
        full = state.matrix.reshape(*dims, *dims)
        letters = "abc"
        uppers = "ABC"
        row = letters
        col = "".join(uppers[i] if i in kept_axes else letters[i] for i in range(3))
        out = "".join(letters[i] for i in kept_axes) + "".join(
            uppers[i] for i in kept_axes
        )
        rho = np.einsum(f"{row}{col}->{out}", full)
    else:
        raise BadSubsystem("partial_trace takes a SystemState or DensityMatrix")
    kept_dims = tuple(int(dims[i]) for i in kept_axes)
    size = int(np.prod(kept_dims))
    return DensityMatrix(rho.reshape(size, size), kept_dims, "+".join(keep))


def entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in nats; roundoff-negative eigenvalues clamped."""
    w = np.linalg.eigvalsh(rho.matrix)
    w = w[w > ENTROPY_CLAMP]
    return float(-np.sum(w * np.log(w)))


def purity(rho: DensityMatrix) -> float:
    """trace(rho^2); equals the squared Frobenius norm for Hermitian rho."""
    return float(np.vdot(rho.matrix, rho.matrix).real)


def _as_vector(state) -> np.ndarray:
    if isinstance(state, FockVector):
        return state.amps
    if isinstance(state, SystemState):
        return state.flat()
    return np.asarray(state, dtype=np.complex128).reshape(-1)


def fidelity(a, b) -> float:
    """|<a|b>|^2 for pure states (FockVector, SystemState, or raw arrays)."""
    if isinstance(a, SystemState) and isinstance(b, SystemState):
        if a.basis != b.basis:
            raise BasisMismatch("fidelity across different bases is meaningless")
    va = _as_vector(a)
    vb = _as_vector(b)
    if va.size != vb.size:
        raise DimensionMismatch(f"sizes {va.size} and {vb.size} differ")
    return float(np.abs(np.vdot(va, vb)) ** 2)


def pure_overlap(rho: DensityMatrix, target) -> float:
    """<target|rho|target> for a pure target; fidelity of a mixed state to a ray."""
    vec = _as_vector(target)
    if vec.size != rho.matrix.shape[0]:
        raise DimensionMismatch("target size does not match density matrix")
    return float(np.real(np.vdot(vec, rho.matrix @ vec)))


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    if rho.matrix.shape != sigma.matrix.shape:
        raise DimensionMismatch("density matrices differ in shape")
    w = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    return float(0.5 * np.sum(np.abs(w)))


def atomic_inversion(state: SystemState) -> float:
    """<sigma_z> = P(upper) - P(lower)."""
    if state.tensor.shape[2] != 2:
        raise BadSubsystem("state carries no atom")
    p_upper = float(np.sum(np.abs(state.tensor[:, :, 1]) ** 2))
    p_lower = float(np.sum(np.abs(state.tensor[:, :, 0]) ** 2))
    return p_upper - p_lower


def mean_photon(rho: DensityMatrix) -> float:
    if len(rho.dims) != 1:
        raise BadSubsystem("mean_photon expects a single-mode density matrix")
    n = np.arange(rho.dims[0], dtype=np.float64)
    return float(np.sum(n * np.diag(rho.matrix).real))


@dataclass
class PhaseSpaceGrid:
    """Husimi-Q samples: values[i, j] = Q(re_axis[j] + 1i im_axis[i])."""

    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray

    def cell_area(self) -> float:
        dre = float(self.re_axis[1] - self.re_axis[0])
        dim_ = float(self.im_axis[1] - self.im_axis[0])
        return dre * dim_

    def integral(self) -> float:
        """Riemann sum of Q over the grid; ~1 when the grid covers the state."""
        return float(np.sum(self.values) * self.cell_area())


def _as_axis(spec, default_limit: float, count: int) -> np.ndarray:
    if spec is None:
        return np.linspace(-default_limit, default_limit, count)
    spec = np.asarray(spec, dtype=np.float64)
    if spec.ndim == 1 and spec.size >= 2:
        return spec
    raise GridTooSmall("axis needs at least two points")


def husimi_q(
    rho: DensityMatrix,
    re_axis: Optional[Sequence[float]] = None,
    im_axis: Optional[Sequence[float]] = None,
    count: int = 101,
) -> PhaseSpaceGrid:
    """Q(alpha) = <alpha|rho|alpha>/pi for a single-mode density matrix.

    Default axes span [-L, L] with L = 1.5 (sqrt(<n>) + 2), wide enough for
    both lobes of a cat with margin. Supplied axes must still reach
    1.5 sqrt(<n>) or the grid is rejected. Values are clamped at 0 against
    roundoff and never exceed 1/pi.
    """
    if len(rho.dims) != 1:
        raise BadSubsystem("husimi_q expects a single-mode density matrix")
    nbar = mean_photon(rho)
    limit = 1.5 * (math.sqrt(max(nbar, 0.0)) + 2.0)
    re_axis = _as_axis(re_axis, limit, count)
    im_axis = _as_axis(im_axis, limit, count)
    required = 1.5 * math.sqrt(max(nbar, 0.0))
    for axis in (re_axis, im_axis):
        if max(abs(float(axis[0])), abs(float(axis[-1]))) < required:
            raise GridTooSmall(
                f"axis reaches {max(abs(axis[0]), abs(axis[-1])):.2f} but the state"
                f" needs {required:.2f}"
            )
    values = _kernels.husimi_grid(rho.matrix, re_axis, im_axis)
    values = np.maximum(values, 0.0)
    return PhaseSpaceGrid(re_axis, im_axis, values)
