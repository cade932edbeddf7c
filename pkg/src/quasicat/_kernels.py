"""Hot numerical kernels, JIT-compiled with numba when available.

Set QUASICAT_DISABLE_NUMBA=1 (or "true"/"yes") to force the pure-numpy
paths; they compute the same thing and are used automatically when numba
is not importable. benchmarks/bench_kernels.py compares the two.
"""

import os

import numpy as np


def _jc_propagate_numpy(psi, g, delta, t):
    """Advance a (dim_I, batch, 2) quasi-basis tensor by exp(-iHt) under the
    resonant-or-detuned single-mode atom coupling.

    Column 0 is the lower atomic level, column 1 the upper. Pairs
    (n, upper) <-> (n+1, lower) mix inside 2x2 blocks with Rabi frequency
    sqrt(delta^2 + 4 g^2 (n+1)); the lone (0, lower) level and the
    truncation-edge (dim-1, upper) level only pick up bare detuning phases.
    """
    d = psi.shape[0]
    out = np.empty_like(psi)
    edge = np.exp(0.5j * delta * t)
    out[0, :, 0] = psi[0, :, 0] * edge
    out[d - 1, :, 1] = psi[d - 1, :, 1] * np.conj(edge)
    if d > 1:
        n = np.arange(d - 1, dtype=np.float64)
        omega = np.sqrt(delta * delta + 4.0 * g * g * (n + 1.0))
        half = 0.5 * omega * t
        co = np.cos(half)
        si = np.sin(half)
        diag = (co - 1j * (delta / omega) * si)[:, None]
        mix = (-2j * g * np.sqrt(n + 1.0) / omega * si)[:, None]
        upper = psi[:-1, :, 1]
        lower = psi[1:, :, 0]
        out[:-1, :, 1] = diag * upper + mix * lower
        out[1:, :, 0] = mix * upper + np.conj(diag) * lower
    return out


def _husimi_grid_numpy(rho, re_axis, im_axis):
    """Q(alpha) = <alpha|rho|alpha>/pi on a rectangular grid.

    Returns values[i, j] for alpha = re_axis[j] + 1i im_axis[i].
    """
    d = rho.shape[0]
    alphas = (re_axis[None, :] + 1j * im_axis[:, None]).ravel()
    coh = np.empty((alphas.size, d), dtype=np.complex128)
    coh[:, 0] = np.exp(-0.5 * np.abs(alphas) ** 2)
    for n in range(1, d):
        coh[:, n] = coh[:, n - 1] * alphas / np.sqrt(n)
    q = np.einsum("pr,pr->p", np.conj(coh), coh @ rho.T).real / np.pi
    return q.reshape(im_axis.size, re_axis.size)


try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

_DISABLED = os.environ.get("QUASICAT_DISABLE_NUMBA", "").strip().lower() in (
    "1",
    "true",
    "yes",
)
USE_NUMBA = HAS_NUMBA and not _DISABLED


if HAS_NUMBA:

    @njit(cache=True)
    def _jc_propagate_numba(psi, g, delta, t):
        d = psi.shape[0]
        m = psi.shape[1]
        out = np.empty_like(psi)
        edge = np.exp(0.5j * delta * t)
        for j in range(m):
            out[0, j, 0] = psi[0, j, 0] * edge
            out[d - 1, j, 1] = psi[d - 1, j, 1] * np.conj(edge)
        for n in range(d - 1):
            omega = np.sqrt(delta * delta + 4.0 * g * g * (n + 1.0))
            half = 0.5 * omega * t
            diag = np.cos(half) - 1j * (delta / omega) * np.sin(half)
            mix = -2j * g * np.sqrt(n + 1.0) / omega * np.sin(half)
            for j in range(m):
                upper = psi[n, j, 1]
                lower = psi[n + 1, j, 0]
                out[n, j, 1] = diag * upper + mix * lower
                out[n + 1, j, 0] = mix * upper + np.conj(diag) * lower
        return out

    @njit(cache=True)
    def _husimi_grid_numba(rho, re_axis, im_axis):
        d = rho.shape[0]
        out = np.empty((im_axis.size, re_axis.size))
        coh = np.empty(d, dtype=np.complex128)
        for i in range(im_axis.size):
            for j in range(re_axis.size):
                alpha = complex(re_axis[j], im_axis[i])
                coh[0] = np.exp(-0.5 * (alpha.real**2 + alpha.imag**2))
                for n in range(1, d):
                    coh[n] = coh[n - 1] * alpha / np.sqrt(n)
                q = 0.0
                for r in range(d):
                    acc = 0.0 + 0.0j
                    for s in range(d):
                        acc += rho[r, s] * coh[s]
                    q += (np.conj(coh[r]) * acc).real
                out[i, j] = q / np.pi
        return out

else:
    _jc_propagate_numba = None
    _husimi_grid_numba = None


def jc_propagate(psi, g, delta, t):
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    if USE_NUMBA:
        return _jc_propagate_numba(psi, float(g), float(delta), float(t))
    return _jc_propagate_numpy(psi, float(g), float(delta), float(t))


def husimi_grid(rho, re_axis, im_axis):
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    re_axis = np.ascontiguousarray(re_axis, dtype=np.float64)
    im_axis = np.ascontiguousarray(im_axis, dtype=np.float64)
    if USE_NUMBA:
        return _husimi_grid_numba(rho, re_axis, im_axis)
    return _husimi_grid_numpy(rho, re_axis, im_axis)


def using_numba() -> bool:
    return USE_NUMBA
