"""Hot sampling kernels, in two mirrored flavors.

Each kernel is written twice: a pure-numpy version (vectorized over
samples, looping over the small dimension axis) and a numba @njit twin
(looping over samples).  Both consume the counter streams defined in
rngstream.py with identical arithmetic and identical accumulation
order, so the flavors agree to the last ulp of the libm calls involved
(log/cos may differ by 1 ulp between numpy's SIMD loops and scalar
libm; everything else is exact).

The public names (sphere_tails, rho_fixed_q, rho_variable_q,
null_covariance_traces) are bound to the active flavor at import time;
the numpy flavor is always importable under its _numpy name for
benchmarks and equivalence tests.

Counter layout: sample i, coordinate j -> normal index i*d + j within
the caller-derived seed domain.  null_covariance_traces flattens
(trial t, row j, coordinate k) -> (t*m + j)*d + k.
"""

from __future__ import annotations

import math

import numpy as np

from . import _backend
from .rngstream import GAMMA, TWO_PI, _MIX1, _MIX2, stream_root

_U = np.uint64
_CHUNK_ELEMS = 1 << 22


def _chunk_rows(count: int, d: int) -> int:
    return max(1, min(count, _CHUNK_ELEMS // max(d, 1)))


def _mix64_arr(z):
    z = (z ^ (z >> _U(30))) * _U(_MIX1)
    z = (z ^ (z >> _U(27))) * _U(_MIX2)
    return z ^ (z >> _U(31))


def _normals_at(root_u, kidx):
    h1 = _mix64_arr(root_u + (kidx * _U(2)) * _U(GAMMA))
    h2 = _mix64_arr(root_u + (kidx * _U(2) + _U(1)) * _U(GAMMA))
    u1 = ((h1 >> _U(11)).astype(np.float64) + 0.5) * (2.0**-53)
    u2 = ((h2 >> _U(11)).astype(np.float64) + 0.5) * (2.0**-53)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)


def sphere_tails_numpy(seed: int, count: int, d: int, radius: float) -> np.ndarray:
    """(count, d) rows: radius * z/||z|| with z ~ N(0, I_d)."""
    root = _U(stream_root(seed))
    out = np.empty((count, d))
    step = _chunk_rows(count, d)
    for lo in range(0, count, step):
        hi = min(lo + step, count)
        base = np.arange(lo, hi, dtype=np.uint64) * _U(d)
        z = np.empty((hi - lo, d))
        for j in range(d):
            z[:, j] = _normals_at(root, base + _U(j))
        acc = np.zeros(hi - lo)
        for j in range(d):
            acc = acc + z[:, j] * z[:, j]
        scale = radius / np.sqrt(acc)
        out[lo:hi] = z * scale[:, None]
    return out


def tails_per_row_radius_numpy(seed: int, radii: np.ndarray, d: int) -> np.ndarray:
    """Like sphere_tails but row j is scaled by radii[j]."""
    count = radii.shape[0]
    root = _U(stream_root(seed))
    out = np.empty((count, d))
    step = _chunk_rows(count, d)
    for lo in range(0, count, step):
        hi = min(lo + step, count)
        base = np.arange(lo, hi, dtype=np.uint64) * _U(d)
        z = np.empty((hi - lo, d))
        for j in range(d):
            z[:, j] = _normals_at(root, base + _U(j))
        acc = np.zeros(hi - lo)
        for j in range(d):
            acc = acc + z[:, j] * z[:, j]
        scale = radii[lo:hi] / np.sqrt(acc)
        out[lo:hi] = z * scale[:, None]
    return out


def rho_fixed_q_numpy(
    seed: int, count: int, d: int, base: float, radius: float, w: np.ndarray
) -> np.ndarray:
    """rho_i = base + radius * (z_i . w)/||z_i|| without materializing tails."""
    root = _U(stream_root(seed))
    out = np.empty(count)
    step = _chunk_rows(count, d)
    for lo in range(0, count, step):
        hi = min(lo + step, count)
        kbase = np.arange(lo, hi, dtype=np.uint64) * _U(d)
        acc = np.zeros(hi - lo)
        dot = np.zeros(hi - lo)
        for j in range(d):
            z = _normals_at(root, kbase + _U(j))
            acc = acc + z * z
            dot = dot + z * w[j]
        t = dot / np.sqrt(acc)
        out[lo:hi] = base + radius * t
    return out


def rho_variable_q_numpy(
    seed: int, qhats: np.ndarray, d: int, r: float, w: np.ndarray
) -> np.ndarray:
    """rho_i = qhat_i*r + sqrt(1-qhat_i^2) * (z_i . w)/||z_i||."""
    count = qhats.shape[0]
    root = _U(stream_root(seed))
    out = np.empty(count)
    step = _chunk_rows(count, d)
    for lo in range(0, count, step):
        hi = min(lo + step, count)
        kbase = np.arange(lo, hi, dtype=np.uint64) * _U(d)
        acc = np.zeros(hi - lo)
        dot = np.zeros(hi - lo)
        for j in range(d):
            z = _normals_at(root, kbase + _U(j))
            acc = acc + z * z
            dot = dot + z * w[j]
        t = dot / np.sqrt(acc)
        q = qhats[lo:hi]
        out[lo:hi] = q * r + np.sqrt(1.0 - q * q) * t
    return out


def null_covariance_traces_numpy(
    seed: int, trials: int, m: int, d: int, radii: np.ndarray
) -> np.ndarray:
    """Trace of the sample covariance of m fresh sphere rows, per trial.

    Row j of a trial lives on the sphere of radius radii[j]; the trace
    uses the m-1 denominator.
    """
    root = _U(stream_root(seed))
    out = np.empty(trials)
    step = max(1, min(trials, _CHUNK_ELEMS // max(m * d, 1)))
    for lo in range(0, trials, step):
        hi = min(lo + step, trials)
        nt = hi - lo
        t_idx = np.arange(lo, hi, dtype=np.uint64)[:, None]
        j_idx = np.arange(m, dtype=np.uint64)[None, :]
        rowbase = (t_idx * _U(m) + j_idx) * _U(d)  # (nt, m)
        x = np.empty((nt, m, d))
        for k in range(d):
            x[:, :, k] = _normals_at(root, rowbase + _U(k))
        acc = np.zeros((nt, m))
        for k in range(d):
            acc = acc + x[:, :, k] * x[:, :, k]
        scale = radii[None, :] / np.sqrt(acc)
        x *= scale[:, :, None]
        mean = np.zeros((nt, d))
        for j in range(m):
            mean = mean + x[:, j, :]
        mean = mean / m
        tot = np.zeros(nt)
        for k in range(d):
            s = np.zeros(nt)
            for j in range(m):
                dx = x[:, j, k] - mean[:, k]
                s = s + dx * dx
            tot = tot + s
        out[lo:hi] = tot / (m - 1)
    return out


if _backend.USING_NUMBA:
    njit = _backend.njit
    _GAMMA_U = np.uint64(GAMMA)
    _MIX1_U = np.uint64(_MIX1)
    _MIX2_U = np.uint64(_MIX2)

    @njit(cache=True)
    def _mix64_nb(z):
        z = (z ^ (z >> np.uint64(30))) * _MIX1_U
        z = (z ^ (z >> np.uint64(27))) * _MIX2_U
        return z ^ (z >> np.uint64(31))

    @njit(cache=True)
    def _normal_nb(root, k):
        h1 = _mix64_nb(root + (k * np.uint64(2)) * _GAMMA_U)
        h2 = _mix64_nb(root + (k * np.uint64(2) + np.uint64(1)) * _GAMMA_U)
        u1 = (np.float64(h1 >> np.uint64(11)) + 0.5) * (2.0**-53)
        u2 = (np.float64(h2 >> np.uint64(11)) + 0.5) * (2.0**-53)
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2)

    @njit(cache=True)
    def _sphere_tails_nb(root, count, d, radius):
        out = np.empty((count, d))
        for i in range(count):
            base = np.uint64(i) * np.uint64(d)
            acc = 0.0
            for j in range(d):
                z = _normal_nb(root, base + np.uint64(j))
                out[i, j] = z
                acc = acc + z * z
            scale = radius / math.sqrt(acc)
            for j in range(d):
                out[i, j] = out[i, j] * scale
        return out

    @njit(cache=True)
    def _tails_per_row_radius_nb(root, radii, d):
        count = radii.shape[0]
        out = np.empty((count, d))
        for i in range(count):
            base = np.uint64(i) * np.uint64(d)
            acc = 0.0
            for j in range(d):
                z = _normal_nb(root, base + np.uint64(j))
                out[i, j] = z
                acc = acc + z * z
            scale = radii[i] / math.sqrt(acc)
            for j in range(d):
                out[i, j] = out[i, j] * scale
        return out

    @njit(cache=True)
    def _rho_fixed_q_nb(root, count, d, base, radius, w):
        out = np.empty(count)
        for i in range(count):
            kbase = np.uint64(i) * np.uint64(d)
            acc = 0.0
            dot = 0.0
            for j in range(d):
                z = _normal_nb(root, kbase + np.uint64(j))
                acc = acc + z * z
                dot = dot + z * w[j]
            t = dot / math.sqrt(acc)
            out[i] = base + radius * t
        return out

    @njit(cache=True)
    def _rho_variable_q_nb(root, qhats, d, r, w):
        count = qhats.shape[0]
        out = np.empty(count)
        for i in range(count):
            kbase = np.uint64(i) * np.uint64(d)
            acc = 0.0
            dot = 0.0
            for j in range(d):
                z = _normal_nb(root, kbase + np.uint64(j))
                acc = acc + z * z
                dot = dot + z * w[j]
            t = dot / math.sqrt(acc)
            q = qhats[i]
            out[i] = q * r + math.sqrt(1.0 - q * q) * t
        return out

    @njit(cache=True)
    def _null_traces_nb(root, trials, m, d, radii):
        out = np.empty(trials)
        x = np.empty((m, d))
        mean = np.empty(d)
        for t in range(trials):
            tbase = np.uint64(t) * np.uint64(m)
            for j in range(m):
                rowbase = (tbase + np.uint64(j)) * np.uint64(d)
                acc = 0.0
                for k in range(d):
                    z = _normal_nb(root, rowbase + np.uint64(k))
                    x[j, k] = z
                    acc = acc + z * z
                scale = radii[j] / math.sqrt(acc)
                for k in range(d):
                    x[j, k] = x[j, k] * scale
            for k in range(d):
                mean[k] = 0.0
            for j in range(m):
                for k in range(d):
                    mean[k] = mean[k] + x[j, k]
            for k in range(d):
                mean[k] = mean[k] / m
            tot = 0.0
            for k in range(d):
                s = 0.0
                for j in range(m):
                    dx = x[j, k] - mean[k]
                    s = s + dx * dx
                tot = tot + s
            out[t] = tot / (m - 1)
        return out

    def sphere_tails(seed, count, d, radius):
        return _sphere_tails_nb(_U(stream_root(seed)), count, d, radius)

    def tails_per_row_radius(seed, radii, d):
        return _tails_per_row_radius_nb(_U(stream_root(seed)), radii, d)

    def rho_fixed_q(seed, count, d, base, radius, w):
        return _rho_fixed_q_nb(_U(stream_root(seed)), count, d, base, radius, w)

    def rho_variable_q(seed, qhats, d, r, w):
        return _rho_variable_q_nb(_U(stream_root(seed)), qhats, d, r, w)

    def null_covariance_traces(seed, trials, m, d, radii):
        return _null_traces_nb(_U(stream_root(seed)), trials, m, d, radii)

else:
    sphere_tails = sphere_tails_numpy
    tails_per_row_radius = tails_per_row_radius_numpy
    rho_fixed_q = rho_fixed_q_numpy
    rho_variable_q = rho_variable_q_numpy
    null_covariance_traces = null_covariance_traces_numpy
