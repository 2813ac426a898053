"""Pure numpy/scipy kernel implementations (fallback backend).

Must stay bit-identical to numba_impl; both are exercised by the kernel
agreement tests and the benchmark.
"""
from __future__ import annotations

import numpy as np
from scipy.signal import fftconvolve


def correlate_at(target, win, ys, xs):
    """AND-counts between binary window and binary target at each placement."""
    # One FFT correlation over all valid placements, then gather. Counts are
    # small integers, so rounding the float result is exact.
    full = fftconvolve(
        target.astype(np.float64), win[::-1, ::-1].astype(np.float64), mode="valid"
    )
    counts = np.rint(full).astype(np.int64)
    counts[counts < 0] = 0
    return counts[ys, xs]


def hlm_sum(edges, l0):
    """Sum of 2^(L/l0) over maximal horizontal edge-pixel runs with L >= l0."""
    padded = np.zeros((edges.shape[0], edges.shape[1] + 2), np.int8)
    padded[:, 1:-1] = edges != 0
    d = np.diff(padded.reshape(-1))
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    lengths = (ends - starts).astype(np.float64)
    lengths = lengths[lengths >= l0]
    return float(np.sum(2.0 ** (lengths / l0)))


def _run_ext(sim):
    """Per-position lengths of consecutive-True runs in `sim` ending at / starting at x."""
    n = sim.shape[1]
    idx = np.arange(n)[None, :]
    last_false = np.maximum.accumulate(np.where(~sim, idx, -1), axis=1)
    run_end = np.where(sim, idx - last_false, 0)
    rev = sim[:, ::-1]
    last_false_r = np.maximum.accumulate(np.where(~rev, idx, -1), axis=1)
    run_start = np.where(rev, idx - last_false_r, 0)[:, ::-1]
    return run_end, run_start


def _covered_axis(img, min_run, max_diff):
    h, w, _ = img.shape
    sim = (np.abs(np.diff(img.astype(np.int32), axis=1)) <= max_diff).all(axis=2)
    run_end, run_start = _run_ext(sim)
    left_ext = np.zeros((h, w), np.int64)
    left_ext[:, 1:] = run_end
    right_ext = np.zeros((h, w), np.int64)
    right_ext[:, : w - 1] = run_start
    return (1 + left_ext + right_ext) >= min_run


def crm_covered(img, min_run, max_diff):
    """Count pixels in a horizontal or vertical similar-pixel run of >= min_run."""
    cov_h = _covered_axis(img, min_run, max_diff)
    cov_v = _covered_axis(np.transpose(img, (1, 0, 2)), min_run, max_diff).T
    return int(np.count_nonzero(cov_h | cov_v))


def _split_axis(edges, img, run_len, sim_diff, cross):
    h, w, _ = img.shape
    if w < 3:
        return np.zeros((h, w), bool)
    sim = (np.abs(np.diff(img.astype(np.int32), axis=1)) <= sim_diff).all(axis=2)
    run_end, run_start = _run_ext(sim)
    left = np.zeros((h, w), np.int64)
    left[:, 1] = 1
    left[:, 2:] = 1 + run_end[:, : w - 2]
    right = np.zeros((h, w), np.int64)
    right[:, w - 2] = 1
    right[:, : w - 2] = 1 + run_start[:, 1 : w - 1]
    cross_diff = np.zeros((h, w), bool)
    a = img[:, : w - 2, :].astype(np.int32)
    b = img[:, 2:, :].astype(np.int32)
    cross_diff[:, 1 : w - 1] = (np.abs(b - a) > cross).any(axis=2)
    return (edges != 0) & (left >= run_len) & (right >= run_len) & cross_diff


def suppress_split_edges(edges, img, run_len, sim, cross):
    """Remove edge pixels separating two long homogeneous runs of different colors."""
    split_h = _split_axis(edges, img, run_len, sim, cross)
    split_v = _split_axis(edges.T, np.transpose(img, (1, 0, 2)), run_len, sim, cross).T
    out = edges.copy()
    out[split_h | split_v] = 0
    return out
