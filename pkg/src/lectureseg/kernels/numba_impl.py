"""numba @njit kernel implementations (default backend)."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def correlate_at(target, win, ys, xs):
    """AND-counts between binary window `win` and binary `target` at each (ys, xs) placement.

    target, win: uint8 2-D arrays (nonzero = content). Placements must be fully
    inside the target. Returns int64 counts, one per placement.
    """
    h, w = win.shape
    n_on = 0
    for u in range(h):
        for v in range(w):
            if win[u, v]:
                n_on += 1
    us = np.empty(n_on, np.int64)
    vs = np.empty(n_on, np.int64)
    k = 0
    for u in range(h):
        for v in range(w):
            if win[u, v]:
                us[k] = u
                vs[k] = v
                k += 1
    out = np.zeros(ys.size, np.int64)
    for p in range(ys.size):
        y = ys[p]
        x = xs[p]
        c = 0
        for k in range(n_on):
            if target[y + us[k], x + vs[k]]:
                c += 1
        out[p] = c
    return out


@njit(cache=True)
def hlm_sum(edges, l0):
    """Sum of 2^(L/l0) over maximal horizontal edge-pixel runs with L >= l0."""
    height, width = edges.shape
    total = 0.0
    for y in range(height):
        run = 0
        for x in range(width):
            if edges[y, x]:
                run += 1
            else:
                if run >= l0:
                    total += 2.0 ** (run / l0)
                run = 0
        if run >= l0:
            total += 2.0 ** (run / l0)
    return total


@njit(cache=True)
def crm_covered(img, min_run, max_diff):
    """Count pixels lying in a horizontal or vertical run of >= min_run pixels
    where consecutive pixels differ by <= max_diff in every channel.

    img: int16 (H, W, 3).
    """
    height, width, _ = img.shape
    covered = np.zeros((height, width), np.uint8)
    for y in range(height):
        start = 0
        for x in range(1, width + 1):
            brk = True
            if x < width:
                brk = (
                    abs(img[y, x, 0] - img[y, x - 1, 0]) > max_diff
                    or abs(img[y, x, 1] - img[y, x - 1, 1]) > max_diff
                    or abs(img[y, x, 2] - img[y, x - 1, 2]) > max_diff
                )
            if brk:
                if x - start >= min_run:
                    for x2 in range(start, x):
                        covered[y, x2] = 1
                start = x
    for x in range(width):
        start = 0
        for y in range(1, height + 1):
            brk = True
            if y < height:
                brk = (
                    abs(img[y, x, 0] - img[y - 1, x, 0]) > max_diff
                    or abs(img[y, x, 1] - img[y - 1, x, 1]) > max_diff
                    or abs(img[y, x, 2] - img[y - 1, x, 2]) > max_diff
                )
            if brk:
                if y - start >= min_run:
                    for y2 in range(start, y):
                        covered[y2, x] = 1
                start = y
    return int(np.sum(covered))


@njit(cache=True, inline="always")
def _similar(img, y0, x0, y1, x1, sim):
    return (
        abs(img[y0, x0, 0] - img[y1, x1, 0]) <= sim
        and abs(img[y0, x0, 1] - img[y1, x1, 1]) <= sim
        and abs(img[y0, x0, 2] - img[y1, x1, 2]) <= sim
    )


@njit(cache=True)
def suppress_split_edges(edges, img, run_len, sim, cross):
    """Remove edge pixels separating two long homogeneous runs of different colors.

    An edge pixel is dropped when, along one axis, both of its sides carry a run
    of >= run_len mutually similar pixels (channel diff <= sim) and the two
    immediate neighbors differ by > cross in some channel.
    """
    height, width, _ = img.shape
    out = edges.copy()
    for y in range(height):
        for x in range(width):
            if not edges[y, x]:
                continue
            # horizontal split
            if 0 < x < width - 1:
                left = 1
                k = x - 1
                while k - 1 >= 0 and left < run_len and _similar(img, y, k - 1, y, k, sim):
                    left += 1
                    k -= 1
                if left >= run_len:
                    right = 1
                    k = x + 1
                    while k + 1 < width and right < run_len and _similar(img, y, k + 1, y, k, sim):
                        right += 1
                        k += 1
                    if right >= run_len and (
                        abs(img[y, x - 1, 0] - img[y, x + 1, 0]) > cross
                        or abs(img[y, x - 1, 1] - img[y, x + 1, 1]) > cross
                        or abs(img[y, x - 1, 2] - img[y, x + 1, 2]) > cross
                    ):
                        out[y, x] = 0
                        continue
            # vertical split
            if 0 < y < height - 1:
                up = 1
                k = y - 1
                while k - 1 >= 0 and up < run_len and _similar(img, k - 1, x, k, x, sim):
                    up += 1
                    k -= 1
                if up >= run_len:
                    down = 1
                    k = y + 1
                    while k + 1 < height and down < run_len and _similar(img, k + 1, x, k, x, sim):
                        down += 1
                        k += 1
                    if down >= run_len and (
                        abs(img[y - 1, x, 0] - img[y + 1, x, 0]) > cross
                        or abs(img[y - 1, x, 1] - img[y + 1, x, 1]) > cross
                        or abs(img[y - 1, x, 2] - img[y + 1, x, 2]) > cross
                    ):
                        out[y, x] = 0
    return out
