"""Jitted pairwise kernels.  Import this module only when numba is wanted.

The per-pair arithmetic mirrors posori.mav / posori.features step for step;
rows of the output are independent, so the parallel loops are deterministic
for any thread count.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, prange

_PURE_EPS = 1e-7
_ANTI_EPS = 1e-6
_SERIES_EPS = 1e-4


@njit(cache=True)
def _mav_terms(x1, n1, x2, n2):
    """Five metric terms of the mav velocity at (x1, n1) toward (x2, n2)."""
    cx = n1[1] * n2[2] - n1[2] * n2[1]
    cy = n1[2] * n2[0] - n1[0] * n2[2]
    cz = n1[0] * n2[1] - n1[1] * n2[0]
    s = math.sqrt(cx * cx + cy * cy + cz * cz)
    c = n1[0] * n2[0] + n1[1] * n2[1] + n1[2] * n2[2]
    theta = math.atan2(s, c)

    dx = x2[0] - x1[0]
    dy = x2[1] - x1[1]
    dz = x2[2] - x1[2]

    if theta < _PURE_EPS:
        xdx, xdy, xdz = dx, dy, dz
        ndx = 0.0
        ndy = 0.0
        ndz = 0.0
    else:
        if theta > math.pi - _ANTI_EPS:
            # deterministic plane: Gram-Schmidt of the standard axis least aligned with n1
            ax = abs(n1[0])
            ay = abs(n1[1])
            az = abs(n1[2])
            if ax <= ay and ax <= az:
                sx, sy, sz = 1.0, 0.0, 0.0
            elif ay <= az:
                sx, sy, sz = 0.0, 1.0, 0.0
            else:
                sx, sy, sz = 0.0, 0.0, 1.0
            dot = sx * n1[0] + sy * n1[1] + sz * n1[2]
            ux = sx - dot * n1[0]
            uy = sy - dot * n1[1]
            uz = sz - dot * n1[2]
            un = math.sqrt(ux * ux + uy * uy + uz * uz)
            ux /= un
            uy /= un
            uz /= un
            lx = n1[1] * uz - n1[2] * uy
            ly = n1[2] * ux - n1[0] * uz
            lz = n1[0] * uy - n1[1] * ux
        else:
            lx = cx / s
            ly = cy / s
            lz = cz / s

        along = dx * lx + dy * ly + dz * lz
        px = along * lx
        py = along * ly
        pz = along * lz
        qx = dx - px
        qy = dy - py
        qz = dz - pz

        if theta < _SERIES_EPS:
            t2 = theta * theta
            f = 1.0 - t2 / 12.0 - t2 * t2 / 720.0
        else:
            half = 0.5 * theta
            f = half * math.cos(half) / math.sin(half)

        mx = 0.5 * (x1[0] + x2[0])
        my = 0.5 * (x1[1] + x2[1])
        mz = 0.5 * (x1[2] + x2[2])

        vx = -theta * (ly * mz - lz * my) + f * qx + px
        vy = -theta * (lz * mx - lx * mz) + f * qy + py
        vz = -theta * (lx * my - ly * mx) + f * qz + pz

        wx = theta * lx
        wy = theta * ly
        wz = theta * lz

        xdx = vx + (wy * x1[2] - wz * x1[1])
        xdy = vy + (wz * x1[0] - wx * x1[2])
        xdz = vz + (wx * x1[1] - wy * x1[0])
        ndx = wy * n1[2] - wz * n1[1]
        ndy = wz * n1[0] - wx * n1[2]
        ndz = wx * n1[1] - wy * n1[0]

    a = xdx * n1[0] + xdy * n1[1] + xdz * n1[2]
    rx = xdy * n1[2] - xdz * n1[1]
    ry = xdz * n1[0] - xdx * n1[2]
    rz = xdx * n1[1] - xdy * n1[0]
    gx = ndy * n1[2] - ndz * n1[1]
    gy = ndz * n1[0] - ndx * n1[2]
    gz = ndx * n1[1] - ndy * n1[0]

    t1 = a * a
    t2_ = rx * rx + ry * ry + rz * rz
    t3 = ndx * ndx + ndy * ndy + ndz * ndz
    t4 = 2.0 * (xdx * ndx + xdy * ndy + xdz * ndz)
    t5 = 2.0 * (xdx * gx + xdy * gy + xdz * gz)
    return t1, t2_, t3, t4, t5


@njit(cache=True, parallel=True)
def pairwise_mav(xs, ns, w):
    n = xs.shape[0]
    out = np.empty((n, n))
    for i in prange(n):
        for j in range(n):
            t1, t2, t3, t4, t5 = _mav_terms(xs[i], ns[i], xs[j], ns[j])
            q = w[0] * t1 + w[1] * t2 + w[2] * t3 + w[3] * t4 + w[4] * t5
            if q == 0.0:
                out[i, j] = 0.0
            else:
                out[i, j] = math.copysign(math.sqrt(abs(q)), q)
    return out


@njit(cache=True, parallel=True)
def pairwise_triple(xs, ns):
    n = xs.shape[0]
    out = np.empty((n, n, 3))
    for i in prange(n):
        for j in range(n):
            dx = xs[j, 0] - xs[i, 0]
            dy = xs[j, 1] - xs[i, 1]
            dz = xs[j, 2] - xs[i, 2]
            i1 = dx * ns[i, 0] + dy * ns[i, 1] + dz * ns[i, 2]
            ex = dx - i1 * ns[i, 0]
            ey = dy - i1 * ns[i, 1]
            ez = dz - i1 * ns[i, 2]
            i2 = math.sqrt(ex * ex + ey * ey + ez * ez)
            cx = ns[i, 1] * ns[j, 2] - ns[i, 2] * ns[j, 1]
            cy = ns[i, 2] * ns[j, 0] - ns[i, 0] * ns[j, 2]
            cz = ns[i, 0] * ns[j, 1] - ns[i, 1] * ns[j, 0]
            i3 = math.atan2(
                math.sqrt(cx * cx + cy * cy + cz * cz),
                ns[i, 0] * ns[j, 0] + ns[i, 1] * ns[j, 1] + ns[i, 2] * ns[j, 2],
            )
            out[i, j, 0] = i1
            out[i, j, 1] = i2
            out[i, j, 2] = i3
    return out
