"""Pure-Python Metropolis block; same arithmetic as the compiled ``_metropolis``."""
from __future__ import annotations

from math import exp, log


def full_energy(x, y) -> float:
    n = len(x)
    e = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            e += log(dx * dx + dy * dy)
    return e


def full_confinement(x, y) -> float:
    c = 0.0
    for i in range(len(x)):
        c += x[i] * x[i] + y[i] * y[i]
    return c


def run_block(x, y, normals, uniforms, step: float):
    """Run ``len(normals)`` sweeps in place on the float64 arrays ``x`` and ``y``."""
    n = len(x)
    xs = x.tolist()
    ys = y.tolist()
    nrm = normals.tolist()
    uni = uniforms.tolist()
    weight = float(n)
    energy = full_energy(xs, ys)
    conf = full_confinement(xs, ys)
    energy_sum = 0.0
    accepted = 0
    others = [[j for j in range(n) if j != i] for i in range(n)]
    for s in range(len(nrm)):
        row = nrm[s]
        urow = uni[s]
        for i in range(n):
            ox = xs[i]
            oy = ys[i]
            nx = ox + step * row[i][0]
            ny = oy + step * row[i][1]
            d_energy = 0.0
            coincident = False
            for j in others[i]:
                ax = nx - xs[j]
                ay = ny - ys[j]
                rn = ax * ax + ay * ay
                if rn == 0.0:
                    coincident = True
                    break
                bx = ox - xs[j]
                by = oy - ys[j]
                ro = bx * bx + by * by
                d_energy += log(rn / ro)
            if coincident:
                continue
            d_conf = (nx * nx + ny * ny) - (ox * ox + oy * oy)
            d_logw = d_energy - weight * d_conf
            if d_logw >= 0.0 or urow[i] < exp(d_logw):
                xs[i] = nx
                ys[i] = ny
                energy += d_energy
                conf += d_conf
                accepted += 1
        energy_sum += energy
    x[:] = xs
    y[:] = ys
    return accepted, energy_sum, energy, conf
