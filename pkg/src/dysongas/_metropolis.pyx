# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Metropolis block for the rescaled beta = 1 planar gas.

Must stay operation-for-operation identical to ``_metropolis_py.run_block``
so both backends give bit-identical chains.
"""
from libc.math cimport log, exp


cdef double _energy(double[::1] x, double[::1] y, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double e = 0.0, dx, dy
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            e += log(dx * dx + dy * dy)
    return e


cdef double _confinement(double[::1] x, double[::1] y, Py_ssize_t n) nogil:
    cdef Py_ssize_t i
    cdef double c = 0.0
    for i in range(n):
        c += x[i] * x[i] + y[i] * y[i]
    return c


def full_energy(double[::1] x, double[::1] y):
    return _energy(x, y, x.shape[0])


def full_confinement(double[::1] x, double[::1] y):
    return _confinement(x, y, x.shape[0])


def run_block(double[::1] x, double[::1] y, const double[:, :, ::1] normals,
              const double[:, ::1] uniforms, double step):
    """Run ``normals.shape[0]`` sweeps in place.

    Returns ``(accepted, energy_sum, energy, confinement)`` where ``energy_sum``
    adds the pair energy after every sweep and the last two are the
    incrementally tracked values at the end of the block.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t n_sweeps = normals.shape[0]
    cdef Py_ssize_t s, i, j
    cdef double weight = <double>n
    cdef double energy = _energy(x, y, n)
    cdef double conf = _confinement(x, y, n)
    cdef double energy_sum = 0.0
    cdef double nx, ny, ox, oy, ax, ay, bx, by, rn, ro, d_energy, d_conf, d_logw
    cdef long accepted = 0
    cdef bint coincident
    with nogil:
        for s in range(n_sweeps):
            for i in range(n):
                ox = x[i]
                oy = y[i]
                nx = ox + step * normals[s, i, 0]
                ny = oy + step * normals[s, i, 1]
                d_energy = 0.0
                coincident = False
                for j in range(n):
                    if j == i:
                        continue
                    ax = nx - x[j]
                    ay = ny - y[j]
                    rn = ax * ax + ay * ay
                    if rn == 0.0:
                        coincident = True
                        break
                    bx = ox - x[j]
                    by = oy - y[j]
                    ro = bx * bx + by * by
                    d_energy += log(rn / ro)
                if coincident:
                    continue
                d_conf = (nx * nx + ny * ny) - (ox * ox + oy * oy)
                d_logw = d_energy - weight * d_conf
                if d_logw >= 0.0 or uniforms[s, i] < exp(d_logw):
                    x[i] = nx
                    y[i] = ny
                    energy += d_energy
                    conf += d_conf
                    accepted += 1
            energy_sum += energy
    return accepted, energy_sum, energy, conf
