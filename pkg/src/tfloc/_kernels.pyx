# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as ``tfloc._kernels_py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, fabs, M_PI
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()


def sinc_matrix(x, y):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], m = yv.shape[0], i, j
    out = np.empty((n, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double t
    with nogil:
        for i in range(n):
            for j in range(m):
                t = M_PI * (xv[i] - yv[j])
                if t == 0.0:
                    o[i, j] = 1.0
                else:
                    o[i, j] = sin(t) / t
    return out


def product_enumerate(base, int d, double floor):
    vals_np = np.ascontiguousarray([v for v in base if v > floor], dtype=np.float64)
    cdef double[::1] vals = vals_np
    cdef Py_ssize_t n = vals.shape[0]
    if n == 0 or d < 1:
        return np.empty(0)
    cdef double top = vals[0]
    cdef double *tops = <double *> malloc(d * sizeof(double))
    cdef Py_ssize_t *pos = <Py_ssize_t *> malloc(d * sizeof(Py_ssize_t))
    cdef double *part = <double *> malloc((d + 1) * sizeof(double))
    cdef Py_ssize_t cap = 1024, cnt = 0
    cdef double *buf = <double *> malloc(cap * sizeof(double))
    cdef int k, depth
    cdef double p
    if tops == NULL or pos == NULL or part == NULL or buf == NULL:
        raise MemoryError()
    try:
        tops[0] = 1.0
        for k in range(1, d):
            tops[k] = tops[k - 1] * top
        # iterative depth-first walk over index tuples in lexicographic order
        depth = 0
        part[0] = 1.0
        pos[0] = 0
        while depth >= 0:
            if pos[depth] >= n:
                depth -= 1
                if depth >= 0:
                    pos[depth] += 1
                continue
            p = part[depth] * vals[pos[depth]]
            if p * tops[d - depth - 1] <= floor:
                # later entries are smaller: abandon this level
                depth -= 1
                if depth >= 0:
                    pos[depth] += 1
                continue
            if depth == d - 1:
                if cnt == cap:
                    cap *= 2
                    buf = <double *> realloc(buf, cap * sizeof(double))
                    if buf == NULL:
                        raise MemoryError()
                buf[cnt] = p
                cnt += 1
                pos[depth] += 1
            else:
                part[depth + 1] = p
                depth += 1
                pos[depth] = 0
        out = np.empty(cnt, dtype=np.float64)
        for k in range(cnt):
            out[k] = buf[k]
        return out
    finally:
        free(tops)
        free(pos)
        free(part)
        free(buf)


cdef inline double _j0(double x) nogil:
    if x == 0.0:
        return 1.0
    return sin(x) / x


cdef inline double _j1(double x) nogil:
    cdef double x2, term, acc
    cdef int k
    if fabs(x) < 1.0:
        x2 = x * x
        term = x / 3.0
        acc = term
        for k in range(1, 9):
            term = -term * x2 / ((2.0 * k) * (2.0 * k + 3.0))
            acc += term
        return acc
    return (sin(x) - x * cos(x)) / (x * x)


def trapezoid_fourier(z, q, double plateau):
    cdef double[::1] zv = np.ascontiguousarray(np.ravel(z), dtype=np.float64)
    cdef double q1 = q[0], q2 = q[1], q3 = q[2], q4 = q[3]
    cdef double wa[3], wb[3], gam[3], dlt[3]
    cdef int npieces = 0, p
    cdef double g
    if q2 > q1:
        g = plateau / (q2 - q1)
        wa[npieces] = q1; wb[npieces] = q2; gam[npieces] = g; dlt[npieces] = -g * q1
        npieces += 1
    if q3 > q2:
        wa[npieces] = q2; wb[npieces] = q3; gam[npieces] = 0.0; dlt[npieces] = plateau
        npieces += 1
    if q4 > q3:
        g = -plateau / (q4 - q3)
        wa[npieces] = q3; wb[npieces] = q4; gam[npieces] = g; dlt[npieces] = -g * q4
        npieces += 1
    cdef Py_ssize_t n = zv.shape[0], i
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef double a, m, h, x, re, im, c, s, mag, jj1
    with nogil:
        for i in range(n):
            a = 2.0 * M_PI * zv[i]
            re = 0.0
            im = 0.0
            for p in range(npieces):
                m = 0.5 * (wa[p] + wb[p])
                h = 0.5 * (wb[p] - wa[p])
                x = a * h
                mag = (gam[p] * m + dlt[p]) * 2.0 * h * _j0(x)
                jj1 = 2.0 * gam[p] * h * h * _j1(x)
                c = cos(a * m)
                s = sin(a * m)
                # exp(i a m) * (mag + i jj1)
                re += c * mag - s * jj1
                im += s * mag + c * jj1
            o[i] = re + 1j * im
    return out.reshape(np.shape(z))
