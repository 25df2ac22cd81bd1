# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled propagation kernel (hot loop).

Same contract and tableau as the pure NumPy backend in ``_propagate_py``:
Dormand-Prince 5(4) with adaptive per-step error control at
rtol = atol = tol, integrating Y' = (A0 + A1/(1 + e cos theta)) Y in
C ``long double`` so the symplectic defect of large-norm monodromies stays
resolvable.  The stepping loop runs without the GIL, so parameter sweeps
parallelize across threads.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc

cnp.import_array()

cdef extern from "<math.h>" nogil:
    long double cosl(long double)
    long double fabsl(long double)
    long double sqrtl(long double)
    long double powl(long double, long double)

ctypedef long double ld

cdef ld[7] TC
cdef ld[7][7] TA
cdef ld[7] TB5
cdef ld[7] TERR

cdef void _init_tableau() noexcept:
    cdef int i, j
    TC[0] = 0
    TC[1] = <ld>1 / 5
    TC[2] = <ld>3 / 10
    TC[3] = <ld>4 / 5
    TC[4] = <ld>8 / 9
    TC[5] = 1
    TC[6] = 1
    for i in range(7):
        for j in range(7):
            TA[i][j] = 0
    TA[1][0] = <ld>1 / 5
    TA[2][0] = <ld>3 / 40
    TA[2][1] = <ld>9 / 40
    TA[3][0] = <ld>44 / 45
    TA[3][1] = <ld>-56 / 15
    TA[3][2] = <ld>32 / 9
    TA[4][0] = <ld>19372 / 6561
    TA[4][1] = <ld>-25360 / 2187
    TA[4][2] = <ld>64448 / 6561
    TA[4][3] = <ld>-212 / 729
    TA[5][0] = <ld>9017 / 3168
    TA[5][1] = <ld>-355 / 33
    TA[5][2] = <ld>46732 / 5247
    TA[5][3] = <ld>49 / 176
    TA[5][4] = <ld>-5103 / 18656
    TA[6][0] = <ld>35 / 384
    TA[6][1] = 0
    TA[6][2] = <ld>500 / 1113
    TA[6][3] = <ld>125 / 192
    TA[6][4] = <ld>-2187 / 6784
    TA[6][5] = <ld>11 / 84
    for j in range(7):
        TB5[j] = TA[6][j]
    TERR[0] = TB5[0] - <ld>5179 / 57600
    TERR[1] = 0
    TERR[2] = TB5[2] - <ld>7571 / 16695
    TERR[3] = TB5[3] - <ld>393 / 640
    TERR[4] = TB5[4] - <ld>-92097 / 339200
    TERR[5] = TB5[5] - <ld>187 / 2100
    TERR[6] = TB5[6] - <ld>1 / 40

_init_tableau()

DEF MAX_STAGE = 7


cdef inline void _rhs(int d, ld* a0, ld* a1, ld fval, ld* y, ld* out, ld* m) noexcept nogil:
    # out = (a0 + fval*a1) @ y
    cdef int i, j, p
    cdef ld acc
    for i in range(d * d):
        m[i] = a0[i] + fval * a1[i]
    for i in range(d):
        for j in range(d):
            acc = 0
            for p in range(d):
                acc += m[i * d + p] * y[p * d + j]
            out[i * d + j] = acc


cdef ld _defect(int d, ld* y, ld* work) noexcept nogil:
    # |Y^T J Y - J|_inf with J = [[0, -I], [I, 0]]; work holds J @ Y.
    cdef int half = d // 2
    cdef int i, j, p
    cdef ld acc, best = 0
    for i in range(half):
        for j in range(d):
            work[i * d + j] = -y[(i + half) * d + j]
            work[(i + half) * d + j] = y[i * d + j]
    for i in range(d):
        for j in range(d):
            acc = 0
            for p in range(d):
                acc += y[p * d + i] * work[p * d + j]
            if j == i + half:
                acc += 1
            elif i == j + half:
                acc -= 1
            if fabsl(acc) > best:
                best = fabsl(acc)
    return best


def propagate_segments(a0_in, a1_in, double e, double tol, double max_step, thetas_in):
    """Propagate Y' = (A0 + A1/(1+e cos theta)) Y from 0 through `thetas_in`.

    Returns (ys, defects, steps, rejected) exactly as the pure backend does.
    """
    a0_arr = np.ascontiguousarray(a0_in, dtype=float)
    a1_arr = np.ascontiguousarray(a1_in, dtype=float)
    thetas = np.ascontiguousarray(thetas_in, dtype=float)
    cdef int d = a0_arr.shape[0]
    cdef int nout = thetas.shape[0]
    cdef double[:, ::1] a0v = a0_arr
    cdef double[:, ::1] a1v = a1_arr
    cdef double[::1] tv = thetas
    ys = np.empty((nout, d, d))
    defects = np.empty(nout)
    cdef double[:, :, ::1] ysv = ys
    cdef double[::1] defv = defects

    cdef int nn = d * d
    # one block: a0, a1, y, ynew, err, yi, m, work, 7 stage slopes
    cdef ld* buf = <ld*>malloc(sizeof(ld) * nn * (8 + MAX_STAGE))
    if buf == NULL:
        raise MemoryError()
    cdef ld* a0p = buf
    cdef ld* a1p = buf + nn
    cdef ld* y = buf + 2 * nn
    cdef ld* ynew = buf + 3 * nn
    cdef ld* err = buf + 4 * nn
    cdef ld* yi = buf + 5 * nn
    cdef ld* mwork = buf + 6 * nn
    cdef ld* jwork = buf + 7 * nn
    cdef ld* kst[MAX_STAGE]
    cdef int i, j, p, stage, idx
    for i in range(MAX_STAGE):
        kst[i] = buf + (8 + i) * nn

    cdef ld e_ld = e
    cdef ld tol_ld = tol
    cdef ld hmax = max_step
    cdef ld t = 0
    cdef ld h = hmax if hmax < 1e-2 else <ld>1e-2
    cdef ld t_end, fval, acc, sc, enorm, factor, hnext
    cdef ld* ktmp
    cdef long steps = 0, rejected = 0
    cdef long budget = 20000000
    cdef bint overflow = False

    with nogil:
        for i in range(d):
            for j in range(d):
                a0p[i * d + j] = a0v[i, j]
                a1p[i * d + j] = a1v[i, j]
                y[i * d + j] = 1 if i == j else 0
        _rhs(d, a0p, a1p, 1 / (1 + e_ld * cosl(t)), y, kst[0], mwork)
        for idx in range(nout):
            t_end = tv[idx]
            while t < t_end:
                if h > hmax:
                    h = hmax
                if h > t_end - t:
                    h = t_end - t
                for stage in range(1, MAX_STAGE):
                    for p in range(nn):
                        acc = 0
                        for j in range(stage):
                            acc += TA[stage][j] * kst[j][p]
                        yi[p] = y[p] + h * acc
                    fval = 1 / (1 + e_ld * cosl(t + TC[stage] * h))
                    _rhs(d, a0p, a1p, fval, yi, kst[stage], mwork)
                enorm = 0
                for p in range(nn):
                    acc = 0
                    for j in range(MAX_STAGE):
                        acc += TB5[j] * kst[j][p]
                    ynew[p] = y[p] + h * acc
                    acc = 0
                    for j in range(MAX_STAGE):
                        acc += TERR[j] * kst[j][p]
                    err[p] = h * acc
                    sc = fabsl(y[p])
                    if fabsl(ynew[p]) > sc:
                        sc = fabsl(ynew[p])
                    sc = tol_ld * (1 + sc)
                    enorm += (err[p] / sc) * (err[p] / sc)
                enorm = sqrtl(enorm / nn)
                if enorm <= 1:
                    t = t + h
                    ktmp = kst[0]
                    kst[0] = kst[MAX_STAGE - 1]
                    kst[MAX_STAGE - 1] = ktmp
                    ktmp = y
                    y = ynew
                    ynew = ktmp
                    steps += 1
                else:
                    rejected += 1
                if steps + rejected > budget:
                    overflow = True
                    break
                if enorm == 0:
                    factor = 5
                else:
                    factor = <ld>0.9 * powl(enorm, <ld>-0.2)
                    if factor > 5:
                        factor = 5
                    elif factor < <ld>0.2:
                        factor = <ld>0.2
                h = h * factor
            if overflow:
                break
            for i in range(d):
                for j in range(d):
                    ysv[idx, i, j] = <double>y[i * d + j]
            defv[idx] = <double>_defect(d, y, jwork)
    free(buf)
    if overflow:
        raise RuntimeError("step budget exhausted; tolerance too tight")
    return ys, defects, int(steps), int(rejected)
