# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: round-robin complex Jacobi eigensolver and Parlett-Reid Pfaffian."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

cnp.import_array()


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline double complex cconj(double complex z) nogil:
    return z.real - 1j * z.imag


def _round_robin(Py_ssize_t n):
    """Index pairs per round of the circle-method tournament; every pair appears once per sweep."""
    cdef Py_ssize_t m = n + (n % 2)
    players = list(range(m))
    P = np.zeros((max(m - 1, 1), m // 2), dtype=np.intp)
    Q = np.zeros((max(m - 1, 1), m // 2), dtype=np.intp)
    cnt = np.zeros(max(m - 1, 1), dtype=np.intp)
    for r in range(m - 1):
        j = 0
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                P[r, j] = min(a, b)
                Q[r, j] = max(a, b)
                j += 1
        cnt[r] = j
        players = [players[0], players[m - 1]] + players[1:m - 1]
    return P, Q, cnt


def jacobi_eigh(a_in, double tol=1e-12, int max_sweeps=60):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parallel (round-robin) ordering: each round rotates n/2 disjoint pairs,
    applied as one pass over the rows for the column update and one pass
    over the pivot rows for the row update, so all memory access is
    contiguous. Convergence: off-diagonal Frobenius norm <= tol * Frobenius
    norm of the input.

    Returns (eigenvalues ascending, eigenvectors as columns, sweeps used, final off-norm).
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef double complex[:, ::1] A = arr
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] varr = np.eye(n, dtype=np.complex128)
    cdef double complex[:, ::1] V = varr
    Pn, Qn, cntn = _round_robin(n)
    cdef Py_ssize_t[:, ::1] P = Pn
    cdef Py_ssize_t[:, ::1] Q = Qn
    cdef Py_ssize_t[::1] cnt = cntn
    cdef Py_ssize_t half = max(n // 2 + 1, 1)
    cdef double[::1] cs = np.zeros(half)
    cdef double[::1] ss = np.zeros(half)
    cdef double[::1] ts = np.zeros(half)
    cdef double[::1] gs = np.zeros(half)
    cdef double complex[::1] gqps = np.zeros(half, dtype=np.complex128)
    cdef double complex[::1] gqqs = np.zeros(half, dtype=np.complex128)
    cdef char[::1] act = np.zeros(half, dtype=np.int8)
    cdef Py_ssize_t p, q, k, r, i, nr
    cdef double g, theta, t, c, s, off, scale, app, aqq
    cdef double complex e, ec, akp, akq, gqp, gqq
    cdef int sweep = 0
    nr = Pn.shape[0] if n > 1 else 0
    scale = 0.0
    for p in range(n):
        for q in range(n):
            scale += cabs2(A[p, q])
    scale = sqrt(scale)
    if scale == 0.0:
        return np.zeros(n), varr, 0, 0.0
    with nogil:
        while True:
            off = 0.0
            for p in range(n):
                for q in range(p + 1, n):
                    off += cabs2(A[p, q])
            off = sqrt(2.0 * off)
            if off <= tol * scale or sweep >= max_sweeps:
                break
            sweep += 1
            for r in range(nr):
                for i in range(cnt[r]):
                    p = P[r, i]
                    q = Q[r, i]
                    g = sqrt(cabs2(A[p, q]))
                    act[i] = 0
                    if g < 1e-290:
                        continue
                    app = A[p, p].real
                    aqq = A[q, q].real
                    if sweep > 3 and fabs(app) + 1e3 * g == fabs(app) and fabs(aqq) + 1e3 * g == fabs(aqq):
                        A[p, q] = 0.0
                        A[q, p] = 0.0
                        continue
                    act[i] = 1
                    e = A[p, q] / g
                    ec = cconj(e)
                    theta = (aqq - app) / (2.0 * g)
                    if theta >= 0.0:
                        t = 1.0 / (theta + hypot(theta, 1.0))
                    else:
                        t = -1.0 / (-theta + hypot(theta, 1.0))
                    c = 1.0 / sqrt(t * t + 1.0)
                    cs[i] = c
                    ss[i] = t * c
                    ts[i] = t
                    gs[i] = g
                    # G = diag(1, conj(e)) * [[c, s], [-s, c]] on (p, q)
                    gqps[i] = -t * c * ec
                    gqqs[i] = c * ec
                # B = A G, row by row
                for k in range(n):
                    for i in range(cnt[r]):
                        if not act[i]:
                            continue
                        p = P[r, i]
                        q = Q[r, i]
                        akp = A[k, p]
                        akq = A[k, q]
                        A[k, p] = cs[i] * akp + gqps[i] * akq
                        A[k, q] = ss[i] * akp + gqqs[i] * akq
                        akp = V[k, p]
                        akq = V[k, q]
                        V[k, p] = cs[i] * akp + gqps[i] * akq
                        V[k, q] = ss[i] * akp + gqqs[i] * akq
                # A' = G^H B on the pivot rows
                for i in range(cnt[r]):
                    if not act[i]:
                        continue
                    p = P[r, i]
                    q = Q[r, i]
                    gqp = cconj(gqps[i])
                    gqq = cconj(gqqs[i])
                    app = A[p, p].real
                    for k in range(n):
                        akp = A[p, k]
                        akq = A[q, k]
                        A[p, k] = cs[i] * akp + gqp * akq
                        A[q, k] = ss[i] * akp + gqq * akq
                # the pivot blocks are diagonal in exact arithmetic
                for i in range(cnt[r]):
                    if not act[i]:
                        continue
                    p = P[r, i]
                    q = Q[r, i]
                    A[p, q] = 0.0
                    A[q, p] = 0.0
                    A[p, p] = A[p, p].real
                    A[q, q] = A[q, q].real
    w = np.real(np.diag(arr)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], varr[:, order], sweep, off


def pfaffian_parlett_reid(a_in):
    """Pfaffian by skew Gaussian elimination with partial pivoting, O(n^3)."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] arr = np.array(a_in, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = arr.shape[0]
    cdef double complex[:, ::1] A = arr
    cdef Py_ssize_t k, i, j, kp
    cdef double best, v
    cdef double complex pf = 1.0
    cdef double complex tmp, piv, ti
    if n % 2 == 1:
        return 0j
    with nogil:
        for k in range(0, n - 1, 2):
            kp = k + 1
            best = cabs2(A[k + 1, k])
            for i in range(k + 2, n):
                v = cabs2(A[i, k])
                if v > best:
                    best = v
                    kp = i
            if kp != k + 1:
                for j in range(n):
                    tmp = A[k + 1, j]
                    A[k + 1, j] = A[kp, j]
                    A[kp, j] = tmp
                for i in range(n):
                    tmp = A[i, k + 1]
                    A[i, k + 1] = A[i, kp]
                    A[i, kp] = tmp
                pf = -pf
            piv = A[k, k + 1]
            if piv == 0.0:
                pf = 0.0
                break
            pf = pf * piv
            # A[i,j] += tau_i A[j,k+1] - A[i,k+1] tau_j with tau = A[k,:]/piv
            for i in range(k + 2, n):
                ti = A[k, i] / piv
                for j in range(i + 1, n):
                    A[i, j] = A[i, j] + ti * A[j, k + 1] - A[i, k + 1] * (A[k, j] / piv)
                    A[j, i] = -A[i, j]
    return complex(pf)
