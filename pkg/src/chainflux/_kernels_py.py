"""Pure-Python fallbacks for the compiled kernels, with the same signatures.

The Jacobi solver uses the round-robin (tournament) cyclic ordering so that
each round applies n/2 disjoint rotations as one vectorized update.
"""
from __future__ import annotations

import numpy as np


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def jacobi_eigh(a_in, tol: float = 1e-12, max_sweeps: int = 60):
    A = np.array(a_in, dtype=np.complex128, copy=True)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V, 0, 0.0
    rounds = _round_robin(n)
    sweep = 0
    while True:
        off = float(np.linalg.norm(A - np.diag(np.diag(A))))
        if off <= tol * scale or sweep >= max_sweeps:
            break
        sweep += 1
        for P, Q in rounds:
            if P.size == 0:
                continue
            apq = A[P, Q]
            g = np.abs(apq)
            act = g >= 1e-290
            if not np.any(act):
                continue
            P, Q, apq, g = P[act], Q[act], apq[act], g[act]
            ec = np.conj(apq / g)
            app, aqq = A[P, P].real, A[Q, Q].real
            theta = (aqq - app) / (2.0 * g)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            gqp, gqq = -s * ec, c * ec
            # columns: B = A G
            colP, colQ = A[:, P].copy(), A[:, Q].copy()
            A[:, P] = colP * c + colQ * gqp
            A[:, Q] = colP * s + colQ * gqq
            # rows: A' = G^H B
            rowP, rowQ = A[P, :].copy(), A[Q, :].copy()
            A[P, :] = c[:, None] * rowP + np.conj(gqp)[:, None] * rowQ
            A[Q, :] = s[:, None] * rowP + np.conj(gqq)[:, None] * rowQ
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            A[P, P] = A[P, P].real
            A[Q, Q] = A[Q, Q].real
            vP, vQ = V[:, P].copy(), V[:, Q].copy()
            V[:, P] = vP * c + vQ * gqp
            V[:, Q] = vP * s + vQ * gqq
        A = 0.5 * (A + A.conj().T)
    w = np.real(np.diag(A)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order], sweep, float(off)


def pfaffian_parlett_reid(a_in) -> complex:
    A = np.array(a_in, dtype=np.complex128, copy=True)
    n = A.shape[0]
    if n % 2 == 1:
        return 0j
    pf = 1.0 + 0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            pf = -pf
        piv = A[k, k + 1]
        if piv == 0.0:
            return 0j
        pf *= piv
        if k + 2 < n:
            tau = A[k, k + 2:] / piv
            col = A[k + 2:, k + 1]
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return complex(pf)
