"""Jacobi eigensolvers for small dense complex matrices.

Both routines work on matrices of size at most ~16, where the cyclic
Jacobi sweep is simple, robust under degenerate spectra, and accurate to
round-off.  Large or batched problems (quadrature grids) go through
``numpy.linalg`` instead.
"""

import numpy as np

__all__ = ["jacobi_eigh", "jacobi_svd", "numerical_rank"]

_MAX_SWEEPS = 60


def _hermitian_rotation(app, aqq, apq):
    """Unitary 2x2 ``G`` with ``G^H [[app, apq], [conj(apq), aqq]] G`` diagonal."""
    r = abs(apq)
    phase = apq / r
    theta = 0.5 * np.arctan2(2.0 * r, aqq - app)
    c, s = np.cos(theta), np.sin(theta)
    # diag(1, conj(phase)) @ [[c, s], [-s, c]]
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])


def jacobi_eigh(a, tol=1e-15):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Hermitian matrix.  Only its Hermitian part is used.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm falls below
        ``tol * ||a||_F``.

    Returns
    -------
    w : ndarray, shape (n,)
        Eigenvalues in ascending order.
    v : ndarray, shape (n, n)
        Unitary matrix whose columns are the eigenvectors.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("jacobi_eigh expects a square matrix")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = np.linalg.norm(a)
    if scale == 0.0 or n == 1:
        return a.diagonal().real.copy(), v

    for _ in range(_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(a.diagonal()))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-300:
                    continue
                g = _hermitian_rotation(a[p, p].real, a[q, q].real, a[p, q])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g

    w = a.diagonal().real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _complete_basis(u, keep):
    """Fill columns of ``u`` not flagged in ``keep`` with an orthonormal completion."""
    n = u.shape[0]
    basis = [u[:, k] for k in range(u.shape[1]) if keep[k]]
    candidates = iter(np.eye(n, dtype=complex))
    for k in range(u.shape[1]):
        if keep[k]:
            continue
        while True:
            w = next(candidates).copy()
            for b in basis:
                w -= b * np.vdot(b, w)
            for b in basis:
                w -= b * np.vdot(b, w)
            nrm = np.linalg.norm(w)
            if nrm > 1e-8:
                break
        u[:, k] = w / nrm
        basis.append(u[:, k])
    return u


def jacobi_svd(a, tol=1e-15):
    """Singular value decomposition by one-sided (Hestenes) Jacobi.

    Returns ``(u, s, vh)`` with ``a = u @ diag(s) @ vh``, ``s`` descending
    and ``u``, ``vh`` unitary (square ``a`` only).
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("jacobi_svd expects a square matrix")
    n = a.shape[0]
    work = a.copy()
    v = np.eye(n, dtype=complex)

    for _ in range(_MAX_SWEEPS):
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = np.vdot(work[:, i], work[:, i]).real
                beta = np.vdot(work[:, j], work[:, j]).real
                gamma = np.vdot(work[:, i], work[:, j])
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or abs(gamma) <= 1e-300:
                    continue
                rotated = True
                g = _hermitian_rotation(alpha, beta, gamma)
                idx = [i, j]
                work[:, idx] = work[:, idx] @ g
                v[:, idx] = v[:, idx] @ g
        if not rotated:
            break

    s = np.linalg.norm(work, axis=0)
    order = np.argsort(-s, kind="stable")
    s, work, v = s[order], work[:, order], v[:, order]
    keep = s > 1e-14 * max(s[0], 1e-300)
    u = np.zeros((n, n), dtype=complex)
    u[:, keep] = work[:, keep] / s[keep]
    u = _complete_basis(u, keep)
    return u, s, v.conj().T


def numerical_rank(m, rtol=1e-8):
    """Count singular values larger than ``rtol`` times the largest one."""
    s = np.linalg.svd(np.asarray(m), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))
