"""Cyclic Jacobi rotations for small Hermitian problems, batched over a leading axis.

Two flavours share one rotation rule:

* ``jacobi_eigh`` diagonalises Hermitian matrices ``H`` directly.
* ``jacobi_rows`` diagonalises ``A A^H`` without forming it, by rotating
  the rows of ``A`` until they are mutually orthogonal (Hestenes).  The
  squared row norms are the eigenvalues of ``A A^H``; working on ``A``
  keeps small singular values at full relative accuracy, which a rank
  threshold of 1e-8 on singular values needs.
"""

from __future__ import annotations

import numpy as np

_EPS = np.finfo(float).eps


def _rotation(alpha, beta, g):
    """Real Jacobi rotation zeroing the off-diagonal of [[alpha, g], [g, beta]].

    ``g`` must be > 0 where active; returns (c, s).
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        tau = (beta - alpha) / (2.0 * g)
        t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
    t = np.where(np.isfinite(t), t, 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c


def _pairs(r):
    return [(p, q) for p in range(r - 1) for q in range(p + 1, r)]


def jacobi_eigh(h, tol: float = 1e-15, max_sweeps: int = 60):
    """Eigen-decomposition of Hermitian matrices by cyclic Jacobi sweeps.

    Parameters
    ----------
    h : array_like, shape (..., r, r)
        Hermitian matrices (only the Hermitian part is used).
    tol : float
        Sweeps stop once the off-diagonal Frobenius mass is below
        ``tol`` times the Frobenius norm, for every matrix in the batch.

    Returns
    -------
    w : ndarray, shape (..., r)
        Eigenvalues in ascending order.
    v : ndarray, shape (..., r, r)
        Unitary matrices whose columns are the matching eigenvectors.
    """
    h = np.asarray(h, dtype=complex)
    shape = h.shape
    r = shape[-1]
    a = h.reshape(-1, r, r)
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    v = np.broadcast_to(np.eye(r, dtype=complex), a.shape).copy()
    norm = np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    offmask = ~np.eye(r, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a[:, offmask]) ** 2, axis=1))
        if np.all(off <= tol * norm):
            break
        for p, q in _pairs(r):
            apq = a[:, p, q]
            g = np.abs(apq)
            active = g > _EPS * 1e-3 * np.maximum(norm, np.finfo(float).tiny)
            if not active.any():
                continue
            phase = np.where(active, apq / np.where(active, g, 1.0), 1.0)
            c, s = _rotation(a[:, p, p].real, a[:, q, q].real, np.where(active, g, 1.0))
            c = np.where(active, c, 1.0)
            s = np.where(active, s, 0.0)
            cs = (c[:, None], s[:, None], phase[:, None])
            _rotate_cols(a, p, q, *cs)
            _rotate_rows(a, p, q, *cs)
            _rotate_cols(v, p, q, *cs)
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0
    w = np.real(np.diagonal(a, axis1=1, axis2=2))
    order = np.argsort(w, axis=1)
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w.reshape(shape[:-1]), v.reshape(shape)


def _rotate_cols(m, p, q, c, s, phase):
    mp = m[:, :, p].copy()
    mq = m[:, :, q] * np.conj(phase)
    m[:, :, p] = c * mp - s * mq
    m[:, :, q] = s * mp + c * mq


def _rotate_rows(m, p, q, c, s, phase):
    mp = m[:, p, :].copy()
    mq = m[:, q, :] * phase
    m[:, p, :] = c * mp - s * mq
    m[:, q, :] = s * mp + c * mq


def jacobi_rows(a, tol: float = 1e-15, max_sweeps: int = 60):
    """One-sided Jacobi: ``A = U B`` with ``U`` unitary and the rows of ``B`` orthogonal.

    Parameters
    ----------
    a : array_like, shape (..., r, n)

    Returns
    -------
    sigma : ndarray, shape (..., r)
        Row norms of ``B`` = singular values of ``A`` (unsorted, aligned
        with the columns of ``U``).
    u : ndarray, shape (..., r, r)
    b : ndarray, shape (..., r, n)
    """
    a = np.asarray(a, dtype=complex)
    shape = a.shape
    r, n = shape[-2], shape[-1]
    b = a.reshape(-1, r, n).copy()
    u = np.broadcast_to(np.eye(r, dtype=complex), (b.shape[0], r, r)).copy()
    # rows below this squared norm are rounding noise; rotating them only
    # risks overflow in the phase
    floor = (1e-3 * _EPS) ** 2 * np.sum(np.abs(b) ** 2, axis=(1, 2))
    for _ in range(max_sweeps):
        rotated = False
        for p, q in _pairs(r):
            bp, bq = b[:, p, :], b[:, q, :]
            gamma = np.sum(bp * np.conj(bq), axis=1)
            alpha = np.sum(np.abs(bp) ** 2, axis=1)
            beta = np.sum(np.abs(bq) ** 2, axis=1)
            g = np.abs(gamma)
            active = g > tol * np.sqrt(alpha * beta)
            active &= (alpha > floor) & (beta > floor) & (g > 0)
            if not active.any():
                continue
            rotated = True
            phase = np.where(active, gamma / np.where(active, g, 1.0), 1.0)
            c, s = _rotation(alpha, beta, np.where(active, g, 1.0))
            c = np.where(active, c, 1.0)[:, None]
            s = np.where(active, s, 0.0)[:, None]
            ph = phase[:, None]
            _rotate_rows(b, p, q, c, s, ph)
            _rotate_cols(u, p, q, c, s, ph)
        if not rotated:
            break
    sigma = np.sqrt(np.sum(np.abs(b) ** 2, axis=2))
    return sigma.reshape(shape[:-1]), u.reshape(shape[:-2] + (r, r)), b.reshape(shape)


def singular_values(a) -> np.ndarray:
    """Singular values of ``A`` in descending order, via ``jacobi_rows``."""
    sigma, _, _ = jacobi_rows(a)
    return -np.sort(-sigma, axis=-1)


def numerical_rank(sigma, tol: float, reference: float | None = None):
    """Count singular values above ``tol * reference`` (default: the largest one)."""
    sigma = np.asarray(sigma)
    ref = sigma.max() if reference is None else reference
    return np.sum(sigma > tol * ref, axis=-1)
