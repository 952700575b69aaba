"""Pure and mixed quantum states, observables and random sampling.

States are plain complex numpy vectors, density matrices and observables
are complex square arrays.  The functions here check the contracts (norm,
Hermiticity, positivity, unitarity) at the boundary and otherwise stay out
of the way.

JSON encoding used throughout the package: a complex scalar is ``[re, im]``;
a matrix is ``{"rows": R, "cols": C, "data": [[[re, im], ...], ...]}``
(row-major); a vector is ``{"dim": N, "data": [[re, im], ...]}``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotUnitary, ZeroVector
from .linalg import jacobi_eigh

__all__ = [
    "normalize",
    "canonical_ray",
    "projector",
    "expectation",
    "unitary_conjugate",
    "validate_density",
    "is_unitary",
    "check_hermitian",
    "haar_unitary",
    "random_state",
    "random_hermitian",
    "classical_embed",
    "matrix_to_json",
    "matrix_from_json",
    "vector_to_json",
    "vector_from_json",
]

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10


def normalize(v):
    """Scale ``v`` to unit norm (positive multiple of the input)."""
    v = np.asarray(v, dtype=complex)
    nrm = np.linalg.norm(v)
    if nrm < 1e-14:
        raise ZeroVector("cannot normalize a zero vector")
    return v / nrm


def canonical_ray(v, tol=1e-12):
    """Canonical representative of the ray through ``v``.

    Unit norm, with the first component of modulus above ``tol`` made real
    and positive.  Two vectors define the same point of projective space
    iff their canonical representatives coincide.
    """
    psi = normalize(v)
    for z in psi:
        if abs(z) > tol:
            return psi * (abs(z) / z)
    return psi


def projector(psi):
    """Rank-one density matrix ``psi psi^H / <psi|psi>``."""
    psi = np.asarray(psi, dtype=complex)
    nsq = np.vdot(psi, psi).real
    if nsq <= 0.0:
        raise ZeroVector("the zero vector is not a state")
    return np.outer(psi, psi.conj()) / nsq


def check_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    err = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if err > tol:
        raise NotHermitian(f"max |A - A^H| = {err:.3e} exceeds {tol:g}")
    return a


def expectation(rho, a):
    """``Tr(rho A)`` as a real number."""
    rho = np.asarray(rho, dtype=complex)
    a = np.asarray(a, dtype=complex)
    if rho.shape != a.shape:
        raise DimensionMismatch(f"state {rho.shape} vs observable {a.shape}")
    val = np.einsum("ij,ji->", rho, a)
    if abs(val.imag) > 1e-12 * max(1.0, abs(val.real)):
        raise NotHermitian(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def is_unitary(u, tol=UNITARY_TOL):
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def unitary_conjugate(rho, u):
    """Return ``U rho U^H``."""
    rho = np.asarray(rho, dtype=complex)
    u = np.asarray(u, dtype=complex)
    if rho.shape != u.shape:
        raise DimensionMismatch(f"state {rho.shape} vs unitary {u.shape}")
    if not is_unitary(u):
        raise NotUnitary("U^H U differs from the identity by more than 1e-10")
    return u @ rho @ u.conj().T


def validate_density(m, tol=1e-10):
    """Check that ``m`` is a density matrix.

    Returns
    -------
    ok : bool
    diagnostics : dict
        ``hermiticity`` (max deviation from ``m^H``), ``min_eigenvalue``,
        ``trace_error`` and ``failed``, the list of violated conditions
        among ``"hermiticity"``, ``"positivity"``, ``"trace"``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    herm = float(np.max(np.abs(m - m.conj().T)))
    w, _ = jacobi_eigh(m)
    trace_err = float(abs(np.trace(m) - 1.0))
    failed = []
    if herm > tol:
        failed.append("hermiticity")
    if w[0] < -tol:
        failed.append("positivity")
    if trace_err > tol:
        failed.append("trace")
    diag = {
        "hermiticity": herm,
        "min_eigenvalue": float(w[0]),
        "trace_error": trace_err,
        "failed": failed,
    }
    return not failed, diag


def haar_unitary(n, rng):
    """Haar-distributed unitary from the QR factorisation of a Ginibre matrix.

    The phases of ``R``'s diagonal are moved into ``Q`` so the factorisation
    is unique; without that step the result is not Haar distributed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = r.diagonal()
    return q * (d / np.abs(d))


def random_state(n, rng):
    """Unitarily invariant random unit vector (uniform on projective space)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if n == 1:
        return np.ones(1, dtype=complex)
    return normalize(z)


def random_hermitian(n, rng, scale=1.0):
    """GUE-style random Hermitian matrix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (z + z.conj().T)


def classical_embed(p):
    """Diagonal density matrix of a probability vector."""
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise ValueError("p must be a probability vector")
    return np.diag(p).astype(complex)


def _encode(z):
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(m):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {
        "rows": m.shape[0],
        "cols": m.shape[1],
        "data": [[_encode(z) for z in row] for row in m],
    }


def vector_to_json(v):
    v = np.asarray(v, dtype=complex).ravel()
    return {"dim": v.size, "data": [_encode(z) for z in v]}


def _decode_entries(entries, where):
    out = []
    for k, e in enumerate(entries):
        if not (isinstance(e, (list, tuple)) and len(e) == 2):
            raise ValueError(f"{where}[{k}]: expected [re, im]")
        re, im = e
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in (re, im)):
            raise ValueError(f"{where}[{k}]: entries must be numbers")
        out.append(complex(re, im))
    return out


def matrix_from_json(obj):
    """Inverse of :func:`matrix_to_json`; raises ``ValueError`` on malformed input."""
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"matrix object missing field {exc}") from None
    if len(data) != rows:
        raise ValueError(f"data: expected {rows} rows, found {len(data)}")
    m = []
    for i, row in enumerate(data):
        if len(row) != cols:
            raise ValueError(f"data[{i}]: expected {cols} entries, found {len(row)}")
        m.append(_decode_entries(row, f"data[{i}]"))
    m = np.array(m, dtype=complex).reshape(rows, cols)
    if not np.all(np.isfinite(m)):
        raise ValueError("data: non-finite entry")
    return m


def vector_from_json(obj):
    """Decode a vector, accepting either the vector or a single-column matrix form."""
    if isinstance(obj, dict) and "rows" in obj:
        m = matrix_from_json(obj)
        if m.shape[1] != 1:
            raise ValueError("cols: a vector must have exactly one column")
        return m[:, 0]
    try:
        dim, data = obj["dim"], obj["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"vector object missing field {exc}") from None
    if len(data) != dim:
        raise ValueError(f"data: expected {dim} entries, found {len(data)}")
    v = np.array(_decode_entries(data, "data"), dtype=complex)
    if not np.all(np.isfinite(v)):
        raise ValueError("data: non-finite entry")
    return v
