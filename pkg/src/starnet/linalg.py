"""Dense complex linear algebra helpers.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128; the
routines here add the validation, ordering and tolerance conventions the
rest of the package relies on.  Decompositions delegate to LAPACK through
numpy.
"""
import numpy as np

from .errors import NotHermitian

HERMITIAN_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)
PAULIS_WITH_ID = (I2, SX, SY, SZ)


def as_matrix(m):
    """Coerce to a finite 2-d complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def kron(a, b):
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats):
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def _descending(values):
    # stable: ties keep their original index order
    order = np.argsort(-np.asarray(values), kind="stable")
    return np.asarray(values)[order]


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and np.max(np.abs(m - m.conj().T), initial=0.0) <= tol


def hermitian_eigenvalues(m):
    """Real eigenvalues of a Hermitian matrix, largest first."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix is not square: {m.shape}")
    dev = np.max(np.abs(m - m.conj().T), initial=0.0)
    if dev > HERMITIAN_TOL:
        raise NotHermitian(f"max |m - m^dagger| = {dev:.3e}")
    vals = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    return _descending(vals)


def real_matrix_eigenvalues(m):
    """Eigenvalues of a real (generally non-symmetric) square matrix.

    Returned unsorted, with imaginary parts intact, so the caller decides how
    to treat rounding-level complex pairs.
    """
    m = as_matrix(m)
    if np.max(np.abs(m.imag), initial=0.0) > 1e-12:
        raise ValueError("matrix has non-negligible imaginary entries")
    return np.linalg.eigvals(m.real).astype(complex)


def singular_values_3x3(r):
    """(W1, W2, W3): singular values of a real 3x3 matrix, descending."""
    r = as_matrix(r)
    if r.shape != (3, 3):
        raise ValueError(f"expected 3x3, got {r.shape}")
    if np.max(np.abs(r.imag), initial=0.0) > 1e-10:
        raise ValueError("correlation matrix must be real")
    w = np.linalg.svd(r.real, compute_uv=False)
    return tuple(float(x) for x in _descending(np.clip(w, 0.0, None)))


def random_unitary(dim, rng):
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
