"""Bell-CHSH locality and hidden (filter-revealed) nonlocality of two-qubit states."""
from dataclasses import dataclass
import math

import numpy as np

from .bloch import decompose
from .errors import ComplexSpectrum
from .linalg import PAULIS_WITH_ID, real_matrix_eigenvalues
from .states import bell_diagonal_correlations

LOCAL_TOL = 1e-9
MARGIN_TOL = 1e-9
IMAG_TOL = 1e-6

_U = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class HiddenNLReport:
    mu: tuple             # real parts of the eigenvalues of M, descending
    max_imag: float
    margin: float         # mu2 + mu3 - mu1
    hidden_nonlocal: bool
    chsh_value: float     # W1^2 + W2^2


def chsh_value(state):
    """W1^2 + W2^2; the state violates CHSH iff this exceeds 1."""
    w = decompose(state).W
    return w[0] ** 2 + w[1] ** 2


def chsh_local(state):
    """(is_local, W1^2 + W2^2)."""
    value = chsh_value(state)
    return value <= 1 + LOCAL_TOL, value


def bd_local_up_to_slocc(w1, w2, w3, w4):
    """True when a Bell-diagonal state stays CHSH-local under any local filters.

    The three pairwise sums of squared correlation components must all be
    at most 1.
    """
    c1, c2, c3 = bell_diagonal_correlations(w1, w2, w3, w4)
    sums = (c1 ** 2 + c2 ** 2, c1 ** 2 + c3 ** 2, c2 ** 2 + c3 ** 2)
    return max(math.sqrt(s) for s in sums) <= 1 + LOCAL_TOL


def q_matrix(state):
    return np.array([[np.trace(state.dm @ np.kron(a, b)).real for b in PAULIS_WITH_ID]
                     for a in PAULIS_WITH_ID])


def hidden_nonlocal(state):
    """Necessary and sufficient test for hidden CHSH nonlocality.

    Builds Q_ij = Tr[rho sigma_i (x) sigma_j] (i, j = 0..3), M = U Q U Q^T
    with U = diag(1, -1, -1, -1), and checks mu2 + mu3 > mu1 on the
    eigenvalues of M ordered by real part.
    """
    Q = q_matrix(state)
    M = _U @ Q @ _U @ Q.T
    eig = real_matrix_eigenvalues(M)
    max_imag = float(np.max(np.abs(eig.imag)))
    if max_imag > IMAG_TOL:
        raise ComplexSpectrum(f"M has eigenvalue with imaginary part {max_imag:.3e}")
    mu = tuple(float(v) for v in sorted(eig.real, reverse=True))
    margin = mu[1] + mu[2] - mu[0]
    return HiddenNLReport(mu, max_imag, margin, margin > MARGIN_TOL, chsh_value(state))
