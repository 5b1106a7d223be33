"""Bloch vectors and correlation matrix of a two-qubit state."""
from dataclasses import dataclass

import numpy as np

from .linalg import I2, PAULIS, singular_values_3x3


@dataclass(frozen=True)
class BlochDecomposition:
    x: np.ndarray       # slot-1 (edge) Bloch vector
    y: np.ndarray       # slot-2 (central) Bloch vector
    R: np.ndarray       # R[j, k] = Tr[rho sigma_j (x) sigma_k]
    W: tuple            # singular values of R, descending


def correlation_matrix(dm):
    return np.array([[np.trace(dm @ np.kron(a, b)).real for b in PAULIS] for a in PAULIS])


def decompose(state):
    dm = state.dm
    x = np.array([np.trace(dm @ np.kron(s, I2)).real for s in PAULIS])
    y = np.array([np.trace(dm @ np.kron(I2, s)).real for s in PAULIS])
    R = correlation_matrix(dm)
    return BlochDecomposition(x, y, R, singular_values_3x3(R))


def xy_diagonal(state):
    """(R11, R22): the raw x-x and y-y correlations.

    These are the components a computational-basis GHZ measurement on the
    central qubit couples to, before any local rotation.
    """
    R = correlation_matrix(state.dm)
    return float(R[0, 0]), float(R[1, 1])


def top_two(state):
    w = decompose(state).W
    return w[0], w[1]
