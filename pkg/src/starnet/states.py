"""Two-qubit source states and the amplitude-damping channel.

Slot convention: in every two-qubit state, slot 1 (the left tensor factor)
is the edge party's qubit and slot 2 is the qubit sent to the central
party.  Basis order is |00>, |01>, |10>, |11>.
"""
from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .errors import InvalidState, InvalidWeights, OutOfRange
from .linalg import I2, PAULIS, as_matrix, hermitian_eigenvalues, is_hermitian

STATE_TOL = 1e-10


class ParameterRangeWarning(UserWarning):
    """A constructor parameter lies outside the family's nominal range."""


def ket(bits):
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def projector(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


PSI_PLUS = (ket("01") + ket("10")) / math.sqrt(2)
PSI_MINUS = (ket("01") - ket("10")) / math.sqrt(2)
PHI_PLUS = (ket("00") + ket("11")) / math.sqrt(2)
PHI_MINUS = (ket("00") - ket("11")) / math.sqrt(2)


@dataclass(frozen=True, eq=False)
class TwoQubitState:
    """A validated 4x4 density matrix."""

    dm: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        dm = as_matrix(self.dm)
        if dm.shape != (4, 4):
            raise InvalidState(f"two-qubit state must be 4x4, got {dm.shape}")
        check_density_matrix(dm)
        dm = dm.copy()
        dm.flags.writeable = False
        object.__setattr__(self, "dm", dm)

    def __eq__(self, other):
        if not isinstance(other, TwoQubitState):
            return NotImplemented
        return np.array_equal(self.dm, other.dm)

    __hash__ = None

    def purity(self):
        return float(np.trace(self.dm @ self.dm).real)

    def reduced(self, slot):
        """Single-qubit marginal of slot 1 or 2."""
        t = self.dm.reshape(2, 2, 2, 2)
        if slot == 1:
            return np.einsum("ajbj->ab", t)
        if slot == 2:
            return np.einsum("jajb->ab", t)
        raise ValueError("slot must be 1 or 2")

    def swapped(self):
        """The same state with the two slots exchanged."""
        t = self.dm.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2)
        return TwoQubitState(t.reshape(4, 4), self.label)


def check_density_matrix(dm, tol=STATE_TOL):
    """Raise InvalidState unless dm is Hermitian, unit-trace and PSD."""
    if not is_hermitian(dm, tol):
        raise InvalidState("density matrix is not Hermitian")
    tr = np.trace(dm)
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"trace is {tr.real:.12g}, expected 1")
    lowest = hermitian_eigenvalues(dm)[-1]
    if lowest < -tol:
        raise InvalidState(f"negative eigenvalue {lowest:.3e}")


def _probability(name, p):
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"{name}={p} outside [0, 1]")


def bell_diagonal(w1, w2, w3, w4):
    """w1|psi+><psi+| + w2|psi-><psi-| + w3|phi+><phi+| + w4|phi-><phi-|."""
    ws = (w1, w2, w3, w4)
    if any(w < 0 or w > 1 for w in ws):
        raise InvalidWeights(f"weights must lie in [0, 1]: {ws}")
    if abs(sum(ws) - 1.0) > 1e-12:
        raise InvalidWeights(f"weights sum to {sum(ws):.15g}, expected 1")
    dm = (w1 * projector(PSI_PLUS) + w2 * projector(PSI_MINUS)
          + w3 * projector(PHI_PLUS) + w4 * projector(PHI_MINUS))
    return TwoQubitState(dm, f"bell_diagonal({w1}, {w2}, {w3}, {w4})")


def bell_diagonal_correlations(w1, w2, w3, w4):
    """Diagonal of the correlation matrix of a Bell-diagonal state."""
    return (w1 - w2 + w3 - w4, w1 - w2 - w3 + w4, -w1 - w2 + w3 + w4)


def horodecki_state(p, theta):
    """(1-p)|psi(theta)><psi(theta)| + p|00><00|, psi = sin|01> + cos|10>.

    theta is nominally in [0, pi/4]; values in (pi/4, pi/2) are accepted
    with a ParameterRangeWarning.
    """
    _probability("p", p)
    if not 0.0 <= theta < math.pi / 2:
        raise OutOfRange(f"theta={theta} outside [0, pi/2)")
    if theta > math.pi / 4 + 1e-12:
        warnings.warn(f"theta={theta} exceeds pi/4", ParameterRangeWarning, stacklevel=2)
    psi = math.sin(theta) * ket("01") + math.cos(theta) * ket("10")
    dm = (1 - p) * projector(psi) + p * projector(ket("00"))
    return TwoQubitState(dm, f"horodecki(p={p}, theta={theta})")


def werner_state(v):
    """(1-v)/4 I + v|psi-><psi-|; CHSH-local for v <= 1/sqrt(2)."""
    _probability("v", v)
    dm = (1 - v) / 4 * np.eye(4) + v * projector(PSI_MINUS)
    return TwoQubitState(dm, f"werner(v={v})")


def pure_state(beta):
    """sin(beta)|01> + cos(beta)|10>."""
    if not -math.pi / 4 - 1e-12 <= beta <= math.pi / 4 + 1e-12:
        warnings.warn(f"beta={beta} outside [-pi/4, pi/4]", ParameterRangeWarning, stacklevel=2)
    psi = math.sin(beta) * ket("01") + math.cos(beta) * ket("10")
    return TwoQubitState(projector(psi), f"pure(beta={beta})")


def plus_product():
    """|++><++|, written as (1/4) sum_{ijkl} |ij><kl|."""
    return TwoQubitState(np.full((4, 4), 0.25, dtype=complex), "plus_product")


def local_product_state():
    """|0><0| (x) |+><+|, the local state used to show the necessary condition is not sufficient."""
    dm = 0.5 * (projector(ket("00")) + np.outer(ket("00"), ket("01"))
                + np.outer(ket("01"), ket("00")) + projector(ket("01")))
    return TwoQubitState(dm, "local_product")


def singlet():
    return TwoQubitState(projector(PSI_MINUS), "singlet")


def maximally_mixed():
    return TwoQubitState(np.eye(4, dtype=complex) / 4, "maximally_mixed")


def product_state(a, b):
    """a (x) b for single-qubit density matrices a, b."""
    return TwoQubitState(np.kron(as_matrix(a), as_matrix(b)), "product")


def qubit_from_bloch(r):
    r = np.asarray(r, dtype=float)
    if np.linalg.norm(r) > 1 + 1e-12:
        raise OutOfRange("Bloch vector longer than 1")
    return 0.5 * (I2 + sum(c * s for c, s in zip(r, PAULIS)))


def amplitude_damping_kraus(p):
    _probability("p", p)
    k0 = np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=complex)
    k1 = np.array([[0, math.sqrt(p)], [0, 0]], dtype=complex)
    return k0, k1


def amplitude_damp_both(state, p):
    """Send both qubits through identical amplitude-damping channels."""
    ks = amplitude_damping_kraus(p)
    dm = state.dm
    out = np.zeros((4, 4), dtype=complex)
    for a in ks:
        for b in ks:
            k = np.kron(a, b)
            out += k @ dm @ k.conj().T
    out = 0.5 * (out + out.conj().T)
    return TwoQubitState(out, f"amplitude_damp({state.label}, p={p})")
