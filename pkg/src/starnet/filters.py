"""Local filtering operations and their action on network states.

Global qubit layout for an n-source star network: qubit i (0-based) is the
edge qubit of source i, and qubit n + i is the central party's qubit from
source i.  Every operator embedding goes through :func:`apply_local`, which
acts on the reshaped tensor rather than building 2^(2n)-dimensional
Kronecker products.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import NormExceeded, OutOfRange, ZeroSuccess
from .linalg import as_matrix
from .states import TwoQubitState

NORM_TOL = 1e-9
ZERO_SUCCESS = 1e-14


def edge_qubit(n, i):
    return i


def central_qubit(n, i):
    return n + i


@dataclass(frozen=True, eq=False)
class FilterOperator:
    """An operator F with F^dagger F <= I on one or more qubits."""

    matrix: np.ndarray
    label: str = field(default="")

    def __post_init__(self):
        m = as_matrix(self.matrix)
        d = m.shape[0]
        if m.shape[0] != m.shape[1] or d < 2 or d & (d - 1):
            raise ValueError(f"filter must be square with power-of-two size, got {m.shape}")
        top = np.linalg.svd(m, compute_uv=False)[0]
        if top > 1 + NORM_TOL:
            raise NormExceeded(f"filter {self.label or ''} has operator norm {top:.12g} > 1")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def qubits(self):
        return self.matrix.shape[0].bit_length() - 1

    def __eq__(self, other):
        if not isinstance(other, FilterOperator):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    __hash__ = None


@dataclass(frozen=True)
class JointFilter:
    """A multi-qubit central filter and the (0-based) sources whose central qubits it acts on.

    ``qubits[k]`` is the source whose central qubit is the k-th tensor
    factor of the operator.
    """

    op: FilterOperator
    qubits: tuple

    def __post_init__(self):
        qs = tuple(int(q) for q in self.qubits)
        if len(set(qs)) != len(qs):
            raise ValueError(f"repeated qubit in {qs}")
        if len(qs) != self.op.qubits:
            raise ValueError(f"{self.op.qubits}-qubit filter given {len(qs)} target qubits")
        object.__setattr__(self, "qubits", qs)


@dataclass(frozen=True)
class FilterAssignment:
    """Which filter every party applies.  ``None`` means no filtering.

    edge[i] acts on the edge qubit of source i, central[i] on the central
    party's qubit from source i.  A joint central filter replaces the
    per-qubit central filters.
    """

    n: int
    edge: tuple = ()
    central: tuple = ()
    joint: JointFilter = None

    def __post_init__(self):
        edge = tuple(self.edge) or (None,) * self.n
        central = tuple(self.central) or (None,) * self.n
        if len(edge) != self.n or len(central) != self.n:
            raise ValueError("need one edge and one central entry per source")
        for f in edge + central:
            if f is not None and f.qubits != 1:
                raise ValueError("edge and per-source central filters act on a single qubit")
        if self.joint is not None:
            if any(f is not None for f in central):
                raise ValueError("a joint central filter excludes per-source central filters")
            if not all(0 <= q < self.n for q in self.joint.qubits):
                raise ValueError(f"joint filter qubits {self.joint.qubits} outside 0..{self.n - 1}")
        object.__setattr__(self, "edge", edge)
        object.__setattr__(self, "central", central)

    @classmethod
    def identity(cls, n):
        return cls(n)

    @classmethod
    def from_epsilons(cls, edge=None, central=None, n=None):
        """Separable epsilon filters; ``None`` entries (or lists) mean identity."""
        n = n or len(edge or central)
        def build(vals):
            if vals is None:
                return (None,) * n
            return tuple(None if e is None else epsilon_filter(e) for e in vals)
        return cls(n, build(edge), build(central))

    @property
    def separable(self):
        return self.joint is None

    def pair(self, i):
        """(edge, central) single-qubit filters for source i, identity where absent."""
        e = self.edge[i] or IDENTITY
        c = self.central[i] or IDENTITY
        return e, c

    def is_identity(self):
        return self.joint is None and all(f is None for f in self.edge + self.central)


def epsilon_filter(eps):
    """eps|0><0| + |1><1|."""
    if not 0.0 <= eps <= 1.0:
        raise OutOfRange(f"eps={eps} outside [0, 1]")
    return FilterOperator(np.diag([eps, 1.0]).astype(complex), f"epsilon({eps})")


IDENTITY = FilterOperator(np.eye(2, dtype=complex), "identity")


def _from_terms(terms, k, label):
    m = np.zeros((2 ** k, 2 ** k), dtype=complex)
    for coeff, out, inp in terms:
        m[int(out, 2), int(inp, 2)] += coeff
    return FilterOperator(m, label)


def fns_3qubit(alpha1, alpha2):
    """Three-qubit non-separable filter: alpha1 damping with a rotation in the |110>,|111> block."""
    if not 0.0 <= alpha1 <= 1.0:
        raise OutOfRange(f"alpha1={alpha1} outside [0, 1]")
    c, s = math.cos(alpha2 / 2), math.sin(alpha2 / 2)
    a = alpha1
    return _from_terms([
        (a, "000", "000"), (1, "001", "001"), (a, "010", "010"), (1, "011", "011"),
        (a, "100", "100"), (1, "101", "101"),
        (a * c, "110", "110"), (s, "111", "110"), (-a * s, "110", "111"), (c, "111", "111"),
    ], 3, f"fns3({alpha1}, {alpha2})")


def fns_2qubit(alpha3, alpha4):
    """Two-qubit non-separable filter with fixed mixing coefficients 0.9779 / 0.2089."""
    for name, v in (("alpha3", alpha3), ("alpha4", alpha4)):
        if not 0.0 <= v <= 1.0:
            raise OutOfRange(f"{name}={v} outside [0, 1]")
    c, s = 0.9779, 0.2089
    a3, a4 = alpha3, alpha4
    return _from_terms([
        (c * a3 * a4, "00", "00"), (-s, "11", "00"),
        (c * a3, "01", "01"), (s * a4, "10", "01"),
        (-s * a3, "01", "10"), (c * a4, "10", "10"),
        (s * a3 * a4, "00", "11"), (c, "11", "11"),
    ], 2, f"fns2({alpha3}, {alpha4})")


def g_matrix(alpha5, alpha6):
    c5, s5 = math.cos(alpha5 / 2), math.sin(alpha5 / 2)
    c6, s6 = math.cos(alpha6 / 2), math.sin(alpha6 / 2)
    return _from_terms([
        (0.64 * c5 * c6, "00", "00"), (0.8 * s5 * s6, "01", "00"),
        (-0.8 * c5 * s6, "10", "00"), (-s5 * c6, "11", "00"),
        (0.64 * s5 * s6, "00", "01"), (0.8 * c5 * c6, "01", "01"),
        (0.8 * s5 * c6, "10", "01"), (c5 * s6, "11", "01"),
        (0.64 * c5 * s6, "00", "10"), (-0.8 * s5 * c6, "01", "10"),
        (0.8 * c5 * c6, "10", "10"), (-s5 * s6, "11", "10"),
        (0.64 * s5 * c6, "00", "11"), (-0.8 * c5 * s6, "01", "11"),
        (-0.8 * s5 * s6, "10", "11"), (c5 * c6, "11", "11"),
    ], 2, f"G({alpha5}, {alpha6})").matrix


def fns_g_filter(alpha5, alpha6):
    """(0.8|0><0| + |1><1|) (x) G(alpha5, alpha6); non-separable on its last two qubits."""
    m = np.kron(np.diag([0.8, 1.0]), g_matrix(alpha5, alpha6))
    return FilterOperator(m, f"fnsg({alpha5}, {alpha6})")


def matrix_filter(entries, label="matrix"):
    """A user-supplied operator given row-major."""
    entries = np.asarray(entries, dtype=complex).ravel()
    d = math.isqrt(entries.size)
    if d * d != entries.size:
        raise ValueError(f"{entries.size} entries do not form a square matrix")
    return FilterOperator(entries.reshape(d, d), label)


def apply_local(rho, op, targets, nqubits):
    """op rho op^dagger with op acting on the listed qubits (in that order)."""
    targets = list(targets)
    k = len(targets)
    t = np.asarray(rho).reshape((2,) * (2 * nqubits))
    opt = np.asarray(op).reshape((2,) * (2 * k))
    # left multiplication on row indices
    t = np.tensordot(opt, t, axes=(list(range(k, 2 * k)), targets))
    t = np.moveaxis(t, list(range(k)), targets)
    # right multiplication by op^dagger on column indices
    cols = [nqubits + q for q in targets]
    t = np.tensordot(t, opt.conj(), axes=(cols, list(range(k, 2 * k))))
    t = np.moveaxis(t, list(range(2 * nqubits - k, 2 * nqubits)), cols)
    return t.reshape(2 ** nqubits, 2 ** nqubits)


def embed_operator(op, targets, nqubits):
    """Full 2^nqubits matrix of op acting on ``targets``, identity elsewhere."""
    targets = list(targets)
    rest = [q for q in range(nqubits) if q not in targets]
    full = np.kron(np.asarray(op), np.eye(2 ** len(rest)))
    order = targets + rest
    perm = [order.index(q) for q in range(nqubits)]
    t = full.reshape((2,) * (2 * nqubits))
    t = t.transpose(perm + [nqubits + p for p in perm])
    return t.reshape(2 ** nqubits, 2 ** nqubits)


def apply_filter_pair(state, edge, central):
    """Filter one source state: edge acts on slot 1, central on slot 2.

    Returns the normalised state and the success probability.
    """
    f = np.kron(edge.matrix, central.matrix)
    out = f @ state.dm @ f.conj().T
    success = float(np.trace(out).real)
    if success <= ZERO_SUCCESS:
        raise ZeroSuccess(f"filters {edge.label}, {central.label} annihilate {state.label}")
    out = out / success
    out = 0.5 * (out + out.conj().T)
    return TwoQubitState(out, f"filtered({state.label})"), success


def assignment_operations(assignment):
    """(operator, global target qubits) pairs in application order."""
    n = assignment.n
    ops = []
    for i in range(n):
        if assignment.edge[i] is not None:
            ops.append((assignment.edge[i].matrix, [edge_qubit(n, i)]))
        if assignment.central[i] is not None:
            ops.append((assignment.central[i].matrix, [central_qubit(n, i)]))
    if assignment.joint is not None:
        ops.append((assignment.joint.op.matrix, [central_qubit(n, q) for q in assignment.joint.qubits]))
    return ops


def total_filter(assignment):
    """The full 2^(2n) filter operator (for checks; evaluation uses apply_local)."""
    nq = 2 * assignment.n
    total = np.eye(2 ** nq, dtype=complex)
    for op, targets in assignment_operations(assignment):
        total = embed_operator(op, targets, nq) @ total
    return total


def apply_assignment(rho, assignment, normalize=True):
    """Filter a global network state.

    Returns (filtered state, success probability).  The filtered state is
    normalised unless ``normalize`` is False.
    """
    nq = 2 * assignment.n
    out = np.asarray(rho, dtype=complex)
    for op, targets in assignment_operations(assignment):
        out = apply_local(out, op, targets, nq)
    success = float(np.trace(out).real)
    if success <= ZERO_SUCCESS:
        raise ZeroSuccess("filter assignment annihilates the network state")
    if normalize:
        out = out / success
    return out, success
