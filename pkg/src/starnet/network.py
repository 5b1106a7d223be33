"""Star network with one central party and n edge parties.

Source i (0-based) distributes a two-qubit state whose slot 1 goes to edge
party i and slot 2 to the central party.  Global qubit order is
edge_0 .. edge_{n-1}, central_0 .. central_{n-1}.

The n-local quantity reported as ``S`` is rescaled by 2^(3-n) so that the
n-local bound is 2 for every n (for n = 3 it is the plain sum of
|J_i|^(1/n)).  ``S_raw`` keeps the unscaled sum.
"""
from dataclasses import dataclass, field
import itertools
import math

import numpy as np

from .bloch import top_two, xy_diagonal
from .errors import NonSeparableAssignment, UnsupportedN
from .filters import FilterAssignment, apply_assignment, apply_filter_pair
from .linalg import PAULIS, kron_all

MIN_N, MAX_N = 2, 5
UNIT_TOL = 1e-9

# Post-processing of the central party's raw bits.  Entry i is
# (raw bits XOR-ed, constant) giving c~^(i) = XOR_k c_{1k} XOR const, and
# G[i] lists the edge inputs summed in g_i (input k belongs to source k).
# Indices are 1-based like the raw bits c_11 .. c_1n.
_CTILDE = {
    2: [((1,), 0), ((1, 2), 1)],
    3: [((1,), 0), ((1, 2), 1), ((1, 3), 1), ((1, 2, 3), 1)],
    4: [((1,), 0), ((1, 2), 1), ((1, 3), 1), ((1, 4), 1),
        ((1, 2, 3), 1), ((1, 2, 4), 1), ((1, 3, 4), 1), ((1, 2, 3, 4), 0)],
}
_G = {
    2: [(), (1, 2)],
    3: [(), (1, 2), (1, 3), (2, 3)],
    4: [(), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4), (1, 2, 3, 4)],
}


def _check_n(n):
    if not MIN_N <= n <= MAX_N:
        raise UnsupportedN(f"n={n} outside {MIN_N}..{MAX_N}")


def _check_table(n):
    _check_n(n)
    if n not in _CTILDE:
        raise UnsupportedN(f"no post-processing table for n={n}; closed-form bounds only")


def postprocess(n, i, raw):
    """c~^(i) (i is 1-based) from the central party's raw bits (c_11, ..., c_1n)."""
    _check_table(n)
    if not 1 <= i <= 2 ** (n - 1):
        raise ValueError(f"i={i} outside 1..{2 ** (n - 1)}")
    if len(raw) != n:
        raise ValueError(f"expected {n} raw bits")
    bits, const = _CTILDE[n][i - 1]
    out = const
    for b in bits:
        out ^= int(raw[b - 1])
    return out


def g_function(n, i, inputs):
    """g_i(x_2, ..., x_{n+1}) mod 2; ``inputs`` holds the n edge inputs."""
    _check_table(n)
    return sum(int(inputs[k - 1]) for k in _G[n][i - 1]) % 2


def g_support(n, i):
    """0-based sources whose input enters g_i."""
    _check_table(n)
    return tuple(k - 1 for k in _G[n][i - 1])


def ghz_basis(n):
    """[(bits, vector)] for |G_b> = (|0 b2..bn> + (-1)^b1 |1 ~b2..~bn>)/sqrt2."""
    _check_n(n)
    out = []
    for b in itertools.product((0, 1), repeat=n):
        v = np.zeros(2 ** n, dtype=complex)
        i0 = int("".join(map(str, (0,) + b[1:])), 2)
        i1 = int("".join(map(str, (1,) + tuple(1 - x for x in b[1:]))), 2)
        v[i0] = 1 / math.sqrt(2)
        v[i1] = (-1) ** b[0] / math.sqrt(2)
        out.append((b, v))
    return out


@dataclass(frozen=True)
class NetworkScenario:
    sources: tuple
    assignment: FilterAssignment = None

    def __post_init__(self):
        sources = tuple(self.sources)
        _check_n(len(sources))
        object.__setattr__(self, "sources", sources)
        if self.assignment is None:
            object.__setattr__(self, "assignment", FilterAssignment.identity(len(sources)))
        elif self.assignment.n != len(sources):
            raise ValueError(f"assignment for n={self.assignment.n}, scenario has {len(sources)} sources")

    @property
    def n(self):
        return len(self.sources)


@dataclass(frozen=True)
class MeasurementSettings:
    """m[i, x] is the unit Bloch direction edge party i measures for input x."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.ndim != 3 or m.shape[1:] != (2, 3):
            raise ValueError(f"settings must have shape (n, 2, 3), got {m.shape}")
        norms = np.linalg.norm(m, axis=2)
        if np.max(np.abs(norms - 1)) > UNIT_TOL:
            raise ValueError("measurement directions must be unit vectors")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)

    @classmethod
    def from_angles(cls, angles):
        """Two spherical angles (polar, azimuth) per direction, ordered edge-major."""
        a = np.asarray(angles, dtype=float).reshape(-1, 2, 2)
        return cls(spherical(a[..., 0], a[..., 1]))

    @classmethod
    def uniform(cls, n, m0, m1):
        m0 = np.asarray(m0, float) / np.linalg.norm(m0)
        m1 = np.asarray(m1, float) / np.linalg.norm(m1)
        return cls(np.array([[m0, m1]] * n))

    def swapped(self, i):
        """Settings with edge party i's two directions exchanged."""
        m = self.m.copy()
        m[i] = m[i, ::-1]
        return MeasurementSettings(m)


def spherical(theta, phi):
    return np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1)


def to_angles(m):
    """Inverse of :func:`spherical` for an array of unit vectors."""
    m = np.asarray(m, dtype=float)
    theta = np.arccos(np.clip(m[..., 2], -1.0, 1.0))
    phi = np.arctan2(m[..., 1], m[..., 0])
    return np.stack([theta, phi], axis=-1)


@dataclass(frozen=True)
class EvaluationReport:
    J: tuple
    S: float
    S_raw: float
    success: float
    bound_closed: float
    bound_xy: float
    bound_seq: float = None       # None for non-separable assignments
    bound_seq_xy: float = None
    extra: dict = field(default_factory=dict)


def _bound(pairs, n):
    p1 = math.prod(a for a, _ in pairs)
    p2 = math.prod(b for _, b in pairs)
    return 2 * math.sqrt(p1 ** (2 / n) + p2 ** (2 / n))


def bound_from_states(states):
    """2 sqrt((prod W_i1)^(2/n) + (prod W_i2)^(2/n)) from sorted singular values."""
    return _bound([top_two(s) for s in states], len(states))


def bound_xy_from_states(states):
    """Same formula with |R11|, |R22| of the raw correlation matrix."""
    return _bound([tuple(abs(v) for v in xy_diagonal(s)) for s in states], len(states))


def bound_closed(scenario):
    return bound_from_states(scenario.sources)


def bound_xy(scenario):
    return bound_xy_from_states(scenario.sources)


def filtered_sources(scenario):
    """Per-source filtered states and success probabilities (separable assignments only)."""
    a = scenario.assignment
    if not a.separable:
        raise NonSeparableAssignment("a joint central filter has no per-source closed form; use the optimizer")
    out = [apply_filter_pair(s, *a.pair(i)) for i, s in enumerate(scenario.sources)]
    return [s for s, _ in out], math.prod(c for _, c in out)


def bound_seq_closed(scenario):
    """(B_seq, success) from the two largest singular values of each filtered source."""
    states, success = filtered_sources(scenario)
    return bound_from_states(states), success


def bound_seq_xy(scenario):
    states, success = filtered_sources(scenario)
    return bound_xy_from_states(states), success


def network_state(sources):
    """Global density matrix in edge-major / central-minor qubit order."""
    n = len(sources)
    rho = kron_all([s.dm for s in sources])
    # kron order is e0 c0 e1 c1 ...; move to e0 .. e_{n-1} c0 .. c_{n-1}
    order = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    t = rho.reshape((2,) * (4 * n))
    t = t.transpose(order + [2 * n + o for o in order])
    return t.reshape(4 ** n, 4 ** n)


def filtered_network_state(scenario):
    """(normalised filtered global state, success probability)."""
    a = scenario.assignment
    if a.separable:
        states, success = filtered_sources(scenario)
        return network_state(states), success
    return apply_assignment(network_state(scenario.sources), a)


def scenario_success(scenario):
    """Tr[F rho F^dagger] for the whole filter assignment."""
    if scenario.assignment.is_identity():
        return 1.0
    if scenario.assignment.separable:
        return filtered_sources(scenario)[1]
    return apply_assignment(network_state(scenario.sources), scenario.assignment, normalize=False)[1]


J_ZERO = 1e-14


def root_sum(J, n):
    """sum |J_i|^(1/n), with rounding-level correlators counted as exactly 0."""
    a = np.abs(np.asarray(J, dtype=float))
    return float(np.sum(np.where(a < J_ZERO, 0.0, a) ** (1 / n)))


def _s_values(J, n):
    raw = root_sum(J, n)
    return raw * 2.0 ** (3 - n), raw


def _bounds(scenario, report_seq=True):
    out = {"bound_closed": bound_closed(scenario), "bound_xy": bound_xy(scenario)}
    if report_seq and scenario.assignment.separable:
        out["bound_seq"] = bound_seq_closed(scenario)[0]
        out["bound_seq_xy"] = bound_seq_xy(scenario)[0]
    return out


def _edge_projectors(m):
    """P[c] = (I + (-1)^c m.sigma)/2."""
    ms = sum(c * s for c, s in zip(m, PAULIS))
    eye = np.eye(2)
    return [(eye + ms) / 2, (eye - ms) / 2]


def outcome_distribution(rho_f, settings):
    """p[x][(c_edges, b)] for every input tuple, from explicit projectors.

    Returns an array of shape (2,)*n [inputs] + (2,)*n [edge outcomes] +
    (2,)*n [GHZ raw bits].
    """
    n = settings.m.shape[0]
    d = 2 ** n
    r = rho_f.reshape(d, d, d, d)
    # E_b = Tr_central[(I (x) |G_b><G_b|) rho]
    ghz = ghz_basis(n)
    E = np.array([np.einsum("aibj,j,i->ab", r, v, v.conj()) for _, v in ghz])
    p = np.zeros((2,) * (3 * n))
    for x in itertools.product((0, 1), repeat=n):
        projs = [_edge_projectors(settings.m[k, x[k]]) for k in range(n)]
        for c in itertools.product((0, 1), repeat=n):
            P = kron_all([projs[k][c[k]] for k in range(n)])
            probs = np.einsum("bij,ji->b", E, P).real
            for (bits, _), pb in zip(ghz, probs):
                p[x + c + bits] = pb
    return p


def correlators_from_distribution(p, n):
    """J_i from the outcome distribution, following the post-processing table."""
    J = []
    for i in range(1, 2 ** (n - 1) + 1):
        total = 0.0
        for x in itertools.product((0, 1), repeat=n):
            corr = 0.0
            for c in itertools.product((0, 1), repeat=n):
                for b in itertools.product((0, 1), repeat=n):
                    sign = (-1) ** ((postprocess(n, i, b) + sum(c)) % 2)
                    corr += sign * p[x + c + b]
            total += (-1) ** g_function(n, i, x) * corr
        J.append(float(total / 2 ** n))
    return tuple(J)


def evaluate(scenario, settings, rho_f=None, success=None):
    """Direct evaluation: filter, measure, post-process, correlate.

    This route builds every outcome probability from projectors; it is the
    reference the fast Pauli-tensor route in :class:`FastEvaluator` is
    checked against.
    """
    n = scenario.n
    _check_table(n)
    if rho_f is None:
        rho_f, success = filtered_network_state(scenario)
    p = outcome_distribution(rho_f, settings)
    J = correlators_from_distribution(p, n)
    S, S_raw = _s_values(J, n)
    return EvaluationReport(J, S, S_raw, success, **_bounds(scenario))


def central_observables(n):
    """C_i = sum_b (-1)^{c~_i(b)} |G_b><G_b| for every i."""
    ghz = ghz_basis(n)
    return [sum((-1) ** postprocess(n, i, b) * np.outer(v, v.conj()) for b, v in ghz)
            for i in range(1, 2 ** (n - 1) + 1)]


def _pauli_tensor(E, n):
    """T[j1..jn] = Tr[E sigma_j1 (x) ... (x) sigma_jn]."""
    rows, cols, paulis = "abcde"[:n], "fghij"[:n], "pqrst"[:n]
    # Tr[E sigma] = sum_rc E[r, c] sigma[c, r]
    spec = rows + cols + "," + ",".join(p + c + r for p, r, c in zip(paulis, rows, cols))
    spec += "->" + paulis
    t = E.reshape((2,) * (2 * n))
    P = np.array(PAULIS)
    return np.einsum(spec, t, *([P] * n)).real


class FastEvaluator:
    """Correlators as multilinear forms in the measurement directions.

    With A_k(x) = m_{k,x}.sigma, J_i = 2^-n sum_x (-1)^{g_i(x)} Tr[E_i (x)_k A_k(x_k)]
    where E_i = Tr_central[(I (x) C_i) rho_f].  Expanding A_k in Paulis gives
    J_i = 2^-n T_i . (v_i1 (x) ... (x) v_in) with v_ik = m_k0 +/- m_k1.
    """

    def __init__(self, scenario, rho_f=None, success=None):
        n = scenario.n
        _check_table(n)
        if rho_f is None:
            rho_f, success = filtered_network_state(scenario)
        self.scenario = scenario
        self.n = n
        self.success = success
        d = 2 ** n
        r = rho_f.reshape(d, d, d, d)
        tensors = []
        for C in central_observables(n):
            E = np.einsum("aibj,ji->ab", r, C)
            tensors.append(_pauli_tensor(E, n))
        self.T = np.array(tensors)
        self.signs = np.ones((len(tensors), n))
        for i in range(len(tensors)):
            for k in g_support(n, i + 1):
                self.signs[i, k] = -1.0
        self._bounds = None

    def correlators(self, m):
        m = np.asarray(m, dtype=float)
        V = m[None, :, 0, :] + self.signs[:, :, None] * m[None, :, 1, :]
        J = self.T
        for k in range(self.n):
            J = np.einsum("mj...,mj->m...", J, V[:, k])
        return J / 2 ** self.n

    def s_value(self, m):
        return root_sum(self.correlators(m), self.n) * 2.0 ** (3 - self.n)

    def report(self, settings):
        J = tuple(float(j) for j in self.correlators(settings.m))
        S, S_raw = _s_values(J, self.n)
        if self._bounds is None:
            self._bounds = _bounds(self.scenario)
        return EvaluationReport(J, S, S_raw, self.success, **self._bounds)


def evaluate_fast(scenario, settings):
    return FastEvaluator(scenario).report(settings)
