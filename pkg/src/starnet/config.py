"""Scenario files: a small line-oriented section/key format.

    # comment
    n = 3

    [source 1]
    state = horodecki
    p = 0.2
    theta = pi/5
    channel = amplitude_damp     # optional, with damping = <prob>
    damping = 0.1

    [edge 2]
    filter = epsilon
    eps = 0.98

    [central 1]
    filter = epsilon
    eps = 0.49

    [central]                    # joint filter on several central qubits
    filter = fns2
    alpha3 = 0.88
    alpha4 = 0.67
    qubits = 2 3

    [scan 1]
    param = source1.p
    start = 0.30
    stop = 0.65
    step = 0.005

    [optimizer]
    restarts = 32
    seed = 0

Numbers may be written as arithmetic in ``pi`` (``-pi/2``, ``3*pi/8``).
Indices are 1-based.  Unknown sections or keys are errors, reported with
their line and column.
"""
import ast
from dataclasses import dataclass, field, replace
import math
import operator
import re

from .errors import ConfigError, StarNetError
from .filters import (FilterAssignment, JointFilter, epsilon_filter, fns_2qubit, fns_3qubit,
                      fns_g_filter, matrix_filter)
from .network import MAX_N, MIN_N, NetworkScenario
from .optimize import OptimizerConfig
from . import states

# family -> (required keys, optional keys)
STATE_FAMILIES = {
    "bell_diagonal": (("w1", "w2", "w3"), ("w4",)),
    "horodecki": (("p", "theta"), ()),
    "werner": (("v",), ()),
    "pure": (("beta",), ()),
    "plus_product": ((), ()),
    "local_product": ((), ()),
    "singlet": ((), ()),
    "maximally_mixed": ((), ()),
}
FILTER_FAMILIES = {
    "epsilon": ("eps",),
    "fns3": ("alpha1", "alpha2"),
    "fns2": ("alpha3", "alpha4"),
    "fnsg": ("alpha5", "alpha6"),
    "matrix": ("entries",),
}
CHANNELS = ("amplitude_damp",)
OPTIMIZER_KEYS = {"restarts": int, "max_iterations": int, "tolerance": float, "seed": int, "workers": int}
SCAN_KEYS = ("param", "start", "stop", "step")


@dataclass(frozen=True)
class SourceSpec:
    family: str
    params: tuple = ()           # ((key, value), ...) in canonical order
    channel: str = None
    damping: float = None

    def get(self, key):
        return dict(self.params)[key]


@dataclass(frozen=True)
class FilterSpec:
    family: str
    params: tuple = ()
    qubits: tuple = None         # 1-based central qubits, joint filters only


@dataclass(frozen=True)
class ScanSpec:
    param: str
    start: float
    stop: float
    step: float

    def values(self):
        if self.step == 0:
            raise ConfigError(f"scan of {self.param}: step must be nonzero")
        count = math.floor((self.stop - self.start) / self.step + 1e-9) + 1
        if count < 1:
            raise ConfigError(f"scan of {self.param}: empty range {self.start}..{self.stop}")
        return [round(self.start + k * self.step, 12) for k in range(count)]


@dataclass(frozen=True)
class ScenarioConfig:
    n: int
    sources: tuple
    edges: tuple = ()            # FilterSpec or None per source
    centrals: tuple = ()
    joint: FilterSpec = None
    scans: tuple = ()
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges) or (None,) * self.n)
        object.__setattr__(self, "centrals", tuple(self.centrals) or (None,) * self.n)


# ---------------------------------------------------------------- numbers

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def parse_number(text, allow_complex=False):
    """Evaluate a numeric literal or arithmetic expression in ``pi``."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError:
        raise ValueError(f"not a number: {text!r}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)) \
                and not isinstance(node.value, bool):
            if isinstance(node.value, complex) and not allow_complex:
                raise ValueError(f"complex value not allowed here: {text!r}")
            return node.value
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        raise ValueError(f"not a number: {text!r}")

    value = ev(tree)
    if isinstance(value, complex):
        return complex(value)
    return float(value)


def format_number(x):
    if isinstance(x, complex):
        return repr(x).strip("()")
    x = float(x)
    return repr(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)


# ---------------------------------------------------------------- parsing

_SECTION = re.compile(r"\[\s*([a-z_]+)(?:\s+(\d+))?\s*\]\s*$")
_KEY = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")


@dataclass
class _Entry:
    value: str
    line: int
    column: int
    key_column: int = 1


@dataclass
class _Section:
    kind: str
    index: int
    line: int
    entries: dict = field(default_factory=dict)


def _strip_comment(raw):
    cut = raw.find("#")
    return raw if cut < 0 else raw[:cut]


def _read_sections(text):
    top = _Section("top", None, 0)
    sections = [top]
    current = top
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        col = indent + 1
        if body.startswith("["):
            m = _SECTION.match(body)
            if not m:
                raise ConfigError(f"malformed section header {body!r}", lineno, col)
            kind, idx = m.group(1), m.group(2)
            idx = int(idx) if idx is not None else None
            valid = {"source": True, "edge": True, "central": None, "scan": True, "optimizer": False}
            if kind not in valid:
                raise ConfigError(f"unknown section [{kind}]", lineno, col + 1)
            if valid[kind] is True and idx is None:
                raise ConfigError(f"section [{kind}] needs an index", lineno, col)
            if valid[kind] is False and idx is not None:
                raise ConfigError(f"section [{kind}] takes no index", lineno, col)
            if (kind, idx) in seen:
                raise ConfigError(f"duplicate section [{body[1:-1].strip()}]", lineno, col)
            seen.add((kind, idx))
            current = _Section(kind, idx, lineno)
            sections.append(current)
            continue
        m = _KEY.match(body)
        if not m:
            raise ConfigError(f"expected 'key = value', got {body!r}", lineno, col)
        key = m.group(1)
        if key in current.entries:
            raise ConfigError(f"duplicate key {key!r}", lineno, col)
        vcol = col + m.start(2)
        current.entries[key] = _Entry(m.group(2), lineno, vcol, col)
    return sections


def _num(entry, kind=float):
    try:
        v = parse_number(entry.value)
    except ValueError as e:
        raise ConfigError(str(e), entry.line, entry.column) from None
    if kind is int:
        if not float(v).is_integer():
            raise ConfigError(f"expected an integer, got {entry.value!r}", entry.line, entry.column)
        return int(v)
    return v


def _nums(entry, allow_complex=False):
    out = []
    offset = 0
    for tok in entry.value.split():
        pos = entry.value.index(tok, offset)
        offset = pos + len(tok)
        try:
            out.append(parse_number(tok, allow_complex))
        except ValueError as e:
            raise ConfigError(str(e), entry.line, entry.column + pos) from None
    if not out:
        raise ConfigError("expected at least one number", entry.line, entry.column)
    return tuple(out)


def _unknown(sec, allowed):
    for key, e in sec.entries.items():
        if key not in allowed:
            name = sec.kind if sec.index is None else f"{sec.kind} {sec.index}"
            raise ConfigError(f"unknown key {key!r} in [{name}]", e.line, e.key_column)


def _require(sec, key):
    if key not in sec.entries:
        raise ConfigError(f"missing key {key!r}", sec.line, 1)
    return sec.entries[key]


def _parse_source(sec):
    fam_e = _require(sec, "state")
    family = fam_e.value
    if family not in STATE_FAMILIES:
        raise ConfigError(f"unknown state family {family!r}", fam_e.line, fam_e.column)
    req, opt = STATE_FAMILIES[family]
    _unknown(sec, {"state", "channel", "damping", *req, *opt})
    params = tuple((k, _num(_require(sec, k))) for k in req)
    params += tuple((k, _num(sec.entries[k])) for k in opt if k in sec.entries)
    channel = damping = None
    if "channel" in sec.entries:
        ce = sec.entries["channel"]
        if ce.value not in CHANNELS:
            raise ConfigError(f"unknown channel {ce.value!r}", ce.line, ce.column)
        channel = ce.value
        damping = _num(_require(sec, "damping"))
    elif "damping" in sec.entries:
        e = sec.entries["damping"]
        raise ConfigError("damping given without a channel", e.line, e.column)
    return SourceSpec(family, params, channel, damping)


def _parse_filter(sec, joint):
    fam_e = _require(sec, "filter")
    family = fam_e.value
    if family not in FILTER_FAMILIES:
        raise ConfigError(f"unknown filter family {family!r}", fam_e.line, fam_e.column)
    keys = FILTER_FAMILIES[family]
    _unknown(sec, {"filter", *keys, *(("qubits",) if joint else ())})
    if family == "matrix":
        params = (("entries", _nums(_require(sec, "entries"), allow_complex=True)),)
    else:
        params = tuple((k, _num(_require(sec, k))) for k in keys)
    qubits = None
    if joint:
        qe = _require(sec, "qubits")
        qs = _nums(qe)
        if not all(float(q).is_integer() for q in qs):
            raise ConfigError("qubit indices must be integers", qe.line, qe.column)
        qubits = tuple(int(q) for q in qs)
    return FilterSpec(family, params, qubits)


def parse_config(text):
    """Parse scenario text into a validated :class:`ScenarioConfig`."""
    sections = _read_sections(text)
    top = sections[0]
    _unknown(top, {"n"})
    n = _num(_require(top, "n"), int) if "n" in top.entries else None
    if n is None:
        raise ConfigError("missing top-level key 'n'", 1, 1)
    if not MIN_N <= n <= MAX_N:
        e = top.entries["n"]
        raise ConfigError(f"n={n} outside {MIN_N}..{MAX_N}", e.line, e.column)

    sources = [None] * n
    edges = [None] * n
    centrals = [None] * n
    joint = None
    scans = {}
    optimizer = OptimizerConfig()
    section_line = {}
    for sec in sections[1:]:
        if sec.index is not None and sec.kind in ("source", "edge", "central") and not 1 <= sec.index <= n:
            raise ConfigError(f"[{sec.kind} {sec.index}] outside 1..{n}", sec.line, 1)
        if sec.kind == "source":
            sources[sec.index - 1] = _parse_source(sec)
        elif sec.kind == "edge":
            edges[sec.index - 1] = _parse_filter(sec, False)
        elif sec.kind == "central" and sec.index is not None:
            centrals[sec.index - 1] = _parse_filter(sec, False)
        elif sec.kind == "central":
            joint = _parse_filter(sec, True)
        elif sec.kind == "scan":
            _unknown(sec, set(SCAN_KEYS))
            pe = _require(sec, "param")
            scans[sec.index] = (ScanSpec(pe.value, *(_num(_require(sec, k)) for k in SCAN_KEYS[1:])), pe)
        elif sec.kind == "optimizer":
            _unknown(sec, set(OPTIMIZER_KEYS))
            kw = {k: _num(e, OPTIMIZER_KEYS[k]) for k, e in sec.entries.items()}
            try:
                optimizer = OptimizerConfig(**kw)
            except ValueError as err:
                raise ConfigError(str(err), sec.line, 1) from None
        section_line[(sec.kind, sec.index)] = sec.line

    for i, s in enumerate(sources):
        if s is None:
            raise ConfigError(f"missing [source {i + 1}]", 1, 1)
    if joint is not None and any(c is not None for c in centrals):
        raise ConfigError("a joint [central] filter excludes per-source [central N] sections",
                          section_line[("central", None)], 1)
    if len(scans) > 3:
        raise ConfigError("at most three [scan] blocks", section_line[("scan", max(scans))], 1)

    cfg = ScenarioConfig(n, tuple(sources), tuple(edges), tuple(centrals), joint,
                         tuple(scans[k][0] for k in sorted(scans)), optimizer)
    for k in sorted(scans):
        spec, pe = scans[k]
        try:
            _lookup(cfg, spec.param)
            spec.values()
        except ConfigError as e:
            raise ConfigError(e.message, pe.line, pe.column) from None
    _validate(cfg, section_line)
    return cfg


def _validate(cfg, section_line):
    """Build every component so physical errors are reported against their section."""
    def where(kind, idx):
        return section_line.get((kind, idx), 1)
    for i, s in enumerate(cfg.sources):
        try:
            build_state(s)
        except (StarNetError, ValueError) as e:
            raise ConfigError(f"[source {i + 1}]: {e}", where("source", i + 1), 1) from None
    for kind, specs in (("edge", cfg.edges), ("central", cfg.centrals)):
        for i, f in enumerate(specs):
            if f is None:
                continue
            try:
                op = build_filter(f)
            except (StarNetError, ValueError) as e:
                raise ConfigError(f"[{kind} {i + 1}]: {e}", where(kind, i + 1), 1) from None
            if op.qubits != 1:
                raise ConfigError(f"[{kind} {i + 1}]: filter must act on one qubit", where(kind, i + 1), 1)
    try:
        build_assignment(cfg)
    except (StarNetError, ValueError) as e:
        raise ConfigError(f"[central]: {e}", where("central", None), 1) from None


def parse_config_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def parse_state_spec(text):
    """An inline state such as ``horodecki p=0.2 theta=pi/5`` (columns are 1-based)."""
    tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", text)]
    if not tokens:
        raise ConfigError("empty state spec", 1, 1)
    lines = [f"state = {tokens[0][0]}"]
    cols = {"state": tokens[0][1]}
    for tok, col in tokens[1:]:
        if "=" not in tok:
            raise ConfigError(f"expected key=value, got {tok!r}", 1, col)
        k, v = tok.split("=", 1)
        lines.append(f"{k} = {v}")
        cols[k] = col
    sec = _Section("source", 1, 1)
    for ln in lines:
        k, v = ln.split(" = ", 1)
        sec.entries[k] = _Entry(v, 1, cols[k] + (len(k) + 1 if k != "state" else 0), cols[k])
    try:
        spec = _parse_source(sec)
        build_state(spec)
    except ConfigError:
        raise
    except (StarNetError, ValueError) as e:
        raise ConfigError(str(e), 1, 1) from None
    return spec


# ---------------------------------------------------------------- building

def build_state(spec):
    p = dict(spec.params)
    f = spec.family
    if f == "bell_diagonal":
        w4 = p.get("w4", 1.0 - p["w1"] - p["w2"] - p["w3"])
        if -1e-12 < w4 < 0:
            w4 = 0.0  # rounding from grid arithmetic
        st = states.bell_diagonal(p["w1"], p["w2"], p["w3"], w4)
    elif f == "horodecki":
        st = states.horodecki_state(p["p"], p["theta"])
    elif f == "werner":
        st = states.werner_state(p["v"])
    elif f == "pure":
        st = states.pure_state(p["beta"])
    elif f == "plus_product":
        st = states.plus_product()
    elif f == "local_product":
        st = states.local_product_state()
    elif f == "singlet":
        st = states.singlet()
    elif f == "maximally_mixed":
        st = states.maximally_mixed()
    else:
        raise ConfigError(f"unknown state family {f!r}")
    if spec.channel == "amplitude_damp":
        st = states.amplitude_damp_both(st, spec.damping)
    return st


def build_filter(spec):
    p = dict(spec.params)
    f = spec.family
    if f == "epsilon":
        return epsilon_filter(p["eps"])
    if f == "fns3":
        return fns_3qubit(p["alpha1"], p["alpha2"])
    if f == "fns2":
        return fns_2qubit(p["alpha3"], p["alpha4"])
    if f == "fnsg":
        return fns_g_filter(p["alpha5"], p["alpha6"])
    if f == "matrix":
        return matrix_filter(p["entries"])
    raise ConfigError(f"unknown filter family {f!r}")


def build_assignment(cfg):
    edge = tuple(None if f is None else build_filter(f) for f in cfg.edges)
    central = tuple(None if f is None else build_filter(f) for f in cfg.centrals)
    joint = None
    if cfg.joint is not None:
        qs = cfg.joint.qubits
        if not all(1 <= q <= cfg.n for q in qs):
            raise ValueError(f"qubits {qs} outside 1..{cfg.n}")
        joint = JointFilter(build_filter(cfg.joint), tuple(q - 1 for q in qs))
    return FilterAssignment(cfg.n, edge, central, joint)


def build_scenario(cfg):
    return NetworkScenario(tuple(build_state(s) for s in cfg.sources), build_assignment(cfg))


# ---------------------------------------------------------------- parameter paths

_PATH = re.compile(r"(source|edge|central)(\d*)\.([a-z0-9_]+)$")


def _lookup(cfg, path):
    """(kind, 0-based index or None, key) for a parameter path like ``source1.p``."""
    m = _PATH.match(path)
    if not m:
        raise ConfigError(f"bad parameter path {path!r}")
    kind, idx, key = m.group(1), m.group(2), m.group(3)
    if kind == "central" and idx == "":
        if cfg.joint is None:
            raise ConfigError(f"{path}: no joint [central] filter")
        target = cfg.joint
        i = None
    else:
        if idx == "":
            raise ConfigError(f"{path}: missing index")
        i = int(idx) - 1
        if not 0 <= i < cfg.n:
            raise ConfigError(f"{path}: index outside 1..{cfg.n}")
        target = {"source": cfg.sources, "edge": cfg.edges, "central": cfg.centrals}[kind][i]
        if target is None:
            raise ConfigError(f"{path}: no [{kind} {i + 1}] section")
    if kind == "source" and key == "damping":
        if target.channel is None:
            raise ConfigError(f"{path}: source has no channel")
    elif key not in dict(target.params):
        raise ConfigError(f"{path}: no parameter {key!r}")
    return kind, i, key


def with_value(cfg, path, value):
    """Copy of cfg with one parameter replaced."""
    kind, i, key = _lookup(cfg, path)
    if kind == "central" and i is None:
        target = cfg.joint
    else:
        target = {"source": cfg.sources, "edge": cfg.edges, "central": cfg.centrals}[kind][i]
    if kind == "source" and key == "damping":
        new = replace(target, damping=float(value))
    else:
        new = replace(target, params=tuple((k, float(value) if k == key else v) for k, v in target.params))
    if kind == "central" and i is None:
        return replace(cfg, joint=new)
    field_name = {"source": "sources", "edge": "edges", "central": "centrals"}[kind]
    items = list(getattr(cfg, field_name))
    items[i] = new
    return replace(cfg, **{field_name: tuple(items)})


# ---------------------------------------------------------------- serializing

def _format_value(v):
    if isinstance(v, tuple):
        return " ".join(format_number(x) for x in v)
    return format_number(v)


def serialize_config(cfg):
    out = [f"n = {cfg.n}"]
    for i, s in enumerate(cfg.sources):
        out += ["", f"[source {i + 1}]", f"state = {s.family}"]
        out += [f"{k} = {_format_value(v)}" for k, v in s.params]
        if s.channel is not None:
            out += [f"channel = {s.channel}", f"damping = {format_number(s.damping)}"]
    for kind, specs in (("edge", cfg.edges), ("central", cfg.centrals)):
        for i, f in enumerate(specs):
            if f is not None:
                out += ["", f"[{kind} {i + 1}]", f"filter = {f.family}"]
                out += [f"{k} = {_format_value(v)}" for k, v in f.params]
    if cfg.joint is not None:
        out += ["", "[central]", f"filter = {cfg.joint.family}"]
        out += [f"{k} = {_format_value(v)}" for k, v in cfg.joint.params]
        out += ["qubits = " + " ".join(str(q) for q in cfg.joint.qubits)]
    for k, s in enumerate(cfg.scans):
        out += ["", f"[scan {k + 1}]", f"param = {s.param}"]
        out += [f"{key} = {format_number(getattr(s, key))}" for key in SCAN_KEYS[1:]]
    o = cfg.optimizer
    out += ["", "[optimizer]"] + [f"{k} = {format_number(getattr(o, k))}" for k in OPTIMIZER_KEYS]
    return "\n".join(out) + "\n"
