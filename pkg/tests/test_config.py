import math
from importlib import resources

import pytest
from hypothesis import given, strategies as st

from starnet.config import (FilterSpec, ScanSpec, ScenarioConfig, SourceSpec, build_scenario,
                            parse_config, parse_number, parse_state_spec, serialize_config, with_value)
from starnet.errors import ConfigError
from starnet.optimize import OptimizerConfig

INSTANCES = sorted(p.name for p in resources.files("starnet.instances").iterdir() if p.name.endswith(".cfg"))

BASE = """\
n = 2

[source 1]
state = horodecki
p = 0.2
theta = pi/5

[source 2]
state = werner
v = 0.7
"""


def test_numbers():
    assert parse_number("-pi/2") == -math.pi / 2
    assert parse_number("pi/7") == math.pi / 7
    assert parse_number("3*pi/8") == 3 * math.pi / 8
    assert parse_number("2e-3") == 0.002
    assert parse_number("1-2j", allow_complex=True) == 1 - 2j
    for bad in ("pi/", "abs(1)", "1j", "x", "True", "__import__('os')"):
        with pytest.raises(ValueError):
            parse_number(bad)


@pytest.mark.parametrize("name", INSTANCES)
def test_instances_round_trip(name):
    cfg = parse_config(resources.files("starnet.instances").joinpath(name).read_text())
    again = parse_config(serialize_config(cfg))
    assert again == cfg
    build_scenario(cfg)


def test_basic_parse():
    cfg = parse_config(BASE + "\n[edge 2]\nfilter = epsilon\neps = 0.5  # comment\n")
    assert cfg.n == 2
    assert cfg.sources[0] == SourceSpec("horodecki", (("p", 0.2), ("theta", math.pi / 5)))
    assert cfg.edges == (None, FilterSpec("epsilon", (("eps", 0.5),)))
    assert cfg.optimizer == OptimizerConfig()


def _error(text):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    return exc.value


def test_error_locations():
    e = _error(BASE + "colour = red\n")
    assert (e.line, e.column) == (11, 1) and "unknown key" in str(e)
    e = _error(BASE.replace("p = 0.2", "p = 0.2.3"))
    assert (e.line, e.column) == (5, 5)
    e = _error(BASE + "[widget 1]\n")
    assert e.line == 11 and "unknown section" in str(e)
    e = _error(BASE.replace("state = werner", "state = wurner"))
    assert (e.line, e.column) == (9, 9)
    e = _error(BASE + "  [edge 1]\n  filter = epsilon\n  eps = 0.5\n  eps = 0.6\n")
    assert (e.line, e.column) == (14, 3) and "duplicate" in str(e)
    e = _error("n = 2\n[source 1]\nstate = singlet\n")
    assert "missing [source 2]" in str(e)
    e = _error(BASE.replace("n = 2", "n = 7"))
    assert e.line == 1
    e = _error(BASE.replace("p = 0.2", "p = 1.5"))
    assert e.line == 3 and "source 1" in str(e)
    e = _error(BASE + "[central 1]\nfilter = epsilon\neps = 0.5\n[central]\nfilter = fns2\n"
                      "alpha3 = 1\nalpha4 = 1\nqubits = 1 2\n")
    assert e.line == 14
    e = _error(BASE + "[central]\nfilter = fns2\nalpha3 = 1\nalpha4 = 1\nqubits = 1 3\n")
    assert e.line == 11
    e = _error(BASE + "[scan 1]\nparam = source1.q\nstart = 0\nstop = 1\nstep = 0.1\n")
    assert (e.line, e.column) == (12, 9)
    e = _error(BASE + "[scan 1]\nparam = source1.p\nstart = 1\nstop = 0\nstep = 0.1\n")
    assert "empty range" in str(e)
    e = _error(BASE + "[optimizer]\nrestarts = 0\n")
    assert e.line == 11
    e = _error(BASE + "[optimizer]\nrestarts = 1.5\n")
    assert (e.line, e.column) == (12, 12)


def test_scan_values_inclusive():
    assert ScanSpec("source1.p", 0.3, 0.65, 0.005).values()[-1] == 0.65
    assert len(ScanSpec("source1.p", 0.3, 0.65, 0.005).values()) == 71
    assert ScanSpec("edge1.eps", 1, 1, 0.1).values() == [1]


def test_with_value():
    cfg = parse_config(BASE + "[edge 1]\nfilter = epsilon\neps = 0.5\n")
    cfg2 = with_value(cfg, "source1.p", 0.4)
    assert cfg2.sources[0].get("p") == 0.4 and cfg.sources[0].get("p") == 0.2
    assert with_value(cfg, "edge1.eps", 0.9).edges[0].params == (("eps", 0.9),)
    with pytest.raises(ConfigError):
        with_value(cfg, "edge2.eps", 0.9)
    with pytest.raises(ConfigError):
        with_value(cfg, "source1.damping", 0.1)


def test_state_spec():
    spec = parse_state_spec("horodecki p=0.2169 theta=0.4585")
    assert spec.family == "horodecki" and spec.get("theta") == 0.4585
    with pytest.raises(ConfigError) as exc:
        parse_state_spec("werner v=0.5 x=1")
    assert exc.value.column == 14
    with pytest.raises(ConfigError):
        parse_state_spec("werner 0.5")


def test_matrix_filter_config():
    cfg = parse_config(BASE + "[central 2]\nfilter = matrix\nentries = 0.5 0 0 0.5j\n")
    sc = build_scenario(cfg)
    assert sc.assignment.central[1].matrix[1, 1] == 0.5j
    assert parse_config(serialize_config(cfg)) == cfg


finite = st.floats(0, 1, allow_nan=False, allow_infinity=False)
angles = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
sources = st.one_of(
    st.builds(lambda p, t: SourceSpec("horodecki", (("p", p), ("theta", t))), finite, st.floats(0, 0.78)),
    st.builds(lambda v: SourceSpec("werner", (("v", v),)), finite),
    st.builds(lambda b, d: SourceSpec("pure", (("beta", b),), "amplitude_damp", d), st.floats(-0.78, 0.78), finite),
    st.just(SourceSpec("plus_product")),
    st.just(SourceSpec("singlet")),
)
single = st.one_of(st.none(), st.builds(lambda e: FilterSpec("epsilon", (("eps", e),)), st.floats(0.05, 1)))


@st.composite
def configs(draw):
    n = draw(st.integers(2, 4))
    srcs = tuple(draw(sources) for _ in range(n))
    edges = tuple(draw(single) for _ in range(n))
    if draw(st.booleans()):
        joint = FilterSpec("fnsg", (("alpha5", draw(angles)), ("alpha6", draw(angles))),
                           tuple(draw(st.permutations(range(1, n + 1)))[:3]) if n >= 3 else None)
        if n < 3:
            joint = FilterSpec("fns2", (("alpha3", draw(finite)), ("alpha4", draw(finite))), (2, 1))
        centrals = ()
    else:
        joint = None
        centrals = tuple(draw(single) for _ in range(n))
    opt = OptimizerConfig(draw(st.integers(1, 50)), draw(st.integers(1, 9999)),
                          draw(st.floats(1e-12, 1e-2)), draw(st.integers(0, 2 ** 31)), draw(st.integers(1, 8)))
    scans = (ScanSpec("source1.%s" % srcs[0].params[0][0], 0.0, 0.5, 0.25),) if srcs[0].params else ()
    return ScenarioConfig(n, srcs, edges, centrals, joint, scans, opt)


@given(configs())
def test_round_trip_property(cfg):
    text = serialize_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert serialize_config(again) == text
