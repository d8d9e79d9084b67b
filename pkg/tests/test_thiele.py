import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ratapprox import approximate, unit_circle, unit_interval
from ratapprox.thiele import Thiele, ThieleBreakdown, ThieleWorkspace, add_nodes, next_weight

# inverse differences of 1/(1+z) at 0, 1, 2, worked by hand:
# d1 = 1, d2 = 1/(1/2 - 1) = -2, d3: u = (2-0)/(1/3-1) = -3, (2-1)/(-3+2) = -1
HAND_NODES = [0.0, 1.0, 2.0]
HAND_WEIGHTS = [1.0, -2.0, -1.0]


def test_hand_weights():
    th = Thiele(HAND_NODES, [1.0, 0.5, 1 / 3])
    assert np.allclose(th.weights, HAND_WEIGHTS, rtol=1e-15)
    z = np.array([0.3, -0.5 + 2j, 7.0])
    assert np.allclose(th(z), 1 / (1 + z), rtol=1e-14)


def test_eval_examples():
    assert Thiele([0.4], [3.0])(12 + 1j) == 3.0
    th = Thiele([0, 1], [1, 2])
    assert np.allclose(th.weights, [1, 1])
    assert th(0.5) == pytest.approx(1.5)


def test_next_weight_examples():
    assert next_weight([], [], 0.2, 4.0) == 4.0
    assert next_weight([0], [1], 1, 2) == 1


def test_breakdown_is_reported():
    with pytest.raises(ThieleBreakdown):
        # the new value reproduces the first weight exactly
        next_weight([0.0], [2.0], 1.0, 2.0)


def test_degrees_formula():
    assert Thiele([0], [1]).degrees() == (1, 1)
    assert Thiele([0, 1], [1, 2]).degrees() == (2, 1)
    assert Thiele(np.arange(5.0), np.exp(np.arange(5.0))).degrees() == (3, 3)


def test_vanishing_tail_gives_pole():
    # 1 + z/(1 + (z-1)/0.5) = 1 + z/(2z - 1): the tail vanishes at z = 1/2
    th = Thiele([0, 1, 2], [1, 2, 1 + 2 / 3], [1, 1, 0.5])
    assert np.isinf(th(0.5))
    z = np.array([0.25, 3j])
    assert np.allclose(th(z), 1 + z / (2 * z - 1))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False), min_size=2, max_size=8, unique=True))
def test_append_reproduces_new_value(pts):
    z = np.array(pts)
    assume(np.min(np.abs(z[:, None] - z[None, :]) + np.eye(len(z))) >= 1e-3)
    f = np.exp(z)
    th = Thiele(z[:-1], f[:-1])
    try:
        th2 = add_nodes(th, z[-1], f[-1])
    except ThieleBreakdown:
        return
    assert np.array_equal(th2.weights[:-1], th.weights)
    assert len(th2) == len(th) + 1
    zz = z[-1] * (1 + 1e-14)
    assert abs(th2(zz) - f[-1]) <= 1e-8 * max(1.0, abs(f[-1]))


def test_rebuild_is_bitwise_deterministic(rng):
    z = rng.uniform(-1, 1, 10) + 1j * rng.uniform(-1, 1, 10)
    a = Thiele(z, np.cos(z))
    b = Thiele(z, np.cos(z))
    assert np.array_equal(a.weights, b.weights)


def test_workspace_matches_direct(rng):
    z = rng.uniform(-1, 1, 30) + 1j * rng.uniform(-1, 1, 30)
    t = rng.uniform(-1, 1, 200) + 1j * rng.uniform(-1, 1, 200)
    f = lambda x: 1 / (x - 3) + np.exp(x)
    ws = ThieleWorkspace(8)
    ws.set_tests(np.arange(100), t[:100], f(t[:100]))
    for zi in z:
        ws.add_nodes([zi], [f(zi)])
    pred = ws.update_test_values(np.arange(100, 200), t[100:], f(t[100:]))
    direct = ws.interpolant()(ws.t[ws.active_slots()])
    assert np.max(np.abs(pred - direct) / np.abs(direct)) <= 1e-13
    assert np.array_equal(ws.predict(), ws.update_test_values())
    assert ws.factorizations == 0


def test_node_adjacent_test_point_is_finite():
    ws = ThieleWorkspace()
    ws.add_nodes([0.0, 0.5, 1.0], np.exp([0.0, 0.5, 1.0]))
    pred = ws.update_test_values([0], [0.5 + 1e-8], [np.exp(0.5 + 1e-8)])
    assert np.isfinite(pred).all()


def test_exact_recovery_of_rational():
    f = lambda z: (z**2 + 1) / ((z - 2) * (z + 3j))
    a = approximate(f, unit_interval, method="thiele")
    assert len(a.nodes) <= 2 * 2 + 3
    z = np.linspace(-1, 1, 1001)
    assert np.max(np.abs(a(z) - f(z))) <= 1e-10 * np.max(np.abs(f(z)))


def test_poles_and_residues():
    a = approximate(lambda z: 1 / (z - 2), unit_interval, method="thiele")
    p, c = a.residues()
    assert len(p) == 1 and abs(p[0] - 2) < 1e-8 and abs(c[0] - 1) < 1e-8
    assert len(approximate(lambda z: 3 + 0 * z, unit_interval, method="thiele").poles()) == 0


def test_accepted_interpolant_interpolates():
    a = approximate(lambda z: np.exp(z) / (z - 1.5), unit_circle, method="thiele", allowed=True)
    th = a.fit
    # perturb slightly off the nodes so the continued fraction itself is evaluated
    z = th.nodes * (1 + 1e-13)
    assert np.max(np.abs(th(z) - th.values) / np.abs(th.values)) <= 1e-10
