import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratapprox import unit_circle, unit_interval
from ratapprox.engine import approximate_prescribed
from ratapprox.parfrac import (
    ArnoldiBasis,
    ArnoldiPolynomial,
    PartialFractions,
    RankDeficiencyError,
    build_basis,
    eval_poly,
    fit_least_squares,
)


def test_degree_zero_basis():
    B = build_basis(np.linspace(-1, 1, 7), 0)
    assert B.H.shape == (1, 0)
    assert np.array_equal(B.Q, np.ones((7, 1)))


def test_roots_of_unity_give_shift_matrix():
    m = 64
    z = np.exp(2j * np.pi * np.arange(m) / m)
    B = build_basis(z, 10)
    shift = np.zeros((11, 10))
    shift[np.arange(1, 11), np.arange(10)] = 1
    assert np.max(np.abs(B.H - shift)) < 1e-13


def test_monomials_lie_in_span(rng):
    t = rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50)
    B = build_basis(t, 3)
    for k in range(4):
        c = np.linalg.lstsq(B.Q, t**k, rcond=None)[0]
        assert np.max(np.abs(B.Q @ c - t**k)) < 1e-10


def test_eval_poly_unit_coefficient():
    B = build_basis(np.linspace(-1, 1, 30), 5)
    p = ArnoldiPolynomial(B, np.eye(6)[0])
    assert np.allclose(eval_poly(p, np.array([0.3, 4j])), 1)


def test_eval_matches_matrix_at_samples(rng):
    t = unit_circle.point(np.linspace(0, 1, 200, endpoint=False))
    B = build_basis(t, 12)
    a = rng.normal(size=13) + 1j * rng.normal(size=13)
    p = ArnoldiPolynomial(B, a)
    assert np.max(np.abs(p(t) - B.Q @ a) / np.abs(B.Q @ a)) < 1e-12


def test_cos_on_circle():
    # ten basis vectors (degree 9) reproduce the classic 2.78e-7
    z = unit_circle.point(np.linspace(0, 1, 800))
    err9 = np.max(np.abs(build_basis(z, 9).fit(np.cos)(z) - np.cos(z)))
    err10 = np.max(np.abs(build_basis(z, 10).fit(np.cos)(z) - np.cos(z)))
    assert err9 == pytest.approx(2.78e-7, rel=0.01)
    assert err10 < 3e-9


def test_rank_deficiency_detected():
    with pytest.raises(RankDeficiencyError):
        build_basis(np.array([0.0, 1.0, 1.0, 0.0, 1.0]), 3)


@settings(max_examples=60, deadline=None)
@given(m=st.integers(40, 500), N=st.integers(0, 30), seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["disk", "circle", "interval"]))
def test_orthonormality(m, N, seed, kind):
    rng = np.random.default_rng(seed)
    if kind == "disk":
        t = np.sqrt(rng.uniform(size=m)) * np.exp(2j * np.pi * rng.uniform(size=m))
    elif kind == "circle":
        t = np.exp(2j * np.pi * rng.uniform(size=m))
    else:
        t = rng.uniform(-1, 1, m).astype(complex)
    try:
        B = build_basis(t, N)
    except RankDeficiencyError:
        return
    gram = B.Q.conj().T @ B.Q / m
    assert np.max(np.abs(gram - np.eye(N + 1))) <= 1e-10


def test_exact_model_reproduced(rng):
    t = np.linspace(-1, 1, 300)
    poles = np.array([1.2 + 0.3j, -1.1j, -1.5])
    c = np.array([0.5, 2j, -1 + 1j])

    def f(z):
        return 1 + 2 * z - z**3 + (1 / (z[:, None] - poles)) @ c

    r = fit_least_squares(t, f(t), poles, degree=4)
    assert np.max(np.abs(r(t) - f(t)) / np.max(np.abs(f(t)))) <= 1e-11
    assert np.allclose(r.residues()[1], c, atol=1e-9)
    assert r.degrees() == (7, 3)


def test_residual_orthogonal_to_columns(rng):
    t = np.linspace(-1, 1, 400)
    poles = np.array([0.1 + 0.2j, 0.1 - 0.2j, -0.3 + 0.05j])
    y = np.sqrt(t + 0.2 + 0.1j)
    r = fit_least_squares(t, y, poles, degree=8)
    resid = y - r(t)
    A = np.hstack([r.poly.basis.Q, 1 / (t[:, None] - poles)])
    assert np.linalg.norm(A.conj().T @ resid) <= 1e-10 * np.linalg.norm(y) * len(t)


def test_pole_hit_is_infinite():
    B = build_basis(np.linspace(-1, 1, 20), 1)
    r = PartialFractions(ArnoldiPolynomial(B, [0, 0]), [2.0], [1.0])
    assert np.isinf(r(2.0))
    assert r(3.0) == pytest.approx(1.0)


def test_roots_of_partial_fractions():
    t = np.linspace(-1, 1, 100)
    # (z - 0.5)/(z - 2) = 1 + 1.5/(z - 2)
    r = fit_least_squares(t, (t - 0.5) / (t - 2), [2.0], degree=0)
    assert np.allclose(r.roots(), [0.5], atol=1e-10)


def test_prescribed_driver_resolves_near_pole():
    zeta = np.array([0.2 + 0.01j, 0.2 - 0.01j])
    a = approximate_prescribed(lambda z: 1 / ((z - zeta[0]) * (z - zeta[1])), unit_interval, zeta, degree=2)
    spacing = np.min(np.abs(np.diff(np.sort(a.samples.real))))
    assert spacing <= 0.01
    z = np.linspace(-1, 1, 5001)
    f = 1 / ((z - zeta[0]) * (z - zeta[1]))
    assert np.max(np.abs(a(z) - f)) <= 1e-9 * np.max(np.abs(f))


def test_fit_validation():
    with pytest.raises(ValueError):
        fit_least_squares([0, 1, 2], [1, 2], [], 1)
    with pytest.raises(ValueError):
        fit_least_squares([0, 1, 2], [1, np.nan, 2], [], 1)
    with pytest.raises(ValueError):
        fit_least_squares([0, 1, 2], [1, 1, 2], [1.0], 0)


def test_ill_conditioning_warns():
    t = np.linspace(-1, 1, 100)
    with pytest.warns(RuntimeWarning, match="ill-conditioned"):
        r = fit_least_squares(t, np.exp(t), [5.0, 5.0 + 1e-9], degree=3)
    assert r.warning is not None
