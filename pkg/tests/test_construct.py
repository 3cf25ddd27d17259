import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from minimaxlab.construct import (
    InfConvInstance,
    delta_set_value,
    gen_instance,
    inf_convolution,
    lipschitz_transfer_check,
    make_rng,
    phi_from_xi,
    star_conjugate,
    sup_convolution,
    xi_witness,
)
from minimaxlab.core import BiMatrix
from minimaxlab.exceptions import LengthMismatch, NegativeK, ShapeCap, ValidationError
from minimaxlab.genconvex import convexlike_witness, is_s_concavelike, is_t_convexlike
from minimaxlab.minimax import pure_values
from tests.conftest import matrices

vectors = st.integers(1, 6).flatmap(lambda n: arrays(np.float64, n, elements=st.floats(-5, 5)))


def test_phi_examples(frozen):
    assert phi_from_xi([0, 1]).tolist() == frozen["phi_01"]
    assert not phi_from_xi([2, 2, 2]).any()
    assert phi_from_xi([3]).tolist() == [[0.0]]


@given(vectors)
def test_phi_laws(xi):
    phi = phi_from_xi(xi)
    assert np.all(np.diag(phi) == 0) and np.all(phi >= 0)
    # phi[x, z] + phi[z, w] >= phi[x, w]
    assert np.all(phi[:, :, None] + phi[None, :, :] >= phi[:, None, :].transpose(0, 2, 1) - 1e-12)


def test_infconv_example(frozen):
    inst = inf_convolution([[5], [0]], [0, 1], 1.0)
    assert np.asarray(inst.f).tolist() == frozen["infconv_example_f"]
    assert inst.argmin_z.tolist() == [[1], [1]]


def test_infconv_k_zero_collapse():
    g = np.array([[3.0, -1.0], [0.0, 2.0], [1.0, 1.0]])
    f = np.asarray(inf_convolution(g, [0.1, 0.5, 0.9], 0.0).f)
    np.testing.assert_array_equal(f, np.tile(g.min(axis=0), (3, 1)))


def test_infconv_singleton():
    assert np.asarray(inf_convolution([[4.0]], [7.0], 3.0).f).tolist() == [[4.0]]


def test_infconv_errors():
    with pytest.raises(LengthMismatch):
        inf_convolution([[1.0], [2.0]], [0.0])
    with pytest.raises(NegativeK):
        inf_convolution([[1.0]], [0.0], -1.0)


def brute_infconv(g, xi, K):
    m, n = g.shape
    return np.array([[min(g[z, y] + K * max(xi[x] - xi[z], 0.0) for z in range(m)) for y in range(n)] for x in range(m)])


@st.composite
def infconv_inputs(draw):
    g = draw(matrices(6, 5, -3, 3))
    xi = draw(arrays(np.float64, g.shape[0], elements=st.floats(0, 1)))
    K = draw(st.floats(0, 4))
    return g, xi, K


@given(infconv_inputs())
def test_infconv_invariants(case):
    g, xi, K = case
    inst = inf_convolution(g, xi, K)
    f = np.asarray(inst.f)
    np.testing.assert_allclose(f, brute_infconv(g, xi, K), atol=1e-12)
    assert np.all(f <= g + 1e-12)
    assert np.all(f >= g.min(axis=0) - 1e-12)
    assert lipschitz_transfer_check(inst)
    for t in (0.25, 0.5, 0.75):
        assert is_t_convexlike(f, t).holds
    # the smaller-xi row dominates every mixture of the pair
    m = g.shape[0]
    for x1 in range(m):
        for x2 in range(m):
            w = xi_witness(xi, x1, x2)
            mix = 0.5 * f[x1] + 0.5 * f[x2]
            assert np.all(f[w] <= mix + 1e-9)
            assert convexlike_witness(f, 0.5, x1, x2) is not None
    lower, upper = pure_values(f)
    assert upper - lower <= 1e-12


def test_lipschitz_failure():
    f = BiMatrix([[0, 1], [1, 0]])
    inst = InfConvInstance(f, np.array([0.0, 1.0]), 0.0, f, np.zeros((2, 2), dtype=int))
    assert not lipschitz_transfer_check(inst)


def test_lipschitz_constant_f():
    f = BiMatrix(np.ones((3, 2)))
    inst = InfConvInstance(f, np.array([0.0, 1.0, 2.0]), 0.0, f, np.zeros((3, 2), dtype=int))
    assert lipschitz_transfer_check(inst)


def test_supconv_examples():
    h = np.array([[1.0, 3.0, -2.0], [0.0, 0.5, 4.0]])
    G = np.asarray(sup_convolution(h, [0.2, 0.4, 0.9], 0.0))
    np.testing.assert_array_equal(G, np.tile(h.max(axis=1)[:, None], (1, 3)))
    assert np.asarray(sup_convolution([[2.0]], [0.3])).tolist() == [[2.0]]
    with pytest.raises(LengthMismatch):
        sup_convolution(h, [0.1])


@given(matrices(5, 5, -3, 3), st.floats(0, 3), st.data())
def test_supconv_concavelike(h, K, data):
    eta = data.draw(arrays(np.float64, h.shape[1], elements=st.floats(0, 1)))
    G = np.asarray(sup_convolution(h, eta, K))
    assert np.all(G >= h - 1e-12)
    for s in (0.25, 0.5, 0.75):
        assert is_s_concavelike(G, s).holds


def test_star_conjugate():
    assert star_conjugate([0, 0], [1, 2]) == 2
    assert star_conjugate([1.5, -2], [1.5, -2]) == 0
    assert star_conjugate([1, 3], [2, 2]) == 1
    with pytest.raises(LengthMismatch):
        star_conjugate([1], [1, 2])


def test_delta_set():
    assert delta_set_value([3, 1, 2]) == (1.0, 1.0)
    assert delta_set_value([-0.5]) == (-0.5, -0.5)
    assert delta_set_value([0, -5]) == (-5.0, -5.0)


@given(vectors)
def test_delta_set_components_equal(bounds):
    a, b = delta_set_value(bounds)
    assert a == b


# -- generators -------------------------------------------------------------


@pytest.mark.parametrize("kind", ["random", "convexlike", "concavelike", "two_function", "km2_ready"])
def test_generation_deterministic(kind):
    a = json.dumps(gen_instance(1, (4, 3), kind).to_dict(), sort_keys=True)
    b = json.dumps(gen_instance(1, (4, 3), kind).to_dict(), sort_keys=True)
    c = json.dumps(gen_instance(2, (4, 3), kind).to_dict(), sort_keys=True)
    assert a == b and a != c


def test_convexlike_kind():
    inst = gen_instance(1, (4, 3), "convexlike")
    for t in (0.25, 0.5, 0.75):
        assert is_t_convexlike(inst.f, t).holds
    payload = inst.to_dict()
    assert payload["kind"] == "infconv"
    assert set(payload) == {"kind", "xi", "K", "g", "f", "guarantees"}
    rebuilt = InfConvInstance.from_dict(payload)
    assert rebuilt.f == inst.f


def test_km2_ready_gap():
    inst = gen_instance(2, (6, 5), "km2_ready")
    lower, upper = pure_values(inst.f)
    assert upper - lower <= 1e-7
    assert "km2-ready" in inst.guarantees


def test_two_function_order():
    inst = gen_instance(3, (5, 4), "two_function")
    assert np.all(np.asarray(inst.f) <= np.asarray(inst.g))


def test_shape_cap_and_kind():
    with pytest.raises(ShapeCap):
        gen_instance(0, (0, 3), "random")
    with pytest.raises(ShapeCap):
        gen_instance(0, (2001, 3), "random")
    with pytest.raises(ValidationError):
        gen_instance(0, (2, 2), "banana")


def test_big_seeds_accepted():
    a = make_rng(2**64 - 1).uniform()
    b = make_rng(2**64 - 1).uniform()
    assert a == b
    assert make_rng(5, 0).uniform() != make_rng(5, 1).uniform()


def test_infconv_from_dict_errors():
    good = gen_instance(1, (3, 2), "convexlike").to_dict()
    bad = dict(good)
    del bad["xi"]
    with pytest.raises(ValidationError):
        InfConvInstance.from_dict(bad)
    with pytest.raises(LengthMismatch):
        InfConvInstance.from_dict({**good, "xi": [0.0]})
