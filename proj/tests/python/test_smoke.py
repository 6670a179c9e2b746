import json
import math

import pytest

import grauert as gr


@pytest.fixture(scope="module")
def torus():
    g = gr.torus_group(1)
    dual = gr.enumerate_dual(g, 20.0)
    grid = gr.haar_grid(g, 64)
    return g, dual, grid


def test_dual_enumeration(torus):
    g, dual, _ = torus
    labels = sorted(xi.label[0] for xi in dual)
    assert labels == list(range(-4, 5))
    assert all(xi.bracket <= 20.0 + 1e-9 for xi in dual)

    su2 = gr.enumerate_dual(gr.su2_group(), 20.2)
    assert [xi.label[0] for xi in su2] == list(range(9))
    assert su2[2].dim == 3


def test_fourier_round_trip(torus):
    g, dual, grid = torus
    a = gr.random_band_limited(dual, 5, 2.0)
    u = gr.fourier_inverse(a, grid)
    b = gr.fourier_forward(u, dual)
    diff = max(abs(x - y) for bx, by in zip(a.blocks, b.blocks)
               for x, y in zip(bx.flatten(), by.flatten()))
    assert diff < 1e-12
    assert abs(gr.l2_norm(u) - gr.sobolev_norm(a, 0.0)) < 1e-10


def test_quantization_and_composition(torus):
    g, dual, grid = torus
    ddx = json.dumps({"op": "dualpoly", "terms": [{"re": 0.0, "im": 1.0, "powers": [1]}]})
    mult = json.dumps({"op": "coord", "mode": [1]})
    p = gr.symbol_from_expr(ddx, grid, dual, 1.0)
    q = gr.symbol_from_expr(mult, grid, dual, 0.0)
    pq = gr.compose_exact(p, q)
    for i, xi in enumerate(pq.dual):
        if not pq.certified(i):
            continue
        k = xi.label[0]
        got = pq.block(3, i)[0, 0]
        x = grid.node(3).angles[0]
        assert abs(got - 1j * (k + 1) * complex(math.cos(x), math.sin(x))) < 1e-10


def test_contour_power():
    dual = gr.enumerate_dual(gr.torus_group(1), 20.0)
    A = gr.laplacian_operator(dual)
    res = gr.complex_power_contour(A, 0.5, 1, 0.5, 400)
    assert res.reported_defect < 1e-6
    for i, xi in enumerate(dual):
        lam = xi.eigenvalue
        expect = math.sqrt(lam) if lam > 0 else 0.0
        assert abs(res.op.action[i][0, 0] - expect) < 1e-6


def test_poisson_and_tube():
    g = gr.torus_group(1)
    dual = gr.enumerate_dual(g, 20.0)
    spec = gr.make_tube(g, 0.2, 8)
    f = gr.random_band_limited(dual, 9, 2.0)
    pf = gr.poisson_transform(f, spec)
    rf = gr.restrict_boundary(pf)
    for i, xi in enumerate(dual):
        damp = math.exp(-0.2 * math.sqrt(xi.eigenvalue))
        assert abs(rf.blocks[i][0, 0] - f.blocks[i][0, 0] * damp) < 1e-14
    assert abs(gr.tube_weight(spec, [3]) - math.sinh(1.2) / 3.0) < 1e-12

    ok = gr.half_wave_kernel(gr.TubePoint(gr.torus_point([0.0]), [0.0]), spec, 16.0)
    assert not ok.diverged
    bad = gr.half_wave_kernel(gr.TubePoint(gr.torus_point([0.0]), [0.25]), spec, 16.0)
    assert bad.diverged


def test_errors_translate():
    with pytest.raises(ValueError):
        gr.enumerate_dual(gr.torus_group(1), -2.0)
