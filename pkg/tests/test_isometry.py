"""Isometry harness: map checks, fits, rule-outs and the curve dynamics."""

import math

import numpy as np
import pytest

from normplane.errors import PreconditionError
from normplane.norms import Hexagonal, PNorm, Pushforward
from normplane.curves import build_natural_param, sampled_curve, unit_sphere
from normplane.isometry import (
    chord_triple,
    check_antipodes,
    check_isometry,
    distortion_profile,
    equilateral_triples,
    fit_affine,
    fit_linear,
    linear_map,
    map_from_spec,
    map_param,
    map_to_spec,
    nondiff_set,
    require_distinct_extremes,
    rigidity_verdict,
    staircase,
    table_map,
    two_corner_undetermined,
    zigzag,
)

PUSH = np.array([[1.2, 0.4], [-0.2, 0.9]])


def _push_map(params, name, corpus):
    src = params[name]
    tgt = build_natural_param(unit_sphere(Pushforward(corpus[name], PUSH)))
    return linear_map(src, tgt, PUSH)


# -- linear maps ---------------------------------------------------------


@pytest.mark.parametrize("name", ["hexagonal", "l2", "lens"])
def test_pushforward_is_an_exact_isometry(params, corpus, name):
    m = _push_map(params, name, corpus)
    assert check_isometry(m) <= 1e-9
    assert check_antipodes(m) <= 1e-12
    T, res = fit_linear(m, (np.array([1.0, 0.0]) / float(corpus[name].value((1.0, 0.0))),
                            np.array([0.0, 1.0]) / float(corpus[name].value((0.0, 1.0)))))
    assert res <= 1e-8
    assert np.allclose(T, PUSH, atol=1e-6)


def test_distortion_profile_backs_the_max(params, corpus):
    m = _push_map(params, "hexagonal", corpus)
    prof = distortion_profile(m)
    assert prof.ndim == 1 and len(prof) >= 1000
    assert float(np.max(prof)) == check_isometry(m)


def test_linear_map_rejects_singular_matrix(params):
    with pytest.raises(PreconditionError):
        linear_map(params["l2"], params["l2"], [[1.0, 2.0], [2.0, 4.0]])


def test_linear_map_checks_target_at_default_tol(params):
    # a 1% stretch of the circle misses the target sphere
    with pytest.raises(PreconditionError):
        linear_map(params["l2"], params["l2"], [[1.01, 0.0], [0.0, 1.0]])


# -- param tables --------------------------------------------------------


def test_identity_table(params):
    p = params["l2"]
    knots = np.linspace(0.0, p.period, 64, endpoint=False)
    m = table_map(p, p, np.column_stack([knots, knots]))
    assert m.orientation == 1
    assert check_isometry(m) <= 1e-12
    assert check_antipodes(m) <= 1e-12


def test_warped_table_is_rejected(params):
    p = params["l2"]
    knots = np.linspace(0.0, p.period, 128, endpoint=False)
    m = table_map(p, p, np.column_stack([knots, knots + 0.3 * np.sin(knots)]))
    assert check_isometry(m) > 0.01
    assert check_antipodes(m) > 0.01
    _, res = fit_linear(m, (np.array([1.0, 0.0]), np.array([0.0, 1.0])))
    assert res > 0.01


def test_orientation_reversed_table(params):
    p = params["l2"]
    knots = np.linspace(0.0, p.period, 64, endpoint=False)
    m = table_map(p, p, np.column_stack([knots, np.mod(-knots, p.period)]))
    assert m.orientation == -1
    assert check_isometry(m) <= 1e-9


def test_exact_pushforward_table_recovers_the_matrix(params, corpus):
    # on polygon spheres the param correspondence is piecewise linear with
    # breakpoints at the corners, so a corner-anchored table is exact
    src = params["hexagonal"]
    tgt = build_natural_param(unit_sphere(Pushforward(corpus["hexagonal"], PUSH)))
    knots = np.sort(np.unique(np.concatenate(
        [src.corner_params(), np.linspace(0.0, src.period, 48, endpoint=False)])))
    s_vals = np.array([tgt.locate(PUSH @ src.point_at(float(t))) for t in knots])
    m = table_map(src, tgt, np.column_stack([knots, s_vals]))
    assert check_isometry(m) <= 1e-9
    T, res = fit_linear(m, (np.array([1.0, 0.0]), np.array([0.0, 1.0])))
    assert res <= 1e-9
    assert np.allclose(T, PUSH, atol=1e-6)


@pytest.mark.parametrize(
    "pairs",
    [
        [[0.0, 0.0]],
        [[0.0, 0.0], [1.0, 0.5], [0.5, 1.0]],
        [[0.0, 0.0], [1.0, 0.5], [1.0, 1.0], [3.0, 2.0]],
    ],
)
def test_table_validation(params, pairs):
    p = params["l2"]
    with pytest.raises(PreconditionError):
        table_map(p, p, pairs)


def test_map_spec_roundtrip(params, corpus):
    m = _push_map(params, "hexagonal", corpus)
    clone = map_from_spec(map_to_spec(m), m.source, m.target)
    ts = np.linspace(0.0, m.source.period, 32, endpoint=False)
    assert np.allclose(map_param(m, ts), map_param(clone, ts), atol=1e-12)


def test_check_antipodes_needs_central_symmetry(drop):
    p = build_natural_param(drop)
    knots = np.linspace(0.0, p.period, 32, endpoint=False)
    m = table_map(p, p, np.column_stack([knots, knots]))
    with pytest.raises(PreconditionError):
        check_antipodes(m)


# -- fits and rigidity ---------------------------------------------------


def test_affine_fit_recovers_translation(params):
    p = params["hexagonal"]
    shift = np.array([3.0, -2.0])
    hexagon = p.point_at(np.arange(6.0))
    shifted = sampled_curve(hexagon + shift, smooth=np.zeros(6, bool), ambient=Hexagonal())
    tgt = build_natural_param(shifted)
    knots = np.linspace(0.0, p.period, 48, endpoint=False)
    s_vals = np.array([tgt.locate(p.point_at(float(t)) + shift) for t in knots])
    m = table_map(p, tgt, np.column_stack([knots, s_vals]))
    anchors = p.point_at(np.array([0.0, p.period / 3.0, 2.0 * p.period / 3.0]))
    T, b, res = fit_affine(m, anchors)
    assert np.allclose(T, np.eye(2), atol=1e-9)
    assert np.allclose(b, [3.0, -2.0], atol=1e-9)
    assert res <= 1e-9


def test_affine_fit_rejects_collinear_anchors(params, corpus):
    m = _push_map(params, "l2", corpus)
    anchors = np.array([[1.0, 0.0], [0.0, 0.0], [-1.0, 0.0]])
    with pytest.raises(PreconditionError):
        fit_affine(m, anchors)


def test_rigidity_verdicts(corpus):
    assert rigidity_verdict(corpus["hexagonal"]) == "linear"
    assert rigidity_verdict(corpus["l1"]) == "linear"
    assert rigidity_verdict(corpus["l2"]) == "undetermined"
    assert two_corner_undetermined(corpus["lens"]) is True
    assert two_corner_undetermined(corpus["hexagonal"]) is False
    assert two_corner_undetermined(corpus["l2"]) is False


# -- equilateral triples -------------------------------------------------


def test_equilateral_found_on_square(corpus):
    res = equilateral_triples(corpus["linf"], 2.0, 1e-6)
    assert res.status == "found"
    assert len(res.triples) >= 1
    a, b, c = (np.asarray(p) for p in res.triples[0])
    for u, v in ((a, b), (a, c), (b, c)):
        assert float(corpus["linf"].value(u - v)) >= 2.0 - 1e-6


def test_equilateral_found_on_hexagon(corpus):
    res = equilateral_triples(corpus["hexagonal"], 2.0, 1e-6)
    assert res.status == "found"


def test_equilateral_certified_absent_on_circle(corpus):
    res = equilateral_triples(corpus["l2"], 2.0, 1e-3)
    assert res.status == "certified_absent"
    assert res.fine_spacing <= 1e-4
    assert res.best_bound < 2.0 - 1e-3


# -- chord triples -------------------------------------------------------


def _assert_triple(param, x, atol=1e-9):
    u, v, w, t = chord_triple(param, x)
    norm = param.ambient
    assert t != 0.0
    assert float(norm.value(u - v - t * np.asarray(x))) <= atol
    assert abs(w[0] - u[0]) <= atol
    assert abs(w[1] - v[1]) <= atol
    for p in (u, v, w):
        assert abs(float(norm.value(p)) - 1.0) <= 1e-6
    return u, v, w, t


def test_chord_triple_round_diagonal(params):
    r = math.sqrt(2.0) / 2.0
    u, v, w, t = _assert_triple(params["l2"], np.array([r, r]))
    assert np.allclose(w, [r, -r], atol=1e-7)
    assert t == pytest.approx(2.0, abs=1e-7)


def test_chord_triple_axis_degenerate(params):
    u, v, w, t = _assert_triple(params["l2"], np.array([1.0, 0.0]))
    assert np.allclose(w, u, atol=1e-12)
    u, v, w, t = _assert_triple(params["hexagonal"], np.array([0.0, 1.0]))
    assert np.allclose(w, v, atol=1e-12)


@pytest.mark.parametrize("angle", [0.4, 1.9, 3.6, 5.1])
def test_chord_triple_generic_directions(params, angle):
    x = np.array([math.cos(angle), math.sin(angle)])
    _assert_triple(params["l2"], x)
    _assert_triple(params["lens"], x)


def test_chord_triple_needs_distinct_extremes(double_drop):
    with pytest.raises(PreconditionError) as err:
        chord_triple(double_drop, np.array([1.0, 0.3]))
    assert "zigzag" in str(err.value)
    # the single-corner drop and smooth spheres qualify
    require_distinct_extremes(unit_sphere(PNorm(2)))


# -- zigzag and staircase ------------------------------------------------


def test_zigzag_converges_on_drop(drop):
    c = np.array([1.0, 1.0])
    res = zigzag(drop, c, np.array([-1.0, 0.0]))
    assert res.verdict == "converged"
    assert res.final_gap <= 1e-6
    assert res.iterations <= 10_000
    steps = np.diff(np.asarray(res.points), axis=0)
    assert float(steps.min()) >= -1e-12  # moves up and right only


def test_zigzag_fixed_at_target(drop):
    c = np.array([1.0, 1.0])
    res = zigzag(drop, c, c)
    assert res.verdict == "fixed"
    assert len(res.points) == 1


def test_zigzag_fixed_at_strict_opposite_extreme(double_drop):
    res = zigzag(double_drop, np.array([1.0, 1.0]), np.array([-1.0, -1.0]))
    assert res.verdict == "fixed"
    assert res.iterations <= 1


def test_zigzag_needs_doubly_extreme_target(params):
    with pytest.raises(PreconditionError):
        zigzag(params["l2"], np.array([1.0, 0.0]), np.array([0.0, 1.0]))


def test_staircase_round_circle(params):
    p = params["l2"]
    a = np.array([math.cos(0.7), math.sin(0.7)])
    steps = staircase(p, a, -2, 4)
    assert sorted(steps) == [-2, -1, 0, 1, 2, 3, 4]
    assert np.allclose(steps[0], a, atol=1e-12)
    assert np.allclose(steps[1], [math.cos(math.pi - 0.7), math.sin(math.pi - 0.7)], atol=1e-9)
    assert np.allclose(steps[2], [math.cos(0.7 - math.pi), math.sin(0.7 - math.pi)], atol=1e-9)
    assert np.allclose(steps[4], a, atol=1e-9)  # fourth power is the identity
    assert np.allclose(steps[-1], [math.cos(-0.7), math.sin(-0.7)], atol=1e-9)


def test_staircase_square_edge_midpoint(params):
    steps = staircase(params["linf"], np.array([0.0, -1.0]), 0, 2)
    corner = steps[1]
    assert abs(corner[1] + 1.0) <= 1e-9
    assert abs(abs(corner[0]) - 1.0) <= 1e-9
    # the iteration then sticks to the square's corners
    assert float(PNorm(math.inf).value(steps[2])) == pytest.approx(1.0, abs=1e-9)


def test_staircase_commutes_with_axis_aligned_stretch(params):
    T = np.diag([1.3, 0.7])
    push = Pushforward(PNorm(2), T)
    pp = build_natural_param(unit_sphere(push))
    a = np.array([math.cos(0.7), math.sin(0.7)])
    base = staircase(params["l2"], a, -3, 3)
    moved = staircase(pp, T @ a, -3, 3)
    for n in range(-3, 4):
        assert np.allclose(moved[n], T @ base[n], atol=1e-8), n


# -- sliding distance kinks ----------------------------------------------


def test_nondiff_set_smooth_base(params):
    res = nondiff_set(params["l2"], np.array([1.0, 0.0]), sample_resolution=180)
    flagged = np.asarray(res.flagged)
    assert int(flagged.sum()) == 1
    assert np.allclose(np.asarray(res.points)[flagged][0], [1.0, 0.0], atol=1e-9)
    assert float(np.asarray(res.gaps)[flagged][0]) == pytest.approx(2.0, abs=1e-2)


def test_nondiff_set_corner_base(params):
    p = params["lens"]
    tip = np.array([0.0, math.sqrt(1.3125)])
    res = nondiff_set(p, tip, sample_resolution=180)
    flagged = np.asarray(res.flagged)
    assert bool(flagged[0])  # the base point always kinks
    assert int(flagged.sum()) >= 170


def test_nondiff_set_accepts_norm_curve_or_param(params):
    out = []
    for obj in (PNorm(2), unit_sphere(PNorm(2)), params["l2"]):
        res = nondiff_set(obj, np.array([1.0, 0.0]), sample_resolution=24)
        out.append(int(np.asarray(res.flagged).sum()))
    assert out[0] == out[1] == out[2]
