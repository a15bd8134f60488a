import math

import numpy as np
import pytest

from geokit.errors import SplitDepthExceeded
from geokit.geometry import ClosedCurve, Patch, eval_patch, eval_segment, signed_area
from geokit.coons import (boundary_degeneracy, boundary_f, boundary_fprime_coeffs, canonical_edge,
                          coons_patch, is_nondegenerate, jacobian, make_nondegenerate,
                          node_tangents, pad_to_four, probe_accepts, reconstruct_jacobian,
                          reflex_nodes, split_reflex_nodes, table_sign, tpq_table,
                          worst_boundary_point)

from oracles import bernstein, jacobian_fd, polygon_winding, safe_points, segment_points, winding_oracle
from shapes import (S, circle, overlap_fixture, polygon, random_quad_curve, unit_square, wrinkle,
                    wrinkle_s)

DART = polygon([(0, 0), (2, 1), (0, 2), (0.7, 1)])
INTERNAL_ONLY = wrinkle(0.3, 0.4, False)


def patch_of(curve):
    return coons_patch(pad_to_four(curve))


def dbernstein(t):
    t = np.asarray(t, dtype=float)
    s = 1.0 - t
    return np.stack([-3 * s * s, 3 * s * s - 6 * t * s, 6 * t * s - 3 * t * t, 3 * t * t], axis=-1)


def grid_jacobian(patch, n=41):
    """Jacobian on an n x n grid, straight from the Bernstein derivative formulas."""
    t = np.linspace(0.0, 1.0, n)
    P = patch.control[:, :, :2]
    su = np.einsum("ai,bj,ijk->abk", dbernstein(t), bernstein(t), P)
    sv = np.einsum("ai,bj,ijk->abk", bernstein(t), dbernstein(t), P)
    return su[..., 0] * sv[..., 1] - su[..., 1] * sv[..., 0]


def scale2(patch):
    P = patch.control[:, :, :2].reshape(-1, 2)
    return float(np.sum((P.max(axis=0) - P.min(axis=0)) ** 2))


def random_nets(n, seed):
    rng = np.random.default_rng(seed)
    return [Patch(rng.uniform(-1, 1, (4, 4, 2))) for _ in range(n)]


def coons_blend_oracle(curve):
    """Bicubic net fitted to the bilinearly blended Coons surface sampled on a 4x4 grid."""
    s0, s1, s2, s3 = curve.segments
    t = np.linspace(0.0, 1.0, 4)
    c0 = segment_points(s0, t)            # sigma(u, 0)
    d1 = segment_points(s1, t)            # sigma(1, v)
    c1 = segment_points(s2, 1 - t)        # sigma(u, 1)
    d0 = segment_points(s3, 1 - t)        # sigma(0, v)
    P00, P30, P33, P03 = (np.array(p, dtype=float) for p in (s0.p0, s1.p0, s2.p0, s3.p0))
    sig = np.zeros((4, 4, 2))
    for a, u in enumerate(t):
        for b, v in enumerate(t):
            sig[a, b] = ((1 - v) * c0[a] + v * c1[a] + (1 - u) * d0[b] + u * d1[b]
                         - ((1 - u) * (1 - v) * P00 + u * (1 - v) * P30
                            + (1 - u) * v * P03 + u * v * P33))
    Binv = np.linalg.inv(bernstein(t))
    return np.einsum("ai,bj,ijk->abk", Binv, Binv, sig)


def boundary_polygon(patch, n=256):
    """Dense polygon along the four patch edges (u along v=0, then v along u=1, ...)."""
    t = np.linspace(0.0, 1.0, n, endpoint=False)
    C = patch.control[:, :, :2]
    edges = [C[:, 0], C[3, :], C[::-1, 3], C[0, ::-1]]
    return np.concatenate([bernstein(t) @ e for e in edges])


# --- patch construction --------------------------------------------------------

def test_unit_square_patch_is_identity():
    p = coons_patch(unit_square())
    i, j = np.meshgrid(np.arange(4), np.arange(4), indexing="ij")
    assert np.allclose(p.control[:, :, 0], i / 3, atol=1e-15)
    assert np.allclose(p.control[:, :, 1], j / 3, atol=1e-15)
    for u, v in [(0.2, 0.7), (0.5, 0.5), (0.9, 0.1)]:
        assert np.allclose(eval_patch(p, u, v)[:2], (u, v), atol=1e-15)


@pytest.mark.parametrize("seed", range(5))
def test_boundary_fidelity(seed):
    c = random_quad_curve(np.random.default_rng(seed), 0.25)
    p = coons_patch(c)
    s0, s1, s2, s3 = c.segments
    for t in np.linspace(0, 1, 50):
        t = float(t)
        assert np.allclose(eval_patch(p, t, 0)[:2], eval_segment(s0, t), atol=1e-12)
        assert np.allclose(eval_patch(p, 1, t)[:2], eval_segment(s1, t), atol=1e-12)
        assert np.allclose(eval_patch(p, t, 1)[:2], eval_segment(s2, 1 - t), atol=1e-12)
        assert np.allclose(eval_patch(p, 0, t)[:2], eval_segment(s3, 1 - t), atol=1e-12)
    # edge control points are copied, not recomputed
    assert [tuple(p.control[i, 0, :2]) for i in range(4)] == [tuple(q) for q in s0]


@pytest.mark.parametrize("seed", range(10))
def test_interior_points_match_blended_surface(seed):
    c = random_quad_curve(np.random.default_rng(100 + seed), 0.3)
    assert np.allclose(coons_patch(c).control[:, :, :2], coons_blend_oracle(c), atol=1e-12)


def test_patch_needs_four_segments():
    with pytest.raises(ValueError):
        coons_patch(polygon([(0, 0), (1, 0), (0, 1)]))


# --- Jacobian and the T table ----------------------------------------------------

def test_unit_square_jacobian_and_table():
    p = coons_patch(unit_square())
    assert np.allclose(grid_jacobian(p, 11), 1.0, atol=1e-13)
    T = tpq_table(p)
    expected = np.outer([math.comb(5, k) for k in range(6)], [math.comb(5, k) for k in range(6)])
    assert np.allclose(T, expected, atol=1e-12)
    assert np.all(T > 0) and is_nondegenerate(p)
    for u, v in np.random.default_rng(0).uniform(0, 1, (20, 2)):
        assert reconstruct_jacobian(T, u, v) == pytest.approx(1.0, abs=1e-12)


def test_corner_jacobian_is_nine_tangent_cross():
    for p in random_nets(20, 1):
        P = p.control[:, :, :2]
        a, b = P[1, 0] - P[0, 0], P[0, 1] - P[0, 0]
        assert jacobian(p, 0.0, 0.0) == pytest.approx(9 * (a[0] * b[1] - a[1] * b[0]), abs=1e-12)


def test_jacobian_against_finite_differences():
    rng = np.random.default_rng(2)
    for p in random_nets(10, 3):
        for u, v in rng.uniform(0, 1, (10, 2)):
            assert abs(jacobian(p, u, v) - jacobian_fd(p.control, u, v)) <= 1e-6 * scale2(p)


def test_table_reconstructs_jacobian():
    rng = np.random.default_rng(4)
    for p in random_nets(100, 5):
        T = tpq_table(p)
        for u, v in rng.uniform(0, 1, (3, 2)):
            J = jacobian(p, u, v)
            assert abs(reconstruct_jacobian(T, u, v) - J) <= 1e-9 * max(abs(J), scale2(p))


def test_wrinkled_fixture_has_mixed_table():
    p = patch_of(overlap_fixture())
    T = tpq_table(p)
    assert T.min() < 0 < T.max()
    assert table_sign(T) == 0 and not is_nondegenerate(p)
    assert grid_jacobian(p).min() < 0


def test_zero_entries_are_neutral():
    T = np.ones((6, 6))
    T[0, 0] = 0.0
    assert table_sign(T) == 1
    assert table_sign(-T) == -1
    assert table_sign(np.zeros((6, 6))) == 0


def test_nondegenerate_implies_constant_grid_sign():
    rng = np.random.default_rng(6)
    checked = 0
    for _ in range(200):
        p = coons_patch(random_quad_curve(rng, 0.2))
        if not is_nondegenerate(p):
            continue
        checked += 1
        sign = table_sign(tpq_table(p))
        assert np.all(sign * grid_jacobian(p) >= -1e-12 * scale2(p))
    assert checked > 50


# --- the boundary scan -----------------------------------------------------------

def test_canonical_edge_index_maps():
    c = random_quad_curve(np.random.default_rng(7), 0.2)
    p = coons_patch(c)
    for e, seg in enumerate(c.segments):
        P = canonical_edge(p, e)
        assert [tuple(P[i, 0, :2]) for i in range(4)] == [tuple(q) for q in seg]
        # the reindexing preserves the orientation of the parameter domain
        for u in (0.25, 0.6):
            v_pt = {0: (u, 0), 1: (1, u), 2: (1 - u, 1), 3: (0, 1 - u)}[e]
            assert jacobian(Patch(P), u, 0.0) == pytest.approx(jacobian(p, *v_pt), abs=1e-12)


def test_boundary_f_is_a_third_of_edge_jacobian():
    rng = np.random.default_rng(8)
    for p in random_nets(100, 9):
        u = float(rng.uniform())
        assert 3 * boundary_f(p.control, u) == pytest.approx(jacobian(p, u, 0.0),
                                                            abs=1e-9 * scale2(p))


def test_fprime_table_matches_finite_differences():
    rng = np.random.default_rng(10)
    h = 1e-5
    for p in random_nets(100, 11):
        u = float(rng.uniform(0.01, 0.99))
        c = boundary_fprime_coeffs(p.control)
        fd = (boundary_f(p.control, u + h) - boundary_f(p.control, u - h)) / (2 * h)
        big = max(abs(x) for x in c)
        assert abs(np.polynomial.polynomial.polyval(u, c) - fd) <= 1e-7 * big


def test_unit_square_edges_have_no_degeneracy():
    p = coons_patch(unit_square())
    assert all(boundary_degeneracy(p, e) is None for e in range(4))


def test_overlap_fixture_degeneracy_at_scan_minimum():
    p = patch_of(overlap_fixture())
    edge, u_star, J_star = worst_boundary_point(p)
    Pc = Patch(canonical_edge(p, edge))
    us = np.linspace(0, 1, 10_001)
    Js = np.array([jacobian(Pc, float(u), 0.0) for u in us])
    k = int(np.argmin(Js))
    fine = np.linspace(us[max(k - 1, 0)], us[min(k + 1, len(us) - 1)], 10_001)
    Jf = np.array([jacobian(Pc, float(u), 0.0) for u in fine])
    assert abs(u_star - fine[int(np.argmin(Jf))]) <= 1e-6
    assert J_star == pytest.approx(Jf.min(), rel=1e-9)
    assert J_star < 0


def test_empty_scan_means_nonnegative_edge():
    # Theorem-1 contract on random reflex-free patches
    rng = np.random.default_rng(12)
    us = np.linspace(0, 1, 10_000)
    checked = 0
    for _ in range(100):
        c = random_quad_curve(rng, 0.3)
        if reflex_nodes(c) or signed_area(c) <= 0:
            continue
        p = coons_patch(c)
        for e in range(4):
            if boundary_degeneracy(p, e) is not None:
                continue
            P = canonical_edge(p, e)[:, :, :2]
            su = np.einsum("ai,i...->a...", dbernstein(us), P[:, 0])
            d = 3.0 * (P[:, 1] - P[:, 0])
            sv = bernstein(us) @ d
            J = su[:, 0] * sv[:, 1] - su[:, 1] * sv[:, 0]
            assert J.min() >= -1e-9 * scale2(p)
            checked += 1
    assert checked > 100


# --- reflex nodes and padding ----------------------------------------------------

def tangent_turns(curve):
    """Turn at each node from the first nonzero control differences."""
    out = []
    n = len(curve)
    for k in range(n):
        a, b = curve.segments[k - 1], curve.segments[k]
        tin = next(np.subtract(a.p3, q) for q in (a.p2, a.p1, a.p0) if tuple(q) != tuple(a.p3))
        tout = next(np.subtract(q, b.p0) for q in (b.p1, b.p2, b.p3) if tuple(q) != tuple(b.p0))
        out.append(math.atan2(tin[0] * tout[1] - tin[1] * tout[0], float(np.dot(tin, tout))))
    return out


def test_convex_quad_passes_through():
    sq = unit_square()
    assert split_reflex_nodes(sq) == [sq]


def test_dart_splits_into_reflex_free_pieces():
    assert min(tangent_turns(DART)) < 0
    pieces = split_reflex_nodes(DART)
    assert len(pieces) == 2
    for p in pieces:
        assert min(tangent_turns(p)) > -1e-12
    assert sum(signed_area(p) for p in pieces) == pytest.approx(signed_area(DART), rel=1e-12)


def test_cusp_tangent_uses_first_nonzero_difference():
    segs = list(DART.segments)
    a = segs[2]
    # into the reflex node with a vanishing end derivative
    segs[2] = S(a.p0, tuple((np.add(a.p0, a.p3)) / 2), a.p3, a.p3)
    dart = ClosedCurve(segs)
    t_in, t_out = node_tangents(dart, 3)
    d = np.subtract(dart.segments[2].p3, dart.segments[2].p1)
    assert abs(t_in[0] * d[1] - t_in[1] * d[0]) < 1e-15 and np.dot(t_in, d) > 0
    pieces = split_reflex_nodes(dart)
    assert len(pieces) == 2
    assert all(min(tangent_turns(p)) > -1e-12 for p in pieces)


def test_pad_four_unchanged():
    sq = unit_square()
    assert pad_to_four(sq) is sq


def test_pad_three_segments():
    tri = polygon([(0, 0), (1, 0), (0, 1)])
    out = pad_to_four(tri)
    assert len(out) == 4
    assert sum(s.is_null for s in out.segments) == 1
    assert [s for s in out.segments if not s.is_null] == list(tri.segments)


def test_pad_two_segments_at_distinct_nodes():
    lens = ClosedCurve([S((0, 0), (0.3, -0.5), (0.7, -0.5), (1, 0)),
                        S((1, 0), (0.7, 0.5), (0.3, 0.5), (0, 0))])
    out = pad_to_four(lens)
    nulls = [s.p0 for s in out.segments if s.is_null]
    assert len(out) == 4 and len(nulls) == 2 and nulls[0] != nulls[1]
    assert [s for s in out.segments if not s.is_null] == list(lens.segments)


# --- repair ---------------------------------------------------------------------

def leaf_is_valid(p):
    if is_nondegenerate(p):
        return True
    # probe-grid acceptance: confirm on a much denser grid
    return probe_accepts(p) and grid_jacobian(p, 201).min() > 0


def membership_agrees(curve, result, n=2000, seed=0):
    box = curve.bbox()
    pts = np.random.default_rng(seed).uniform(box.min, box.max, (n, 2))
    polys = [boundary_polygon(p) for p in result.kept]
    pts = safe_points(curve, pts, 1e-4 * box.diagonal)
    ref = winding_oracle(curve, pts, 512) != 0
    got = sum(polygon_winding(poly, pts) for poly in polys)
    return np.mean(ref == (got != 0)), got.max(initial=0)


def test_square_repair_is_single_patch():
    r = make_nondegenerate(unit_square())
    assert len(r.kept) == 1 and r.discarded == [] and r.history == []


def test_overlap_fixture_is_split():
    r = make_nondegenerate(overlap_fixture())
    assert len(r.kept) >= 2
    assert all(leaf_is_valid(p) for p in r.kept)
    assert r.history[0].startswith("depth 0: boundary cut")
    agree, cover = membership_agrees(overlap_fixture(), r)
    assert agree > 0.995 and cover <= 1


def test_internal_only_takes_side_path():
    p = patch_of(INTERNAL_ONLY)
    assert not is_nondegenerate(p) and worst_boundary_point(p) is None
    r = make_nondegenerate(INTERNAL_ONLY)
    assert r.history[0] == "depth 0: side-midpoint cut"
    assert not any("boundary cut" in h for h in r.history)
    assert all(leaf_is_valid(q) for q in r.kept)


@pytest.mark.parametrize("strategy", ["quartic", "midpoint"])
@pytest.mark.parametrize("make", [overlap_fixture, wrinkle_s, lambda: wrinkle(0.2, 0.6, True),
                                  lambda: circle(3)])
def test_repair_contract(make, strategy):
    c = make()
    r = make_nondegenerate(c, strategy)
    assert r.kept
    assert all(leaf_is_valid(p) for p in r.kept)
    assert all(p.orientation == -1 for p in r.discarded)
    agree, cover = membership_agrees(c, r)
    assert agree > 0.995 and cover <= 1


def test_exact_membership_away_from_cuts():
    c = overlap_fixture()
    r = make_nondegenerate(c)
    box = c.bbox()
    pts = np.random.default_rng(3).uniform(box.min, box.max, (2000, 2))
    cuts = [boundary_polygon(p) for p in r.kept]
    pts = safe_points(c, pts, 1e-4 * box.diagonal)
    near = np.zeros(len(pts), dtype=bool)
    for poly in cuts:
        d = np.min(np.hypot(pts[:, None, 0] - poly[None, :, 0], pts[:, None, 1] - poly[None, :, 1]),
                   axis=1)
        near |= d < 1e-2
    pts = pts[~near]
    ref = winding_oracle(c, pts, 512) != 0
    got = sum(polygon_winding(poly, pts) for poly in cuts) != 0
    assert np.array_equal(ref, got)


def test_depth_cap():
    with pytest.raises(SplitDepthExceeded):
        make_nondegenerate(overlap_fixture(), max_depth=0)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        make_nondegenerate(unit_square(), "bisect")


@pytest.mark.parametrize("make", [overlap_fixture, lambda: INTERNAL_ONLY,
                                  wrinkle_s])
def test_strict_mode_keeps_only_sign_test_passes(make):
    r = make_nondegenerate(make(), probe=False)
    assert r.kept and all(is_nondegenerate(p) for p in r.kept)
    assert not any("probe" in h for h in r.history)
