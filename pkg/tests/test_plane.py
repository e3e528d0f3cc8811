import itertools

import pytest

from pgcycles.gf import field_of_order
from pgcycles.geometry import GeometryContext, count_lines, incident, line_through
from pgcycles.plane import (
    OutOfRange,
    anchored_path,
    plane_cycle,
    plane_frame,
    remark1_cycle,
    sigma_cycle_plane,
    singer_hamiltonian,
)
from pgcycles.verifier import verify_cycle, verify_path, verify_remark1, verify_sigma_properties


def plane(q):
    return GeometryContext(2, field_of_order(q))


def test_frame_defaults():
    fr = plane_frame(plane(3))
    assert fr.origin == (0, 0, 1)
    assert fr.line_at_infinity.basis == ((1, 0, 0), (0, 1, 0))
    assert len(fr.spokes) == 4 and len(set(fr.infinity_marks)) == 4
    for L, M in zip(fr.spokes, fr.infinity_marks):
        assert incident(fr.ctx2, M, L) and incident(fr.ctx2, fr.origin, L)
    with pytest.raises(ValueError):
        plane_frame(plane(3), origin=(1, 0, 0))


def test_remark1_triangle_q3_flavor_a():
    fr = plane_frame(plane(3))
    c, flavor = remark1_cycle(fr, 3)
    assert flavor == "A" and fr.origin in c.vertices
    assert sum(L in c.edge_lines for L in fr.spokes) <= 2
    assert verify_remark1(fr, c, "A").valid


def test_remark1_flavor_b_q2_triangle():
    fr = plane_frame(plane(2))
    affine_other = [P for P in fr.affine_points if P != fr.origin]
    assert len(affine_other) == 3
    # brute force: the only triangle avoiding O, and none of its lines passes through O
    tri = [t for t in itertools.combinations(affine_other, 3)]
    assert len(tri) == 1
    lines = [line_through(fr.ctx2, a, b) for a, b in itertools.combinations(tri[0], 2)]
    assert not any(L in fr.spokes for L in lines)
    c, flavor = remark1_cycle(fr, 3, flavor="B")
    assert flavor == "B" and set(c.vertices) == set(tri[0])
    assert verify_remark1(fr, c, "B").valid


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_remark1_all_lengths(q):
    fr = plane_frame(plane(q))
    for k in range(3, q * q + 1):
        c, flavor = remark1_cycle(fr, k)
        assert len(c) == k
        assert verify_remark1(fr, c, flavor).valid, (k, flavor)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_flavor_b_cycles_and_paths(q):
    fr = plane_frame(plane(q))
    for t in range(1, q):
        k = t * (q + 1)
        c, flavor = remark1_cycle(fr, k, flavor="B")
        assert flavor == "B"
        assert verify_remark1(fr, c, "B").valid
        path = anchored_path(fr, k + 2, flavor="B")
        _check_anchored(fr, path, k + 2)


def test_remark1_range():
    fr = plane_frame(plane(3))
    with pytest.raises(OutOfRange):
        remark1_cycle(fr, 10)


def _check_anchored(fr, path, k):
    ctx = fr.ctx2
    assert len(path) == k
    assert verify_path(ctx, path).valid
    on_inf = [i for i, P in enumerate(path.vertices) if incident(ctx, P, fr.line_at_infinity)]
    assert on_inf == [0, k - 1]
    assert fr.line_at_infinity not in path.edge_lines


def test_anchored_path_q2_k3_shape():
    fr = plane_frame(plane(2))
    path = anchored_path(fr, 3)
    _check_anchored(fr, path, 3)
    assert path.vertices[1] == (0, 0, 1)
    assert len(set(path.edge_lines)) == 2


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_anchored_paths(q):
    fr = plane_frame(plane(q))
    for k in range(3, q * q + 3):
        _check_anchored(fr, anchored_path(fr, k), k)
    with pytest.raises(OutOfRange):
        anchored_path(fr, 2)
    with pytest.raises(OutOfRange):
        anchored_path(fr, q * q + 3)


@pytest.mark.parametrize("q", [2, 3])
def test_sigma_cycle_plane(q):
    fr = plane_frame(plane(q))
    for k in range(3, q * q + 3):
        c = sigma_cycle_plane(fr, k)
        report = verify_sigma_properties(fr.ctx2, c, fr.line_at_infinity)
        assert report.valid and (report.anchor_vertex_count, report.anchor_edge_count) == (2, 1)
    with pytest.raises(OutOfRange):
        sigma_cycle_plane(fr, q * q + 3)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_singer(q):
    ctx = plane(q)
    c = singer_hamiltonian(ctx)
    N = q * q + q + 1
    assert len(c) == N == len(set(c.vertices)) == len(ctx.points)
    assert len(set(c.edge_lines)) == N == count_lines(2, q)
    assert verify_cycle(ctx, c).valid


def test_singer_q7_and_q8():
    for q in (7, 8):
        ctx = plane(q)
        assert verify_cycle(ctx, singer_hamiltonian(ctx)).valid


@pytest.mark.parametrize("q", [2, 3, 4])
def test_plane_cycle_all_lengths(q):
    ctx = plane(q)
    for k in range(3, q * q + q + 2):
        c = plane_cycle(ctx, k)
        assert len(c) == k and verify_cycle(ctx, c).valid
    with pytest.raises(OutOfRange):
        plane_cycle(ctx, 2)


def test_plane_cycle_search_band_q3():
    ctx = plane(3)
    c = plane_cycle(ctx, 12)
    assert len(c) == 12 and verify_cycle(ctx, c).valid
    assert plane_cycle(ctx, 12, seed=0) == c


def test_seed_changes_nothing_about_validity():
    ctx = plane(4)
    for seed in range(3):
        assert verify_cycle(ctx, plane_cycle(ctx, 19, seed)).valid
