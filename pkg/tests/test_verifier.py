import itertools
import random
from math import comb

import pytest

from pgcycles.embedding import CycleEmbedding, PathEmbedding, cycle_from_vertices, path_from_vertices
from pgcycles.gf import field_of_order
from pgcycles.geometry import GeometryContext, incident, line_through, rank
from pgcycles.plane import anchored_path, plane_frame, remark1_cycle, sigma_cycle_plane
from pgcycles.space import embed_cycle, sigma_anchored_cycle
from pgcycles.verifier import (
    BudgetExceeded,
    brute_force_cycle_count,
    verify_cycle,
    verify_path,
    verify_remark1,
    verify_sigma_properties,
)


def pg(n, q):
    return GeometryContext(n, field_of_order(q))


def count_by_permutations(ctx, k):
    """Independent count: every ordered k-tuple, then divide out the 2k symmetries."""
    total = 0
    for seq in itertools.permutations(ctx.points, k):
        lines = set()
        for a, b in zip(seq, seq[1:] + seq[:1]):
            lines.add(tuple(sorted(_points_of_join(ctx, a, b))))
        if len(lines) == k:
            total += 1
    assert total % (2 * k) == 0
    return total // (2 * k)


def _points_of_join(ctx, a, b):
    return [P for P in ctx.points if rank(ctx.field, [a, b, P]) == 2]


def test_fano_triangles():
    ctx = pg(2, 2)
    assert comb(7, 3) - 7 == 28
    assert brute_force_cycle_count(ctx, 3) == 28
    assert brute_force_cycle_count(ctx, 2) == 0


@pytest.mark.parametrize("k", [3, 4, 5])
def test_count_matches_permutation_oracle(k):
    ctx = pg(2, 2)
    assert brute_force_cycle_count(ctx, k) == count_by_permutations(ctx, k)


def test_count_pg23_triangles():
    ctx = pg(2, 3)
    assert brute_force_cycle_count(ctx, 3, max_points=13) == comb(13, 3) - 13 * comb(4, 3) == 234


def test_count_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_cycle_count(pg(3, 3), 5)
    with pytest.raises(BudgetExceeded):
        brute_force_cycle_count(pg(2, 2), 9)


def test_verify_cycle_examples():
    ctx = pg(2, 2)
    assert verify_cycle(ctx, cycle_from_vertices(ctx, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])).valid
    L = line_through(ctx, (1, 0, 0), (0, 1, 0))
    collinear = CycleEmbedding(((1, 0, 0), (0, 1, 0), (1, 1, 0)), (L, L, L))
    assert not verify_cycle(ctx, collinear).valid
    rep = CycleEmbedding(((1, 0, 0), (0, 1, 0), (1, 0, 0)), (L, L, L))
    report = verify_cycle(ctx, rep)
    assert not report.valid and "vertex-injective" in {c for c, _ in report.failures}


def test_verify_path_examples():
    ctx = pg(2, 3)
    assert verify_path(ctx, path_from_vertices(ctx, [(1, 0, 0), (0, 1, 0)])).valid
    L = line_through(ctx, (1, 0, 0), (0, 1, 0))
    reuse = PathEmbedding(((1, 0, 0), (0, 1, 0), (1, 1, 0)), (L, L))
    assert not verify_path(ctx, reuse).valid
    assert verify_path(ctx, anchored_path(plane_frame(ctx), 5)).valid


def test_verify_sigma_examples():
    ctx = pg(2, 2)
    fr = plane_frame(ctx)
    c = sigma_cycle_plane(fr, 3)
    assert verify_sigma_properties(ctx, c, fr.line_at_infinity).valid
    tri = cycle_from_vertices(ctx, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    off = line_through(ctx, (1, 1, 0), (0, 1, 1))  # misses all three vertices
    report = verify_sigma_properties(ctx, tri, off)
    assert not report.valid and (report.anchor_vertex_count, report.anchor_edge_count) == (0, 0)
    ctx3 = pg(3, 2)
    H = ctx3.hyperplane()
    report = verify_sigma_properties(ctx3, sigma_anchored_cycle(ctx3, H, 8), H)
    assert report.valid and (report.anchor_vertex_count, report.anchor_edge_count) == (2, 1)


def test_verify_remark1_examples():
    ctx = pg(2, 3)
    fr = plane_frame(ctx)
    c, flavor = remark1_cycle(fr, 4)
    assert verify_remark1(fr, c, flavor).valid
    # a triangle with a vertex on the line at infinity fails both flavors
    at_inf = fr.infinity_marks[0]
    a, b = [P for P in fr.affine_points if P != fr.origin and not incident(ctx, P, fr.spokes[0])][:2]
    bad = cycle_from_vertices(ctx, [at_inf, a, b])
    assert verify_cycle(ctx, bad).valid
    assert not verify_remark1(fr, bad, "A").valid
    assert not verify_remark1(fr, bad, "B").valid
    assert not verify_remark1(fr, c, "B").valid  # k = 4 = q + 1 but O is a vertex
    c5, _ = remark1_cycle(fr, 5)
    assert not verify_remark1(fr, c5, "B").valid


def _mutations(ctx, c, rng):
    k = len(c)
    lines = sorted(set(c.edge_lines) | {line_through(ctx, *rng.sample(ctx.points, 2)) for _ in range(20)}, key=lambda L: L.basis)
    kind = rng.choice(["vertex", "line", "drop"])
    vs, ls = list(c.vertices), list(c.edge_lines)
    j = rng.randrange(k)
    if kind == "vertex":
        vs[j] = rng.choice([P for P in ctx.points if P != vs[j]])
    elif kind == "line":
        ls[j] = rng.choice([L for L in lines if L != ls[j]])
    else:
        del ls[j]
    return CycleEmbedding(tuple(vs), tuple(ls))


@pytest.mark.parametrize("n,q", [(2, 3), (3, 2), (3, 3)])
def test_single_mutations_are_caught(n, q):
    ctx = pg(n, q)
    rng = random.Random(n * 10 + q)
    for trial in range(120):
        k = rng.randrange(3, ctx.num_points + 1)
        c = embed_cycle(ctx, k)
        assert verify_cycle(ctx, c).valid
        assert not verify_cycle(ctx, _mutations(ctx, c, rng)).valid


def test_malformed_input_is_reported_not_raised():
    ctx = pg(2, 2)
    L = line_through(ctx, (1, 0, 0), (0, 1, 0))
    weird = CycleEmbedding(((1, 0, 0), (0, 9, 0), (0, 0)), (L,))
    report = verify_cycle(ctx, weird)
    assert not report.valid
    assert not verify_cycle(ctx, CycleEmbedding((), ())).valid
