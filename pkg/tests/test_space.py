import pytest

from pgcycles.embedding import cycle_from_vertices
from pgcycles.gf import field_of_order
from pgcycles.geometry import (
    GeometryContext,
    Subspace,
    contains,
    count_points,
    hyperplane_pencil,
    incident,
    span,
)
from pgcycles.plane import OutOfRange
from pgcycles.space import (
    CaseViolation,
    GlueState,
    NotInCycle,
    embed_cycle,
    glue_pencil_cycles,
    open_cycle,
    sigma_anchored_cycle,
)
from pgcycles.verifier import sigma_counts, verify_cycle, verify_path, verify_sigma_properties


def pg(n, q):
    return GeometryContext(n, field_of_order(q))


def glue_state(ctx, k):
    anchor = ctx.hyperplane()
    core = Subspace(anchor.basis[: ctx.n - 1])
    alpha, beta = divmod(k, ctx.q ** (ctx.n - 1))
    return GlueState(ctx, hyperplane_pencil(ctx, core), anchor, k, alpha, beta)


def test_open_cycle_modes():
    ctx = pg(2, 3)
    tri = cycle_from_vertices(ctx, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    p = open_cycle(tri, "drop-edge", tri.edge_lines[0])
    assert len(p) == 3 and len(p.edge_lines) == 2 and verify_path(ctx, p).valid
    p = open_cycle(tri, "drop-vertex", (1, 0, 0))
    assert len(p) == 2 and len(p.edge_lines) == 1
    five = cycle_from_vertices(ctx, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1), (1, 2, 0)])
    P, Q = five.vertices[1], five.vertices[2]
    p = open_cycle(five, "drop-three-edges", (P, Q, five.edge_lines[1]))
    assert len(p) == 3 and len(p.edge_lines) == 2
    assert p.vertices[0] == five.vertices[0] and p.vertices[-1] == five.vertices[3]
    with pytest.raises(NotInCycle):
        open_cycle(tri, "drop-vertex", (1, 1, 1))
    with pytest.raises(NotInCycle):
        open_cycle(five, "drop-three-edges", (five.vertices[0], Q, five.edge_lines[1]))


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_sigma_anchored_all_lengths(n, q):
    ctx = pg(n, q)
    anchor = ctx.hyperplane()
    for k in range(3, q**n + 3):
        c = sigma_anchored_cycle(ctx, anchor, k)
        assert len(c) == k
        report = verify_sigma_properties(ctx, c, anchor)
        assert report.valid, (k, str(report))


def test_sigma_anchored_other_anchor():
    ctx = pg(3, 3)
    H = span(ctx, [(1, 1, 0, 0), (0, 0, 1, 2), (0, 1, 1, 1)])
    for k in (3, 11, 12, 21, 29):
        c = sigma_anchored_cycle(ctx, H, k)
        assert verify_sigma_properties(ctx, c, H).valid


def test_sigma_anchored_examples():
    ctx = pg(3, 2)
    H = ctx.hyperplane()
    tri = sigma_anchored_cycle(ctx, H, 3)
    assert sigma_counts(ctx, tri, H) == (2, 1)
    assert verify_sigma_properties(ctx, sigma_anchored_cycle(ctx, H, 10), H).valid
    assert verify_sigma_properties(ctx, sigma_anchored_cycle(ctx, H, 8), H).valid
    with pytest.raises(OutOfRange):
        sigma_anchored_cycle(ctx, H, 11)


@pytest.mark.parametrize("n,q,k,case", [(3, 3, 21, 2), (3, 2, 10, 1), (3, 3, 19, 1), (3, 3, 27, 1), (4, 2, 18, 1), (4, 2, 13, 2)])
def test_glue_connectors_fresh(n, q, k, case):
    ctx = pg(n, q)
    state = glue_state(ctx, k)
    c = glue_pencil_cycles(state, case)
    assert len(c) == k and verify_cycle(ctx, c).valid
    assert sigma_counts(ctx, c, state.reserved) == (2, 1)
    assert state.reserved not in state.members
    assert len(state.connectors) == len(state.members) - 1
    for L in state.connectors:
        assert not any(contains(ctx, M, L) for M in state.pencil.members)
    assert len(set(c.edge_lines)) == k
    assert state.shared_edge in c.edge_lines
    assert incident(ctx, state.P, state.shared_edge) and incident(ctx, state.Q, state.shared_edge)


def test_glue_case_dispatch():
    ctx = pg(3, 3)
    for k in range(12, 30):
        state = glue_state(ctx, k)
        assert k == state.alpha * 9 + state.beta and 0 <= state.beta < 9 and 1 <= state.alpha <= 3
        case = 1 if state.beta <= 2 else 2
        if case == 1:
            assert state.alpha > 1
        else:
            assert state.alpha + 1 <= ctx.q
        glue_pencil_cycles(state, case)
    with pytest.raises(CaseViolation):
        glue_pencil_cycles(glue_state(ctx, 21), 1)
    with pytest.raises(CaseViolation):
        glue_pencil_cycles(glue_state(ctx, 20), 2)


@pytest.mark.parametrize("n,q", [(3, 2), (3, 3), (4, 2)])
def test_pancyclic(n, q):
    ctx = pg(n, q)
    for k in range(3, count_points(n, q) + 1):
        c = embed_cycle(ctx, k)
        assert len(c) == k == len(set(c.edge_lines))
        assert verify_cycle(ctx, c).valid, k


def test_hamiltonian_pg32():
    ctx = pg(3, 2)
    c = embed_cycle(ctx, 15)
    assert set(c.vertices) == set(ctx.points)
    assert verify_cycle(ctx, c).valid
    with pytest.raises(OutOfRange):
        embed_cycle(ctx, 16)


def test_splice_removes_shared_line():
    ctx = pg(3, 3)
    H = ctx.hyperplane()
    for k in range(30, 41):
        c = embed_cycle(ctx, k)
        inside = [L for L in c.edge_lines if contains(ctx, H, L)]
        # the inner cycle contributes k - q^n - 1 lines inside H; the outer one none
        assert len(inside) == k - 27 - 1
        assert verify_cycle(ctx, c).valid


def test_stretch_geometries():
    for n, q in [(3, 4), (4, 3)]:
        ctx = pg(n, q)
        for k in (3, q**n + 2, q**n + 3, count_points(n, q)):
            assert verify_cycle(ctx, embed_cycle(ctx, k)).valid
