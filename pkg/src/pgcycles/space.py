"""Cycles of every length in PG(n, q), built by recursion over hyperplane pencils.

``sigma_anchored_cycle`` produces cycles meeting a chosen hyperplane in
exactly two vertices and one edge.  Long ones are glued from anchored
cycles living in different hyperplanes of a pencil.  ``embed_cycle``
covers the remaining lengths by splicing such a cycle with a cycle that
lies inside the hyperplane.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .collineations import apply, map_flag_to_flag, map_subspace, move_endpoint
from .embedding import CycleEmbedding, PathEmbedding
from .geometry import (
    GeometryContext,
    PencilDecomposition,
    Point,
    Subspace,
    contains,
    count_points,
    frame,
    hyperplane_pencil,
    line_through,
    meet_point,
)
from .plane import OutOfRange, plane_cycle, plane_frame, sigma_cycle_plane


class CaseViolation(ValueError):
    pass


class NotInCycle(ValueError):
    pass


# -- opening cycles into paths --

def _edge_index(c: CycleEmbedding, line: Subspace) -> int:
    try:
        return c.edge_lines.index(line)
    except ValueError:
        raise NotInCycle("line is not an edge of the cycle") from None


def open_cycle(c: CycleEmbedding, mode: str, target) -> PathEmbedding:
    """Turn a cycle into a path.

    ``"drop-edge"`` (target: a line) keeps every vertex and starts right
    after the removed edge.  ``"drop-vertex"`` (target: a point) starts at
    the vertex's successor.  ``"drop-three-edges"`` (target: ``(P, Q, line)``
    with P, Q joined by ``line``) removes P and Q together with their
    edges; the result runs from P's other neighbour to Q's other neighbour.
    """
    k = len(c.vertices)
    vs, ls = c.vertices, c.edge_lines
    if mode == "drop-edge":
        j = _edge_index(c, target)
        order = [(j + 1 + s) % k for s in range(k)]
        return PathEmbedding(tuple(vs[a] for a in order), tuple(ls[a] for a in order[:-1]))
    if mode == "drop-vertex":
        if target not in vs:
            raise NotInCycle("vertex is not on the cycle")
        j = vs.index(target)
        order = [(j + 1 + s) % k for s in range(k - 1)]
        return PathEmbedding(tuple(vs[a] for a in order), tuple(ls[a] for a in order[:-1]))
    if mode == "drop-three-edges":
        P, Q, line = target
        j = _edge_index(c, line)
        if {vs[j], vs[(j + 1) % k]} != {P, Q}:
            raise NotInCycle("P and Q are not joined by that edge")
        # Start after the pair, walk round, finish before it.
        order = [(j + 2 + s) % k for s in range(k - 2)]
        path = PathEmbedding(tuple(vs[a] for a in order), tuple(ls[a] for a in order[:-1]))
        return path if vs[j] == Q else path.reversed()
    raise ValueError(f"unknown mode {mode!r}")


def _orient(path: PathEmbedding, first: Point) -> PathEmbedding:
    return path if path.vertices[0] == first else path.reversed()


# -- anchored cycles --

@dataclass
class GlueState:
    """Bookkeeping for one gluing step; filled in by :func:`glue_pencil_cycles`."""

    ctx: GeometryContext
    pencil: PencilDecomposition
    reserved: Subspace
    k: int
    alpha: int
    beta: int
    seed: int = 0
    shared_edge: Subspace | None = None
    P: Point | None = None
    Q: Point | None = None
    members: list[Subspace] = field(default_factory=list)
    paths: list[PathEmbedding] = field(default_factory=list)
    connectors: list[Subspace] = field(default_factory=list)

    @property
    def d(self) -> int:
        return self.ctx.n - 1

    @property
    def free_members(self) -> list[Subspace]:
        return [M for M in self.pencil.members if M != self.reserved]


def _anchor_edge(ctx: GeometryContext, c: CycleEmbedding, anchor: Subspace) -> int:
    hits = [j for j, L in enumerate(c.edge_lines) if contains(ctx, anchor, L)]
    if len(hits) != 1:
        raise AssertionError(f"expected one anchored edge, found {len(hits)}")
    return hits[0]


def _member_cycle(
    ctx: GeometryContext,
    member: Subspace,
    core: Subspace,
    length: int,
    seed: int,
    flag: tuple[Subspace, Point, Point] | None = None,
) -> CycleEmbedding:
    """A cycle inside ``member`` anchored at ``core``, optionally aligned to share ``flag``."""
    fr = frame(ctx, member)
    small = fr.small
    core_local = fr.restrict_subspace(core)
    c = sigma_anchored_cycle(small, core_local, length, seed)
    if flag is not None:
        j = _anchor_edge(small, c, core_local)
        src = (c.edge_lines[j], c.vertices[j], c.vertices[(j + 1) % len(c)])
        line, P, Q = flag
        dst = (fr.restrict_subspace(line), fr.restrict_point(P), fr.restrict_point(Q))
        c = apply(map_flag_to_flag(small, core_local, src, dst), c)
    return CycleEmbedding(
        tuple(fr.lift_point(v) for v in c.vertices),
        tuple(fr.lift_subspace(L) for L in c.edge_lines),
    )


def glue_pencil_cycles(state: GlueState, case: int) -> CycleEmbedding:
    """Glue anchored cycles from several pencil members into one long anchored cycle.

    Case 1 (beta in 0..2) uses ``alpha`` members, the last one carrying a
    cycle of length q^d + beta; case 2 (beta >= 3) uses ``alpha + 1``
    members, the last one carrying a cycle of length beta.  The reserved
    member is never used, so the result meets it only in the shared edge.
    """
    ctx, q, d = state.ctx, state.ctx.q, state.d
    alpha, beta = state.alpha, state.beta
    big = q**d + 2
    if case == 1:
        if beta not in (0, 1, 2) or alpha < 2:
            raise CaseViolation(f"case 1 needs beta <= 2 and alpha >= 2, got {alpha}, {beta}")
        lengths = [big] * (alpha - 1) + [q**d + beta]
    elif case == 2:
        if beta < 3 or alpha > q - 1:
            raise CaseViolation(f"case 2 needs beta >= 3 and alpha <= q-1, got {alpha}, {beta}")
        lengths = [big] * alpha + [beta]
    else:
        raise CaseViolation(f"unknown case {case}")
    if len(lengths) > len(state.free_members):
        raise CaseViolation("not enough pencil members")

    core = state.pencil.core
    P, Q = core.basis[0], core.basis[1]
    ell = line_through(ctx, P, Q)
    state.shared_edge, state.P, state.Q = ell, P, Q
    state.members = state.free_members[: len(lengths)]
    cycles = [_member_cycle(ctx, M, core, n_i, state.seed, (ell, P, Q)) for M, n_i in zip(state.members, lengths)]

    last = len(cycles) - 1
    paths = []
    for i, c in enumerate(cycles):
        j = c.edge_lines.index(ell)
        if {c.vertices[j], c.vertices[(j + 1) % len(c)]} != {P, Q}:
            raise AssertionError("aligned member cycle does not use the shared edge between P and Q")
        if i == 0:
            paths.append(_orient(open_cycle(c, "drop-vertex", Q), P))
        elif i == last:
            paths.append(_orient(open_cycle(c, "drop-vertex", P), Q).reversed())
        else:
            paths.append(open_cycle(c, "drop-three-edges", (P, Q, ell)))

    total = sum(len(p) for p in paths)
    if case == 1:
        formula = (q**d + 1) + (alpha - 2) * q**d + (q**d + beta - 1)
    else:
        formula = (q**d + 1) + (alpha - 1) * q**d + (beta - 1)
    if not total == formula == state.k:
        raise AssertionError(f"vertex count {total} does not match {formula} (k={state.k})")

    connectors: list[Subspace] = []
    for i in range(1, len(paths)):
        M = state.members[i]
        forbidden = [X for L in connectors for X in meet_point(ctx, L, M)]
        paths[i] = move_endpoint(ctx, core, M, paths[i], paths[i].vertices[0], forbidden)
        L = line_through(ctx, paths[i - 1].vertices[-1], paths[i].vertices[0])
        if L in connectors or any(contains(ctx, N, L) for N in state.pencil.members):
            raise AssertionError("connector line is not fresh")
        connectors.append(L)
    state.paths, state.connectors = paths, connectors

    vertices: list[Point] = []
    lines: list[Subspace] = []
    for i, p in enumerate(paths):
        vertices.extend(p.vertices)
        lines.extend(p.edge_lines)
        lines.append(connectors[i] if i < last else ell)
    return CycleEmbedding(tuple(vertices), tuple(lines))


@lru_cache(maxsize=None)
def _canonical_anchored(ctx: GeometryContext, k: int, seed: int) -> CycleEmbedding:
    """Anchored cycle for the coordinate hyperplane ``x_n = 0``."""
    anchor = ctx.hyperplane()
    q, n = ctx.q, ctx.n
    if n == 2:
        return sigma_cycle_plane(plane_frame(ctx), k, seed)
    d = n - 1
    core = Subspace(anchor.basis[: n - 1])
    pencil = hyperplane_pencil(ctx, core)
    if anchor not in pencil.members:
        raise AssertionError("anchor is not a pencil member")
    free = [M for M in pencil.members if M != anchor]
    if k <= q**d + 2:
        # A cycle inside another member meets the anchor only within the core.
        return _member_cycle(ctx, free[0], core, k, seed)
    alpha, beta = divmod(k, q**d)
    state = GlueState(ctx, pencil, anchor, k, alpha, beta, seed)
    return glue_pencil_cycles(state, 1 if beta <= 2 else 2)


def sigma_anchored_cycle(ctx: GeometryContext, anchor: Subspace, k: int, seed: int = 0) -> CycleEmbedding:
    """A k-cycle with exactly two vertices on the hyperplane ``anchor`` and exactly one edge inside it."""
    q, n = ctx.q, ctx.n
    if anchor.projective_dim != n - 1:
        raise ValueError("anchor must be a hyperplane")
    if not 3 <= k <= q**n + 2:
        raise OutOfRange(f"anchored cycles in {ctx} need 3 <= k <= {q**n + 2}, got {k}")
    c = _canonical_anchored(ctx, k, seed)
    H0 = ctx.hyperplane()
    if anchor == H0:
        return c
    return apply(map_subspace(ctx, H0, anchor), c)


@lru_cache(maxsize=None)
def embed_cycle(ctx: GeometryContext, k: int, seed: int = 0) -> CycleEmbedding:
    """A k-cycle in PG(n, q) for any 3 <= k <= number of points."""
    q, n = ctx.q, ctx.n
    N = count_points(n, q)
    if not 3 <= k <= N:
        raise OutOfRange(f"cycles in {ctx} need 3 <= k <= {N}, got {k}")
    if n == 2:
        return plane_cycle(ctx, k, seed)
    H = ctx.hyperplane()
    if k <= q**n + 2:
        return sigma_anchored_cycle(ctx, H, k, seed)

    beta = k - q**n
    fr = frame(ctx, H)
    small = embed_cycle(fr.small, beta, seed)
    inner = CycleEmbedding(
        tuple(fr.lift_point(v) for v in small.vertices),
        tuple(fr.lift_subspace(L) for L in small.edge_lines),
    )
    ell, P, Q = inner.edge_lines[0], inner.vertices[0], inner.vertices[1]

    outer = sigma_anchored_cycle(ctx, H, q**n + 2, seed)
    j = _anchor_edge(ctx, outer, H)
    src = (outer.edge_lines[j], outer.vertices[j], outer.vertices[(j + 1) % len(outer)])
    outer = apply(map_flag_to_flag(ctx, H, src, (ell, P, Q)), outer)

    # outer runs Q ... P off the hyperplane; inner closes P ... Q inside it.
    a = open_cycle(outer, "drop-edge", ell)
    b = open_cycle(inner, "drop-edge", ell).reversed()
    if (a.vertices[0], a.vertices[-1], b.vertices[0], b.vertices[-1]) != (Q, P, P, Q):
        raise AssertionError("spliced paths do not share their endpoints")
    vertices = a.vertices + b.vertices[1:-1]
    lines = a.edge_lines + b.edge_lines
    if not len(vertices) == len(lines) == (q**n + 2) + beta - 2 == k:
        raise AssertionError("spliced cycle has the wrong length")
    return CycleEmbedding(vertices, lines)


__all__ = [
    "CaseViolation",
    "GlueState",
    "NotInCycle",
    "embed_cycle",
    "glue_pencil_cycles",
    "open_cycle",
    "sigma_anchored_cycle",
]
