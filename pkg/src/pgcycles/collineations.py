"""Projectivities of PG(n, q) and the two group actions the gluing construction needs.

A projectivity acts on row vectors from the right: ``P -> P @ M``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .embedding import CycleEmbedding, PathEmbedding
from .geometry import (
    GeometryContext,
    GeometryError,
    Point,
    Subspace,
    combine,
    contains,
    extend_basis,
    incident,
    mat_inv,
    mat_mul,
    normalize_vector,
    rref,
    unit_vectors,
)
from .gf import FieldSpec


class DimensionMismatch(GeometryError):
    pass


class FlagInvalid(GeometryError):
    pass


class NoValidMove(RuntimeError):
    pass


def _canonical(F: FieldSpec, matrix: Sequence[Sequence[int]]) -> tuple[Point, ...]:
    first = next(x for row in matrix for x in row if x)
    s = F.inv(first)
    return tuple(tuple(F.mul(s, x) for x in row) for row in matrix)


@dataclass(frozen=True)
class Projectivity:
    field: FieldSpec
    matrix: tuple[Point, ...]

    @classmethod
    def from_matrix(cls, F: FieldSpec, matrix: Sequence[Sequence[int]]) -> Projectivity:
        if len(rref(F, matrix)) != len(matrix):
            raise ValueError("projectivity matrix must be invertible")
        return cls(F, _canonical(F, matrix))

    @classmethod
    def identity(cls, F: FieldSpec, dim: int) -> Projectivity:
        return cls(F, tuple(unit_vectors(dim)))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def point(self, P: Sequence[int]) -> Point:
        return normalize_vector(self.field, combine(self.field, P, self.matrix))

    def vector(self, v: Sequence[int]) -> Point:
        return combine(self.field, v, self.matrix)

    def subspace(self, S: Subspace) -> Subspace:
        return Subspace(rref(self.field, (self.vector(r) for r in S.basis)))

    def serialize(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


def apply(tau: Projectivity, x):
    """Apply ``tau`` to a point, subspace, path or cycle."""
    if isinstance(x, Subspace):
        if len(x.basis[0]) != tau.dim:
            raise DimensionMismatch("subspace and projectivity dimensions differ")
        return tau.subspace(x)
    if isinstance(x, (PathEmbedding, CycleEmbedding)):
        if x.vertices and len(x.vertices[0]) != tau.dim:
            raise DimensionMismatch("embedding and projectivity dimensions differ")
        return type(x)(
            tuple(tau.point(v) for v in x.vertices),
            tuple(tau.subspace(L) for L in x.edge_lines),
        )
    if len(x) != tau.dim:
        raise DimensionMismatch("point and projectivity dimensions differ")
    return tau.point(x)


def compose(t1: Projectivity, t2: Projectivity) -> Projectivity:
    """The map ``x -> t1(t2(x))``."""
    if t1.dim != t2.dim:
        raise DimensionMismatch("cannot compose projectivities of different dimensions")
    return Projectivity(t1.field, _canonical(t1.field, mat_mul(t1.field, t2.matrix, t1.matrix)))


def inverse(t: Projectivity) -> Projectivity:
    return Projectivity(t.field, _canonical(t.field, mat_inv(t.field, t.matrix)))


def change_of_basis(F: FieldSpec, source: Sequence[Point], target: Sequence[Point]) -> Projectivity:
    """The projectivity sending the vector ``source[i]`` to ``target[i]`` for every i."""
    return Projectivity(F, _canonical(F, mat_mul(F, mat_inv(F, source), target)))


def adapted_basis(ctx: GeometryContext, chain: Sequence[Iterable[Point]]) -> list[Point]:
    """Extend vectors level by level: each level's candidates are appended while independent.

    Level ``i`` is completed to the rank of the span of levels ``0..i``;
    a final completion by unit vectors gives a basis of the whole space.
    """
    F = ctx.field
    rows: list[Point] = []
    for level in chain:
        level = list(level)
        target = len(rref(F, rows + level))
        rows = extend_basis(F, rows, level, target)
    return extend_basis(F, rows, unit_vectors(ctx.n + 1), ctx.n + 1)


def map_subspace(ctx: GeometryContext, src: Subspace, dst: Subspace) -> Projectivity:
    """Some projectivity carrying ``src`` onto ``dst`` (equal dimensions)."""
    if src.rank != dst.rank:
        raise DimensionMismatch("subspaces of different dimension")
    return change_of_basis(ctx.field, adapted_basis(ctx, [src.basis]), adapted_basis(ctx, [dst.basis]))


def _check_flag(ctx: GeometryContext, H: Subspace, flag) -> None:
    line, P, Q = flag
    if line.projective_dim != 1:
        raise FlagInvalid("flag line is not a line")
    if P == Q or not incident(ctx, P, line) or not incident(ctx, Q, line):
        raise FlagInvalid("flag points must be two distinct points of the line")
    if not contains(ctx, H, line):
        raise FlagInvalid("flag line is not inside the hyperplane")


def map_flag_to_flag(ctx: GeometryContext, H: Subspace, source, target) -> Projectivity:
    """A projectivity stabilizing the hyperplane ``H`` and sending one flag to another.

    ``source`` and ``target`` are ``(line, P, Q)`` triples with both
    lines inside ``H``; the result maps line to line, P to P and Q to Q.
    """
    if H.projective_dim != ctx.n - 1:
        raise FlagInvalid("H must be a hyperplane")
    _check_flag(ctx, H, source)
    _check_flag(ctx, H, target)
    src = adapted_basis(ctx, [source[1:], H.basis])
    dst = adapted_basis(ctx, [target[1:], H.basis])
    return change_of_basis(ctx.field, src, dst)


# -- the subgroup fixing a codimension-2 subspace pointwise and stabilizing a hyperplane through it --

def _endpoint_basis(ctx: GeometryContext, core: Subspace, member: Subspace) -> list[Point]:
    if core.projective_dim != ctx.n - 2 or member.projective_dim != ctx.n - 1:
        raise FlagInvalid("need a codimension-2 core and a hyperplane")
    if not contains(ctx, member, core):
        raise FlagInvalid("hyperplane does not contain the core")
    return adapted_basis(ctx, [core.basis, member.basis])


def endpoint_moves(ctx: GeometryContext, core: Subspace, member: Subspace) -> Iterator[Projectivity]:
    """Homologies ``u -> c*u`` (identity first), then elations ``u -> u + s`` with s in the core.

    Here ``u`` completes the core to the hyperplane ``member``.  Every
    element fixes the core pointwise and maps ``member`` to itself.
    """
    F = ctx.field
    B = _endpoint_basis(ctx, core, member)
    r = core.rank
    u = B[r]

    def with_image(img: Point) -> Projectivity:
        T = list(B)
        T[r] = img
        return change_of_basis(F, B, T)

    for c in range(1, F.q):
        yield with_image(tuple(F.mul(c, x) for x in u))
    for coeffs in product(range(F.q), repeat=r):
        if any(coeffs):
            s = combine(F, coeffs, core.basis)
            yield with_image(tuple(F.add(x, y) for x, y in zip(u, s)))


def endpoint_orbit(ctx: GeometryContext, core: Subspace, member: Subspace, P: Point) -> set[Point]:
    """Orbit of ``P`` under the group generated by :func:`endpoint_moves`."""
    gens = list(endpoint_moves(ctx, core, member))
    seen = {P}
    todo = deque([P])
    while todo:
        X = todo.popleft()
        for g in gens:
            Y = g.point(X)
            if Y not in seen:
                seen.add(Y)
                todo.append(Y)
    return seen


def move_endpoint(
    ctx: GeometryContext,
    core: Subspace,
    member: Subspace,
    path: PathEmbedding,
    endpoint: Point,
    forbidden: Iterable[Point],
) -> PathEmbedding:
    """Move ``path`` inside ``member`` so that ``endpoint`` avoids ``forbidden``.

    Core vertices of the path stay where they are.
    """
    forbidden = set(forbidden)
    if endpoint not in (path.vertices[0], path.vertices[-1]):
        raise ValueError("endpoint is not an end of the path")
    if not incident(ctx, endpoint, member) or incident(ctx, endpoint, core):
        raise FlagInvalid("endpoint must lie in the hyperplane but off the core")
    for tau in endpoint_moves(ctx, core, member):
        if tau.point(endpoint) not in forbidden:
            return apply(tau, path)
    raise NoValidMove(f"every image of {endpoint} is forbidden ({len(forbidden)} points)")
