"""Paths and cycles embedded in PG(n, q): vertices plus the line carrying each edge."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import GeometryContext, Point, Subspace, line_through


@dataclass(frozen=True)
class PathEmbedding:
    vertices: tuple[Point, ...]
    edge_lines: tuple[Subspace, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def reversed(self) -> PathEmbedding:
        return PathEmbedding(self.vertices[::-1], self.edge_lines[::-1])


@dataclass(frozen=True)
class CycleEmbedding:
    """A cycle; ``edge_lines[j]`` joins ``vertices[j]`` and ``vertices[(j+1) % k]``."""

    vertices: tuple[Point, ...]
    edge_lines: tuple[Subspace, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def k(self) -> int:
        return len(self.vertices)


def path_from_vertices(ctx: GeometryContext, vertices) -> PathEmbedding:
    vs = tuple(vertices)
    return PathEmbedding(vs, tuple(line_through(ctx, a, b) for a, b in zip(vs, vs[1:])))


def cycle_from_vertices(ctx: GeometryContext, vertices) -> CycleEmbedding:
    vs = tuple(vertices)
    k = len(vs)
    return CycleEmbedding(vs, tuple(line_through(ctx, vs[j], vs[(j + 1) % k]) for j in range(k)))
