"""Independent checks for embedded paths and cycles.

Nothing here trusts the constructions: every edge line is recomputed
from its endpoints with the geometry primitives and compared with the
stored one.  Malformed input produces failures, never exceptions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .geometry import GeometryContext, Point, Subspace, contains, incident, line_through, normalize_vector


class BudgetExceeded(ValueError):
    pass


@dataclass
class VerificationReport:
    failures: list[tuple[str, str]] = field(default_factory=list)
    vertex_count: int = 0
    distinct_line_count: int = 0
    anchor_vertex_count: int | None = None
    anchor_edge_count: int | None = None

    @property
    def valid(self) -> bool:
        return not self.failures

    def fail(self, check: str, detail: str) -> None:
        self.failures.append((check, detail))

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "failures": [{"check": c, "detail": d} for c, d in self.failures],
            "stats": {
                "vertex_count": self.vertex_count,
                "distinct_line_count": self.distinct_line_count,
                "anchor_vertex_count": self.anchor_vertex_count,
                "anchor_edge_count": self.anchor_edge_count,
            },
        }

    def __str__(self) -> str:
        head = "valid" if self.valid else "INVALID"
        lines = [f"{head}: {self.vertex_count} vertices, {self.distinct_line_count} distinct lines"]
        if self.anchor_vertex_count is not None:
            lines.append(f"anchor: {self.anchor_vertex_count} vertices, {self.anchor_edge_count} edges")
        lines += [f"  {c}: {d}" for c, d in self.failures]
        return "\n".join(lines)


def _is_point(ctx: GeometryContext, P) -> bool:
    try:
        if len(P) != ctx.n + 1 or any(not isinstance(x, int) or not 0 <= x < ctx.q for x in P):
            return False
        return normalize_vector(ctx.field, P) == tuple(P)
    except Exception:
        return False


def _check_walk(ctx: GeometryContext, vertices: Sequence, lines: Sequence, closed: bool, report: VerificationReport):
    k = len(vertices)
    report.vertex_count = k
    bad = [i for i, P in enumerate(vertices) if not _is_point(ctx, P)]
    for i in bad:
        report.fail("vertex", f"vertex {i} is not a normalized point of {ctx}")
    if len({tuple(P) for P in vertices}) != k:
        report.fail("vertex-injective", "a point is used by two vertices")
    want = k if closed else k - 1
    if len(lines) != want:
        report.fail("edge-count", f"expected {want} edge lines, got {len(lines)}")
    report.distinct_line_count = len(set(lines))
    if len(set(lines)) != len(lines):
        report.fail("edge-injective", "a line carries two edges")
    if bad:
        return
    for j in range(min(want, len(lines))):
        a, b = tuple(vertices[j]), tuple(vertices[(j + 1) % k])
        if a == b:
            continue
        if lines[j] != line_through(ctx, a, b):
            report.fail("incidence", f"edge {j} is not carried by the line through its endpoints")


def verify_cycle(ctx: GeometryContext, c) -> VerificationReport:
    report = VerificationReport()
    if len(c.vertices) < 3:
        report.fail("length", f"a cycle needs at least 3 vertices, got {len(c.vertices)}")
    _check_walk(ctx, c.vertices, c.edge_lines, True, report)
    return report


def verify_path(ctx: GeometryContext, p) -> VerificationReport:
    report = VerificationReport()
    if len(p.vertices) < 2:
        report.fail("length", f"a path needs at least 2 vertices, got {len(p.vertices)}")
    _check_walk(ctx, p.vertices, p.edge_lines, False, report)
    return report


def sigma_counts(ctx: GeometryContext, c, S: Subspace) -> tuple[int, int]:
    """Vertices of ``c`` on ``S`` and edge lines of ``c`` contained in ``S``."""
    v = sum(incident(ctx, P, S) for P in c.vertices)
    e = sum(contains(ctx, S, L) for L in c.edge_lines)
    return v, e


def verify_sigma_properties(ctx: GeometryContext, c, S: Subspace, expected=(2, 1)) -> VerificationReport:
    report = verify_cycle(ctx, c)
    if not report.valid:
        return report
    try:
        v, e = sigma_counts(ctx, c, S)
    except Exception as exc:
        report.fail("anchor", f"cannot evaluate anchor counts: {exc}")
        return report
    report.anchor_vertex_count, report.anchor_edge_count = v, e
    if (v, e) != tuple(expected):
        report.fail("anchor", f"counts {(v, e)} differ from expected {tuple(expected)}")
    return report


def verify_remark1(frame, c, flavor: str) -> VerificationReport:
    """Check the placement of an affine cycle relative to the frame's origin."""
    ctx = frame.ctx2
    report = verify_cycle(ctx, c)
    q = ctx.q
    spokes = [line_through(ctx, frame.origin, M) for M in _points_of_line(ctx, frame.line_at_infinity)]
    used = sum(L in set(c.edge_lines) for L in spokes)
    if any(incident(ctx, P, frame.line_at_infinity) for P in c.vertices):
        report.fail("affine", "a vertex lies on the line at infinity")
    if flavor == "A":
        if frame.origin not in c.vertices:
            report.fail("origin", "flavor A needs the origin as a vertex")
        if used >= q + 1:
            report.fail("spokes", "every line through the origin is an edge")
    elif flavor == "B":
        if frame.origin in c.vertices:
            report.fail("origin", "flavor B must avoid the origin")
        if used:
            report.fail("spokes", f"{used} lines through the origin are edges")
        if len(c.vertices) % (q + 1):
            report.fail("length", f"k={len(c.vertices)} is not a multiple of q+1={q + 1}")
    else:
        report.fail("flavor", f"unknown flavor {flavor!r}")
    return report


def _points_of_line(ctx: GeometryContext, L: Subspace) -> list[Point]:
    return [P for P in ctx.points if incident(ctx, P, L)]


def brute_force_cycle_count(ctx: GeometryContext, k: int, max_points: int = 15, max_k: int = 8) -> int:
    """Number of k-cycles embedded in the geometry, counted by exhaustive search.

    A cycle is a cyclic vertex sequence up to rotation and reflection with
    pairwise distinct edge lines.
    """
    N = ctx.num_points
    if N > max_points or k > max_k:
        raise BudgetExceeded(f"counting {k}-cycles in {ctx} ({N} points) exceeds the budget")
    if k < 3:
        return 0
    pts = ctx.points
    join = [[None] * N for _ in range(N)]
    for a, b in combinations(range(N), 2):
        join[a][b] = join[b][a] = line_through(ctx, pts[a], pts[b])

    count = 0

    def walk(path: list[int], used: set):
        nonlocal count
        cur = path[-1]
        if len(path) == k:
            close = join[cur][path[0]]
            if close not in used and path[1] < path[-1]:
                count += 1
            return
        for v in range(path[0] + 1, N):
            if v in path:
                continue
            L = join[cur][v]
            if L in used:
                continue
            used.add(L)
            path.append(v)
            walk(path, used)
            path.pop()
            used.discard(L)

    for s in range(N):
        walk([s], set())
    return count
