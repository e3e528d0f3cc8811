"""Cycles and anchored paths in the projective plane PG(2, q).

Lengths up to q^2 + 2 come from affine cycles found by a constrained
backtracking search and then anchored on the line at infinity; the
maximal length q^2 + q + 1 comes from a Singer cycle; the short band in
between is searched directly in the whole plane.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product

from .embedding import CycleEmbedding, PathEmbedding
from .geometry import (
    GeometryContext,
    Point,
    Subspace,
    incident,
    line_through,
    normalize_vector,
    points_on,
)
from .gf import FieldSpec, make_field, primitive_element

NODE_BUDGET = 10**6
RESTARTS = 32
# Cheap attempts tried before the full-budget restarts; they cut the heavy tail
# of randomized backtracking without reducing the full schedule.
WARMUP_BUDGETS = (10**3, 4 * 10**3, 16 * 10**3, 64 * 10**3, 256 * 10**3)


class OutOfRange(ValueError):
    pass


class SearchExhausted(RuntimeError):
    pass


class _BudgetSpent(Exception):
    pass


class PlaneIndex:
    """Integer ids for the points and lines of PG(2, q), with a join table."""

    def __init__(self, ctx: GeometryContext):
        if ctx.n != 2:
            raise ValueError("PlaneIndex needs a plane")
        self.ctx = ctx
        self.points = list(ctx.points)
        self.pid = {P: i for i, P in enumerate(self.points)}
        N = len(self.points)
        self.lines: list[Subspace] = []
        self.lid: dict[Subspace, int] = {}
        self.join = [[-1] * N for _ in range(N)]
        for a in range(N):
            for b in range(a + 1, N):
                if self.join[a][b] >= 0:
                    continue
                L = line_through(ctx, self.points[a], self.points[b])
                j = len(self.lines)
                self.lines.append(L)
                self.lid[L] = j
                ids = [self.pid[X] for X in points_on(ctx, L)]
                for x in ids:
                    for y in ids:
                        if x != y:
                            self.join[x][y] = j


@lru_cache(maxsize=None)
def plane_index(ctx: GeometryContext) -> PlaneIndex:
    return PlaneIndex(ctx)


@dataclass(frozen=True)
class PlaneFrame:
    ctx2: GeometryContext
    origin: Point
    line_at_infinity: Subspace
    spokes: tuple[Subspace, ...] = field(init=False)
    infinity_marks: tuple[Point, ...] = field(init=False)

    def __post_init__(self):
        if incident(self.ctx2, self.origin, self.line_at_infinity):
            raise ValueError("origin must not lie on the line at infinity")
        marks = points_on(self.ctx2, self.line_at_infinity)
        spokes = sorted((line_through(self.ctx2, self.origin, M) for M in marks), key=lambda L: L.basis)
        by_spoke = {L: M for M in marks for L in spokes if incident(self.ctx2, M, L)}
        object.__setattr__(self, "spokes", tuple(spokes))
        object.__setattr__(self, "infinity_marks", tuple(by_spoke[L] for L in spokes))

    @cached_property
    def affine_points(self) -> list[Point]:
        return [P for P in self.ctx2.points if not incident(self.ctx2, P, self.line_at_infinity)]

    def spoke_of(self, P: Point) -> int:
        """Index of the spoke through ``P`` (``P`` different from the origin)."""
        return self.spokes.index(line_through(self.ctx2, self.origin, P))


def plane_frame(ctx2: GeometryContext, origin: Point | None = None, line_at_infinity: Subspace | None = None) -> PlaneFrame:
    """Frame with defaults origin (0,0,1) and line at infinity z = 0."""
    origin = origin if origin is not None else (0, 0, 1)
    if line_at_infinity is None:
        line_at_infinity = ctx2.hyperplane()
    return PlaneFrame(ctx2, origin, line_at_infinity)


# -- backtracking cycle search over point ids --

def _search_cycle(
    idx: PlaneIndex,
    k: int,
    allowed: list[int],
    rng: random.Random,
    *,
    start: int | None = None,
    forbidden_lines: frozenset[int] = frozenset(),
    spoke_lines: frozenset[int] = frozenset(),
    max_spokes: int | None = None,
    accept=None,
    budget: int = NODE_BUDGET,
) -> list[int] | None:
    """One randomized depth-first attempt; returns vertex ids or None when the budget runs out."""
    join = idx.join
    allowed = list(allowed)
    if start is None:
        start = rng.choice(allowed)
    on_path = set([start])
    used: set[int] = set()
    path = [start]
    nodes = 0
    limit = max_spokes if max_spokes is not None else len(spoke_lines) + 1

    def spokes_after(*lines: int) -> int:
        return len({L for L in used if L in spoke_lines} | {L for L in lines if L in spoke_lines})

    def extend(cur: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise _BudgetSpent
        last_step = len(path) == k - 1
        row = join[cur]
        cands = [v for v in allowed if v not in on_path and row[v] not in used and row[v] not in forbidden_lines]
        rng.shuffle(cands)
        for v in cands:
            L = row[v]
            if last_step:
                C = join[v][start]
                if C == L or C in used or C in forbidden_lines:
                    continue
                if spoke_lines and spokes_after(L, C) > limit:
                    continue
                path.append(v)
                if accept is None or accept(path):
                    return True
                path.pop()
                continue
            if spoke_lines and spokes_after(L) > limit:
                continue
            path.append(v)
            on_path.add(v)
            used.add(L)
            if extend(v):
                return True
            path.pop()
            on_path.discard(v)
            used.discard(L)
        return False

    try:
        return list(path) if extend(start) else None
    except _BudgetSpent:
        return None


def _restarts(seed: int, tag: str):
    """Yield ``(rng, budget)`` pairs: warm-up attempts, then the full-budget restarts."""
    budgets = list(WARMUP_BUDGETS) + [NODE_BUDGET] * RESTARTS
    for r, budget in enumerate(budgets):
        yield random.Random(f"{tag}:{seed}:{r}"), budget


def _cycle_from_ids(idx: PlaneIndex, ids: list[int]) -> CycleEmbedding:
    k = len(ids)
    return CycleEmbedding(
        tuple(idx.points[i] for i in ids),
        tuple(idx.lines[idx.join[ids[j]][ids[(j + 1) % k]]] for j in range(k)),
    )


def _has_turning_triple(frame: PlaneFrame, idx: PlaneIndex):
    spoke = {idx.pid[P]: frame.spoke_of(P) for P in frame.affine_points if P != frame.origin}

    def accept(path: list[int]) -> bool:
        k = len(path)
        return any(spoke[path[m - 1]] != spoke[path[(m + 1) % k]] for m in range(k))

    return accept


@lru_cache(maxsize=None)
def remark1_cycle(frame: PlaneFrame, k: int, seed: int = 0, flavor: str | None = None) -> tuple[CycleEmbedding, str]:
    """An affine k-cycle placed relative to the origin in one of two ways.

    Flavor "A": the origin is a vertex and some spoke is not an edge.
    Flavor "B": the origin is avoided, k is a multiple of q+1 and no
    spoke is an edge.  "A" is tried first unless ``flavor`` forces one.
    """
    q = frame.ctx2.q
    if not 3 <= k <= q * q:
        raise OutOfRange(f"affine cycles need 3 <= k <= {q * q}, got {k}")
    idx = plane_index(frame.ctx2)
    O = idx.pid[frame.origin]
    affine = [idx.pid[P] for P in frame.affine_points]
    spoke_ids = frozenset(idx.lid[L] for L in frame.spokes)
    flavors = [flavor] if flavor else ["A", "B"]
    for fl in flavors:
        if fl == "A":
            for rng, budget in _restarts(seed, f"A{k}"):
                ids = _search_cycle(
                    idx, k, affine, rng, start=O, spoke_lines=spoke_ids, max_spokes=q, budget=budget
                )
                if ids:
                    return _cycle_from_ids(idx, ids), "A"
        elif fl == "B":
            if k % (q + 1) or not 1 <= k // (q + 1) <= q - 1:
                continue
            rest = [v for v in affine if v != O]
            accept = _has_turning_triple(frame, idx)
            for rng, budget in _restarts(seed, f"B{k}"):
                ids = _search_cycle(idx, k, rest, rng, forbidden_lines=spoke_ids, accept=accept, budget=budget)
                if ids:
                    return _cycle_from_ids(idx, ids), "B"
        else:
            raise ValueError(f"unknown flavor {fl!r}")
    raise SearchExhausted(f"no cycle of length {k} found for flavors {flavors} in {frame.ctx2}")


def _path(vertices: list[Point], lines: list[Subspace]) -> PathEmbedding:
    return PathEmbedding(tuple(vertices), tuple(lines))


def anchored_path(frame: PlaneFrame, k: int, seed: int = 0, flavor: str | None = None) -> PathEmbedding:
    """A path on k vertices whose only points at infinity are its two endpoints.

    For k >= 5 it is cut out of an affine (k-2)-cycle; ``flavor`` forces
    the kind of that cycle (see :func:`remark1_cycle`).
    """
    ctx2 = frame.ctx2
    q = ctx2.q
    if not 3 <= k <= q * q + 2:
        raise OutOfRange(f"anchored paths need 3 <= k <= {q * q + 2}, got {k}")
    O = frame.origin
    marks, spokes = frame.infinity_marks, frame.spokes
    if k == 3:
        return _path([marks[0], O, marks[1]], [spokes[0], spokes[1]])
    if k == 4:
        Y = next(P for P in frame.affine_points if P != O and frame.spoke_of(P) != 0)
        OY = line_through(ctx2, O, Y)
        j = next(i for i, M in enumerate(marks) if i != 0 and not incident(ctx2, M, OY))
        verts = [marks[0], O, Y, marks[j]]
        return _path(verts, [line_through(ctx2, a, b) for a, b in zip(verts, verts[1:])])

    cyc, fl = remark1_cycle(frame, k - 2, seed, flavor)
    vs, ls = cyc.vertices, cyc.edge_lines
    m = len(vs)
    if fl == "A":
        j = vs.index(O)
        # Drop the spoke edge from O to its successor X and re-enter X from infinity.
        X = vs[(j + 1) % m]
        i = frame.spoke_of(X)
        t = next(s for s, L in enumerate(spokes) if L not in ls)
        order = [(j + 1 + s) % m for s in range(m)]
        verts = [marks[i]] + [vs[a] for a in order] + [marks[t]]
        lines = [spokes[i]] + [ls[a] for a in order[:-1]] + [spokes[t]]
        return _path(verts, lines)

    # Flavor B: cut out a middle vertex whose neighbours sit on different spokes.
    mid = next(c for c in range(m) if frame.spoke_of(vs[c - 1]) != frame.spoke_of(vs[(c + 1) % m]))
    Pi, Pt, Pj = vs[mid - 1], vs[mid], vs[(mid + 1) % m]
    i, t, j = frame.spoke_of(Pi), frame.spoke_of(Pt), frame.spoke_of(Pj)
    order = [(mid - 1 - s) % m for s in range(m - 1)]  # Pi backwards round to Pj
    inner = [ls[(a - 1) % m] for a in order[:-1]]
    verts = [marks[i]] + [vs[a] for a in order] + [O, marks[t]]
    lines = [spokes[i]] + inner + [spokes[j], spokes[t]]
    return _path(verts, lines)


def sigma_cycle_plane(frame: PlaneFrame, k: int, seed: int = 0) -> CycleEmbedding:
    """A k-cycle meeting the line at infinity in two vertices and using it as one edge."""
    q = frame.ctx2.q
    if not 3 <= k <= q * q + 2:
        raise OutOfRange(f"anchored plane cycles need 3 <= k <= {q * q + 2}, got {k}")
    path = anchored_path(frame, k, seed)
    return CycleEmbedding(path.vertices, path.edge_lines + (frame.line_at_infinity,))


def _extension_coordinates(F: FieldSpec):
    """Points of PG(2, q) as powers of a primitive element of GF(q^3).

    Returns the big field, its primitive element and a map from big-field
    integers to coordinate triples over ``F`` in the basis 1, g, g^2.
    """
    big = make_field(F.p, 3 * F.e)
    g = primitive_element(big).value
    # Embed F into the big field by sending x to a root of F's modulus.
    if F.e == 1:
        root = None
        embed = {a: a for a in range(F.q)}
    else:
        root = next(r for r in range(big.q) if _poly_eval(big, F.modulus, r) == 0)
        embed = {a: _poly_eval(big, F.coeffs(a), root) for a in range(F.q)}
    basis = [1, g, big.mul(g, g)]
    coords = {}
    for a, b, c in product(range(F.q), repeat=3):
        v = 0
        for coeff, bv in zip((a, b, c), basis):
            v = big.add(v, big.mul(embed[coeff], bv))
        coords[v] = (a, b, c)
    return big, g, coords


def _poly_eval(big: FieldSpec, coeffs, x: int) -> int:
    acc = 0
    for c in reversed(list(coeffs)):
        acc = big.add(big.mul(acc, x), big.from_coeffs([c]))
    return acc


def singer_hamiltonian(ctx2: GeometryContext) -> CycleEmbedding:
    """A cycle through every point of the plane, in the order g^0, g^1, g^2, ..."""
    if ctx2.n != 2:
        raise ValueError("Singer cycles live in planes")
    F = ctx2.field
    big, g, coords = _extension_coordinates(F)
    N = ctx2.num_points
    verts = []
    x = 1
    for _ in range(N):
        verts.append(normalize_vector(F, coords[x]))
        x = big.mul(x, g)
    return CycleEmbedding(
        tuple(verts),
        tuple(line_through(ctx2, verts[i], verts[(i + 1) % N]) for i in range(N)),
    )


@lru_cache(maxsize=None)
def plane_cycle(ctx2: GeometryContext, k: int, seed: int = 0) -> CycleEmbedding:
    q = ctx2.q
    N = ctx2.num_points
    if not 3 <= k <= N:
        raise OutOfRange(f"plane cycles need 3 <= k <= {N}, got {k}")
    if k <= q * q + 2:
        return sigma_cycle_plane(plane_frame(ctx2), k, seed)
    if k == N:
        return singer_hamiltonian(ctx2)
    idx = plane_index(ctx2)
    everything = list(range(N))
    for rng, budget in _restarts(seed, f"P{k}"):
        ids = _search_cycle(idx, k, everything, rng, budget=budget)
        if ids:
            return _cycle_from_ids(idx, ids)
    raise SearchExhausted(f"no {k}-cycle found in {ctx2}")
