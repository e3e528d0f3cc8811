"""The projective space PG(n, q) over a :class:`~pgcycles.gf.FieldSpec`.

Points are plain tuples of canonical field integers, normalized so that
the leftmost nonzero coordinate is 1.  Subspaces are carried as their
reduced row echelon basis, which makes equality and hashing exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence, Union

from .gf import FieldSpec, SizeExceeded

Point = tuple[int, ...]

MAX_POINTS = 2**20


class GeometryError(ValueError):
    pass


class ZeroVector(GeometryError):
    pass


class EqualPoints(GeometryError):
    pass


class WrongDimension(GeometryError):
    pass


class NotInSubspace(GeometryError):
    pass


def count_points(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def count_lines(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) * (q**n - 1) // ((q * q - 1) * (q - 1))


# -- linear algebra over GF(q) on tuples of canonical integers --

def rref(F: FieldSpec, rows: Iterable[Sequence[int]]) -> tuple[Point, ...]:
    """Reduced row echelon form with zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        s = inv(m[r][c])
        if s != 1:
            m[r] = [mul(s, x) for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = neg(m[i][c])
                m[i] = [add(x, mul(f, y)) for x, y in zip(m[i], pr)]
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r])


def rank(F: FieldSpec, rows: Iterable[Sequence[int]]) -> int:
    return len(rref(F, rows))


def pivots(basis: Sequence[Point]) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in basis]


def combine(F: FieldSpec, coeffs: Sequence[int], rows: Sequence[Sequence[int]]) -> Point:
    """The vector ``sum(coeffs[i] * rows[i])``."""
    add, mul = F.add, F.mul
    out = [0] * len(rows[0])
    for c, row in zip(coeffs, rows):
        if c:
            for j, x in enumerate(row):
                if x:
                    out[j] = add(out[j], mul(c, x))
    return tuple(out)


def mat_mul(F: FieldSpec, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> tuple[Point, ...]:
    return tuple(combine(F, row, B) for row in A)


def mat_inv(F: FieldSpec, A: Sequence[Sequence[int]]) -> tuple[Point, ...]:
    n = len(A)
    aug = [tuple(row) + tuple(int(i == j) for j in range(n)) for i, row in enumerate(A)]
    red = rref(F, aug)
    if len(red) != n or any(red[i][i] != 1 for i in range(n)):
        raise ValueError("singular matrix")
    return tuple(row[n:] for row in red)


def normalize_vector(F: FieldSpec, v: Sequence[int]) -> Point:
    for x in v:
        if x:
            if x == 1:
                return tuple(v)
            s = F.inv(x)
            return tuple(F.mul(s, y) for y in v)
    raise ZeroVector("the zero vector is not a projective point")


def extend_basis(F: FieldSpec, rows: Sequence[Point], candidates: Iterable[Point], target_rank: int) -> list[Point]:
    """Append candidates that raise the rank, in order, until ``target_rank``."""
    out = list(rows)
    r = rank(F, out)
    for c in candidates:
        if r >= target_rank:
            break
        if rank(F, out + [c]) > r:
            out.append(tuple(c))
            r += 1
    if r < target_rank:
        raise WrongDimension("candidates do not span enough")
    return out


def unit_vectors(dim: int) -> list[Point]:
    return [tuple(int(i == j) for j in range(dim)) for i in range(dim)]


@dataclass(frozen=True)
class Subspace:
    """A projective subspace given by its RREF basis."""

    basis: tuple[Point, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def projective_dim(self) -> int:
        return len(self.basis) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.basis[0]) - 1

    def serialize(self) -> list[list[int]]:
        return [list(r) for r in self.basis]


Item = Union[Point, Subspace]


class GeometryContext:
    """PG(n, q) over a fixed field."""

    def __init__(self, n: int, field: FieldSpec):
        if n < 2:
            raise WrongDimension(f"projective dimension must be at least 2, got {n}")
        self.n = n
        self.field = field
        self.q = field.q

    def __eq__(self, other):
        return isinstance(other, GeometryContext) and (self.n, self.field) == (other.n, other.field)

    def __hash__(self):
        return hash((self.n, self.field))

    def __repr__(self):
        return f"PG({self.n},{self.q})"

    @property
    def num_points(self) -> int:
        return count_points(self.n, self.q)

    @cached_property
    def points(self) -> list[Point]:
        return enumerate_points(self)

    @cached_property
    def point_index(self) -> dict[Point, int]:
        return {P: i for i, P in enumerate(self.points)}

    def subspace(self, rows: Iterable[Sequence[int]]) -> Subspace:
        return Subspace(rref(self.field, rows))

    def hyperplane(self, coord: int | None = None) -> Subspace:
        """The coordinate hyperplane ``x[coord] == 0`` (default: last coordinate)."""
        coord = self.n if coord is None else coord
        return Subspace(tuple(u for i, u in enumerate(unit_vectors(self.n + 1)) if i != coord))


def normalize_point(F: FieldSpec, v: Sequence[int]) -> Point:
    return normalize_vector(F, v)


def line_through(ctx: GeometryContext, P: Point, Q: Point) -> Subspace:
    if P == Q:
        raise EqualPoints("a line needs two distinct points")
    basis = rref(ctx.field, (P, Q))
    if len(basis) != 2:
        raise EqualPoints("points are projectively equal")
    return Subspace(basis)


def points_on(ctx: GeometryContext, S: Subspace) -> list[Point]:
    F = ctx.field
    rows = S.basis
    out = []
    # Leading coefficient 1 on the first nonzero position gives each point once.
    for lead in range(len(rows)):
        for tail in product(range(F.q), repeat=len(rows) - lead - 1):
            coeffs = (0,) * lead + (1,) + tail
            out.append(normalize_vector(F, combine(F, coeffs, rows)))
    return sorted(out)


def incident(ctx: GeometryContext, P: Point, S: Subspace) -> bool:
    if len(P) != len(S.basis[0]):
        raise WrongDimension("dimension mismatch")
    # With an RREF basis the only candidate combination reads off pivot entries.
    F = ctx.field
    coeffs = [P[j] for j in pivots(S.basis)]
    return combine(F, coeffs, S.basis) == tuple(P) if any(coeffs) else not any(P)


def contains(ctx: GeometryContext, big: Subspace, small: Subspace) -> bool:
    return all(incident(ctx, row, big) for row in small.basis)


def span(ctx: GeometryContext, items: Sequence[Item]) -> Subspace:
    if not items:
        raise ValueError("span of nothing")
    rows: list[Sequence[int]] = []
    for it in items:
        rows.extend(it.basis if isinstance(it, Subspace) else [it])
    return ctx.subspace(rows)


def meet_point(ctx: GeometryContext, line: Subspace, H: Subspace) -> list[Point]:
    """Points of ``line`` lying in ``H``."""
    return [P for P in points_on(ctx, line) if incident(ctx, P, H)]


@dataclass(frozen=True)
class PencilDecomposition:
    core: Subspace
    members: tuple[Subspace, ...]


def hyperplane_pencil(ctx: GeometryContext, core: Subspace) -> PencilDecomposition:
    """The q+1 hyperplanes through a subspace of projective dimension n-2."""
    if core.projective_dim != ctx.n - 2:
        raise WrongDimension(f"pencil core must have projective dimension {ctx.n - 2}")
    F = ctx.field
    full = extend_basis(F, list(core.basis), unit_vectors(ctx.n + 1), ctx.n + 1)
    u, v = full[-2], full[-1]
    # Hyperplanes through the core correspond to points of the line <u, v>.
    dirs = [u] + [combine(F, (t, 1), (u, v)) for t in range(F.q)]
    members = sorted((span(ctx, [core, d]) for d in dirs), key=lambda S: S.basis)
    return PencilDecomposition(core, tuple(members))


def enumerate_points(ctx: GeometryContext) -> list[Point]:
    if ctx.num_points > MAX_POINTS:
        raise SizeExceeded(f"{ctx} has too many points to enumerate")
    dim = ctx.n + 1
    q = ctx.q
    out = []
    for lead in range(dim):
        for tail in product(range(q), repeat=dim - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return sorted(out)


class SubspaceFrame:
    """Coordinates on a subspace S of projective dimension d, identifying it with PG(d, q).

    The chart is the RREF basis of S, so restricting a point just reads
    its entries at the pivot columns.
    """

    def __init__(self, ambient: GeometryContext, target: Subspace):
        if target.projective_dim < 1:
            raise WrongDimension("frames need a subspace of dimension at least 1")
        self.ambient = ambient
        self.target = target
        self.chart = target.basis
        self.d = target.projective_dim
        self._pivots = pivots(self.chart)

    @cached_property
    def small(self) -> GeometryContext:
        return GeometryContext(self.d, self.ambient.field)

    def lift_vector(self, x: Sequence[int]) -> Point:
        return combine(self.ambient.field, x, self.chart)

    def lift_point(self, x: Point) -> Point:
        return normalize_vector(self.ambient.field, self.lift_vector(x))

    def restrict_point(self, P: Point) -> Point:
        coeffs = tuple(P[j] for j in self._pivots)
        if not any(coeffs) or self.lift_vector(coeffs) != tuple(P):
            raise NotInSubspace(f"{P} is not on the framed subspace")
        return normalize_vector(self.ambient.field, coeffs)

    def lift_subspace(self, S: Subspace) -> Subspace:
        return self.ambient.subspace(self.lift_vector(r) for r in S.basis)

    lift_line = lift_subspace

    def restrict_subspace(self, S: Subspace) -> Subspace:
        F = self.ambient.field
        rows = []
        for r in S.basis:
            coeffs = tuple(r[j] for j in self._pivots)
            if self.lift_vector(coeffs) != tuple(r):
                raise NotInSubspace("subspace is not contained in the framed subspace")
            rows.append(coeffs)
        return Subspace(rref(F, rows))


def frame(ctx: GeometryContext, S: Subspace) -> SubspaceFrame:
    return SubspaceFrame(ctx, S)
