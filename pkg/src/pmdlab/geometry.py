"""PG(r-1, q) and AG(r-1, q) as matroids of rank r.

Everything here uses matroid rank: a projective geometry "of rank r" lives
in GF(q)^r and has projective dimension r - 1.  Vectors are tuples of field
indices (see :mod:`pmdlab.gf`).

Points and hyperplanes are normalized so that the leftmost nonzero
coordinate is 1.  Subspaces keep a reduced row echelon basis, so two flats
are equal exactly when their matrices are.

The affine geometry of rank r is GF(q)^(r-1), embedded in PG by
``(a_1, ..., a_{r-1}) -> (1, a_1, ..., a_{r-1})``; the deleted hyperplane
H_0 is ``x_0 = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf import FieldElement, FieldSpec

Vector = tuple[int, ...]


class GeometryError(ValueError):
    pass


# --------------------------------------------------------------------------
# vector and matrix helpers over a field


def normalize(field: FieldSpec, vec: Sequence[int]) -> Vector:
    """Scale ``vec`` so that its leftmost nonzero entry is 1."""
    for x in vec:
        if x:
            if x == 1:
                return tuple(vec)
            s = field.inv_table[x]
            row = field.mul_table[s]
            return tuple(row[y] for y in vec)
    raise GeometryError("zero vector has no projective representative")


def scale(field: FieldSpec, c: int, vec: Sequence[int]) -> Vector:
    row = field.mul_table[c]
    return tuple(row[x] for x in vec)


def vec_add(field: FieldSpec, u: Sequence[int], v: Sequence[int]) -> Vector:
    t = field.add_table
    return tuple(t[a][b] for a, b in zip(u, v))


def dot(field: FieldSpec, u: Sequence[int], v: Sequence[int]) -> int:
    add, mul = field.add_table, field.mul_table
    s = 0
    for a, b in zip(u, v):
        if a and b:
            s = add[s][mul[a][b]]
    return s


def rref(field: FieldSpec, rows: Iterable[Sequence[int]]) -> tuple[Vector, ...]:
    """Reduced row echelon form with zero rows dropped."""
    m = [list(r) for r in rows]
    if not m:
        return ()
    n = len(m[0])
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][col]
        if lead != 1:
            s = mul[inv[lead]]
            m[r] = [s[x] for x in m[r]]
        prow = m[r]
        for i in range(len(m)):
            if i != r:
                c = m[i][col]
                if c:
                    mc = mul[neg[c]]
                    m[i] = [add[x][mc[y]] for x, y in zip(m[i], prow)]
        r += 1
        if r == len(m):
            break
    return tuple(tuple(row) for row in m[:r])


def matrix_rank(field: FieldSpec, rows: Iterable[Sequence[int]]) -> int:
    # forward elimination only
    m = [list(r) for r in rows]
    if not m:
        return 0
    n = len(m[0])
    add, mul, neg, inv = field.add_table, field.mul_table, field.neg_table, field.inv_table
    r = 0
    for col in range(n):
        piv = None
        for i in range(r, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        s = inv[prow[col]]
        for i in range(r + 1, len(m)):
            c = m[i][col]
            if c:
                mc = mul[neg[mul[c][s]]]
                m[i] = [add[x][mc[y]] for x, y in zip(m[i], prow)]
        r += 1
        if r == len(m):
            break
    return r


def null_space(field: FieldSpec, echelon: Sequence[Vector], n: int) -> tuple[Vector, ...]:
    """Basis (in rref) of ``{v : row . v = 0 for every row}``."""
    pivots = []
    for row in echelon:
        pivots.append(next(j for j, x in enumerate(row) if x))
    free = [j for j in range(n) if j not in pivots]
    neg = field.neg_table
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, pc in zip(echelon, pivots):
            v[pc] = neg[row[f]]
        basis.append(v)
    return rref(field, basis)


# --------------------------------------------------------------------------
# domain types


def _check_normalized(field, vec, what):
    for x in vec:
        if not 0 <= x < field.q:
            raise GeometryError(f"{what} coordinate {x} out of range for {field}")
    lead = next((x for x in vec if x), 0)
    if lead == 0:
        raise GeometryError(f"{what} cannot be the zero vector")
    if lead != 1:
        raise GeometryError(f"{what} {list(vec)} is not normalized (leading entry must be 1)")


@dataclass(frozen=True)
class ProjectivePoint:
    field: FieldSpec
    coords: Vector

    def __post_init__(self):
        _check_normalized(self.field, self.coords, "point")

    @classmethod
    def of(cls, field: FieldSpec, coords: Sequence[int]) -> ProjectivePoint:
        """Build from any nonzero representative."""
        return cls(field, normalize(field, tuple(coords)))

    @property
    def r(self) -> int:
        return len(self.coords)

    @property
    def elements(self) -> list[FieldElement]:
        return [FieldElement(self.field, x) for x in self.coords]

    def __repr__(self):
        return f"P{list(self.coords)}"


@dataclass(frozen=True)
class Hyperplane:
    """A hyperplane, stored as its normalized dual coordinate vector."""

    field: FieldSpec
    dual: Vector

    def __post_init__(self):
        _check_normalized(self.field, self.dual, "hyperplane")

    @classmethod
    def of(cls, field: FieldSpec, dual: Sequence[int]) -> Hyperplane:
        return cls(field, normalize(field, tuple(dual)))

    @property
    def r(self) -> int:
        return len(self.dual)

    def points(self) -> list[ProjectivePoint]:
        return subspace_of(self).points()

    def __repr__(self):
        return f"H{list(self.dual)}"


@dataclass(frozen=True)
class AffinePoint:
    field: FieldSpec
    coords: Vector

    def __post_init__(self):
        for x in self.coords:
            if not 0 <= x < self.field.q:
                raise GeometryError(f"affine coordinate {x} out of range for {self.field}")

    @property
    def r(self) -> int:
        """Rank of the affine geometry this point lives in."""
        return len(self.coords) + 1

    def __repr__(self):
        return f"A{list(self.coords)}"


@dataclass(frozen=True)
class Subspace:
    """A flat of PG, held as a reduced row echelon basis of GF(q)^n."""

    field: FieldSpec
    n: int
    rows: tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, p: ProjectivePoint) -> bool:
        return self.contains_vector(p.coords)

    def contains_vector(self, vec: Sequence[int]) -> bool:
        f = self.field
        add, mul, neg = f.add_table, f.mul_table, f.neg_table
        v = list(vec)
        for row in self.rows:
            pc = next(j for j, x in enumerate(row) if x)
            c = v[pc]
            if c:
                mc = mul[neg[c]]
                v = [add[x][mc[y]] for x, y in zip(v, row)]
        return not any(v)

    def points(self) -> list[ProjectivePoint]:
        """All points of the flat; each combination is already normalized."""
        f, rows, k = self.field, self.rows, len(self.rows)
        out = []
        for lead in range(k):
            for tail in itertools.product(range(f.q), repeat=k - lead - 1):
                v = rows[lead]
                for c, row in zip(tail, rows[lead + 1 :]):
                    if c:
                        v = vec_add(f, v, scale(f, c, row))
                out.append(ProjectivePoint(f, v))
        return sorted(out, key=lambda p: p.coords)

    def __repr__(self):
        return f"Subspace(rank={self.rank}, rows={[list(r) for r in self.rows]})"


@dataclass(frozen=True)
class Basis:
    """An ordered basis of PG (projective points) or AG (affine points)."""

    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise GeometryError("not a basis: empty point list")
        kinds = {type(p) for p in pts}
        if len(kinds) != 1 or kinds.pop() not in (ProjectivePoint, AffinePoint):
            raise GeometryError("not a basis: points must all be projective or all affine")
        fields = {p.field for p in pts}
        ranks = {p.r for p in pts}
        if len(fields) != 1 or len(ranks) != 1:
            raise GeometryError("not a basis: points come from different geometries")
        if len(pts) != self.r:
            raise GeometryError(f"not a basis: need {self.r} points, got {len(pts)}")
        if not is_independent(self.projective()):
            raise GeometryError("not a basis: points are dependent")

    @property
    def affine(self) -> bool:
        return isinstance(self.points[0], AffinePoint)

    @property
    def field(self) -> FieldSpec:
        return self.points[0].field

    @property
    def r(self) -> int:
        return self.points[0].r

    def projective(self) -> list[ProjectivePoint]:
        """The basis points as PG points (embedding affine ones)."""
        if self.affine:
            return [ag_embed(p) for p in self.points]
        return list(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


# --------------------------------------------------------------------------
# enumeration


def _normalized_vectors(field: FieldSpec, r: int) -> list[Vector]:
    out = []
    for lead in range(r):
        for tail in itertools.product(range(field.q), repeat=r - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    out.sort()
    return out


def pg_points(r: int, field: FieldSpec) -> list[ProjectivePoint]:
    """The [r] points of PG(r-1, q) in lexicographic order."""
    if r < 1:
        raise GeometryError("rank must be at least 1")
    return [ProjectivePoint(field, v) for v in _normalized_vectors(field, r)]


def pg_hyperplanes(r: int, field: FieldSpec) -> list[Hyperplane]:
    """The [r] hyperplanes of PG(r-1, q) in lexicographic order of dual vectors.

    For r = 1 this is the single dual vector (1), whose point set is empty.
    """
    if r < 1:
        raise GeometryError("rank must be at least 1")
    return [Hyperplane(field, v) for v in _normalized_vectors(field, r)]


def ag_points(r: int, field: FieldSpec) -> list[AffinePoint]:
    if r < 1:
        raise GeometryError("rank must be at least 1")
    return [AffinePoint(field, v) for v in itertools.product(range(field.q), repeat=r - 1)]


def h0(r: int, field: FieldSpec) -> Hyperplane:
    """The hyperplane at infinity, ``x_0 = 0``."""
    return Hyperplane(field, (1,) + (0,) * (r - 1))


def ag_hyperplanes(r: int, field: FieldSpec) -> list[Hyperplane]:
    """Hyperplanes of AG, as the PG hyperplanes other than H_0."""
    at_inf = h0(r, field)
    return [H for H in pg_hyperplanes(r, field) if H != at_inf]


# --------------------------------------------------------------------------
# matroid operations


def _same_space(items):
    fields = {x.field for x in items}
    dims = {len(x.coords) if hasattr(x, "coords") else x.n for x in items}
    if len(fields) > 1 or len(dims) > 1:
        raise GeometryError("dimension/field mismatch")


def incident(p: ProjectivePoint, H: Hyperplane) -> bool:
    if p.field != H.field or p.r != H.r:
        raise GeometryError("dimension/field mismatch")
    return dot(p.field, p.coords, H.dual) == 0


def span(points: Sequence[ProjectivePoint], field: FieldSpec | None = None, r: int | None = None) -> Subspace:
    """sigma(A): the smallest flat containing ``points``.

    An empty list gives the rank-0 flat; pass ``field`` and ``r`` to say
    which ambient space it belongs to.
    """
    points = list(points)
    if not points:
        if field is None or r is None:
            raise GeometryError("span of no points needs field and r")
        return Subspace(field, r, ())
    _same_space(points)
    f = points[0].field
    return Subspace(f, points[0].r, rref(f, [p.coords for p in points]))


def rank(S: Subspace) -> int:
    return S.rank


def set_rank(points: Sequence[ProjectivePoint]) -> int:
    """rho(A) computed without building the echelon basis."""
    points = list(points)
    if not points:
        return 0
    return matrix_rank(points[0].field, [p.coords for p in points])


def whole_space(r: int, field: FieldSpec) -> Subspace:
    return Subspace(field, r, tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))


def join(S1: Subspace, S2: Subspace) -> Subspace:
    _same_space([S1, S2])
    return Subspace(S1.field, S1.n, rref(S1.field, S1.rows + S2.rows))


def meet(S1: Subspace, S2: Subspace) -> Subspace:
    """Intersection of two flats, via the null space of the stacked duals."""
    _same_space([S1, S2])
    f, n = S1.field, S1.n
    duals = null_space(f, S1.rows, n) + null_space(f, S2.rows, n)
    return Subspace(f, n, null_space(f, rref(f, duals), n))


def line(x: ProjectivePoint, y: ProjectivePoint) -> list[ProjectivePoint]:
    """L(x, y) as x, y, then x + c*y for nonzero c in index order."""
    if x == y:
        raise GeometryError("degenerate line: x == y")
    _same_space([x, y])
    f = x.field
    return [x, y] + [ProjectivePoint.of(f, vec_add(f, x.coords, scale(f, c, y.coords))) for c in range(1, f.q)]


def is_independent(points: Sequence) -> bool:
    pts = _as_projective(points)
    if len(set(pts)) != len(pts):
        return False
    return set_rank(pts) == len(pts)


def is_circuit(points: Sequence) -> bool:
    """True iff the set is dependent and every single-element deletion is independent."""
    pts = list(dict.fromkeys(_as_projective(points)))
    if not pts:
        return False
    k = len(pts)
    if set_rank(pts) == k:
        return False
    return all(set_rank(pts[:i] + pts[i + 1 :]) == k - 1 for i in range(k))


def _as_projective(points):
    return [ag_embed(p) if isinstance(p, AffinePoint) else p for p in points]


# --------------------------------------------------------------------------
# duality and the affine embedding


def hyperplane_of(S: Subspace) -> Hyperplane:
    if S.rank != S.n - 1:
        raise GeometryError(f"not a hyperplane: rank {S.rank} in a rank-{S.n} space")
    (dual,) = null_space(S.field, S.rows, S.n)
    return Hyperplane(S.field, dual)


def subspace_of(H: Hyperplane) -> Subspace:
    return Subspace(H.field, H.r, null_space(H.field, (H.dual,), H.r))


def point_of(S: Subspace) -> ProjectivePoint:
    if S.rank != 1:
        raise GeometryError(f"not a point: rank {S.rank}")
    return ProjectivePoint(S.field, S.rows[0])


def ag_embed(p: AffinePoint) -> ProjectivePoint:
    return ProjectivePoint(p.field, (1,) + p.coords)


def ag_unembed(p: ProjectivePoint) -> AffinePoint:
    if p.coords[0] == 0:
        raise GeometryError(f"point on H_0: {list(p.coords)} is at infinity")
    # normalized, so coords[0] == 1 already
    return AffinePoint(p.field, p.coords[1:])


def affine_part(H: Hyperplane) -> list[AffinePoint]:
    """Points of an AG hyperplane, given by its embedded dual vector."""
    return [ag_unembed(p) for p in H.points() if p.coords[0]]


# --------------------------------------------------------------------------
# JSON forms


def point_to_json(p) -> list[int]:
    return list(p.coords)


def hyperplane_to_json(H: Hyperplane) -> dict:
    return {"dual": list(H.dual)}


def point_from_json(field: FieldSpec, data: Sequence[int], affine: bool = False):
    if affine:
        return AffinePoint(field, tuple(data))
    return ProjectivePoint(field, tuple(data))


def hyperplane_from_json(field: FieldSpec, data: dict) -> Hyperplane:
    return Hyperplane(field, tuple(data["dual"]))
