"""Constructive enumeration of basis-avoiding hyperplanes and circuit points.

For a basis x_1, ..., x_r of PG the constructions walk the chain of
consecutive pairs (x_i, x_{i+1}):

* hyperplanes: pick one of the q - 1 points x_i + c x_{i+1} on each line
  L(x_i, x_{i+1}); the r - 1 picks span a hyperplane missing the basis.
* circuit points: dually, pick one of the q - 1 hyperplanes h_i + c h_{i+1}
  in the pencil through the two coordinate hyperplanes sigma(B - x_i) and
  sigma(B - x_{i+1}); the r - 1 picks meet in a point p with B + p a circuit.

Each run is indexed by a choice sequence alpha = (m_1, ..., m_{r-1}) with
1 <= m_i <= q - 1, where m_i is the field index of c.  The affine versions
embed the basis into PG and drop whatever touches the hyperplane at
infinity.

The brute-force oracles filter the full point/hyperplane enumerations and
share nothing with the constructions beyond the linear algebra.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import counting
from .geometry import (
    AffinePoint,
    Basis,
    GeometryError,
    Hyperplane,
    ProjectivePoint,
    ag_embed,
    ag_hyperplanes,
    ag_points,
    ag_unembed,
    h0,
    hyperplane_of,
    incident,
    is_circuit,
    is_independent,
    line,
    meet,
    normalize,
    null_space,
    pg_hyperplanes,
    pg_points,
    rref,
    scale,
    span,
    subspace_of,
    vec_add,
)
from .gf import FieldSpec, field_of_order

DEFAULT_ORACLE_CAP = 10**6
KINDS = ("pg", "ag")
TARGETS = ("hyperplanes", "circuits")


class AlgorithmError(RuntimeError):
    """A construction produced something its correctness argument rules out."""


class OracleCapExceeded(RuntimeError):
    pass


def oracle_cap() -> int:
    """Brute-force size cap in points; ``PMDLAB_ORACLE_CAP`` overrides it."""
    raw = os.environ.get("PMDLAB_ORACLE_CAP")
    if raw is None or raw == "":
        return DEFAULT_ORACLE_CAP
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"PMDLAB_ORACLE_CAP must be an integer, got {raw!r}") from None


def geometry_size(kind: str, r: int, q: int) -> int:
    return counting.bracket(r, q) if kind == "pg" else q ** (r - 1)


@dataclass(frozen=True)
class ChoiceSequence:
    entries: tuple[int, ...]
    q: int

    def __post_init__(self):
        for m in self.entries:
            if not 1 <= m <= self.q - 1:
                raise ValueError(f"choice entry {m} outside 1..{self.q - 1}")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def choice_sequences(r: int, q: int) -> Iterator[ChoiceSequence]:
    """All (q-1)^(r-1) sequences in lexicographic order."""
    for entries in itertools.product(range(1, q), repeat=r - 1):
        yield ChoiceSequence(entries, q)


# --------------------------------------------------------------------------
# bases


def as_basis(points, affine: bool) -> Basis:
    basis = points if isinstance(points, Basis) else Basis(tuple(points))
    if basis.affine != affine:
        want = "affine" if affine else "projective"
        raise GeometryError(f"not a basis: expected {want} points")
    if basis.r < 2:
        raise GeometryError("not a basis: enumeration needs rank r >= 2")
    return basis


def canonical_basis(kind: str, r: int, field: FieldSpec) -> Basis:
    """Unit points for PG; the origin and the r-1 unit points for AG."""
    if kind == "pg":
        return Basis(tuple(ProjectivePoint(field, tuple(int(i == j) for j in range(r))) for i in range(r)))
    origin = AffinePoint(field, (0,) * (r - 1))
    units = [AffinePoint(field, tuple(int(i == j) for j in range(r - 1))) for i in range(r - 1)]
    return Basis((origin, *units))


def random_basis(kind: str, r: int, field: FieldSpec, seed: int) -> Basis:
    """Rejection-sample r random points until they are independent."""
    rng = random.Random(seed)
    q = field.q
    while True:
        if kind == "pg":
            pts = []
            while len(pts) < r:
                v = tuple(rng.randrange(q) for _ in range(r))
                if any(v):
                    pts.append(ProjectivePoint(field, normalize(field, v)))
        else:
            pts = [AffinePoint(field, tuple(rng.randrange(q) for _ in range(r - 1))) for _ in range(r)]
        if is_independent(pts):
            return Basis(tuple(pts))


def _permuted(points: Sequence, permutation) -> list:
    if permutation is None:
        return list(points)
    permutation = list(permutation)
    if sorted(permutation) != list(range(len(points))):
        raise ValueError(f"{permutation} is not a permutation of 0..{len(points) - 1}")
    return [points[i] for i in permutation]


# --------------------------------------------------------------------------
# constructions


def iter_alg1(basis, permutation=None, reverse_sequences: bool = False) -> Iterator[tuple[ChoiceSequence, Hyperplane]]:
    """Yield ``(alpha, H_alpha)`` for the PG hyperplanes avoiding ``basis``."""
    basis = as_basis(basis, affine=False)
    f, r = basis.field, basis.r
    xs = _permuted(basis.points, permutation)
    seqs = []
    for i in range(r - 1):
        ys = line(xs[i], xs[i + 1])[2:]
        if reverse_sequences:
            ys.reverse()
        seqs.append(ys)
    for alpha in choice_sequences(r, f.q):
        chosen = [seqs[i][m - 1] for i, m in enumerate(alpha)]
        S = span(chosen)
        if S.rank != r - 1:
            raise AlgorithmError(f"I_alpha for {alpha.entries} is dependent")
        yield alpha, hyperplane_of(S)


def iter_alg2(
    basis, permutation=None, reverse_sequences: bool = False, check_pencils: bool = False
) -> Iterator[tuple[ChoiceSequence, ProjectivePoint]]:
    """Yield ``(alpha, p_alpha)`` for the PG points completing ``basis`` to a circuit.

    With ``check_pencils`` each pencil member is confirmed to contain the
    axis H'_i ^ H'_{i+1}.
    """
    basis = as_basis(basis, affine=False)
    f, r = basis.field, basis.r
    xs = _permuted(basis.points, permutation)
    coord = [hyperplane_of(span(xs[:i] + xs[i + 1 :])) for i in range(r)]
    pencils = []
    for i in range(r - 1):
        a, b = coord[i].dual, coord[i + 1].dual
        members = [Hyperplane.of(f, vec_add(f, a, scale(f, c, b))) for c in range(1, f.q)]
        if check_pencils:
            axis = meet(subspace_of(coord[i]), subspace_of(coord[i + 1]))
            for H in members:
                if meet(subspace_of(H), axis) != axis or H in (coord[i], coord[i + 1]):
                    raise AlgorithmError(f"pencil member {H} does not contain the axis {axis}")
        if reverse_sequences:
            members.reverse()
        pencils.append(members)
    for alpha in choice_sequences(r, f.q):
        duals = rref(f, [pencils[i][m - 1].dual for i, m in enumerate(alpha)])
        if len(duals) != r - 1:
            raise AlgorithmError(f"hyperplanes for {alpha.entries} do not meet in a point")
        (v,) = null_space(f, duals, r)
        yield alpha, ProjectivePoint(f, v)


def iter_alg3(basis, permutation=None, reverse_sequences: bool = False) -> Iterator[tuple[ChoiceSequence, Hyperplane]]:
    """Affine hyperplanes avoiding an AG basis, as embedded dual vectors."""
    basis = as_basis(basis, affine=True)
    at_inf = h0(basis.r, basis.field)
    seen_h0 = False
    for alpha, H in iter_alg1(Basis(tuple(basis.projective())), permutation, reverse_sequences):
        if H == at_inf:
            seen_h0 = True
            continue
        yield alpha, H
    if not seen_h0:
        raise AlgorithmError("H_0 missing from the projective run")


def iter_alg4(basis, permutation=None, reverse_sequences: bool = False) -> Iterator[tuple[ChoiceSequence, AffinePoint]]:
    basis = as_basis(basis, affine=True)
    for alpha, p in iter_alg2(Basis(tuple(basis.projective())), permutation, reverse_sequences):
        if p.coords[0]:
            yield alpha, ag_unembed(p)


def alg1_pg_hyperplanes(basis, permutation=None, reverse_sequences: bool = False) -> set[Hyperplane]:
    return {H for _, H in iter_alg1(basis, permutation, reverse_sequences)}


def alg2_pg_circuit_points(basis, permutation=None, reverse_sequences: bool = False) -> set[ProjectivePoint]:
    return {p for _, p in iter_alg2(basis, permutation, reverse_sequences)}


def alg3_ag_hyperplanes(basis, permutation=None, reverse_sequences: bool = False) -> set[Hyperplane]:
    return {H for _, H in iter_alg3(basis, permutation, reverse_sequences)}


def alg4_ag_circuit_points(basis, permutation=None, reverse_sequences: bool = False) -> set[AffinePoint]:
    return {p for _, p in iter_alg4(basis, permutation, reverse_sequences)}


CONSTRUCTIONS = {
    ("pg", "hyperplanes"): iter_alg1,
    ("pg", "circuits"): iter_alg2,
    ("ag", "hyperplanes"): iter_alg3,
    ("ag", "circuits"): iter_alg4,
}


def constructive(kind: str, target: str, basis, permutation=None, reverse_sequences: bool = False) -> Iterator:
    """Dispatch to the construction for ``(kind, target)``, in alpha order."""
    return CONSTRUCTIONS[kind, target](basis, permutation, reverse_sequences)


# --------------------------------------------------------------------------
# brute-force oracles


def _guard(kind, basis, cap):
    cap = oracle_cap() if cap is None else cap
    size = geometry_size(kind, basis.r, basis.field.q)
    if size > cap:
        raise OracleCapExceeded(f"geometry too large for oracle: {size} points > cap {cap}")


def brute_avoiding_hyperplanes(kind: str, basis, cap: int | None = None) -> set[Hyperplane]:
    basis = as_basis(basis, affine=kind == "ag")
    _guard(kind, basis, cap)
    pts = basis.projective()
    hyps = pg_hyperplanes(basis.r, basis.field) if kind == "pg" else ag_hyperplanes(basis.r, basis.field)
    return {H for H in hyps if not any(incident(x, H) for x in pts)}


def brute_circuit_points(kind: str, basis, cap: int | None = None) -> set:
    basis = as_basis(basis, affine=kind == "ag")
    _guard(kind, basis, cap)
    pts = list(basis.points)
    members = set(pts)
    ground = pg_points(basis.r, basis.field) if kind == "pg" else ag_points(basis.r, basis.field)
    return {p for p in ground if p not in members and is_circuit(pts + [p])}


def brute(kind: str, target: str, basis, cap: int | None = None) -> set:
    if target == "hyperplanes":
        return brute_avoiding_hyperplanes(kind, basis, cap)
    return brute_circuit_points(kind, basis, cap)


# --------------------------------------------------------------------------
# cross-checking


def formula_count(kind: str, target: str, r: int, q: int) -> int:
    profile = counting.profile_pg(r, q) if kind == "pg" else counting.profile_ag(r, q)
    if target == "hyperplanes":
        return counting.count_avoiding_hyperplanes(profile)
    return counting.count_circuit_points(profile)


@dataclass
class EnumerationReport:
    kind: str
    target: str
    r: int
    q: int
    basis: Basis
    constructive: set
    brute: set | None
    formula: int
    closed_form: int
    elapsed: dict = field(default_factory=dict)
    note: str = ""

    @property
    def counts_agree(self) -> bool:
        counts = {len(self.constructive), self.formula, self.closed_form}
        if self.brute is not None:
            counts.add(len(self.brute))
        return len(counts) == 1

    @property
    def sets_agree(self) -> bool | None:
        """None when the oracle was skipped."""
        if self.brute is None:
            return None
        return self.constructive == self.brute

    @property
    def agree(self) -> bool:
        return self.counts_agree and self.sets_agree is not False

    def to_json(self) -> dict:
        return {
            "geometry": self.kind,
            "target": self.target,
            "r": self.r,
            "q": self.q,
            "basis": [list(p.coords) for p in self.basis],
            "constructive": len(self.constructive),
            "brute": None if self.brute is None else len(self.brute),
            "formula": self.formula,
            "closed_form": self.closed_form,
            "counts_agree": self.counts_agree,
            "sets_agree": self.sets_agree,
            "agree": self.agree,
            "elapsed": {k: round(v, 6) for k, v in self.elapsed.items()},
            "note": self.note,
        }


def verify(
    kind: str,
    target: str,
    r: int,
    q: int,
    basis=None,
    seed: int | None = None,
    cap: int | None = None,
) -> EnumerationReport:
    """Run construction, oracle and formula for one cell and compare them.

    The basis is ``basis`` if given, else a random one from ``seed``, else
    the canonical one.  Past the oracle cap only the counts are compared.
    """
    if kind not in KINDS or target not in TARGETS:
        raise ValueError(f"unknown cell {kind}/{target}")
    if r < 2:
        raise ValueError("verify needs r >= 2")
    F = field_of_order(q)
    if basis is None:
        basis = random_basis(kind, r, F, seed) if seed is not None else canonical_basis(kind, r, F)
    basis = as_basis(basis, affine=kind == "ag")
    if basis.r != r or basis.field != F:
        raise ValueError(f"basis does not live in {kind.upper()} r={r} q={q}")
    elapsed = {}

    t = time.perf_counter()
    built = {obj for _, obj in constructive(kind, target, basis)}
    elapsed["constructive"] = time.perf_counter() - t

    t = time.perf_counter()
    formula = formula_count(kind, target, r, q)
    closed = counting.closed_forms(f"{kind}-{target}", r, q)
    elapsed["formula"] = time.perf_counter() - t

    oracle, note = None, ""
    t = time.perf_counter()
    try:
        oracle = brute(kind, target, basis, cap)
    except OracleCapExceeded as e:
        note = f"{e}; formula-only check"
    elapsed["brute"] = time.perf_counter() - t

    return EnumerationReport(kind, target, r, q, basis, built, oracle, formula, closed, elapsed, note)


def order_independence(kind: str, target: str, basis, permutations=None, reverse_sequences: bool = True) -> dict:
    """Output sets for each basis permutation (all r! by default).

    Keys are ``(permutation, reversed)``; with ``reverse_sequences`` every
    permutation is also run with the per-step sequences reversed.
    """
    basis = as_basis(basis, affine=kind == "ag")
    if permutations is None:
        permutations = itertools.permutations(range(basis.r))
    out = {}
    for perm in permutations:
        for rev in (False, True) if reverse_sequences else (False,):
            out[tuple(perm), rev] = {obj for _, obj in constructive(kind, target, basis, perm, rev)}
    return out
