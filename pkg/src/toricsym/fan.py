"""Lattices, rational polyhedral fans and their structural predicates.

Supports the standard lattices Z^n and the two rank-2 lattices carrying a
coordinate-permutation action of the symmetric group on three letters:
the sum-zero sublattice of Z^3 and the quotient Z^3 / Z(1,1,1).

Surface fans are stored with rays sorted counterclockwise starting from
the lexicographically least primitive vector, so equal fans compare equal.
All predicates (complete / simplicial / smooth) are decided exactly.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ParseError, PreconditionError
from .intlin import IntMatrix, Vector, kernel_basis, primitive_vector, smith_normal_form

_S3_PERMUTATIONS = ((0, 1, 2), (1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0), (2, 0, 1))


@dataclass(frozen=True)
class Lattice:
    """A lattice together with its ambient presentation.

    kind "standard": Z^rank, ambient coordinates are lattice coordinates.
    kind "rootA2":   {(x,y,z) in Z^3 : x+y+z = 0} with basis (1,-1,0), (0,1,-1).
    kind "weightA2": Z^3 / Z(1,1,1) with basis the classes of e1, e2.
    """

    kind: str
    rank: int

    def __post_init__(self):
        if self.kind == "standard":
            if self.rank < 1:
                raise ValueError("standard lattice needs rank >= 1")
        elif self.kind in ("rootA2", "weightA2"):
            if self.rank != 2:
                raise ValueError(f"{self.kind} has rank 2")
        else:
            raise ValueError(f"unknown lattice kind {self.kind!r}")

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls("standard", n)

    @classmethod
    def root_a2(cls) -> "Lattice":
        return cls("rootA2", 2)

    @classmethod
    def weight_a2(cls) -> "Lattice":
        return cls("weightA2", 2)

    @property
    def ambient_dim(self) -> int:
        return 3 if self.kind in ("rootA2", "weightA2") else self.rank

    def label(self) -> str:
        return f"standard:{self.rank}" if self.kind == "standard" else self.kind

    @classmethod
    def from_label(cls, label: str) -> "Lattice":
        if label == "rootA2":
            return cls.root_a2()
        if label == "weightA2":
            return cls.weight_a2()
        if label.startswith("standard:"):
            try:
                return cls.standard(int(label.split(":", 1)[1]))
            except ValueError as exc:
                raise ParseError(f"bad lattice label {label!r}") from exc
        raise ParseError(f"unknown lattice label {label!r}")

    def coords(self, v: Sequence[int]) -> Vector:
        """Lattice coordinates of an ambient vector."""
        v = tuple(v)
        if self.kind == "standard":
            if len(v) != self.rank:
                raise PreconditionError("ambient-dim", f"expected length {self.rank}, got {len(v)}")
            return v
        if len(v) != 3:
            raise PreconditionError("ambient-dim", f"{self.kind} vectors live in Z^3, got length {len(v)}")
        x, y, z = v
        if self.kind == "rootA2":
            if x + y + z != 0:
                raise PreconditionError("coordinate-sum", f"{v} has nonzero coordinate sum")
            return (x, -z)
        return (x - z, y - z)

    def embed(self, coords: Sequence[int]) -> Vector:
        """A distinguished ambient representative of lattice coordinates."""
        if self.kind == "standard":
            return tuple(coords)
        a, b = coords
        if self.kind == "rootA2":
            return (a, b - a, -b)
        return (a, b, 0)

    def accept_ray(self, v: Sequence[int]) -> Vector:
        """Interpret a ray given in either lattice or ambient coordinates."""
        v = tuple(v)
        if self.kind != "standard" and len(v) == 3:
            return self.coords(v)
        if len(v) != self.rank:
            raise PreconditionError(
                "ambient-dim",
                f"ray {v} has length {len(v)}, expected {self.rank}"
                + (" or 3" if self.kind != "standard" else ""),
            )
        return v

    def s3_matrices(self) -> tuple[IntMatrix, IntMatrix]:
        """Matrices of the transposition (0 1) and the 3-cycle (0 1 2)."""
        if self.kind == "standard":
            raise PreconditionError("lattice-kind", "coordinate permutations act on the A2 lattices")
        return (self._perm_matrix((1, 0, 2)), self._perm_matrix((1, 2, 0)))

    def _perm_matrix(self, perm: tuple[int, int, int]) -> IntMatrix:
        cols = []
        for j in range(2):
            basis = (1, 0) if j == 0 else (0, 1)
            amb = self.embed(basis)
            moved = [0, 0, 0]
            for i in range(3):
                moved[perm[i]] = amb[i]
            cols.append(self.coords(tuple(moved)))
        return IntMatrix.from_columns(cols)

    def s3_orbit(self, v: Sequence[int]) -> tuple[Vector, ...]:
        """Orbit of a lattice-coordinate vector under coordinate permutations."""
        amb = self.embed(tuple(v))
        seen = []
        for perm in _S3_PERMUTATIONS:
            moved = [0, 0, 0]
            for i in range(3):
                moved[perm[i]] = amb[i]
            w = self.coords(tuple(moved))
            if w not in seen:
                seen.append(w)
        return tuple(sorted(seen))


def lattice_coords(lattice: Lattice, v: Sequence[int]) -> Vector:
    """Coordinates of an ambient vector in the lattice's fixed basis."""
    return lattice.coords(v)


def _cross(v: Vector, w: Vector) -> int:
    return v[0] * w[1] - v[1] * w[0]


def _ccw_sort(rays: Sequence[Vector]) -> list[Vector]:
    """Counterclockwise order starting from the lexicographically least ray."""

    def half(v: Vector) -> int:
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(v: Vector, w: Vector) -> int:
        hv, hw = half(v), half(w)
        if hv != hw:
            return hv - hw
        c = _cross(v, w)
        return -1 if c > 0 else 1

    ordered = sorted(rays, key=functools.cmp_to_key(cmp))
    start = ordered.index(min(ordered))
    return ordered[start:] + ordered[:start]


@dataclass(frozen=True)
class Fan(object):
    """A fan: primitive rays plus maximal cones as ray-index sets.

    Rank-2 fans are canonicalized (rays counterclockwise from the
    lexicographically least vector, cones = adjacent pairs); higher-rank
    fans keep the given ray order and sort the cone list.
    """

    lattice: Lattice
    rays: tuple[Vector, ...]
    max_cones: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def ray_count(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> IntMatrix:
        """Rays as rows (the pairing map of the class-group sequence)."""
        return IntMatrix.from_rows(self.rays)

    def cone_matrix(self, cone: Sequence[int]) -> IntMatrix:
        return IntMatrix.from_rows([self.rays[i] for i in cone])

    def ray_index(self, v: Vector) -> int:
        return self.rays.index(v)

    def canonical_key(self):
        """Order-insensitive identity: sorted rays plus relabelled cones."""
        order = sorted(range(len(self.rays)), key=lambda i: self.rays[i])
        relabel = {old: new for new, old in enumerate(order)}
        cones = tuple(sorted(tuple(sorted(relabel[i] for i in cone)) for cone in self.max_cones))
        return (self.lattice, tuple(self.rays[i] for i in order), cones)

    def is_same_fan(self, other: "Fan") -> bool:
        return self.canonical_key() == other.canonical_key()


def make_fan(lattice: Lattice, rays: Iterable[Sequence[int]], max_cones: Iterable[Sequence[int]] | None = None) -> Fan:
    """Validating constructor; accepts ambient coordinates for A2 lattices."""
    converted = [lattice.accept_ray(v) for v in rays]
    for v in converted:
        if not any(v):
            raise PreconditionError("zero-ray", "zero vector cannot generate a ray")
    prim = [primitive_vector(v) for v in converted]
    if len(set(prim)) != len(prim):
        raise PreconditionError("parallel-rays", "two rays share a primitive generator")

    if lattice.rank == 2 and max_cones is None:
        return build_surface_fan(lattice, prim)

    if lattice.rank == 1:
        cones = tuple((i,) for i in range(len(prim)))
        return Fan(lattice, tuple(prim), cones)

    if max_cones is None:
        raise PreconditionError("cones-required", f"rank-{lattice.rank} fans need explicit max_cones")
    cones = []
    for cone in max_cones:
        idx = tuple(sorted(set(int(i) for i in cone)))
        if any(i < 0 or i >= len(prim) for i in idx):
            raise PreconditionError("cone-index", f"cone {cone} references a missing ray")
        mat = IntMatrix.from_rows([prim[i] for i in idx])
        if mat.rank() != len(idx):
            raise PreconditionError(
                "non-simplicial-cone", f"cone {idx} has linearly dependent generators"
            )
        cones.append(idx)
    if lattice.rank == 2:
        fan = build_surface_fan(lattice, prim)
        given = sorted(tuple(sorted(prim[i] for i in cone)) for cone in cones)
        expected = sorted(tuple(sorted(fan.rays[i] for i in cone)) for cone in fan.max_cones)
        if given != expected:
            raise PreconditionError("cone-mismatch", "explicit surface cones disagree with the complete fan")
        return fan
    return Fan(lattice, tuple(prim), tuple(sorted(set(cones))))


def build_surface_fan(lattice: Lattice, rays: Iterable[Sequence[int]]) -> Fan:
    """Complete surface fan determined by its rays.

    Rays are primitivized and sorted counterclockwise; maximal cones are
    all adjacent pairs.  Raises when fewer than 3 rays remain, when two
    rays are positively parallel, or when some angular gap reaches a half
    turn (the ray set only spans a half-plane).
    """
    if lattice.rank != 2:
        raise PreconditionError("rank", "surface fans have rank 2")
    converted = [lattice.accept_ray(v) for v in rays]
    for v in converted:
        if not any(v):
            raise PreconditionError("zero-ray", "zero vector cannot generate a ray")
    prim = [primitive_vector(v) for v in converted]
    if len(set(prim)) != len(prim):
        raise PreconditionError("parallel-rays", "two rays share a primitive generator")
    if len(prim) < 3:
        raise PreconditionError("too-few-rays", "a complete surface fan needs at least 3 rays")
    ordered = _ccw_sort(prim)
    d = len(ordered)
    for i in range(d):
        if _cross(ordered[i], ordered[(i + 1) % d]) <= 0:
            raise PreconditionError(
                "incomplete", "angular gap of at least a half turn: rays do not span a complete fan"
            )
    cones = tuple(tuple(sorted((i, (i + 1) % d))) for i in range(d))
    return Fan(lattice, tuple(ordered), tuple(sorted(cones)))


@dataclass(frozen=True)
class FanReport:
    """Structural flags of a fan (smooth implies simplicial)."""

    simplicial: bool
    complete: bool
    smooth: bool
    surface_cyclic_order: tuple[int, ...] | None = None


def cone_invariant_factors(fan: Fan, cone: Sequence[int]) -> Vector:
    """Invariant factors of the sublattice spanned by a cone's rays."""
    return smith_normal_form(fan.cone_matrix(cone)).invariant_factors


def _facet_normal(fan: Fan, facet: tuple[int, ...]) -> Vector:
    basis = kernel_basis(IntMatrix.from_rows([fan.rays[i] for i in facet]))
    if len(basis) != 1:
        raise PreconditionError("degenerate-facet", f"facet {facet} does not span a hyperplane")
    return basis[0]


def _complete_rank_ge3(fan: Fan) -> bool:
    n = fan.rank
    if any(len(cone) != n for cone in fan.max_cones):
        return False
    walls: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    for ci, cone in enumerate(fan.max_cones):
        for drop in cone:
            facet = tuple(i for i in cone if i != drop)
            walls.setdefault(facet, []).append((ci, drop))
    for facet, owners in walls.items():
        if len(owners) != 2:
            return False
        normal = _facet_normal(fan, facet)
        sides = []
        for _, opposite in owners:
            s = sum(a * b for a, b in zip(normal, fan.rays[opposite]))
            if s == 0:
                return False
            sides.append(s)
        if sides[0] * sides[1] > 0:
            return False
    # Support connectivity through shared walls.
    adjacency: dict[int, set[int]] = {i: set() for i in range(len(fan.max_cones))}
    for owners in walls.values():
        (a, _), (b, _) = owners
        adjacency[a].add(b)
        adjacency[b].add(a)
    if not fan.max_cones:
        return False
    seen = {0}
    queue = [0]
    while queue:
        for nxt in adjacency[queue.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == len(fan.max_cones)


def validate_fan(fan: Fan) -> FanReport:
    """Exact structural predicates: simplicial, complete, smooth."""
    n = fan.rank
    simplicial = all(
        len(cone) == n and fan.cone_matrix(cone).rank() == n for cone in fan.max_cones
    )
    smooth = simplicial and all(
        all(f == 1 for f in cone_invariant_factors(fan, cone)) for cone in fan.max_cones
    )
    cyclic = None
    if n == 1:
        complete = set(fan.rays) == {(1,), (-1,)}
    elif n == 2:
        d = fan.ray_count
        complete = d >= 3 and all(
            _cross(fan.rays[i], fan.rays[(i + 1) % d]) > 0 for i in range(d)
        )
        if complete:
            cyclic = tuple(range(d))
    else:
        complete = _complete_rank_ge3(fan)
    return FanReport(simplicial=simplicial, complete=complete, smooth=smooth, surface_cyclic_order=cyclic)


def transform_fan(g: IntMatrix, fan: Fan) -> Fan:
    """Image fan under a unimodular matrix (same lattice, same cone labels)."""
    if not g.is_unimodular():
        raise PreconditionError("not-unimodular", "fan transforms must be unimodular")
    images = [g.apply(v) for v in fan.rays]
    if fan.rank == 2:
        return build_surface_fan(fan.lattice, images)
    return Fan(fan.lattice, tuple(images), fan.max_cones)


def _independent_index_subset(fan: Fan) -> tuple[int, ...]:
    for subset in itertools.combinations(range(fan.ray_count), fan.rank):
        if IntMatrix.from_rows([fan.rays[i] for i in subset]).rank() == fan.rank:
            return subset
    raise PreconditionError("rays-do-not-span", "rays do not span the lattice")


def _matrix_sending(basis_vectors: Sequence[Vector], images: Sequence[Vector]) -> IntMatrix | None:
    """The integer matrix g with g b_i = w_i, if one exists."""
    b = IntMatrix.from_columns(basis_vectors)
    w = IntMatrix.from_columns(images)
    det = b.det()
    num = w @ b.adjugate()
    entries = []
    for row in num.entries:
        new_row = []
        for x in row:
            if x % det:
                return None
            new_row.append(x // det)
        entries.append(tuple(new_row))
    return IntMatrix(tuple(entries))


def _induced_ray_map(g: IntMatrix, source: Fan, target: Fan) -> tuple[int, ...] | None:
    """Index map i -> target index of g(source ray i), if g maps rays to rays."""
    index = {v: i for i, v in enumerate(target.rays)}
    mapping = []
    for v in source.rays:
        w = g.apply(v)
        if w not in index:
            return None
        mapping.append(index[w])
    if len(set(mapping)) != len(mapping):
        return None
    target_cones = set(target.max_cones)
    for cone in source.max_cones:
        if tuple(sorted(mapping[i] for i in cone)) not in target_cones:
            return None
    return tuple(mapping)


def _all_isomorphisms(source: Fan, target: Fan) -> list[tuple[tuple[int, ...], IntMatrix]]:
    if source.rank != target.rank:
        raise PreconditionError("rank", "fans of different rank cannot be compared")
    if source.ray_count != target.ray_count or len(source.max_cones) != len(target.max_cones):
        return []
    basis_idx = _independent_index_subset(source)
    basis_vectors = [source.rays[i] for i in basis_idx]
    found = []
    seen = set()
    for images in itertools.permutations(target.rays, source.rank):
        g = _matrix_sending(basis_vectors, images)
        if g is None or not g.is_unimodular():
            continue
        if g.entries in seen:
            continue
        mapping = _induced_ray_map(g, source, target)
        if mapping is not None:
            seen.add(g.entries)
            found.append((mapping, g))
    found.sort(key=lambda pair: pair[0])
    return found


def fan_isomorphism(f1: Fan, f2: Fan) -> IntMatrix | None:
    """A unimodular matrix carrying f1's rays and cones onto f2's, or None.

    The search maps a fixed spanning subset of f1's rays to every ordered
    tuple of f2's rays and keeps integral unimodular fan-preserving
    solutions; among those the one inducing the lexicographically least
    ray-index map is returned, so a fan is carried to itself by the
    identity.
    """
    found = _all_isomorphisms(f1, f2)
    return found[0][1] if found else None
