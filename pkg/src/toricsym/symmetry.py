"""Finite group actions on a lattice preserving a fan.

Groups are stored as explicit unimodular matrices; the induced ray
permutations are derived from them, never the other way round.  Includes
the brute-force fan automorphism search, orbit machinery, the invariant
Picard number, the centralizer computation and the classification of
quadratic Galois twists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PreconditionError
from .fan import Fan, _all_isomorphisms, _induced_ray_map
from .intlin import IntMatrix, Vector, kernel_basis

Perm = tuple[int, ...]


@dataclass(frozen=True)
class GroupAction:
    """A finite group of unimodular matrices preserving a fan."""

    fan: Fan
    elements: tuple[IntMatrix, ...]
    ray_perms: tuple[Perm, ...]
    generator_names: tuple[str, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def faithful_on_rays(self) -> bool:
        return len(set(self.ray_perms)) == len(self.elements)

    def identity_index(self) -> int:
        ident = IntMatrix.identity(self.fan.rank)
        return self.elements.index(ident)


def _perm_of(fan: Fan, g: IntMatrix) -> Perm:
    mapping = _induced_ray_map(g, fan, fan)
    if mapping is None:
        raise PreconditionError("not-fan-preserving", "matrix does not preserve the fan")
    return mapping


def _close_under_composition(fan: Fan, generators: Sequence[IntMatrix], cap: int) -> list[IntMatrix]:
    ident = IntMatrix.identity(fan.rank)
    seen = {ident.entries: ident}
    queue = [ident]
    while queue:
        current = queue.pop()
        for g in generators:
            nxt = g @ current
            if nxt.entries not in seen:
                if len(seen) >= cap:
                    raise PreconditionError(
                        "closure-cap",
                        f"group closure exceeded the configured bound of {cap} elements",
                    )
                seen[nxt.entries] = nxt
                queue.append(nxt)
    return list(seen.values())


def _make_action(fan: Fan, elements: Iterable[IntMatrix], names: Sequence[str] = ()) -> GroupAction:
    pairs = sorted(((_perm_of(fan, g), g) for g in elements), key=lambda p: p[0])
    return GroupAction(
        fan=fan,
        elements=tuple(g for _, g in pairs),
        ray_perms=tuple(p for p, _ in pairs),
        generator_names=tuple(names),
    )


def trivial_action(fan: Fan) -> GroupAction:
    return _make_action(fan, [IntMatrix.identity(fan.rank)])


def fan_automorphisms(fan: Fan) -> GroupAction:
    """The full finite group Aut(N, fan) by brute force.

    A spanning subset of the rays is mapped to every ordered ray tuple;
    integral unimodular fan-preserving solutions are kept and closed under
    composition.
    """
    matrices = [g for _, g in _all_isomorphisms(fan, fan)]
    closed = _close_under_composition(fan, matrices, cap=max(10_000, 4 * len(matrices)))
    return _make_action(fan, closed)


def action_from_generators(
    fan: Fan,
    generators: Sequence[IntMatrix],
    names: Sequence[str] = (),
    cap: int = 10_000,
) -> GroupAction:
    """Closure of generator matrices acting on the fan.

    Each generator must be unimodular and fan-preserving; the closure must
    stay below ``cap`` elements (a runaway closure means a generator does
    not have finite order on the fan).
    """
    for g in generators:
        if g.rows != fan.rank or g.cols != fan.rank:
            raise PreconditionError("shape", "generator shape does not match the lattice rank")
        if not g.is_unimodular():
            raise PreconditionError("not-unimodular", "generator is not unimodular")
        _perm_of(fan, g)
    closed = _close_under_composition(fan, list(generators), cap)
    return _make_action(fan, closed, names)


def ray_orbits(action: GroupAction) -> tuple[tuple[int, ...], ...]:
    """Orbit partition of the ray indices, ordered by least member."""
    d = action.fan.ray_count
    remaining = set(range(d))
    orbits = []
    while remaining:
        seed = min(remaining)
        orbit = {seed}
        frontier = [seed]
        while frontier:
            i = frontier.pop()
            for perm in action.ray_perms:
                j = perm[i]
                if j not in orbit:
                    orbit.add(j)
                    frontier.append(j)
        orbits.append(tuple(sorted(orbit)))
        remaining -= orbit
    return tuple(orbits)


def fixed_space_dimension(action: GroupAction) -> int:
    """Dimension of the common fixed subspace of all group elements."""
    n = action.fan.rank
    rows = []
    ident = IntMatrix.identity(n)
    for g in action.elements:
        if g == ident:
            continue
        for gi, ii in zip(g.entries, ident.entries):
            rows.append(tuple(a - b for a, b in zip(gi, ii)))
    if not rows:
        return n
    return n - IntMatrix.from_rows(rows).rank()


def invariant_picard_number(fan: Fan, action: GroupAction) -> int:
    """Rank of the invariant part of the real Picard group.

    Equals the number of ray orbits minus the dimension of the fixed
    subspace of the lattice action (the invariant-part exact sequence of
    the divisor sequence).
    """
    return len(ray_orbits(action)) - fixed_space_dimension(action)


def centralizer_in_GL(action: GroupAction) -> tuple[IntMatrix, ...]:
    """All unimodular matrices commuting with every element of the group.

    Solves the commutation system exactly; when the commutant is the line
    through the identity the unimodular points are exactly +-identity.
    Larger commutants may contain infinitely many unimodular points, so
    they are reported as an error rather than enumerated.
    """
    n = action.fan.rank
    if n > 3:
        raise PreconditionError("rank", "centralizer computation is limited to rank <= 3")
    rows = []
    for g in action.elements:
        # (gX - Xg)[i][j] = sum_k g[i][k] X[k][j] - X[i][k] g[k][j] = 0
        for i in range(n):
            for j in range(n):
                row = [0] * (n * n)
                for k in range(n):
                    row[k * n + j] += g.entries[i][k]
                    row[i * n + k] -= g.entries[k][j]
                rows.append(tuple(row))
    basis = kernel_basis(IntMatrix.from_rows(rows))
    dim = len(basis)
    if dim != 1:
        raise PreconditionError(
            "commutant-too-large",
            f"commutant has dimension {dim}; unimodular points are not enumerable by this routine",
        )
    ident = IntMatrix.identity(n)
    return (ident, -ident)


class GaloisForm(enum.Enum):
    SPLIT = "split"
    NEGATION_TWIST = "negation-twist"
    FACTOR_SWAP = "factor-swap"
    OTHER = "other"


@dataclass(frozen=True)
class GaloisDatum:
    """Order <= 2 lattice involution encoding a quadratic descent datum."""

    tau: IntMatrix
    extension: str = "quadratic"

    def __post_init__(self):
        n = self.tau.rows
        if self.tau.cols != n:
            raise ValueError("tau must be square")
        if (self.tau @ self.tau) != IntMatrix.identity(n):
            raise ValueError("tau must square to the identity")


@dataclass(frozen=True)
class FormClass:
    label: GaloisForm
    tau: IntMatrix


def _is_block_swap_permutation(tau: IntMatrix) -> bool:
    """Fixed-point-free involutive permutation matrix (a factor swap)."""
    n = tau.rows
    perm = []
    for j in range(n):
        col = tau.column(j)
        if sorted(col) != [0] * (n - 1) + [1]:
            return False
        perm.append(col.index(1))
    if any(perm[i] == i for i in range(n)):
        return False
    return all(perm[perm[i]] == i for i in range(n))


def classify_galois_form(fan: Fan, action: GroupAction, datum: GaloisDatum) -> FormClass:
    """Classify a descent datum as split / negation twist / factor swap.

    Requires tau to preserve the fan and to commute with the whole group
    (otherwise the finite action cannot descend through the twist, which
    is reported as an error).
    """
    tau = datum.tau
    _perm_of(fan, tau)
    for g in action.elements:
        if (g @ tau) != (tau @ g):
            raise PreconditionError(
                "galois-noncommuting",
                "tau does not commute with the group action; the action does not descend",
            )
    n = fan.rank
    if tau == IntMatrix.identity(n):
        return FormClass(GaloisForm.SPLIT, tau)
    if tau == -IntMatrix.identity(n):
        return FormClass(GaloisForm.NEGATION_TWIST, tau)
    if _is_block_swap_permutation(tau):
        return FormClass(GaloisForm.FACTOR_SWAP, tau)
    return FormClass(GaloisForm.OTHER, tau)
