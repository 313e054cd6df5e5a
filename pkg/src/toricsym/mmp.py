"""Equivariant minimal model program for smooth complete toric surfaces.

A contraction step removes one group orbit of rays whose divisors all have
self-intersection -1 and are pairwise non-adjacent; the driver iterates
until no orbit qualifies and labels the terminal fan.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .fan import Fan, Lattice, build_surface_fan, fan_isomorphism, validate_fan
from .intlin import Vector
from .symmetry import GroupAction, _make_action, ray_orbits


def _require_smooth_complete_surface(fan: Fan, who: str) -> None:
    if fan.rank != 2:
        raise PreconditionError("rank", f"{who} needs a surface fan (rank 2)")
    report = validate_fan(fan)
    if not report.complete:
        raise PreconditionError("incomplete", f"{who} needs a complete fan")
    if not report.smooth:
        raise PreconditionError("not-smooth", f"{who} needs a smooth fan")


@dataclass(frozen=True)
class SelfIntersectionProfile:
    """Per-ray integers a_i with v_{i-1} + v_{i+1} = a_i v_i (cyclic order).

    The boundary divisor of ray i has self-intersection -a_i.
    """

    coefficients: tuple[int, ...]

    @property
    def self_intersections(self) -> tuple[int, ...]:
        return tuple(-a for a in self.coefficients)


def self_intersection_profile(fan: Fan) -> SelfIntersectionProfile:
    """Neighbor-sum coefficients of a smooth complete surface fan."""
    _require_smooth_complete_surface(fan, "the self-intersection profile")
    d = fan.ray_count
    coeffs = []
    for i in range(d):
        prev = fan.rays[(i - 1) % d]
        nxt = fan.rays[(i + 1) % d]
        v = fan.rays[i]
        total = tuple(p + q for p, q in zip(prev, nxt))
        pivot = 0 if v[0] != 0 else 1
        if total[pivot] % v[pivot]:
            raise PreconditionError("profile", f"ray {i}: neighbor sum not a multiple of the ray")
        a = total[pivot] // v[pivot]
        if tuple(a * x for x in v) != total:
            raise PreconditionError("profile", f"ray {i}: neighbor sum is not parallel to the ray")
        coeffs.append(a)
    return SelfIntersectionProfile(tuple(coeffs))


def _adjacent(i: int, j: int, d: int) -> bool:
    return (i - j) % d in (1, d - 1)


def contractible_orbits(fan: Fan, action: GroupAction) -> tuple[tuple[int, ...], ...]:
    """Ray orbits consisting of pairwise non-adjacent (-1)-rays.

    Returned in a deterministic order: by the lexicographically least ray
    vector contained in the orbit.
    """
    if action.fan != fan:
        raise PreconditionError("action-fan", "action was built for a different fan")
    profile = self_intersection_profile(fan)
    d = fan.ray_count
    good = []
    for orbit in ray_orbits(action):
        if any(profile.coefficients[i] != 1 for i in orbit):
            continue
        if any(_adjacent(i, j, d) for i in orbit for j in orbit if i < j):
            continue
        good.append(orbit)
    return tuple(sorted(good, key=lambda orbit: min(fan.rays[i] for i in orbit)))


def remove_ray_orbit(fan: Fan, orbit: tuple[int, ...]) -> Fan:
    """Remove an orbit of rays from a surface fan; no smoothness guarantee.

    This is the raw combinatorial step; the result is re-sorted and must
    merely be a complete surface fan.
    """
    if fan.rank != 2:
        raise PreconditionError("rank", "ray-orbit removal is implemented for surfaces")
    keep = [v for i, v in enumerate(fan.rays) if i not in set(orbit)]
    return build_surface_fan(fan.lattice, keep)


def contract_orbit(fan: Fan, orbit: tuple[int, ...]) -> Fan:
    """Contract a non-adjacent orbit of (-1)-rays; result re-validated smooth."""
    profile = self_intersection_profile(fan)
    d = fan.ray_count
    if any(profile.coefficients[i] != 1 for i in orbit):
        raise PreconditionError("not-minus-one", "orbit contains a ray that is not a (-1)-ray")
    if any(_adjacent(i, j, d) for i in orbit for j in orbit if i < j):
        raise PreconditionError("adjacent-orbit", "orbit contains cyclically adjacent rays")
    result = remove_ray_orbit(fan, orbit)
    report = validate_fan(result)
    if not (report.smooth and report.complete):
        raise PreconditionError("contraction-broke-fan", "contracted fan failed re-validation")
    return result


@dataclass(frozen=True)
class TerminalLabel:
    """Terminal classification: P2, P1xP1, DP6Terminal, Hirzebruch(a), Other."""

    kind: str
    parameter: int | None = None

    def __str__(self) -> str:
        return f"{self.kind}({self.parameter})" if self.parameter is not None else self.kind


P2 = TerminalLabel("P2")
P1XP1 = TerminalLabel("P1xP1")
DP6_TERMINAL = TerminalLabel("DP6Terminal")
OTHER = TerminalLabel("Other")


def _reference_p2() -> Fan:
    return build_surface_fan(Lattice.standard(2), [(1, 0), (0, 1), (-1, -1)])


def _reference_p1xp1() -> Fan:
    return build_surface_fan(Lattice.standard(2), [(1, 0), (-1, 0), (0, 1), (0, -1)])


def _reference_hexagon() -> Fan:
    return build_surface_fan(
        Lattice.standard(2), [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)]
    )


def _reference_hirzebruch(a: int) -> Fan:
    return build_surface_fan(Lattice.standard(2), [(1, 0), (0, 1), (-1, a), (0, -1)])


def classify_terminal(fan: Fan, action: GroupAction | None = None) -> TerminalLabel:
    """Label a fan by comparison with the reference terminal models."""
    d = fan.ray_count
    if d == 3 and fan_isomorphism(fan, _reference_p2()) is not None:
        return P2
    if d == 4:
        if fan_isomorphism(fan, _reference_p1xp1()) is not None:
            return P1XP1
        report = validate_fan(fan)
        if report.smooth and report.complete:
            profile = self_intersection_profile(fan)
            a = max(abs(c) for c in profile.coefficients)
            if a != 0 and fan_isomorphism(fan, _reference_hirzebruch(a)) is not None:
                return TerminalLabel("Hirzebruch", a)
    if d == 6 and fan_isomorphism(fan, _reference_hexagon()) is not None:
        return DP6_TERMINAL
    return OTHER


@dataclass(frozen=True)
class MMPStep:
    """One contraction: the fan before it and the orbit that was removed."""

    fan: Fan
    orbit: tuple[int, ...]
    orbit_rays: tuple[Vector, ...]


@dataclass(frozen=True)
class MMPTrace:
    steps: tuple[MMPStep, ...]
    terminal: Fan
    label: TerminalLabel

    @property
    def step_count(self) -> int:
        return len(self.steps)


def _restrict_action(action: GroupAction, fan: Fan) -> GroupAction:
    return _make_action(fan, action.elements, action.generator_names)


def run_equivariant_mmp(fan: Fan, action: GroupAction, mode: str = "first-orbit"):
    """Run the equivariant contraction loop to a terminal model.

    mode "first-orbit": contract, at each stage, the qualifying orbit that
    contains the lexicographically least ray vector; returns one MMPTrace.
    mode "explore-all": branch over every qualifying orbit and return the
    tuple of all terminal traces in deterministic order.
    """
    _require_smooth_complete_surface(fan, "the equivariant contraction loop")
    if action.fan != fan:
        raise PreconditionError("action-fan", "action was built for a different fan")
    if mode == "first-orbit":
        steps = []
        current, current_action = fan, action
        while True:
            orbits = contractible_orbits(current, current_action)
            if not orbits:
                break
            orbit = orbits[0]
            steps.append(
                MMPStep(fan=current, orbit=orbit, orbit_rays=tuple(current.rays[i] for i in orbit))
            )
            current = contract_orbit(current, orbit)
            current_action = _restrict_action(current_action, current)
        return MMPTrace(tuple(steps), current, classify_terminal(current, current_action))
    if mode == "explore-all":
        traces: list[MMPTrace] = []

        def explore(current: Fan, current_action: GroupAction, steps: tuple[MMPStep, ...]):
            orbits = contractible_orbits(current, current_action)
            if not orbits:
                traces.append(
                    MMPTrace(steps, current, classify_terminal(current, current_action))
                )
                return
            for orbit in orbits:
                nxt = contract_orbit(current, orbit)
                step = MMPStep(
                    fan=current, orbit=orbit, orbit_rays=tuple(current.rays[i] for i in orbit)
                )
                explore(nxt, _restrict_action(current_action, nxt), steps + (step,))

        explore(fan, action, ())
        return tuple(traces)
    raise PreconditionError("mode", f"unknown mode {mode!r}; use 'first-orbit' or 'explore-all'")


@dataclass(frozen=True)
class NeighborOppositionFact:
    """Adjacent (-1)-rays i, i+1 whose outer neighbors sum to zero."""

    left: int
    right: int
    outer_left: Vector
    outer_right: Vector


def check_adjacent_minus_one_rule(fan: Fan) -> tuple[NeighborOppositionFact, ...]:
    """Verify outer-neighbor opposition at every adjacent (-1)-pair.

    For each cyclically adjacent pair of (-1)-rays the two outer neighbors
    must be exact negatives of each other; a violation would mean the fan
    data is internally inconsistent.
    """
    profile = self_intersection_profile(fan)
    d = fan.ray_count
    facts = []
    for i in range(d):
        j = (i + 1) % d
        if profile.coefficients[i] == 1 and profile.coefficients[j] == 1:
            outer_left = fan.rays[(i - 1) % d]
            outer_right = fan.rays[(j + 1) % d]
            if tuple(a + b for a, b in zip(outer_left, outer_right)) != (0,) * fan.rank:
                raise AssertionError(
                    f"outer neighbors of adjacent (-1)-rays {i},{j} do not oppose"
                )
            facts.append(NeighborOppositionFact(i, j, outer_left, outer_right))
    return tuple(facts)
