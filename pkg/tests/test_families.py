import random

import pytest

from toricsym import families
from toricsym.divisors import ray_blocks, relation_lattice
from toricsym.errors import PreconditionError
from toricsym.fan import Lattice, fan_isomorphism, transform_fan, validate_fan
from toricsym.intlin import IntMatrix, smith_normal_form
from toricsym.mmp import DP6_TERMINAL, P2, run_equivariant_mmp
from toricsym.symmetry import GaloisForm, classify_galois_form, ray_orbits


class TestNamedFamilies:
    def test_projective_space_shapes(self):
        for n in range(1, 5):
            fan = families.projective_space(n)
            assert fan.ray_count == n + 1
            assert len(fan.max_cones) == n + 1
            report = validate_fan(fan)
            assert report.simplicial and report.complete and report.smooth

    def test_weighted_space_relation(self):
        fan = families.weighted_p1111m(2)
        assert relation_lattice(fan).basis == ((1, 1, 1, 1, 2),)
        assert ray_blocks(fan).sizes == (4, 1)

    def test_weighted_space_smooth_only_at_one(self):
        assert validate_fan(families.weighted_p1111m(1)).smooth
        assert not validate_fan(families.weighted_p1111m(2)).smooth

    def test_bundle_blocks(self):
        assert ray_blocks(families.bundle_over_p3(2)).sizes == (4, 1, 1)
        assert ray_blocks(families.bundle_over_p3(0)).sizes == (4, 2)

    def test_weighted_plane_flags(self):
        fan = families.weighted_p11a(3)
        report = validate_fan(fan)
        assert report.complete and report.simplicial and not report.smooth
        assert validate_fan(families.weighted_p11a(1)).smooth

    def test_singular_hexagon_flags(self):
        report = validate_fan(families.singular_hexagon())
        assert report.complete and report.simplicial and not report.smooth

    def test_q22_is_the_negation_twisted_hexagon(self):
        fan, datum = families.q22()
        action = families.standard_s3_action(fan)
        form = classify_galois_form(fan, action, datum)
        assert form.label is GaloisForm.NEGATION_TWIST
        assert fan.is_same_fan(families.dp6("n2"))

    def test_weil_restriction_is_the_factor_swapped_square(self, square_fan):
        fan, datum = families.weil_restriction_p1()
        assert fan == square_fan
        from toricsym.symmetry import trivial_action

        form = classify_galois_form(fan, trivial_action(fan), datum)
        assert form.label is GaloisForm.FACTOR_SWAP

    def test_descriptor_grammar(self):
        fan, datum = families.make_family_fan("weighted-p1111m:2")
        assert fan.ray_count == 5 and datum is None
        fan, datum = families.make_family_fan("q22")
        assert datum is not None
        with pytest.raises(PreconditionError):
            families.make_family_fan("nonesuch")
        with pytest.raises(PreconditionError):
            families.make_family_fan("hirzebruch:x")
        with pytest.raises(PreconditionError):
            families.make_family_fan("weighted-p1111m:0")

    def test_every_family_output_validates(self):
        from toricsym.acceptance import named_family_corpus

        smooth_exceptions = {"weighted-p11a", "weighted-p1111m", "singular-hexagon"}
        for name, fan in named_family_corpus():
            report = validate_fan(fan)
            assert report.complete and report.simplicial, name
            family = name.split(":")[0]
            if family == "weighted-p11a":
                assert report.smooth == (name == "weighted-p11a:1")
            elif family == "weighted-p1111m":
                assert report.smooth == (name == "weighted-p1111m:1")
            elif family == "singular-hexagon":
                assert not report.smooth
            else:
                assert report.smooth, name


class TestOrbitFans:
    def test_triangle_from_one_orbit(self):
        fan = families.s3_orbit_fan(Lattice.weight_a2(), [(1, 0, 0)])
        assert fan.ray_count == 3
        assert fan_isomorphism(fan, families.projective_space(2)) is not None

    def test_hexagon_from_two_orbits(self, hexagon_n2):
        fan = families.s3_orbit_fan(Lattice.weight_a2(), [(1, 0, 0), (0, 0, -1)])
        assert fan == hexagon_n2
        assert set(fan.rays) == {(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)}

    def test_second_orbit_is_the_negation_of_the_first(self, hexagon_n2):
        action = families.standard_s3_action(hexagon_n2)
        first, second = ray_orbits(action)
        negated = sorted(tuple(-x for x in hexagon_n2.rays[i]) for i in first)
        assert negated == sorted(hexagon_n2.rays[i] for i in second)

    def test_singular_hexagon_is_one_orbit_of_six(self):
        fan = families.s3_orbit_fan(Lattice.root_a2(), [(3, -1, -2)])
        assert fan.ray_count == 6
        action = families.standard_s3_action(fan)
        assert [len(o) for o in ray_orbits(action)] == [6]

    def test_orbit_fans_are_invariant_by_construction(self):
        for lattice in (Lattice.root_a2(), Lattice.weight_a2()):
            fan = families.s3_orbit_fan(lattice, [(2, -1, -1)], include_negation=True)
            action = families.standard_s3_action(fan, include_negation=True)
            assert action.order == 12

    def test_zero_seed_is_rejected(self):
        with pytest.raises(PreconditionError):
            families.s3_orbit_fan(Lattice.weight_a2(), [(1, 1, 1)])


class TestEnumerator:
    def test_height_one_weight_lattice_contains_triangle_and_hexagon(self, hexagon_n2):
        fans = families.enumerate_invariant_fans(
            Lattice.weight_a2(), height=1, max_rays=6, require_smooth=True
        )
        counts = sorted(f.ray_count for f in fans)
        assert 3 in counts and 6 in counts
        hexagons = [f for f in fans if f.ray_count == 6]
        assert any(fan_isomorphism(f, hexagon_n2) is not None for f in hexagons)

    def test_height_one_root_lattice_contains_the_hexagon(self, hexagon_n1):
        fans = families.enumerate_invariant_fans(
            Lattice.root_a2(), height=1, max_rays=6, require_smooth=True
        )
        assert any(fan_isomorphism(f, hexagon_n1) is not None for f in fans)

    @pytest.mark.parametrize("lattice", [Lattice.root_a2(), Lattice.weight_a2()])
    def test_three_ray_census_is_all_triangles(self, lattice):
        fans = families.enumerate_invariant_fans(lattice, height=1, max_rays=3, require_smooth=True)
        triangle = families.projective_space(2)
        for fan in fans:
            assert fan.ray_count == 3
            assert fan_isomorphism(fan, triangle) is not None

    def test_census_is_isomorphism_deduplicated(self):
        fans = families.enumerate_invariant_fans(
            Lattice.weight_a2(), height=2, max_rays=12, require_smooth=True
        )
        for i, f1 in enumerate(fans):
            for f2 in fans[i + 1 :]:
                assert fan_isomorphism(f1, f2) is None

    def test_census_mmp_terminates_at_triangle_or_hexagon(self):
        for lattice in (Lattice.root_a2(), Lattice.weight_a2()):
            for fan in families.enumerate_invariant_fans(
                lattice, height=2, max_rays=12, require_smooth=True
            ):
                action = families.standard_s3_action(fan)
                for trace in run_equivariant_mmp(fan, action, mode="explore-all"):
                    assert trace.label in (P2, DP6_TERMINAL)
                    # terminal dichotomy: an order-6 faithful ray action
                    # only survives on 3 or 6 rays
                    assert trace.terminal.ray_count in (3, 6)

    def test_negation_census_terminates_at_the_hexagon(self):
        for lattice in (Lattice.root_a2(), Lattice.weight_a2()):
            for fan in families.enumerate_invariant_fans(
                lattice, height=2, max_rays=12, require_smooth=True, include_negation=True
            ):
                action = families.standard_s3_action(fan, include_negation=True)
                for trace in run_equivariant_mmp(fan, action, mode="explore-all"):
                    if trace.terminal.ray_count == 6:
                        assert trace.label == DP6_TERMINAL


class TestCriteriaTables:
    def test_weighted_parity(self):
        assert families.s6_on_weighted_p1111m(4)
        assert not families.s6_on_weighted_p1111m(3)
        with pytest.raises(PreconditionError):
            families.s6_on_weighted_p1111m(0)

    def test_bundle_parity(self):
        assert families.s6_on_bundle_over_p3(0)
        assert families.s6_on_bundle_over_p3(-2)
        assert not families.s6_on_bundle_over_p3(5)

    def test_closed_field_table(self):
        entry = families.max_symmetric_degree(4, "C")
        assert entry.degree == 6
        assert len(entry.varieties) == 4
        assert families.max_symmetric_degree(2, "C").degree == 5
        assert families.max_symmetric_degree(7, "C").degree == 9

    def test_star_field_table(self):
        entry = families.max_symmetric_degree(2, "star")
        assert entry.degree == 4 and entry.infinite_family
        assert families.max_symmetric_degree(1, "star").degree == 3
        assert families.max_symmetric_degree(3, "star").degree == 5

    def test_queries_outside_the_tables_fail(self):
        with pytest.raises(PreconditionError):
            families.max_symmetric_degree(0, "C")
        with pytest.raises(PreconditionError):
            families.max_symmetric_degree(2, "F_p")

    def test_query_dispatcher(self):
        assert families.symmetric_action_criteria("s6-on-weighted-p1111m:4") is True
        assert families.symmetric_action_criteria("s6-on-weighted-p1111m:3") is False
        assert families.symmetric_action_criteria("s6-on-bundle-over-p3:2") is True
        entry = families.symmetric_action_criteria("max-degree:4:C")
        assert entry.degree == 6
        assert families.symmetric_action_criteria("max-degree:2:star").degree == 4
        with pytest.raises(PreconditionError):
            families.symmetric_action_criteria("max-degree:banana:C")
        with pytest.raises(PreconditionError):
            families.symmetric_action_criteria("something-else")


class TestDiagonalObstruction:
    @pytest.mark.parametrize("a", [0, 1, 2])
    def test_swap_exchanges_the_subdivisions(self, a):
        report = families.check_diagonal_obstruction(a)
        assert report.swap_sends_first_to_second
        assert report.swap_sends_second_to_first
        assert not report.swap_fixes_first
        assert not report.swap_fixes_second
        assert report.swap_preserves_full_fan
        assert report.obstructed

    def test_full_fan_is_a_genuine_fan(self):
        for a in (0, 1, 2):
            report = validate_fan(families.bundle_over_p1xp1(a))
            assert report.complete and report.simplicial and report.smooth


class TestKleinExtension:
    @pytest.mark.parametrize("lattice", [Lattice.root_a2(), Lattice.weight_a2()])
    def test_order_24_with_trivial_center(self, lattice):
        order, center = families.klein_four_extension(lattice)
        assert order == 24
        assert center == 1


class TestWeightedSpaceUniqueness:
    """Any lattice presentation of the 5-ray data is isomorphic to the model."""

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_unimodular_rebasing_recovers_the_model(self, m):
        model = families.weighted_p1111m(m)
        # v1, v2, v3, v5 form a lattice basis, so any unimodular change of
        # coordinates produces the same fan up to isomorphism
        basis = IntMatrix.from_rows([model.rays[i] for i in (0, 1, 2, 4)])
        assert all(f == 1 for f in smith_normal_form(basis).invariant_factors)
        rng = random.Random(m)
        for _ in range(3):
            g = random_unimodular(rng)
            moved = transform_fan(g, model)
            assert fan_isomorphism(moved, model) is not None


def random_unimodular(rng, n=4, steps=6):
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        k = rng.choice([-2, -1, 1, 2])
        for c in range(n):
            m[i][c] += k * m[j][c]
    return IntMatrix.from_rows(m)


class TestRandomBlowups:
    def test_reproducible_and_smooth(self):
        rng1, rng2 = random.Random(7), random.Random(7)
        f1 = families.random_blowup_surface_fan(rng1)
        f2 = families.random_blowup_surface_fan(rng2)
        assert f1 == f2
        report = validate_fan(f1)
        assert report.smooth and report.complete


class TestEnumeratorDeterminism:
    def test_repeated_runs_agree(self):
        kwargs = dict(height=2, max_rays=12, require_smooth=True)
        first = families.enumerate_invariant_fans(Lattice.weight_a2(), **kwargs)
        second = families.enumerate_invariant_fans(Lattice.weight_a2(), **kwargs)
        assert first == second
