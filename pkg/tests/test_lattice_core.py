import pytest

from workbench.core.exceptions import ClosureFailure, CycleInCovers, NoBounds, NotALattice, TooLarge
from workbench.core.lattice_core import (
    automorphisms, chain, complete_sublattices, compose, cover_pairs, enumerate_ideals,
    enumerate_lattice_homs, ideals, induced_sublattice, is_complete_sublattice, is_distributive,
    is_epic_sublattice_bounded, is_isomorphism, is_lattice_hom, is_modular, lattice_dump,
    lattice_from_dump, lattice_from_sets, principal_ideal, product, replay_lattice_witness,
    satisfies_dual_identities, sublattice_closure, validate_lattice,
)
from workbench.models.schemas import EpiOutcome
from workbench.utils.bitset import from_indices


class TestValidation:
    def test_chain_bounds_and_tables(self, c3):
        assert (c3.bottom, c3.top) == (0, 2)
        assert c3.j(0, 1) == 1
        assert c3.m(1, 2) == 1
        assert c3.labels == ("0", "m", "1")

    def test_single_element_lattice(self):
        L = chain(1)
        assert L.n == 1 and L.bottom == L.top == 0

    def test_cycle_is_rejected(self):
        with pytest.raises(CycleInCovers):
            validate_lattice([[0, 1], [1, 2], [2, 0]], n=3)

    def test_two_maximal_elements(self):
        with pytest.raises(NoBounds):
            validate_lattice([[0, 1], [0, 2]], n=3)

    def test_pair_without_least_upper_bound(self):
        covers = [[0, 1], [0, 2], [1, 3], [2, 3], [1, 4], [2, 4], [3, 5], [4, 5]]
        with pytest.raises(NotALattice):
            validate_lattice(covers, n=6)

    def test_size_gate(self):
        with pytest.raises(TooLarge):
            validate_lattice([[i, i + 1] for i in range(5)], n=6, max_n=5)

    def test_dump_round_trip(self, m3):
        rebuilt = lattice_from_dump(lattice_dump(m3))
        assert (rebuilt.join == m3.join).all()
        assert (rebuilt.meet == m3.meet).all()
        assert rebuilt.labels == m3.labels

    def test_cover_pairs_is_hasse_diagram(self, c3):
        assert cover_pairs(c3) == [(0, 1), (1, 2)]

    def test_lattice_from_sets(self):
        L = lattice_from_sets([0b00, 0b01, 0b10, 0b11])
        assert L.n == 4 and L.sets[L.top] == 0b11 and L.sets[L.bottom] == 0


class TestIdentities:
    def test_m3_is_modular_not_distributive(self, m3):
        assert is_modular(m3) == (True, None)
        assert not is_distributive(m3)

    def test_n5_witness_violates_modular_law(self, n5):
        modular, (x, y, z) = is_modular(n5)
        assert not modular
        assert n5.le(x, z)
        assert n5.j(x, n5.m(y, z)) != n5.m(n5.j(x, y), z)

    def test_dual_identities_agree_with_modularity(self, corpus):
        for _, L in corpus:
            assert satisfies_dual_identities(L)[0] == is_modular(L)[0], L.name

    def test_products_of_chains_are_distributive(self, c2, c3):
        square = product(c2, c2)
        assert square.n == 4 and is_distributive(square)
        assert is_distributive(product(c2, c3))


class TestSublattices:
    def test_closure_of_two_atoms_in_m3(self, m3):
        assert sublattice_closure(m3, from_indices([1, 2])) == from_indices([0, 1, 2, 4])

    def test_closure_rejects_empty_seed(self, m3):
        with pytest.raises(ValueError):
            sublattice_closure(m3, 0)

    def test_complete_sublattice_requires_bounds(self, c3):
        assert is_complete_sublattice(c3, 0b101)
        assert not is_complete_sublattice(c3, 0b011)

    def test_complete_sublattices_of_m3(self, m3):
        # any set of atoms together with 0 and 1
        assert len(complete_sublattices(m3)) == 8

    def test_complete_sublattices_of_n5_skip_non_closed(self, n5):
        subs = complete_sublattices(n5)
        assert all(is_complete_sublattice(n5, K) for K in subs)
        assert from_indices([0, 4]) in subs

    def test_induced_sublattice(self, m3):
        K, ks = induced_sublattice(m3, from_indices([0, 1, 4]))
        assert ks == (0, 1, 4)
        assert K.n == 3 and K.labels == ("0", "a", "1")

    def test_induced_sublattice_needs_closure(self, m3):
        with pytest.raises(ClosureFailure):
            induced_sublattice(m3, from_indices([1, 2]))


class TestIdeals:
    def test_principal_ideal(self, m3):
        assert principal_ideal(m3, 1).members == from_indices([0, 1])

    def test_finite_ideals_are_principal(self, corpus):
        for _, L in corpus:
            family = enumerate_ideals(L)
            assert sorted(family) == sorted(L.downset(a) for a in L.elements), L.name

    def test_ideal_lattice_of_m3(self, m3):
        Id = ideals(m3)
        assert Id.n == 5
        assert Id.sets[Id.top] == m3.carrier
        assert Id.sets[Id.bottom] == 0b1


class TestHomomorphisms:
    def test_monotone_self_maps_of_a_chain(self, c3):
        assert len(list(enumerate_lattice_homs(c3, c3))) == 10

    def test_bounded_self_maps_of_a_chain(self, c3):
        homs = list(enumerate_lattice_homs(c3, c3, require_bounds=True))
        assert [h.mapping for h in homs] == [(0, 0, 2), (0, 1, 2), (0, 2, 2)]
        assert all(is_lattice_hom(h) and h.preserves_bounds for h in homs)

    def test_m3_has_no_bounded_hom_onto_two_element_chain(self, m3, c2):
        assert list(enumerate_lattice_homs(m3, c2, require_bounds=True)) == []

    def test_automorphisms_of_m3_form_a_group(self, m3):
        group = automorphisms(m3)
        assert len(group) == 6
        assert all(is_isomorphism(h) for h in group)
        mappings = {h.mapping for h in group}
        for f in group:
            for g in group:
                assert compose(f, g).mapping in mappings


class TestEpi:
    def test_chain_bounds_not_epic(self, c3):
        verdict = is_epic_sublattice_bounded(c3, 0b101, [c3])
        assert verdict.outcome == EpiOutcome.NOT_EPIC
        assert verdict.witness.f == [0, 1, 2]
        assert verdict.witness.g == [0, 0, 2]
        assert replay_lattice_witness(verdict.witness)

    def test_whole_lattice_is_epic(self, c3):
        verdict = is_epic_sublattice_bounded(c3, c3.carrier, [c3])
        assert verdict.is_epic
        assert verdict.certificate.targets_examined[0].hom_count == 3

    def test_no_targets(self, c3):
        verdict = is_epic_sublattice_bounded(c3, 0b101, [])
        assert verdict.is_epic
        assert verdict.certificate.note == "no targets examined"

    def test_tampered_witness_fails_replay(self, c3):
        witness = is_epic_sublattice_bounded(c3, 0b101, [c3]).witness
        tampered = witness.model_copy(update={"g": [0, 1, 1]})
        assert not replay_lattice_witness(tampered)


class TestSmallCases:
    def test_chains_are_modular(self, corpus):
        for _, L in corpus:
            if L.name.startswith("C"):
                assert is_modular(L)[0], L.name

    def test_two_chain_has_one_bounded_endomorphism(self, c2):
        homs = list(enumerate_lattice_homs(c2, c2, require_bounds=True))
        assert [h.mapping for h in homs] == [(0, 1)]

    def test_one_element_source_gives_constant_maps(self, c3):
        point = chain(1)
        assert len(list(enumerate_lattice_homs(point, c3))) == c3.n
        assert list(enumerate_lattice_homs(point, c3, require_bounds=True)) == []

    def test_two_chain_ideals(self, c2):
        assert sorted(ideals(c2).sets) == [0b01, 0b11]

    def test_closure_of_bottom(self, m3):
        assert sublattice_closure(m3, 1 << m3.bottom) == 1 << m3.bottom
        assert sublattice_closure(m3, m3.carrier) == m3.carrier
