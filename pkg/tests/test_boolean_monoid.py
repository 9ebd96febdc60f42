import pytest

from workbench.core.boolean_monoid import (
    algebra_dump, algebra_from_dump, check_cycle_law, check_ra_axioms, cm, e_lattice, equivalence_elements,
    fuse_direct, fusion_table, is_abelian, is_dense, is_equivalence_element, is_symmetric,
    lattice_complex_algebra, subalgebra_generated, verify_maddux,
)
from workbench.core.exceptions import FrameInvalid, NotAbelian, NotModular, TooLarge
from workbench.core.kr_frame import frame_from_lattice
from workbench.core.lattice_core import chain, is_modular
from workbench.models.structures import BooleanMonoid
from workbench.utils.bitset import from_indices


class TestComplexAlgebra:
    def test_three_element_chain(self, cm_c3):
        assert cm_c3.atoms == 3 and cm_c3.size == 8
        assert cm_c3.identity == 0b001
        assert cm_c3.fusion_atoms[1][1] == 0b011
        assert cm_c3.fusion_atoms[1][2] == 0b100
        assert cm_c3.fusion_atoms[2][2] == 0b111
        assert cm_c3.labels == ("0", "m", "1")

    def test_fusion_is_additive(self, cm_c3):
        assert cm_c3.fuse(0b010, 0b110) == 0b011 | 0b100
        assert cm_c3.fuse(0, 0b111) == 0

    def test_converse_is_identity(self, cm_m3):
        assert all(cm_m3.converse(x) == x for x in range(cm_m3.size))

    def test_invalid_frame_is_refused(self, n5):
        with pytest.raises(FrameInvalid) as exc:
            lattice_complex_algebra(n5)
        assert not exc.value.witness.all_passed

    def test_waived_frame_breaks_associativity(self, n5):
        A = lattice_complex_algebra(n5, waive=True)
        assert not A.frame_checked
        report = check_ra_axioms(A)
        assert [a.number for a in report.axioms if not a.passed] == [4]
        x, y, z = report.axiom(4).counterexample
        assert A.fuse(x, A.fuse(y, z)) != A.fuse(A.fuse(x, y), z)

    def test_one_atom_algebra(self):
        A = lattice_complex_algebra(chain(1))
        assert A.atoms == 1 and A.identity == A.top == 1
        assert check_ra_axioms(A).all_passed
        assert equivalence_elements(A) == [1]

    def test_dump_round_trip(self, cm_m3):
        rebuilt = algebra_from_dump(algebra_dump(cm_m3))
        assert rebuilt.fusion_atoms == cm_m3.fusion_atoms
        assert rebuilt.identity == cm_m3.identity
        assert rebuilt.converse_atoms == cm_m3.converse_atoms

    def test_frame_oracle_on_small_lattices(self, corpus):
        for _, L in corpus:
            if L.n > 4 or not is_modular(L)[0]:
                continue
            F = frame_from_lattice(L)
            A = cm(F)
            for x in range(A.size):
                for y in range(A.size):
                    assert A.fuse(x, y) == fuse_direct(F, x, y), (L.name, x, y)


class TestFusionTable:
    def test_table_matches_fuse(self, cm_m3):
        table = fusion_table(cm_m3)
        assert table.shape == (32, 32)
        for x in (0, 0b00001, 0b00110, 0b10010, 0b11111):
            for y in range(cm_m3.size):
                assert table[x, y] == cm_m3.fuse(x, y)

    def test_table_is_gated(self, cm_m3):
        with pytest.raises(TooLarge):
            fusion_table(cm_m3, max_exhaustive=3)


class TestAxioms:
    def test_element_level(self, cm_m3):
        report = check_ra_axioms(cm_m3)
        assert report.all_passed
        assert {a.method for a in report.axioms} == {"element-level"}
        assert report.dense and report.symmetric and report.abelian

    def test_atom_level_above_gate(self, cm_m3):
        report = check_ra_axioms(cm_m3, max_exhaustive=3)
        assert report.all_passed
        assert report.element_level_gate == 3
        assert report.axiom(1).method.startswith("structural")
        assert report.axiom(4).method == "atom-level"
        assert report.axiom(10).method == "atom-level (cycle law)"

    def test_size_gate(self, cm_m3):
        with pytest.raises(TooLarge):
            check_ra_axioms(cm_m3, max_n=4)

    def test_cycle_law_violation(self):
        # 1 o 0 contains 1 but 1 o 1 misses 0
        A = BooleanMonoid(atoms=2, fusion_atoms=((0b01, 0b10), (0b10, 0b10)),
                          identity=0b01, converse_atoms=(0, 1), name="broken")
        a, b, c = check_cycle_law(A)
        forward = (A.fusion_atoms[a][b] >> c) & 1
        backward = (A.fusion_atoms[A.converse_atoms[a]][c] >> b) & 1
        assert forward != backward

    def test_modular_corpus_gives_boolean_monoids(self, corpus):
        for _, L in corpus:
            if L.n > 6 or not is_modular(L)[0]:
                continue
            A = lattice_complex_algebra(L)
            report = check_ra_axioms(A)
            assert report.all_passed, L.name
            if L.n > 4:
                above_gate = check_ra_axioms(A, max_exhaustive=4)
                assert above_gate.all_passed and above_gate.axiom(4).method == "atom-level", L.name
            assert is_dense(A) and is_symmetric(A) and is_abelian(A), L.name


class TestEquivalenceElements:
    def test_two_element_chain(self, cm_c2):
        assert equivalence_elements(cm_c2) == [0b01, 0b11]

    def test_predicate(self, cm_c3):
        assert is_equivalence_element(cm_c3, 0b011)
        assert not is_equivalence_element(cm_c3, 0b101)
        assert not is_equivalence_element(cm_c3, 0b010)

    def test_restricted_scan(self, cm_c3):
        assert equivalence_elements(cm_c3, restrict_to=[0, 0b001, 0b110, 0b111]) == [0b001, 0b111]

    def test_e_lattice_of_m3(self, m3, cm_m3):
        E, elements = e_lattice(cm_m3)
        assert E.n == 5
        assert sorted(elements) == sorted(m3.downset(a) for a in m3.elements)
        assert elements[E.bottom] == cm_m3.identity
        assert elements[E.top] == cm_m3.top
        assert is_modular(E)[0]

    def test_e_lattice_rejects_non_abelian(self):
        A = BooleanMonoid(atoms=2, fusion_atoms=((0b01, 0b10), (0b11, 0b11)),
                          identity=0b01, converse_atoms=(0, 1), name="skew")
        with pytest.raises(NotAbelian):
            e_lattice(A)

    def test_e_lattice_size_gate(self, cm_m3):
        with pytest.raises(TooLarge):
            e_lattice(cm_m3, max_n=4)


class TestMaddux:
    def test_m3(self, m3):
        holds, ident = verify_maddux(m3)
        assert holds
        assert ident.ideal_lattice.n == 5
        assert ident.principal[1] == from_indices([0, 1])

    def test_modular_corpus(self, corpus):
        for _, L in corpus:
            if is_modular(L)[0]:
                assert verify_maddux(L)[0], L.name

    def test_non_modular_is_refused(self, n5):
        with pytest.raises(NotModular) as exc:
            verify_maddux(n5)
        assert exc.value.witness is not None


class TestSubalgebraGenerated:
    def test_identity_alone(self, cm_c3):
        sub = subalgebra_generated(cm_c3, [])
        assert sub.atoms == (0b001, 0b110)
        assert sub.elements == (0, 0b001, 0b110, 0b111)

    def test_generator_already_inside(self, cm_c3):
        assert subalgebra_generated(cm_c3, [0b110]).elements == (0, 0b001, 0b110, 0b111)

    def test_generator_splits_to_atoms(self, cm_c3):
        sub = subalgebra_generated(cm_c3, [0b010])
        assert len(sub) == 8
        assert sub.atoms == (0b001, 0b010, 0b100)

    def test_closed_under_operations(self, cm_m3):
        sub = subalgebra_generated(cm_m3, [from_indices([0, 1])])
        for x in sub.elements:
            assert cm_m3.converse(x) in sub
            assert cm_m3.complement(x) in sub
            for y in sub.elements:
                assert cm_m3.fuse(x, y) in sub
                assert x | y in sub
