"""Property checks over small fixed structures"""
from hypothesis import given, settings as hyp_settings, strategies as st

from workbench.core.boolean_monoid import subalgebra_generated
from workbench.core.lattice_core import is_complete_sublattice, sublattice_closure
from workbench.utils.bitset import is_subset, popcount, submasks_ascending

M3_ELEMENTS = st.integers(min_value=0, max_value=31)


@given(x=M3_ELEMENTS, y=M3_ELEMENTS, z=M3_ELEMENTS)
def test_fusion_distributes_over_join(cm_m3, x, y, z):
    assert cm_m3.fuse(x | y, z) == cm_m3.fuse(x, z) | cm_m3.fuse(y, z)
    assert cm_m3.fuse(z, x | y) == cm_m3.fuse(z, x) | cm_m3.fuse(z, y)


@given(x=M3_ELEMENTS, y=M3_ELEMENTS)
def test_fusion_commutes(cm_m3, x, y):
    assert cm_m3.fuse(x, y) == cm_m3.fuse(y, x)


@hyp_settings(max_examples=40, deadline=None)
@given(gens=st.lists(M3_ELEMENTS, max_size=3))
def test_generated_subalgebra_ignores_generator_order(cm_m3, gens):
    forward = subalgebra_generated(cm_m3, gens)
    backward = subalgebra_generated(cm_m3, list(reversed(gens)))
    assert forward.elements == backward.elements
    assert all(g in forward for g in gens)


@given(seed=st.integers(min_value=1, max_value=31))
def test_closure_is_idempotent(n5, seed):
    closed = sublattice_closure(n5, seed)
    assert is_subset(seed, closed)
    assert sublattice_closure(n5, closed) == closed


@given(seed=st.integers(min_value=1, max_value=31))
def test_closure_with_bounds_is_complete(m3, seed):
    closed = sublattice_closure(m3, seed | (1 << m3.bottom) | (1 << m3.top))
    assert is_complete_sublattice(m3, closed)


@given(mask=st.integers(min_value=0, max_value=1023))
def test_submask_enumeration(mask):
    subs = submasks_ascending(mask)
    assert len(subs) == 2 ** popcount(mask)
    assert subs == sorted(set(subs))
    assert all(is_subset(s, mask) for s in subs)
