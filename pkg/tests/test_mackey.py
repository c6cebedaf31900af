import math

import pytest
from hypothesis import given, strategies as st

from profspan import groups as g
from profspan import gsets as gs
from profspan import mackey as mk
from profspan import spans as sp
from profspan.corpus import corpus_group, groups_of_order_at_most
from profspan.errors import GroupMismatch, IncoherentFamily


C2 = g.cyclic(2)
C4 = g.cyclic(4)
C6 = g.cyclic(6)


def test_normalize_factors():
    assert mk.normalize_factors(()) == ()
    assert mk.normalize_factors((4, 6)) == (2, 12)
    assert mk.normalize_factors((6, 4)) == (2, 12)
    assert mk.normalize_factors((12, 18)) == (6, 36)
    assert mk.normalize_factors((2, 2)) == (2, 2)


@given(st.lists(st.integers(min_value=2, max_value=200), max_size=6))
def test_normalize_factors_properties(factors):
    out = mk.normalize_factors(factors)
    assert math.prod(out) == math.prod(factors)
    for a, b in zip(out, out[1:]):
        assert b % a == 0


def test_ab_presentation_validation():
    with pytest.raises(ValueError):
        mk.AbPresentation(-1)
    with pytest.raises(ValueError):
        mk.AbPresentation(0, (3, 2))
    with pytest.raises(ValueError):
        mk.AbPresentation(0, (1,))
    p = mk.make_ab(1, (6, 4))
    assert p.rank == 1 and p.invariant_factors == (2, 12)
    assert p.dims == 3 and p.orders() == (0, 2, 12)


@given(
    st.integers(min_value=0, max_value=3),
    st.lists(st.integers(min_value=2, max_value=30), max_size=3),
    st.integers(min_value=0, max_value=3),
    st.lists(st.integers(min_value=2, max_value=30), max_size=3),
)
def test_direct_sum_commutative(r1, f1, r2, f2):
    a = mk.make_ab(r1, f1)
    b = mk.make_ab(r2, f2)
    assert a.direct_sum(b) == b.direct_sum(a)


def test_burnside_mackey_trivial_group():
    M = mk.burnside_mackey(g.cyclic(1))
    assert M.levels == (mk.AbPresentation(1),)
    assert mk.check_mackey(M)


def test_burnside_mackey_c2_ranks():
    M = mk.burnside_mackey(C2)
    assert tuple(lv.rank for lv in M.levels) == (1, 2)
    assert mk.check_mackey(M)


def test_burnside_mackey_rank_oracle():
    # rank at class H = number of conjugacy classes of subgroups of H
    for name, G in groups_of_order_at_most(8):
        M = mk.burnside_mackey(G)
        lat = g.subgroup_lattice(G)
        for c in range(lat.num_classes):
            H = lat.class_rep(c)
            sub = g.make_group(
                [
                    [H.elements.index(G.mul(a, b)) for b in H.elements]
                    for a in H.elements
                ]
            )
            assert M.levels[c].rank == g.subgroup_lattice(sub).num_classes, (name, c)


def test_burnside_mackey_c6_divisor_lattice_shape():
    M = mk.burnside_mackey(C6)
    lat = g.subgroup_lattice(C6)
    assert lat.num_classes == 4
    orders = [lat.class_rep(c).order for c in range(4)]
    assert orders == [1, 2, 3, 6]
    assert [lv.rank for lv in M.levels] == [1, 2, 2, 4]
    assert mk.check_mackey(M)
    # res/tr spans exist exactly between divisor-comparable levels
    for c1 in range(4):
        for c2 in range(4):
            keys = mk._orbit_basis(C6, c1, c2)
            endpoint_apex = any(k[0] in (c1, c2) for k in keys)
            comparable = (
                orders[c1] % orders[c2] == 0 or orders[c2] % orders[c1] == 0
            )
            assert endpoint_apex == comparable, (c1, c2)


def test_check_mackey_corpus_small():
    for name, G in groups_of_order_at_most(8):
        assert mk.check_mackey(mk.burnside_mackey(G)), name


def test_check_mackey_detects_corruption():
    M = mk.burnside_mackey(C2)
    bad_action = dict(M.gen_action)
    key = next(k for k in bad_action if k[0] != k[1])
    mat = bad_action[key]
    bad_action[key] = tuple(
        tuple(v + (1 if (i, j) == (0, 0) else 0) for j, v in enumerate(row))
        for i, row in enumerate(mat)
    )
    bad = mk.MackeyFunctor(C2, M.levels, bad_action)
    verdict = mk.check_mackey(bad)
    assert not verdict and verdict.reason == "composition law fails"


def test_check_mackey_zero_functor():
    assert mk.check_mackey(mk.zero_mackey(C4))


def test_check_mackey_mod_2_coefficients():
    M = mk.reduce_mod(mk.burnside_mackey(C2), 2)
    assert all(lv.rank == 0 for lv in M.levels)
    assert M.levels[1].invariant_factors == (2, 2)
    assert mk.check_mackey(M)


def test_check_mackey_torsion_well_definedness():
    # Z/2 at the free orbit, Z at the point orbit: a nonzero map
    # Z/2 -> Z cannot be well defined
    M = mk.burnside_mackey(C2)
    levels = (mk.AbPresentation(0, (2,)), mk.AbPresentation(1))
    gen_action = {}
    for (c1, c2, key) in M.gen_action:
        rows = levels[c2].dims
        cols = levels[c1].dims
        if c1 == c2 and rows == cols:
            gen_action[(c1, c2, key)] = mk._identity(rows)
        else:
            gen_action[(c1, c2, key)] = mk._zeros(rows, cols)
    ok_shape = mk.MackeyFunctor(C2, levels, gen_action)
    bad_key = next(k for k in gen_action if k[0] == 0 and k[1] == 1)
    bad_action = dict(gen_action)
    bad_action[bad_key] = ((1,),)
    verdict = mk.check_mackey(mk.MackeyFunctor(C2, levels, bad_action))
    assert not verdict and verdict.reason == "matrix not well defined on torsion"


def test_fixed_points_trivial_kernel():
    M = mk.burnside_mackey(C4)
    same = mk.categorical_fixed_points(M, g.make_subgroup(C4, (0,)))
    assert mk._same_mackey(M, same) is None


def test_fixed_points_whole_group():
    M = mk.burnside_mackey(C4)
    top = mk.categorical_fixed_points(M, g.make_subgroup(C4, (0, 1, 2, 3)))
    assert len(top.levels) == 1
    assert top.levels[0] == M.levels[-1]
    assert mk.check_mackey(top)


def test_fixed_points_c4_levels():
    M = mk.burnside_mackey(C4)
    fp = mk.categorical_fixed_points(M, g.make_subgroup(C4, (0, 2)))
    assert fp.group == C2
    # levels are the C4 levels at the preimage classes: C2 and C4
    assert [lv.rank for lv in fp.levels] == [2, 3]
    assert mk.check_mackey(fp)


def test_fixed_points_two_steps_equal_composite():
    t = g.cyclic_tower(2, 3)
    M = mk.burnside_mackey(t.stages[2])
    one = mk.categorical_fixed_points(M, t.links[1].kernel)
    two = mk.categorical_fixed_points(one, t.links[0].kernel)
    direct = mk.categorical_fixed_points(M, t.projection(2, 0).kernel)
    assert mk._same_mackey(two, direct) is None


def test_assemble_from_tower_roundtrip():
    t = g.cyclic_tower(2, 2)
    family = mk.tower_family(t, mk.burnside_mackey(t.stages[-1]))
    report = mk.assemble_from_tower(t, family)
    assert report.mackey is family[-1]
    assert report.render().splitlines()[0] == "PASS"


def test_assemble_from_tower_depth_1():
    t = g.cyclic_tower(3, 1)
    M = mk.burnside_mackey(t.stages[0])
    assert mk.assemble_from_tower(t, [M]).mackey is M


def test_assemble_from_tower_rejects_zero_stage():
    t = g.cyclic_tower(2, 2)
    family = mk.tower_family(t, mk.burnside_mackey(t.stages[-1]))
    family[0] = mk.zero_mackey(t.stages[0])
    with pytest.raises(IncoherentFamily) as err:
        mk.assemble_from_tower(t, family)
    assert err.value.stage == 0


def test_evaluate():
    M = mk.burnside_mackey(C4)
    assert mk.evaluate(M, gs.empty_gset(C4)) == mk.ZERO_AB
    X = gs.canonical_gset(C4, (1,))
    assert mk.evaluate(M, X) == M.levels[1]
    XX = gs.coproduct(X, X)[0]
    doubled = mk.evaluate(M, XX)
    assert doubled.rank == 2 * M.levels[1].rank
    with pytest.raises(GroupMismatch):
        mk.evaluate(M, gs.point_gset(C2))


def test_evaluate_additive_over_coproduct():
    M = mk.burnside_mackey(C6)
    A = gs.canonical_gset(C6, (0, 2))
    B = gs.canonical_gset(C6, (1, 3))
    AB = gs.coproduct(A, B)[0]
    assert mk.evaluate(M, AB) == mk.evaluate(M, A).direct_sum(mk.evaluate(M, B))
