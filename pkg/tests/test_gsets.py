import itertools

import pytest

from profspan import groups as g
from profspan import gsets as gs
from profspan.corpus import corpus_group
from profspan.errors import GroupMismatch


C2 = g.cyclic(2)
C4 = g.cyclic(4)
S3 = g.symmetric3()


def regular(G):
    """G acting on itself by left multiplication."""
    return gs.make_gset(
        G, [[G.mul(gg, x) for gg in G.elements()] for x in G.elements()]
    )


def brute_force_homs(X, Y):
    """Oracle: filter all set maps for equivariance."""
    out = []
    for values in itertools.product(range(Y.size), repeat=X.size):
        if all(
            values[X.action[x][h]] == Y.action[values[x]][h]
            for x in X.points()
            for h in X.group.elements()
        ):
            out.append(values)
    return sorted(out)


def test_make_gset_rejects_bad_action():
    with pytest.raises(ValueError):
        gs.make_gset(C2, [[1, 0]])  # identity must fix every point
    with pytest.raises(ValueError):
        gs.make_gset(C4, [[0, 1], [1, 2]])


def test_orbit_decompose_empty():
    assert gs.orbit_decompose(gs.empty_gset(C2)) == []


def test_orbit_decompose_regular_c2():
    dec = gs.orbit_decompose(regular(C2))
    assert len(dec) == 1
    H, mult = dec[0]
    assert H.elements == (0,) and mult == 1


def test_orbit_decompose_s3_points():
    # S3 = dihedral(3) acts on 3 points; stabilizers are the reflections
    X = gs.coset_gset(S3, g.subgroup_lattice(S3).subgroups[1].elements)
    perm_action = gs.make_gset(
        S3,
        [[X.action[x][gg] for gg in S3.elements()] for x in range(3)],
    )
    dec = gs.orbit_decompose(perm_action)
    assert len(dec) == 1
    H, mult = dec[0]
    assert H.order == 2 and mult == 1
    assert sum(S3.order // h.order * m for h, m in dec) == 3


def test_fixed_points_free_action_empty():
    q = g.quotient(C2, g.make_subgroup(C2, (0, 1)))
    fp = gs.fixed_points(regular(C2), q)
    assert fp.size == 0 and fp.group.order == 1


def test_fixed_points_trivial_action_identity():
    X = gs.canonical_gset(C4, (2, 2))  # two fixed points
    q = g.quotient(C4, g.make_subgroup(C4, (0, 2)))
    fp = gs.fixed_points(X, q)
    assert fp.size == X.size


def test_fixed_points_c4_mod_c2():
    # X = C4/C2: two points swapped by the generator; N = {0,2} acts trivially
    N = g.make_subgroup(C4, (0, 2))
    q = g.quotient(C4, N)
    X = gs.coset_gset(C4, N.elements)
    fp = gs.fixed_points(X, q)
    assert fp.size == 2
    assert fp.action[0][1] == 1  # residual C2 swaps them


def test_inflate_shapes_and_fixedness():
    q = g.quotient(C4, g.make_subgroup(C4, (0, 2)))
    X = regular(C2)
    infl = gs.inflate(X, q)
    assert infl.size == 2 and infl.group == C4
    # kernel acts trivially
    for x in infl.points():
        for n in q.kernel.elements:
            assert infl.action[x][n] == x
    assert gs.inflate(gs.empty_gset(C2), q).size == 0


def test_inflate_group_mismatch():
    q = g.quotient(C4, g.make_subgroup(C4, (0, 2)))
    with pytest.raises(GroupMismatch):
        gs.inflate(regular(C4), q)


def test_hom_gset_matches_brute_force():
    cases = [
        (regular(C2), regular(C2)),
        (gs.canonical_gset(C4, (0, 2)), gs.canonical_gset(C4, (1, 2))),
        (gs.canonical_gset(S3, (1,)), gs.canonical_gset(S3, (1, 3))),
    ]
    for X, Y in cases:
        ours = sorted(f.values for f in gs.hom_gset(X, Y))
        assert ours == brute_force_homs(X, Y)


def test_hom_gset_counts():
    assert len(gs.hom_gset(regular(C2), regular(C2))) == 2
    X = gs.canonical_gset(C4, (0, 1, 2))
    assert len(gs.hom_gset(X, gs.point_gset(C4))) == 1
    assert len(gs.hom_gset(gs.point_gset(C2), regular(C2))) == 0


def test_unit_is_iso_and_counit_injective_corpus():
    for name in ("C4", "S3", "C6"):
        G = corpus_group(name)
        lat = g.subgroup_lattice(G)
        for i, N in enumerate(lat.subgroups):
            if not lat.normal[i]:
                continue
            q = g.quotient(G, N)
            for multiset in gs.gset_isoclasses(q.target, 4):
                Xq = gs.canonical_gset(q.target, multiset)
                assert gs.unit_map(Xq, q).is_iso()
            for multiset in gs.gset_isoclasses(G, 4):
                X = gs.canonical_gset(G, multiset)
                assert gs.counit_map(X, q).is_injective()


def test_inflation_fully_faithful():
    q = g.quotient(C4, g.make_subgroup(C4, (0, 2)))
    for mx in gs.gset_isoclasses(C2, 3):
        for my in gs.gset_isoclasses(C2, 3):
            X, Y = gs.canonical_gset(C2, mx), gs.canonical_gset(C2, my)
            below = {f.values for f in gs.hom_gset(X, Y)}
            above = {
                f.values for f in gs.hom_gset(gs.inflate(X, q), gs.inflate(Y, q))
            }
            assert below == above


def test_pullback_diagonal():
    X = regular(C2)
    P, p1, p2 = gs.pullback(gs.identity_map(X), gs.identity_map(X))
    assert gs.is_isomorphic(P, X)


def test_pullback_over_point_is_product():
    X = regular(C2)
    Y = gs.canonical_gset(C2, (1,))
    t = gs.point_gset(C2)
    fx = gs.hom_gset(X, t)[0]
    fy = gs.hom_gset(Y, t)[0]
    P, _, _ = gs.pullback(fx, fy)
    assert P.size == X.size * Y.size


def test_pullback_swap_free_orbit():
    X = regular(C2)
    swap = next(f for f in gs.hom_gset(X, X) if f.values != (0, 1))
    P, _, _ = gs.pullback(gs.identity_map(X), swap)
    assert P.size == 2
    dec = gs.orbit_decompose(P)
    assert len(dec) == 1 and dec[0][0].order == 1  # one free orbit


def test_pullback_universal_property_exhaustive():
    # every cone with apex size <= 6 factors uniquely
    X = gs.canonical_gset(C4, (1, 2))
    Z = gs.canonical_gset(C4, (2,))
    for f in gs.hom_gset(X, Z):
        for h in gs.hom_gset(X, Z):
            P, p1, p2 = gs.pullback(f, h)
            for mw in gs.gset_isoclasses(C4, 6):
                W = gs.canonical_gset(C4, mw)
                for a in gs.hom_gset(W, X):
                    for b in gs.hom_gset(W, X):
                        if a.then(f).values != b.then(h).values:
                            continue
                        m = gs.mediating_map(f, h, a, b)
                        assert m.then(p1).values == a.values
                        assert m.then(p2).values == b.values


def test_coproduct():
    X = regular(C2)
    E = gs.empty_gset(C2)
    assert gs.is_isomorphic(gs.coproduct(X, E)[0], X)
    pt = gs.point_gset(C2)
    assert gs.coproduct(X, pt)[0].size == 3
    Y = gs.canonical_gset(C2, (0, 1))
    merged = gs.orbit_class_multiset(gs.coproduct(X, Y)[0])
    assert merged == tuple(
        sorted(gs.orbit_class_multiset(X) + gs.orbit_class_multiset(Y))
    )


def test_coproduct_disjoint_and_universal():
    X = regular(C2)
    Y = gs.canonical_gset(C2, (1,))
    Z = gs.canonical_gset(C2, (0, 1))
    XY, i1, i2 = gs.coproduct(X, Y)
    homs = gs.hom_gset(XY, Z)
    pairs = {(f.then(gs.identity_map(Z)).values, None) for f in homs}
    assert len(homs) == len(gs.hom_gset(X, Z)) * len(gs.hom_gset(Y, Z))
    restricted = {(i1.then(f).values, i2.then(f).values) for f in homs}
    assert len(restricted) == len(homs)


def test_adjunction_report_counit_failure():
    # G = C2, N = C2, X = C2 regular, f: X -> point
    q = g.quotient(C2, g.make_subgroup(C2, (0, 1)))
    X = regular(C2)
    f = gs.hom_gset(X, gs.point_gset(C2))[0]
    rep = gs.adjunction_report(q, X, f)
    assert rep.unit_is_iso
    assert rep.counit_is_injective
    assert rep.unit_square_is_pullback
    assert not rep.counit_square_is_pullback
    assert rep.counit_witness is not None
    assert rep.render().splitlines()[0] == "PASS"


def test_adjunction_report_trivial_n_action():
    # X with trivial N-action: counit is an isomorphism, square is a pullback
    q = g.quotient(C4, g.make_subgroup(C4, (0, 2)))
    X = gs.canonical_gset(C4, (1, 2))  # N acts trivially on both orbits
    f = gs.identity_map(X)
    rep = gs.adjunction_report(q, X, f)
    assert rep.counit_square_is_pullback


def test_find_iso():
    X = gs.canonical_gset(C4, (0, 1))
    Y = gs.coproduct(gs.canonical_gset(C4, (1,)), gs.canonical_gset(C4, (0,)))[0]
    iso = gs.find_iso(X, Y)
    assert iso is not None and iso.is_iso()
    assert gs.find_iso(X, gs.canonical_gset(C4, (0, 2))) is None


def test_gset_isoclasses_counts():
    assert len(gs.gset_isoclasses(C2, 4)) == 9
    assert gs.gset_isoclasses(C2, 0) == [()]
