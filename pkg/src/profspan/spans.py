"""Span categories of finite G-sets with exact morphism arithmetic.

A morphism X -> Y is a finitely supported multiset of isomorphism classes
of spans X <- S -> Y with transitive apex S; hom-sets are free commutative
monoids on these basis classes.  Composition is by pullback and orbit
decomposition, and is exact (integer multiplicities, no tolerance).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import GroupMismatch, NotLeftExact, ObjectMismatch
from .groups import FiniteGroup, QuotientMap, subgroup_lattice
from . import gsets as gs
from .gsets import EqMap, GSet


# A basis key is (apex stabilizer class index, legL values, legR values)
# with the legs tabulated on the canonical coset apex and minimized
# lexicographically over all apex relabelings.
Key = tuple[int, tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class BasisSpan:
    left: GSet
    right: GSet
    key: Key

    @property
    def apex_class(self) -> int:
        return self.key[0]

    def apex(self) -> GSet:
        lat = subgroup_lattice(self.left.group)
        return gs.coset_gset(self.left.group, lat.class_rep(self.key[0]).elements)

    def legs(self) -> tuple[EqMap, EqMap]:
        apex = self.apex()
        return (
            EqMap(apex, self.left, self.key[1]),
            EqMap(apex, self.right, self.key[2]),
        )


def canonical_key(
    X: GSet, Y: GSet, apex: GSet, base: int, legL, legR
) -> Key:
    """Canonical key of the span X <- apex -> Y restricted to the orbit of
    base; the legs are given as full value tables on apex."""
    G = X.group
    lat = subgroup_lattice(G)
    c = lat.class_of(apex.stabilizer(base).elements)
    rep = lat.class_rep(c).elements
    rep_set = set(rep)
    mins = [min(G.mul(g, h) for h in rep) for g in G.elements()]
    # minimal element of each coset point, in point order
    reps_of_points = []
    seen = set()
    for g in G.elements():
        m = mins[g]
        if m not in seen:
            seen.add(m)
            reps_of_points.append(m)
    best = None
    orbit = apex.orbit(base)
    for s in orbit:
        if set(apex.stabilizer(s).elements) != rep_set:
            continue
        # psi: coset point p (coset m_p H) -> m_p . s
        imgs = [apex.action[s][m] for m in reps_of_points]
        cand = (tuple(legL[i] for i in imgs), tuple(legR[i] for i in imgs))
        if best is None or cand < best:
            best = cand
    assert best is not None
    return (c, best[0], best[1])


def span_basis(X: GSet, Y: GSet) -> list[BasisSpan]:
    """All isomorphism classes of spans X <- S -> Y with transitive S."""
    if X.group != Y.group:
        raise GroupMismatch("span endpoints require a common group")
    G = X.group
    lat = subgroup_lattice(G)
    keys: set[Key] = set()
    for c in range(lat.num_classes):
        apex = gs.coset_gset(G, lat.class_rep(c).elements)
        for f in gs.hom_gset(apex, X):
            for g in gs.hom_gset(apex, Y):
                keys.add(canonical_key(X, Y, apex, 0, f.values, g.values))
    return [BasisSpan(X, Y, k) for k in sorted(keys)]


@dataclass(frozen=True)
class SpanMor:
    left: GSet
    right: GSet
    terms: tuple[tuple[Key, int], ...]  # sorted, multiplicities >= 1

    def __add__(self, other: "SpanMor") -> "SpanMor":
        if self.left != other.left or self.right != other.right:
            raise ObjectMismatch("span morphisms must share endpoints")
        counts = dict(self.terms)
        for k, m in other.terms:
            counts[k] = counts.get(k, 0) + m
        return SpanMor(self.left, self.right, _normalize(counts))

    def scale(self, n: int) -> "SpanMor":
        if n == 0:
            return zero_span(self.left, self.right)
        return SpanMor(self.left, self.right, tuple((k, n * m) for k, m in self.terms))

    def is_zero(self) -> bool:
        return not self.terms


def _normalize(counts: dict) -> tuple:
    return tuple(sorted((k, m) for k, m in counts.items() if m))


def make_span(left: GSet, right: GSet, terms) -> SpanMor:
    counts: dict = {}
    for k, m in terms:
        if m < 0:
            raise ValueError("multiplicities must be non-negative")
        counts[k] = counts.get(k, 0) + m
    return SpanMor(left, right, _normalize(counts))


def zero_span(left: GSet, right: GSet) -> SpanMor:
    return SpanMor(left, right, ())


def basis_span_mor(b: BasisSpan) -> SpanMor:
    return SpanMor(b.left, b.right, ((b.key, 1),))


def span_from_maps(f: EqMap, g: EqMap) -> SpanMor:
    """The span class of X <-f- S -g-> Y for an arbitrary finite apex S."""
    if f.src != g.src:
        raise ObjectMismatch("legs must share an apex")
    counts: dict = {}
    for orb in f.src.orbits():
        k = canonical_key(f.dst, g.dst, f.src, orb[0], f.values, g.values)
        counts[k] = counts.get(k, 0) + 1
    return SpanMor(f.dst, g.dst, _normalize(counts))


def identity_span(X: GSet) -> SpanMor:
    return span_from_maps(gs.identity_map(X), gs.identity_map(X))


@lru_cache(maxsize=None)
def _compose_keys(G: FiniteGroup, k2: Key, k1: Key) -> tuple:
    """Composite of two basis keys as a tuple of (key, mult); the result
    depends only on the group and the keys, not on the middle object."""
    lat = subgroup_lattice(G)
    apex1 = gs.coset_gset(G, lat.class_rep(k1[0]).elements)
    apex2 = gs.coset_gset(G, lat.class_rep(k2[0]).elements)
    pairs = [
        (x, y)
        for x in apex1.points()
        for y in apex2.points()
        if k1[2][x] == k2[1][y]
    ]
    index = {p: i for i, p in enumerate(pairs)}
    action = tuple(
        tuple(
            index[(apex1.action[x][h], apex2.action[y][h])] for h in G.elements()
        )
        for (x, y) in pairs
    )
    P = GSet(G, action)
    legL = [k1[1][x] for x, _ in pairs]
    legR = [k2[2][y] for _, y in pairs]
    counts: dict = {}
    for orb in P.orbits():
        k = canonical_key(P, P, P, orb[0], legL, legR)
        counts[k] = counts.get(k, 0) + 1
    return _normalize(counts)


def compose_spans(m2: SpanMor, m1: SpanMor) -> SpanMor:
    """m2 after m1, by pullback of basis terms, extended bilinearly."""
    if m1.right != m2.left:
        raise ObjectMismatch("span morphisms do not compose")
    G = m1.left.group
    counts: dict = {}
    for k1, c1 in m1.terms:
        for k2, c2 in m2.terms:
            for k, c in _compose_keys(G, k2, k1):
                counts[k] = counts.get(k, 0) + c1 * c2 * c
    return SpanMor(m1.left, m2.right, _normalize(counts))


def double_coset_count(G: FiniteGroup, H, K) -> int:
    """Oracle: the number of (H, K) double cosets in G."""
    seen: set = set()
    out = 0
    for g in G.elements():
        if g in seen:
            continue
        out += 1
        seen.update(G.mul(G.mul(h, g), k) for h in H for k in K)
    return out


def span_basis_count_oracle(G: FiniteGroup, H, K) -> int:
    """Oracle: the rank of hom(G/H, G/K) in the span category, counted
    independently as orbits of H x K acting on pairs (g, L) with L a
    subgroup of H ∩ gKg⁻¹, by (h, k)·(g, L) = (hgk⁻¹, hLh⁻¹).

    Refines the double-coset count: when every intersection is trivial
    (in particular when H or K is trivial) it equals the number of
    (H, K) double cosets.
    """
    lat = subgroup_lattice(G)
    items: set = set()
    for a in G.elements():
        conj_k = {G.conj(a, k) for k in K}
        M = set(H) & conj_k
        for L in lat.subgroups:
            if set(L.elements) <= M:
                items.add((a, L.elements))
    seen: set = set()
    out = 0
    for item in items:
        if item in seen:
            continue
        out += 1
        frontier = [item]
        seen.add(item)
        while frontier:
            a, L = frontier.pop()
            for h in H:
                for k in K:
                    nxt = (
                        G.mul(G.mul(h, a), G.inv(k)),
                        tuple(sorted(G.conj(h, x) for x in L)),
                    )
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
    return out


@dataclass(frozen=True)
class BurnsideTables:
    class_orders: tuple[int, ...]
    marks: tuple[tuple[int, ...], ...]
    ring: tuple[tuple[tuple[int, ...], ...], ...]  # ring[i][j][k] coefficients


def burnside_tables(G: FiniteGroup) -> BurnsideTables:
    """Table of marks and the Burnside ring structure constants.

    marks[i][j] = number of H_j-fixed points of G/K_i, over subgroup
    conjugacy classes ordered by subgroup size.  The ring constants expand
    products of basis endo-spans of the point in the span basis.
    """
    lat = subgroup_lattice(G)
    n = lat.num_classes
    marks = []
    for i in range(n):
        X = gs.coset_gset(G, lat.class_rep(i).elements)
        row = []
        for j in range(n):
            H = lat.class_rep(j).elements
            row.append(
                sum(
                    1
                    for x in X.points()
                    if all(X.action[x][h] == x for h in H)
                )
            )
        marks.append(tuple(row))
    pt = gs.point_gset(G)
    basis = span_basis(pt, pt)
    assert len(basis) == n
    index = {b.key: k for k, b in enumerate(basis)}
    ring = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = compose_spans(basis_span_mor(basis[i]), basis_span_mor(basis[j]))
            coeffs = [0] * n
            for k, m in prod.terms:
                coeffs[index[k]] = m
            row.append(tuple(coeffs))
        ring.append(tuple(row))
    return BurnsideTables(
        tuple(lat.class_rep(i).order for i in range(n)),
        tuple(marks),
        tuple(ring),
    )


def transport_span(m: SpanMor, isoL: EqMap | None, isoR: EqMap | None) -> SpanMor:
    """Relabel endpoints along isomorphisms left -> left', right -> right'."""
    isoL = isoL if isoL is not None else gs.identity_map(m.left)
    isoR = isoR if isoR is not None else gs.identity_map(m.right)
    if isoL.src != m.left or isoR.src != m.right:
        raise ObjectMismatch("transport isomorphisms do not match endpoints")
    counts: dict = {}
    for key, mult in m.terms:
        b = BasisSpan(m.left, m.right, key)
        f, g = b.legs()
        k = canonical_key(
            isoL.dst,
            isoR.dst,
            b.apex(),
            0,
            f.then(isoL).values,
            g.then(isoR).values,
        )
        counts[k] = counts.get(k, 0) + mult
    return SpanMor(isoL.dst, isoR.dst, _normalize(counts))


@dataclass
class Verdict:
    ok: bool
    reason: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


def semiadditivity_check(X: GSet, Xp: GSet, Y: GSet) -> Verdict:
    """Basis-level bijection hom(X ⊔ X', Y) ≅ hom(X, Y) × hom(X', Y), and
    the dual hom(X, Y ⊔ Y') ≅ hom(X, Y) × hom(X, Y') with Y' = X'."""
    if X.group != Xp.group or X.group != Y.group:
        raise GroupMismatch("semiadditivity requires a common group")
    XX, inc1, inc2 = gs.coproduct(X, Xp)
    combined = {b.key for b in span_basis(XX, Y)}
    relabeled: set = set()
    for Z, inc in ((X, inc1), (Xp, inc2)):
        for b in span_basis(Z, Y):
            f, g = b.legs()
            relabeled.add(
                canonical_key(XX, Y, b.apex(), 0, f.then(inc).values, g.values)
            )
    if combined != relabeled:
        return Verdict(False, "coproduct variable", combined ^ relabeled)
    YY, j1, j2 = gs.coproduct(Y, Xp)
    combined = {b.key for b in span_basis(X, YY)}
    relabeled = set()
    for Z, inc in ((Y, j1), (Xp, j2)):
        for b in span_basis(X, Z):
            f, g = b.legs()
            relabeled.add(
                canonical_key(X, YY, b.apex(), 0, f.values, g.then(inc).values)
            )
    if combined != relabeled:
        return Verdict(False, "second variable", combined ^ relabeled)
    return Verdict(True)


class GSetFunctor:
    """A functor between G-set universes, given on objects and maps."""

    src_group: FiniteGroup
    dst_group: FiniteGroup

    def obj(self, X: GSet) -> GSet:
        raise NotImplementedError

    def map(self, f: EqMap) -> EqMap:
        raise NotImplementedError

    def then(self, other: "GSetFunctor") -> "GSetFunctor":
        return _Composed(self, other)


class IdentityGSetFunctor(GSetFunctor):
    def __init__(self, G: FiniteGroup):
        self.src_group = self.dst_group = G

    def obj(self, X):
        return X

    def map(self, f):
        return f


class InflationGSetFunctor(GSetFunctor):
    """Inflation along a quotient map, from G/N-sets to G-sets."""

    def __init__(self, q: QuotientMap):
        self.q = q
        self.src_group = q.target
        self.dst_group = q.source

    def obj(self, X):
        return gs.inflate(X, self.q)

    def map(self, f):
        return gs.inflate_map(f, self.q)


class FixedPointsGSetFunctor(GSetFunctor):
    """N-fixed points with residual action, from G-sets to G/N-sets."""

    def __init__(self, q: QuotientMap):
        self.q = q
        self.src_group = q.source
        self.dst_group = q.target

    def obj(self, X):
        return gs.fixed_points(X, self.q)

    def map(self, f):
        return gs.fixed_points_map(f, self.q)


class _Composed(GSetFunctor):
    def __init__(self, first: GSetFunctor, second: GSetFunctor):
        if first.dst_group != second.src_group:
            raise GroupMismatch("functors do not compose")
        self.first, self.second = first, second
        self.src_group = first.src_group
        self.dst_group = second.dst_group

    def obj(self, X):
        return self.second.obj(self.first.obj(X))

    def map(self, f):
        return self.second.map(self.first.map(f))


def check_left_exact(F: GSetFunctor, objects) -> Verdict:
    """Whether F carries pullbacks of maps between the given G-sets to
    pullbacks; exhaustive over the supplied objects."""
    for X, Y, Z in itertools.product(objects, repeat=3):
        for f in gs.hom_gset(X, Z):
            for g in gs.hom_gset(Y, Z):
                P, p1, p2 = gs.pullback(f, g)
                try:
                    ok = gs.square_is_pullback(
                        F.map(p1), F.map(p2), F.map(f), F.map(g)
                    )
                except ValueError:
                    ok = False
                if not ok:
                    return Verdict(False, "pullback not preserved", (f, g))
    return Verdict(True)


def span_of_functor(F: GSetFunctor, probe_objects=None):
    """Span(F): the induced map on span morphisms.

    When probe_objects is given, F is first verified left exact on them
    (NotLeftExact on failure).  The returned function applies F to the
    endpoints, apex, and legs of every basis term and renormalizes.
    """
    if probe_objects is not None:
        verdict = check_left_exact(F, probe_objects)
        if not verdict:
            raise NotLeftExact(verdict.witness)

    def apply(m: SpanMor) -> SpanMor:
        left, right = F.obj(m.left), F.obj(m.right)
        counts: dict = {}
        for key, mult in m.terms:
            b = BasisSpan(m.left, m.right, key)
            f, g = b.legs()
            Ff, Fg = F.map(f), F.map(g)
            for orb in Ff.src.orbits():
                k = canonical_key(left, right, Ff.src, orb[0], Ff.values, Fg.values)
                counts[k] = counts.get(k, 0) + mult
        return SpanMor(left, right, _normalize(counts))

    return apply


@dataclass(frozen=True)
class AdequateTripleSpec:
    cat: object  # FinCat
    backward: object  # morphism predicate
    forward: object  # morphism predicate


def _wide(spec: AdequateTripleSpec, pred) -> Verdict:
    cat = spec.cat
    for a in cat.objects:
        if not pred(cat.identity(a)):
            return Verdict(False, "identity not in class", a)
    for a, b, c in itertools.product(cat.objects, repeat=3):
        for f in cat.hom(a, b):
            if not pred(f):
                continue
            for g in cat.hom(b, c):
                if pred(g) and not pred(cat.compose(g, f)):
                    return Verdict(False, "class not closed under composition", (g, f))
    return Verdict(True)


def _cat_is_pullback(cat, f, g, P, p, q) -> bool:
    if cat.compose(f, p) != cat.compose(g, q):
        return False
    for w in cat.objects:
        cones = {
            (a, b)
            for a in cat.hom(w, f[0])
            for b in cat.hom(w, g[0])
            if cat.compose(f, a) == cat.compose(g, b)
        }
        mediated = {
            (cat.compose(p, m), cat.compose(q, m)) for m in cat.hom(w, P)
        }
        if len(mediated) != len(cat.hom(w, P)):
            return False
        if mediated != cones:
            return False
    return True


def validate_adequate_triple(spec: AdequateTripleSpec) -> Verdict:
    """Both classes are wide subcategories, and every backward/forward
    cospan admits a pullback in cat whose legs stay in the classes."""
    for pred in (spec.backward, spec.forward):
        v = _wide(spec, pred)
        if not v:
            return v
    cat = spec.cat
    for z in cat.objects:
        for a in cat.objects:
            for f in cat.hom(a, z):
                if not spec.backward(f):
                    continue
                for b in cat.objects:
                    for g in cat.hom(b, z):
                        if not spec.forward(g):
                            continue
                        if not _has_adequate_pullback(spec, f, g):
                            return Verdict(False, "no adequate pullback", (f, g))
    return Verdict(True)


def _has_adequate_pullback(spec: AdequateTripleSpec, f, g) -> bool:
    cat = spec.cat
    for P in cat.objects:
        for p in cat.hom(P, f[0]):
            if not spec.forward(p):
                continue
            for q in cat.hom(P, g[0]):
                if not spec.backward(q):
                    continue
                if _cat_is_pullback(cat, f, g, P, p, q):
                    return True
    return False
