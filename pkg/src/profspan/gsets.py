"""Finite G-sets and equivariant maps: orbits, fixed points, inflation,
(co)products, pullbacks, and the inflation/fixed-points adjunction
diagnostics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import GroupMismatch
from .groups import (
    FiniteGroup,
    GroupTower,
    QuotientMap,
    Subgroup,
    subgroup_lattice,
)


@dataclass(frozen=True)
class GSet:
    """Finite left G-set; action[x][g] = g.x."""

    group: FiniteGroup
    action: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.action)

    def act(self, g: int, x: int) -> int:
        return self.action[x][g]

    def points(self) -> range:
        return range(self.size)

    def orbit(self, x: int) -> tuple[int, ...]:
        return tuple(sorted({self.action[x][g] for g in self.group.elements()}))

    def orbits(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for x in self.points():
            if x not in seen:
                orb = self.orbit(x)
                seen.update(orb)
                out.append(orb)
        return out

    def stabilizer(self, x: int) -> Subgroup:
        elems = tuple(g for g in self.group.elements() if self.action[x][g] == x)
        return Subgroup(self.group, elems)

    def __repr__(self):
        return f"GSet(|G|={self.group.order}, size={self.size})"


def make_gset(group: FiniteGroup, action) -> GSet:
    """Validate an action table and return the G-set."""
    action = tuple(tuple(row) for row in action)
    n = len(action)
    order = group.order
    for x, row in enumerate(action):
        if len(row) != order:
            raise ValueError(f"row {x} has length {len(row)}, expected {order}")
        if row[0] != x:
            raise ValueError(f"identity moves point {x}")
        for y in row:
            if not 0 <= y < n:
                raise ValueError(f"action value {y} out of range")
    for g in range(order):
        if len({action[x][g] for x in range(n)}) != n:
            raise ValueError(f"element {g} does not act by a permutation")
        for h in range(order):
            gh = group.mul(g, h)
            for x in range(n):
                if action[action[x][h]][g] != action[x][gh]:
                    raise ValueError(
                        f"action is not compatible with multiplication at "
                        f"(x={x}, g={g}, h={h})"
                    )
    return GSet(group, action)


@dataclass(frozen=True)
class EqMap:
    src: GSet
    dst: GSet
    values: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.values[x]

    def then(self, other: "EqMap") -> "EqMap":
        if self.dst != other.src:
            raise ValueError("maps do not compose")
        return EqMap(self.src, other.dst, tuple(other.values[v] for v in self.values))

    def is_injective(self) -> bool:
        return len(set(self.values)) == self.src.size

    def is_iso(self) -> bool:
        return self.src.size == self.dst.size and self.is_injective()

    def inverse(self) -> "EqMap":
        if not self.is_iso():
            raise ValueError("map is not invertible")
        inv = [0] * self.dst.size
        for x, y in enumerate(self.values):
            inv[y] = x
        return EqMap(self.dst, self.src, tuple(inv))


def make_eqmap(src: GSet, dst: GSet, values) -> EqMap:
    if src.group != dst.group:
        raise GroupMismatch("maps require a common group")
    values = tuple(values)
    if len(values) != src.size:
        raise ValueError("wrong number of values")
    for x in src.points():
        for g in src.group.elements():
            if values[src.action[x][g]] != dst.action[values[x]][g]:
                raise ValueError(f"not equivariant at (x={x}, g={g})")
    return EqMap(src, dst, values)


def identity_map(X: GSet) -> EqMap:
    return EqMap(X, X, tuple(X.points()))


@dataclass(frozen=True)
class TowerObject:
    """A finite discrete G-set presented at a finite tower level."""

    tower: GroupTower
    level: int
    carrier: GSet

    def __post_init__(self):
        if self.carrier.group != self.tower.stages[self.level]:
            raise GroupMismatch("carrier group is not the stage at this level")


@lru_cache(maxsize=None)
def coset_gset(G: FiniteGroup, subgroup_elements: tuple[int, ...]) -> GSet:
    """Canonical transitive G-set on left cosets of a subgroup.

    Cosets are ordered by minimal element, so the identity coset is point 0.
    """
    H = subgroup_elements
    coset_of = {}
    cosets = []
    for g in G.elements():
        if g in coset_of:
            continue
        coset = tuple(sorted(G.mul(g, h) for h in H))
        for x in coset:
            coset_of[x] = len(cosets)
        cosets.append(coset)
    action = tuple(
        tuple(coset_of[G.mul(g, c[0])] for g in G.elements()) for c in cosets
    )
    return GSet(G, action)


def orbit_type(X: GSet, x: int) -> int:
    """Conjugacy-class index of the stabilizer of x."""
    return subgroup_lattice(X.group).class_of(X.stabilizer(x).elements)


def orbit_decompose(X: GSet) -> list[tuple[Subgroup, int]]:
    """Orbit types with multiplicity: X is a disjoint union of G/H's."""
    lat = subgroup_lattice(X.group)
    counts: dict[int, int] = {}
    for orb in X.orbits():
        c = lat.class_of(X.stabilizer(orb[0]).elements)
        counts[c] = counts.get(c, 0) + 1
    return [(lat.class_rep(c), counts[c]) for c in sorted(counts)]


def orbit_class_multiset(X: GSet) -> tuple[int, ...]:
    """Sorted stabilizer-class indices of the orbits, with repetition."""
    lat = subgroup_lattice(X.group)
    return tuple(
        sorted(lat.class_of(X.stabilizer(orb[0]).elements) for orb in X.orbits())
    )


def is_isomorphic(X: GSet, Y: GSet) -> bool:
    """Orbit-type multiset equality decides G-set isomorphism."""
    if X.group != Y.group:
        return False
    return orbit_class_multiset(X) == orbit_class_multiset(Y)


def find_iso(X: GSet, Y: GSet) -> EqMap | None:
    """An explicit equivariant bijection X -> Y, or None."""
    if X.group != Y.group or X.size != Y.size:
        return None
    G = X.group
    values = [-1] * X.size
    targets_used: set[int] = set()
    y_orbits = Y.orbits()
    for orb in X.orbits():
        x = orb[0]
        S = set(X.stabilizer(x).elements)
        match = None
        for yorb in y_orbits:
            if yorb[0] in targets_used or len(yorb) != len(orb):
                continue
            # need a point with exactly the same stabilizer
            for y in yorb:
                if set(Y.stabilizer(y).elements) == S:
                    match = y
                    break
            if match is not None:
                break
        if match is None:
            return None
        targets_used.add(Y.orbit(match)[0])
        for g in G.elements():
            values[X.action[x][g]] = Y.action[match][g]
    return EqMap(X, Y, tuple(values))


def fixed_point_indices(X: GSet, N: Subgroup) -> tuple[int, ...]:
    return tuple(
        x for x in X.points() if all(X.action[x][n] == x for n in N.elements)
    )


def fixed_points(X: GSet, q: QuotientMap) -> GSet:
    """N-fixed points of X with the residual G/N action."""
    if X.group != q.source:
        raise GroupMismatch("G-set is not over the quotient source")
    pts = fixed_point_indices(X, q.kernel)
    index = {x: i for i, x in enumerate(pts)}
    Q = q.target
    action = tuple(
        tuple(index[X.action[x][q.section(c)]] for c in Q.elements()) for x in pts
    )
    return GSet(Q, action)


def counit_map(X: GSet, q: QuotientMap) -> EqMap:
    """inf(X^N) -> X; the inclusion of the fixed points."""
    fixed = fixed_points(X, q)
    return EqMap(inflate(fixed, q), X, fixed_point_indices(X, q.kernel))


def unit_map(X: GSet, q: QuotientMap) -> EqMap:
    """X -> (inf X)^N for X over G/N."""
    if X.group != q.target:
        raise GroupMismatch("G-set is not over the quotient target")
    inflated = inflate(X, q)
    fixed = fixed_points(inflated, q)
    pts = fixed_point_indices(inflated, q.kernel)
    index = {x: i for i, x in enumerate(pts)}
    return EqMap(X, fixed, tuple(index[x] for x in X.points()))


def inflate(X: GSet, q: QuotientMap) -> GSet:
    """Pull the action back along the projection; every point is N-fixed."""
    if X.group != q.target:
        raise GroupMismatch("G-set is not over the quotient target")
    action = tuple(
        tuple(X.action[x][q.projection[g]] for g in q.source.elements())
        for x in X.points()
    )
    return GSet(q.source, action)


def inflate_map(f: EqMap, q: QuotientMap) -> EqMap:
    return EqMap(inflate(f.src, q), inflate(f.dst, q), f.values)


def hom_gset(X: GSet, Y: GSet) -> list[EqMap]:
    """All equivariant maps X -> Y, orbit by orbit."""
    if X.group != Y.group:
        raise GroupMismatch("hom requires a common group")
    G = X.group
    x_orbits = X.orbits()
    choices = []
    for orb in x_orbits:
        x = orb[0]
        S = X.stabilizer(x).elements
        candidates = [
            y
            for y in Y.points()
            if all(Y.action[y][s] == y for s in S)
        ]
        choices.append((x, candidates))
    maps = []
    for combo in itertools.product(*(c for _, c in choices)):
        values = [-1] * X.size
        for (x, _), y in zip(choices, combo):
            for g in G.elements():
                values[X.action[x][g]] = Y.action[y][g]
        maps.append(EqMap(X, Y, tuple(values)))
    return maps


def empty_gset(G: FiniteGroup) -> GSet:
    return GSet(G, ())


def point_gset(G: FiniteGroup) -> GSet:
    return GSet(G, (tuple(0 for _ in G.elements()),))


def coproduct(X: GSet, Y: GSet) -> tuple[GSet, EqMap, EqMap]:
    if X.group != Y.group:
        raise GroupMismatch("coproduct requires a common group")
    n = X.size
    action = X.action + tuple(
        tuple(v + n for v in row) for row in Y.action
    )
    Z = GSet(X.group, action)
    inc1 = EqMap(X, Z, tuple(range(n)))
    inc2 = EqMap(Y, Z, tuple(range(n, n + Y.size)))
    return Z, inc1, inc2


def sub_gset(X: GSet, points) -> tuple[GSet, EqMap]:
    """G-stable subset of X as a G-set, with its inclusion."""
    pts = tuple(sorted(points))
    index = {x: i for i, x in enumerate(pts)}
    action = tuple(
        tuple(index[X.action[x][g]] for g in X.group.elements()) for x in pts
    )
    S = GSet(X.group, action)
    return S, EqMap(S, X, pts)


def pullback(f: EqMap, g: EqMap) -> tuple[GSet, EqMap, EqMap]:
    """The fibre product of f and g over their common target."""
    if f.dst != g.dst:
        raise ValueError("pullback legs must share a target")
    if f.src.group != g.src.group:
        raise GroupMismatch("pullback requires a common group")
    pairs = [
        (x, y)
        for x in f.src.points()
        for y in g.src.points()
        if f.values[x] == g.values[y]
    ]
    index = {p: i for i, p in enumerate(pairs)}
    action = tuple(
        tuple(
            index[(f.src.action[x][h], g.src.action[y][h])]
            for h in f.src.group.elements()
        )
        for (x, y) in pairs
    )
    P = GSet(f.src.group, action)
    proj1 = EqMap(P, f.src, tuple(x for x, _ in pairs))
    proj2 = EqMap(P, g.src, tuple(y for _, y in pairs))
    return P, proj1, proj2


def mediating_map(f: EqMap, g: EqMap, p: EqMap, q: EqMap) -> EqMap:
    """The canonical map from a cone (p, q) into the pullback of (f, g)."""
    P, proj1, proj2 = pullback(f, g)
    index = {(proj1.values[i], proj2.values[i]): i for i in P.points()}
    return EqMap(p.src, P, tuple(index[(p.values[w], q.values[w])] for w in p.src.points()))


def square_is_pullback(top: EqMap, left: EqMap, right: EqMap, bottom: EqMap) -> bool:
    """Whether a commuting square is a pullback (mediating map is a bijection).

    Corners: top: A -> B, left: A -> C, right: B -> D, bottom: C -> D.
    """
    for a in top.src.points():
        if right.values[top.values[a]] != bottom.values[left.values[a]]:
            raise ValueError("square does not commute")
    return mediating_map(right, bottom, top, left).is_iso()


@dataclass(frozen=True)
class AdjunctionReport:
    """Diagnostics for the inflation/fixed-points adjunction at (G, N)."""

    unit_is_iso: bool
    counit_is_injective: bool
    unit_square_is_pullback: bool
    counit_square_is_pullback: bool
    counit_witness: tuple | None

    @property
    def ok(self) -> bool:
        return self.unit_is_iso and self.counit_is_injective and self.unit_square_is_pullback

    def render(self) -> str:
        lines = []
        first = "PASS" if self.ok else "FAIL unit/counit structure violated"
        lines.append(first)
        lines.append(f"unit isomorphism: {self.unit_is_iso}")
        lines.append(f"counit injective: {self.counit_is_injective}")
        lines.append(f"unit naturality square pullback: {self.unit_square_is_pullback}")
        lines.append(
            f"counit naturality square pullback: {self.counit_square_is_pullback}"
            + (
                f" (witness {self.counit_witness})"
                if not self.counit_square_is_pullback
                else ""
            )
        )
        return "\n".join(lines)


def adjunction_report(q: QuotientMap, X: GSet, f: EqMap) -> AdjunctionReport:
    """Check the unit/counit behaviour for X --f--> X' over G and N = ker q.

    The unit square is tested for the induced map on fixed points; the
    counit square is tested for f itself.  The unit square is always a
    pullback; the counit square can fail, in which case a witness square
    is recorded.
    """
    if X.group != q.source or f.src != X:
        raise GroupMismatch("report requires X over the quotient source")
    Xp = f.dst

    fixed_X = fixed_points(X, q)
    unit = unit_map(fixed_X, q)
    unit_is_iso = unit.is_iso()

    counit_X = counit_map(X, q)
    counit_injective = counit_X.is_injective() and counit_map(Xp, q).is_injective()

    # unit naturality square over G/N for f^N: X^N -> X'^N
    f_fixed = _fixed_points_map(f, q)
    unit_sq = square_is_pullback(
        unit_map(f_fixed.src, q),
        f_fixed,
        _fixed_points_map(inflate_map(f_fixed, q), q),
        unit_map(f_fixed.dst, q),
    )

    # counit naturality square over G
    counit_sq = square_is_pullback(
        counit_X,
        inflate_map(f_fixed, q),
        f,
        counit_map(Xp, q),
    )
    witness = None if counit_sq else (X.action, f.values)
    return AdjunctionReport(unit_is_iso, counit_injective, unit_sq, counit_sq, witness)


def _fixed_points_map(f: EqMap, q: QuotientMap) -> EqMap:
    """f restricted to N-fixed points, over G/N."""
    src_pts = fixed_point_indices(f.src, q.kernel)
    dst_pts = fixed_point_indices(f.dst, q.kernel)
    dst_index = {x: i for i, x in enumerate(dst_pts)}
    return EqMap(
        fixed_points(f.src, q),
        fixed_points(f.dst, q),
        tuple(dst_index[f.values[x]] for x in src_pts),
    )


def fixed_points_map(f: EqMap, q: QuotientMap) -> EqMap:
    return _fixed_points_map(f, q)


def canonical_gset(G: FiniteGroup, class_multiset) -> GSet:
    """Disjoint union of canonical coset G-sets for the given orbit classes."""
    lat = subgroup_lattice(G)
    X = empty_gset(G)
    for c in class_multiset:
        X = coproduct(X, coset_gset(G, lat.class_rep(c).elements))[0]
    return X


def gset_category(G: FiniteGroup, size_cap: int) -> "fincat.FinCat":
    """The category of G-sets of size <= size_cap, one object per iso class.

    Morphisms are (src, dst, values) with values the underlying point map;
    composition is function composition.
    """
    from . import fincat

    objs = tuple(canonical_gset(G, m) for m in gset_isoclasses(G, size_cap))

    def hom(X, Y):
        return tuple((X, Y, f.values) for f in hom_gset(X, Y))

    def compose(gm, fm):
        return (fm[0], gm[1], tuple(gm[2][v] for v in fm[2]))

    def identity(X):
        return (X, X, tuple(range(X.size)))

    return fincat.FinCat(
        objs, hom, compose, identity, name=f"Fin(|G|={G.order})<= {size_cap}"
    )


def inflation_functor(q: QuotientMap, src_cat, dst_cat) -> "fincat.CatFunctor":
    """Inflation along q as a functor between size-capped categories.

    Each inflated object is renamed to its canonical isomorph in dst_cat
    through a chosen equivariant bijection.
    """
    from . import fincat

    sigma = {}
    for X in src_cat.objects:
        infl = inflate(X, q)
        target = canonical_gset(q.source, orbit_class_multiset(infl))
        sigma[X] = find_iso(infl, target)

    def on_obj(X):
        return sigma[X].dst

    def on_mor(m):
        X, Y, values = m
        f = inflate_map(EqMap(X, Y, values), q)
        comp = sigma[X].inverse().then(f).then(sigma[Y])
        return (sigma[X].dst, sigma[Y].dst, comp.values)

    return fincat.CatFunctor(src_cat, dst_cat, on_obj, on_mor, name="inflation")


def discrete_gset_category(tower: GroupTower, size_cap: int) -> "fincat.FinCat":
    """Finite model of discrete G-sets over a tower.

    Objects are canonical stage G-sets of size <= size_cap at every level;
    hom-sets are computed after inflating both carriers to the deeper of
    the two levels.  Inflation keeps underlying point maps, so composition
    is plain function composition regardless of levels.
    """
    from . import fincat

    objects = []
    for i, G in enumerate(tower.stages):
        for m in gset_isoclasses(G, size_cap):
            objects.append(TowerObject(tower, i, canonical_gset(G, m)))

    def lift(A: TowerObject, k: int) -> GSet:
        if A.level == k:
            return A.carrier
        return inflate(A.carrier, tower.projection(k, A.level))

    def hom(A, B):
        k = max(A.level, B.level)
        return tuple((A, B, f.values) for f in hom_gset(lift(A, k), lift(B, k)))

    def compose(gm, fm):
        return (fm[0], gm[1], tuple(gm[2][v] for v in fm[2]))

    def identity(A):
        return (A, A, tuple(range(A.carrier.size)))

    return fincat.FinCat(objects, hom, compose, identity, name="discrete")


def gset_isoclasses(G: FiniteGroup, size_cap: int) -> list[tuple[int, ...]]:
    """Orbit-class multisets of all G-set isomorphism classes of size <= cap."""
    lat = subgroup_lattice(G)
    sizes = [G.order // lat.class_rep(c).order for c in range(lat.num_classes)]
    out: list[tuple[int, ...]] = []

    def extend(prefix, start, budget):
        out.append(tuple(prefix))
        for c in range(start, lat.num_classes):
            if sizes[c] <= budget:
                extend(prefix + [c], c, budget - sizes[c])

    extend([], 0, size_cap)
    return sorted(out)
