"""Universal constructions packaged as computables.

Example generators (locale and groupoid quantales), the Morita quantale of
endo-matrices, projection matrices versus normal symmetric categories,
normalization up to Morita equivalence, and the sheaf/order census with
Morita deduplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from typing import Iterable, Mapping

from .errors import (CapabilityError, InputError, InternalConsistencyError,
                     ResourceLimitError)
from .lattice import FiniteSupLattice, subset_id
from .quantaloid import (FiniteQuantaloid, Morphism, is_stably_gelfand,
                         si, split_idempotents, ssi)
from .qcat import (Distributor, QCategory, QTypedSet, compose_dist,
                   discrete_category, identity_dist, involute_dist,
                   is_left_adjoint_dist, is_symmetric)
from . import completion as _completion

__all__ = [
    "FiniteGroupoid", "group_z2", "trivial_group", "pair_groupoid",
    "cyclic_group",
    "locale_quantale", "groupoid_quantale",
    "morita_quantale", "matrix_unit_id", "morita_embedding",
    "projection_to_category", "category_to_projection", "normalize",
    "enumerate_categories", "morita_equivalent",
    "ShClass", "enumerate_sheaves", "sheaf_points",
]


# -- finite groupoids ---------------------------------------------------------


class FiniteGroupoid:
    def __init__(self, objects: Iterable[str], arrows: Iterable[str],
                 src: Mapping[str, str], tgt: Mapping[str, str],
                 comp: Mapping[tuple[str, str], str], inv: Mapping[str, str],
                 identities: Mapping[str, str], validate: bool = True):
        self.objects = tuple(sorted(set(objects)))
        self.arrows = tuple(sorted(set(arrows)))
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.comp = dict(comp)
        self.inv = dict(inv)
        self.identities = dict(identities)
        if validate:
            self._validate()

    def _validate(self):
        for a in self.arrows:
            if self.src.get(a) not in self.objects or self.tgt.get(a) not in self.objects:
                raise InputError(f"arrow {a!r} lacks endpoints")
            if self.inv.get(a) not in self.arrows:
                raise InputError(f"arrow {a!r} lacks an inverse")
        for x in self.objects:
            e = self.identities.get(x)
            if e is None or self.src.get(e) != x or self.tgt.get(e) != x:
                raise InputError(f"object {x!r} lacks an identity arrow")
        for g in self.arrows:
            for f in self.arrows:
                if self.tgt[f] != self.src[g]:
                    continue
                h = self.comp.get((g, f))
                if h is None or self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                    raise InputError(f"bad composite {g} o {f}")
        for f in self.arrows:
            if self.comp[(self.identities[self.tgt[f]], f)] != f or \
                    self.comp[(f, self.identities[self.src[f]])] != f:
                raise InputError(f"unit law fails at {f!r}")
        for h in self.arrows:
            for g in self.arrows:
                if self.tgt[g] != self.src[h]:
                    continue
                for f in self.arrows:
                    if self.tgt[f] != self.src[g]:
                        continue
                    if self.comp[(h, self.comp[(g, f)])] != self.comp[(self.comp[(h, g)], f)]:
                        raise InputError(f"associativity fails at ({h},{g},{f})")
        for f in self.arrows:
            fi = self.inv[f]
            if self.src[fi] != self.tgt[f] or self.tgt[fi] != self.src[f]:
                raise InputError(f"inverse of {f!r} has wrong endpoints")
            if self.comp[(fi, f)] != self.identities[self.src[f]] or \
                    self.comp[(f, fi)] != self.identities[self.tgt[f]]:
                raise InputError(f"inverse law fails at {f!r}")

    def to_json(self) -> dict:
        return {"objects": list(self.objects),
                "arrows": list(self.arrows),
                "src": dict(sorted(self.src.items())),
                "tgt": dict(sorted(self.tgt.items())),
                "comp": sorted([g, f, h] for (g, f), h in self.comp.items()),
                "inv": dict(sorted(self.inv.items())),
                "identities": dict(sorted(self.identities.items()))}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteGroupoid":
        for key in ("arrows", "src", "tgt", "comp", "inv"):
            if key not in data:
                raise InputError(f"groupoid JSON needs {key!r}")
        src, tgt = dict(data["src"]), dict(data["tgt"])
        objects = data.get("objects") or sorted(set(src.values()) | set(tgt.values()))
        comp = {(g, f): h for g, f, h in data["comp"]}
        identities = data.get("identities")
        if identities is None:
            identities = {}
            for x in objects:
                for a in data["arrows"]:
                    if src[a] != x or tgt[a] != x:
                        continue
                    if all(comp.get((a, f)) == f for f in data["arrows"] if tgt[f] == x) \
                            and all(comp.get((g, a)) == g for g in data["arrows"] if src[g] == x):
                        identities[x] = a
                        break
        return cls(objects, data["arrows"], src, tgt, comp, dict(data["inv"]), identities)


def group_from_table(elements: list[str], unit: str,
                     mult: Mapping[tuple[str, str], str]) -> FiniteGroupoid:
    inv = {}
    for a in elements:
        for b in elements:
            if mult[(a, b)] == unit and mult[(b, a)] == unit:
                inv[a] = b
                break
        if a not in inv:
            raise InputError(f"group element {a!r} has no inverse")
    return FiniteGroupoid(["*"], elements, {a: "*" for a in elements},
                          {a: "*" for a in elements}, dict(mult), inv,
                          {"*": unit})


def trivial_group() -> FiniteGroupoid:
    return group_from_table(["e"], "e", {("e", "e"): "e"})


def group_z2() -> FiniteGroupoid:
    mult = {("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "e"}
    return group_from_table(["e", "g"], "e", mult)


def cyclic_group(n: int) -> FiniteGroupoid:
    elems = [f"r{k}" for k in range(n)]
    mult = {(f"r{i}", f"r{j}"): f"r{(i + j) % n}" for i in range(n) for j in range(n)}
    return group_from_table(elems, "r0", mult)


def pair_groupoid(points: list[str]) -> FiniteGroupoid:
    """Arrow (i, j): i -> j for every ordered pair; subsets of arrows are
    exactly the binary relations on the points, read source-first."""
    arrows = [f"({i},{j})" for i in points for j in points]
    src = {f"({i},{j})": i for i in points for j in points}
    tgt = {f"({i},{j})": j for i in points for j in points}
    comp = {}
    for i in points:
        for j in points:
            for k in points:
                comp[(f"({j},{k})", f"({i},{j})")] = f"({i},{k})"
    inv = {f"({i},{j})": f"({j},{i})" for i in points for j in points}
    identities = {i: f"({i},{i})" for i in points}
    return FiniteGroupoid(points, arrows, src, tgt, comp, inv, identities)


# -- example generators ----------------------------------------------------------


def locale_quantale(lat: FiniteSupLattice, object_name: str = "*") -> FiniteQuantaloid:
    """One object, composition is meet, unit is top, trivial involution."""
    ok, bad = lat.is_locale()
    if not ok:
        raise InputError(f"not a locale: {bad}")
    o = object_name
    comp = {(o, o, o): {(g, f): lat.meet2(g, f)
                        for g in lat.elements for f in lat.elements}}
    inv = {(o, o): {f: f for f in lat.elements}}
    return FiniteQuantaloid([o], {(o, o): lat}, comp, {o: lat.top}, inv)


def groupoid_quantale(gpd: FiniteGroupoid, object_name: str = "*",
                      max_arrows: int = 6) -> FiniteQuantaloid:
    """Powerset of the arrow set under pointwise composition and inverse.

    The generator asserts the inverse-quantal-frame law: the top is the
    join of the partial units p with p* o p v p o p* <= 1.
    """
    arrows = gpd.arrows
    if len(arrows) > max_arrows:
        raise ResourceLimitError(
            f"groupoid quantale over {len(arrows)} arrows has 2^{len(arrows)} elements",
            limit=max_arrows, reached=len(arrows))
    masks = range(1 << len(arrows))
    subs = [frozenset(a for i, a in enumerate(arrows) if (m >> i) & 1) for m in masks]
    ids = {s: subset_id(s) for s in subs}
    lat = FiniteSupLattice([ids[s] for s in subs],
                           [(ids[s], ids[t]) for s in subs for t in subs if s <= t])
    o = object_name

    def mul(s, t):
        out = set()
        for a in s:
            for b in t:
                if gpd.src[a] == gpd.tgt[b]:
                    out.add(gpd.comp[(a, b)])
        return frozenset(out)

    comp = {(o, o, o): {(ids[s], ids[t]): ids[mul(s, t)] for s in subs for t in subs}}
    unit = frozenset(gpd.identities.values())
    inv = {(o, o): {ids[s]: ids[frozenset(gpd.inv[a] for a in s)] for s in subs}}
    q = FiniteQuantaloid([o], {(o, o): lat}, comp, {o: ids[unit]}, inv)

    partial_units = []
    one = ids[unit]
    for s in subs:
        sid = ids[s]
        so = q.involute_elt(o, o, sid)
        a = q.compose_elt(o, o, o, so, sid)
        b = q.compose_elt(o, o, o, sid, so)
        if lat.leq(lat.join2(a, b), one):
            partial_units.append(sid)
    if lat.join(partial_units) != lat.top:
        raise InternalConsistencyError(
            "groupoid quantale misses the inverse-quantal-frame law")
    return q


# -- Morita quantale of endo-matrices ----------------------------------------------


def _matrix_id(entries: Mapping[tuple[str, str], str], pairs) -> str:
    return "[" + ";".join(f"{a}>{b}:{entries[(b, a)]}" for a, b in pairs) + "]"


def matrix_unit_id(q: FiniteQuantaloid, f: Morphism) -> str:
    """Id of M_f: all entries zero except (dst, src) which is f."""
    pairs = [(a, b) for a in q.objects for b in q.objects]
    entries = {}
    for a, b in pairs:
        entries[(b, a)] = f.elt if (a, b) == (f.src, f.dst) else q.hom(a, b).bottom
    return _matrix_id(entries, pairs)


def morita_quantale(q: FiniteQuantaloid, max_size: int = 1024) -> FiniteQuantaloid:
    """The one-object quantale of endo-matrices on the typed set of all
    objects of q, with elementwise order and involution."""
    pairs = [(a, b) for a in q.objects for b in q.objects]
    size = 1
    for a, b in pairs:
        size *= len(q.hom(a, b).elements)
        if size > max_size:
            raise ResourceLimitError(
                f"Morita quantale carrier exceeds {max_size} matrices",
                limit=max_size, reached=size)
    choice_lists = [q.hom(a, b).elements for a, b in pairs]
    matrices = []
    for combo in product(*choice_lists):
        entries = {(b, a): e for (a, b), e in zip(pairs, combo)}
        matrices.append(entries)

    names = {}
    for m in matrices:
        names[_matrix_id(m, pairs)] = m
    order_pairs = []
    mats = sorted(names)
    for ida in mats:
        ma = names[ida]
        for idb in mats:
            mb = names[idb]
            if all(q.hom(a, b).leq(ma[(b, a)], mb[(b, a)]) for a, b in pairs):
                order_pairs.append((ida, idb))
    lat = FiniteSupLattice(mats, order_pairs)

    def matmul(mn, mm):
        out = {}
        for a, b in pairs:
            lat_ab = q.hom(a, b)
            parts = [q.compose_elt(a, c, b, mn[(b, c)], mm[(c, a)]) for c in q.objects]
            out[(b, a)] = lat_ab.join(parts)
        return out

    o = "*"
    table = {}
    for idn in mats:
        for idm in mats:
            table[(idn, idm)] = _matrix_id(matmul(names[idn], names[idm]), pairs)
    delta = {(b, a): (q.ids[a] if a == b else q.hom(a, b).bottom) for a, b in pairs}
    inv = None
    if q.involutive:
        inv_map = {}
        for idm in mats:
            m = names[idm]
            entries = {(b, a): q.involute_elt(b, a, m[(a, b)]) for a, b in pairs}
            inv_map[idm] = _matrix_id(entries, pairs)
        inv = {(o, o): inv_map}
    qm = FiniteQuantaloid([o], {(o, o): lat}, {(o, o, o): table},
                          {o: _matrix_id(delta, pairs)}, inv)
    qm.matrix_pairs = pairs
    qm.matrix_entries = names
    return qm


def morita_embedding(q: FiniteQuantaloid, qm: FiniteQuantaloid | None = None,
                     ) -> tuple[FiniteQuantaloid, dict[str, str]]:
    """Split the identity-block matrices in the Morita quantale and read off
    the fully faithful embedding of q; hom bijections are asserted
    elementwise."""
    if qm is None:
        qm = morita_quantale(q)
    o = qm.objects[0]
    blocks = [Morphism(o, o, matrix_unit_id(q, q.unit(a))) for a in q.objects]
    qme, _ = split_idempotents(qm, blocks,
                               require_involution=q.involutive)
    obj_map = {a: f"{o}:{matrix_unit_id(q, q.unit(a))}" for a in q.objects}
    for a in q.objects:
        for b in q.objects:
            expected = sorted(matrix_unit_id(q, m) for m in q.morphisms(a, b))
            got = sorted(qme.hom(obj_map[a], obj_map[b]).elements)
            if expected != got:
                raise InternalConsistencyError(
                    f"Morita embedding is not fully faithful on hom({a},{b})")
    return qme, obj_map


# -- projection matrices <-> normal symmetric categories -----------------------------


def _is_projection(p: Distributor) -> bool:
    q = p.dom.base
    if p.dom != p.cod:
        return False
    if compose_dist(p, p) != p:
        return False
    return involute_dist(p) == p


def projection_to_category(q: FiniteQuantaloid, p: Distributor,
                           q_ssi: FiniteQuantaloid | None = None,
                           ) -> tuple[QCategory, FiniteQuantaloid]:
    """Read a symmetric idempotent endo-matrix over q as a normal symmetric
    category enriched in ssi(q), typing each index by its diagonal."""
    ok, bad = is_stably_gelfand(q)
    if not ok:
        raise CapabilityError(f"projection matrices need a stably Gelfand base: {bad}")
    if not _is_projection(p):
        raise InputError("not a symmetric idempotent endo-matrix")
    if q_ssi is None:
        q_ssi = ssi(q)
    a = p.dom
    types = {}
    for x in a.objects:
        diag = p.elt[(x, x)]
        tname = f"{a.types[x]}:{diag}"
        if tname not in q_ssi.objects:
            raise InternalConsistencyError(
                f"diagonal {diag!r} at {x!r} is not a symmetric idempotent object")
        types[x] = tname
    hom = {(y, x): p.elt[(y, x)] for y in a.objects for x in a.objects}
    try:
        cat = QCategory(q_ssi, a.objects, types, hom)
    except InputError as exc:
        raise InternalConsistencyError(
            f"projection matrix does not define a category: {exc}") from exc
    if not is_symmetric(cat):
        raise InternalConsistencyError("projection category is not symmetric")
    return cat, q_ssi


def category_to_projection(q: FiniteQuantaloid, cat: QCategory) -> Distributor:
    """Inverse direction: a normal symmetric ssi(q)-category as a symmetric
    idempotent endo-matrix over q."""
    r = cat.base
    info = getattr(r, "split_info", None)
    if info is None:
        raise CapabilityError("category base must be an idempotent splitting of q")
    for x in cat.objects:
        if cat.hom[(x, x)] != r.ids[cat.types[x]]:
            raise InputError(f"category is not normal at {x!r}: endo-hom is not the identity")
    if not is_symmetric(cat):
        raise InputError("category is not symmetric")
    typed = QTypedSet(cat.objects, {x: info[cat.types[x]][0] for x in cat.objects})
    disc = discrete_category(q, typed)
    p = Distributor(disc, disc, dict(cat.hom))
    if not _is_projection(p):
        raise InternalConsistencyError("normal symmetric category gave no projection")
    return p


def normalize(cat: QCategory) -> tuple[QCategory, Distributor, Distributor]:
    """Retype each object at its endo-hom, producing a normal symmetric
    category Morita-equivalent to the input; the distributor witnesses are
    returned and their equations asserted."""
    r = cat.base
    if not r.involutive:
        raise CapabilityError("normalization needs an involutive base")
    if not is_symmetric(cat):
        raise InputError("normalization applies to symmetric categories")
    info = getattr(r, "split_info", None)
    if info is None:
        raise CapabilityError("normalization needs a base produced by idempotent splitting")
    types = {}
    for x in cat.objects:
        u = info[cat.types[x]][0]
        tname = f"{u}:{cat.hom[(x, x)]}"
        if tname not in r.objects:
            raise InputError(
                f"endo-hom at {x!r} is not split in the base; normalize over ssi")
        types[x] = tname
    normal = QCategory(r, cat.objects, types, dict(cat.hom))
    phi = Distributor(cat, normal, dict(cat.hom))
    psi = Distributor(normal, cat, dict(cat.hom))
    if compose_dist(phi, psi) != identity_dist(normal) or \
            compose_dist(psi, phi) != identity_dist(cat):
        raise InternalConsistencyError("normalization witnesses fail their equations")
    return normal, phi, psi


# -- category enumeration and Morita classes -----------------------------------------


def enumerate_categories(base: FiniteQuantaloid, max_objects: int,
                         symmetric: bool = True, max_count: int = 200000,
                         ) -> list[QCategory]:
    """All (symmetric) base-categories with at most `max_objects` objects,
    deduplicated up to object renaming, in canonical order."""
    if symmetric and not base.involutive:
        raise CapabilityError("symmetric enumeration needs an involutive base")
    out: list[QCategory] = []
    seen = set()
    budget = [max_count]

    def add(cat: QCategory):
        perms = _object_permutations(cat)
        key = min(perms)
        if key not in seen:
            seen.add(key)
            out.append(cat)

    for n in range(max_objects + 1):
        names = [f"x{i}" for i in range(n)]
        for type_combo in combinations_with_replacement(base.objects, n):
            types = dict(zip(names, type_combo))
            for hom in _hom_assignments(base, names, types, symmetric, budget):
                add(QCategory(base, names, types, hom, validate=False))
    return sorted(out, key=lambda c: (len(c.objects), c.canonical_key()))


def _object_permutations(cat: QCategory):
    from itertools import permutations
    names = cat.objects
    keys = []
    for perm in permutations(names):
        types = tuple(cat.types[p] for p in perm)
        hom = tuple(cat.hom[(y, x)] for y in perm for x in perm)
        keys.append((types, hom))
    return keys


def _hom_assignments(base, names, types, symmetric, budget):
    """Backtrack over hom entries; yields full hom dicts satisfying the
    category laws (and symmetry when requested)."""
    n = len(names)
    slots: list[tuple[str, str]] = [(names[i], names[i]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            slots.append((names[j], names[i]))
    hom: dict[tuple[str, str], str] = {}

    def candidates(slot):
        y, x = slot
        lat = base.hom(types[x], types[y])
        if x == y:
            one = base.ids[types[x]]
            for e in lat.elements:
                if not lat.leq(one, e):
                    continue
                if symmetric and base.involute_elt(types[x], types[x], e) != e:
                    continue
                yield e
        else:
            yield from lat.elements

    def closed_so_far() -> bool:
        keys = set(hom)
        for (z, y) in keys:
            for (y2, x) in keys:
                if y2 != y:
                    continue
                if (z, x) not in keys:
                    continue
                tx, ty, tz = types[x], types[y], types[z]
                c = base.compose_elt(tx, ty, tz, hom[(z, y)], hom[(y, x)])
                if not base.hom(tx, tz).leq(c, hom[(z, x)]):
                    return False
        return True

    def rec(k: int):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError("category enumeration exceeded its cap",
                                     reached="max_count")
        if k == len(slots):
            yield dict(hom)
            return
        slot = slots[k]
        y, x = slot
        for e in candidates(slot):
            hom[(y, x)] = e
            if symmetric:
                hom[(x, y)] = base.involute_elt(types[x], types[y], e)
            added_sym = symmetric and x != y
            if closed_so_far():
                yield from rec(k + 1)
            del hom[(y, x)]
            if added_sym:
                del hom[(x, y)]
        return

    if symmetric:
        yield from rec(0)
    else:
        # all ordered slots are free
        slots2 = [(names[j], names[i]) for j in range(n) for i in range(n)]

        def rec2(k: int):
            budget[0] -= 1
            if budget[0] < 0:
                raise ResourceLimitError("category enumeration exceeded its cap",
                                         reached="max_count")
            if k == len(slots2):
                yield dict(hom)
                return
            y, x = slots2[k]
            lat = base.hom(types[x], types[y])
            one = base.ids[types[x]]
            for e in lat.elements:
                if x == y and not lat.leq(one, e):
                    continue
                hom[(y, x)] = e
                if closed_so_far():
                    yield from rec2(k + 1)
                del hom[(y, x)]
            return

        yield from rec2(0)


def _distributors(a: QCategory, b: QCategory, budget: list[int]):
    """Enumerate all distributors A -|-> B by backtracking with the action
    axioms checked on the filled prefix."""
    q = a.base
    slots = [(y, x) for y in b.objects for x in a.objects]
    elt: dict[tuple[str, str], str] = {}

    def consistent() -> bool:
        keys = set(elt)
        for (y, x) in keys:
            tx, ty = a.types[x], b.types[y]
            for y2 in b.objects:
                if (y2, x) in keys:
                    ty2 = b.types[y2]
                    act = q.compose_elt(tx, ty, ty2, b.hom[(y2, y)], elt[(y, x)])
                    if not q.hom(tx, ty2).leq(act, elt[(y2, x)]):
                        return False
            for x2 in a.objects:
                if (y, x2) in keys:
                    tx2 = a.types[x2]
                    act = q.compose_elt(tx2, tx, ty, elt[(y, x)], a.hom[(x, x2)])
                    if not q.hom(tx2, ty).leq(act, elt[(y, x2)]):
                        return False
        return True

    def rec(k: int):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError("distributor enumeration exceeded its cap",
                                     reached="max_count")
        if k == len(slots):
            yield Distributor(a, b, dict(elt), validate=False)
            return
        y, x = slots[k]
        for e in q.hom(a.types[x], b.types[y]).elements:
            elt[(y, x)] = e
            if consistent():
                yield from rec(k + 1)
            del elt[(y, x)]
        return

    yield from rec(0)


def morita_equivalent(a: QCategory, b: QCategory, max_count: int = 100000):
    """Search for mutually inverse distributors; True on witness, False on
    exhausted search, None when the cap was hit (never a merged class)."""
    budget = [max_count]
    hom_a, hom_b = identity_dist(a), identity_dist(b)
    try:
        for phi in _distributors(a, b, budget):
            psi = is_left_adjoint_dist(phi)
            if psi is None:
                continue
            if compose_dist(psi, phi) == hom_a and compose_dist(phi, psi) == hom_b:
                return True
    except ResourceLimitError:
        return None
    return False


# -- sheaf census -----------------------------------------------------------------


@dataclass
class ShClass:
    representative: QCategory
    points: int
    members_found: int
    morita_unknown: bool = False

    def label(self) -> str:
        types = ",".join(self.representative.types[x]
                         for x in self.representative.objects)
        return f"[{types}]" if types else "[empty]"


def _unit_type_objects(split_quantaloid: FiniteQuantaloid) -> list[str]:
    info = getattr(split_quantaloid, "split_info", None)
    base = getattr(split_quantaloid, "split_base", None)
    if info is None or base is None:
        raise CapabilityError("census needs a base produced by idempotent splitting")
    return sorted(name for name, (u, e) in info.items() if e == base.ids[u])


def sheaf_points(cat: QCategory, symmetric: bool = True,
                 max_nodes: int = _completion.DEFAULT_MAX_NODES) -> int:
    """Number of elements of the sheaf presented by `cat`: iso-classes of
    (symmetric) left adjoint presheaves typed at the identity idempotents.

    Over the one-object bases of interest these are exactly the maps out of
    the 'unit cover' object, i.e. the elements of the corresponding set or
    group action.
    """
    ats = _unit_type_objects(cat.base)
    if symmetric:
        phis = _completion.symmetric_left_adjoint_presheaves(cat, ats=ats,
                                                             max_nodes=max_nodes)
    else:
        phis = _completion.left_adjoint_presheaves(cat, ats=ats, max_nodes=max_nodes)
    return _completion.iso_class_count(phis)


def enumerate_sheaves(q: FiniteQuantaloid, max_points: int,
                      mode: str = "symmetric", max_count: int = 200000,
                      max_morita: int = 100000,
                      max_presheaves: int = _completion.DEFAULT_MAX_NODES,
                      ) -> list[ShClass]:
    """Morita-class representatives of the (symmetric) categories enriched
    in the split quantaloid, filtered to the classes presenting sheaves
    with at most `max_points` elements.

    `mode` is 'symmetric' (sheaf/relation objects over the symmetric
    idempotent splitting) or 'all' (order/ideal objects over the splitting
    of all idempotents).
    """
    if mode not in ("symmetric", "all"):
        raise InputError(f"unknown census mode {mode!r}")
    symmetric = mode == "symmetric"
    if not q.objects:
        empty = QCategory(_empty_like(q), [], {}, {})
        return [ShClass(empty, 0, 1)]
    base = ssi(q) if symmetric else si(q)
    cats = enumerate_categories(base, max_points, symmetric=symmetric,
                                max_count=max_count)
    scored = []
    for cat in cats:
        pts = sheaf_points(cat, symmetric=symmetric, max_nodes=max_presheaves)
        if pts <= max_points:
            scored.append((cat, pts))

    classes: list[list[tuple[QCategory, int]]] = []
    unknown_flags: list[bool] = []
    for cat, pts in scored:
        placed = False
        unknown_here = False
        for idx, members in enumerate(classes):
            rep, rep_pts = members[0]
            if rep_pts != pts:
                continue
            verdict = morita_equivalent(cat, rep, max_count=max_morita)
            if verdict is True:
                members.append((cat, pts))
                placed = True
                break
            if verdict is None:
                unknown_here = True
                unknown_flags[idx] = True
        if not placed:
            classes.append([(cat, pts)])
            unknown_flags.append(unknown_here)

    out = []
    for members, unknown in zip(classes, unknown_flags):
        reps = []
        for cat, pts in members:
            if symmetric:
                try:
                    normal, _, _ = normalize(cat)
                    reps.append(normal)
                except (InputError, CapabilityError):
                    reps.append(cat)
            else:
                reps.append(cat)
        rep = min(reps, key=lambda c: (len(c.objects), c.canonical_key()))
        out.append(ShClass(rep, members[0][1], len(members), unknown))
    out.sort(key=lambda c: (c.points, len(c.representative.objects),
                            c.representative.canonical_key()))
    return out


def _empty_like(q: FiniteQuantaloid) -> FiniteQuantaloid:
    return FiniteQuantaloid([], {}, {}, {}, inv={} if q.involutive else None)
