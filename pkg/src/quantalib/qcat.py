"""Categories, functors and distributors enriched in a finite quantaloid.

Distributor composition, involutes, symmetrisation, representability,
adjoints, and the matrix calculus (matrices = distributors between discrete
categories).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (CapabilityError, CompositionError, InputError,
                     InternalConsistencyError)
from .quantaloid import FiniteQuantaloid, Morphism

__all__ = [
    "QTypedSet", "QCategory", "Functor", "Distributor",
    "identity_dist", "compose_dist", "involute_dist",
    "symmetrise", "is_symmetric",
    "graph_of", "cograph_of", "is_left_adjoint_dist", "is_representable",
    "product", "map_tabulation",
    "discrete_category", "delta_matrix", "direct_sum",
    "is_monad", "is_symmetric_monad", "is_antisymmetric_monad",
    "category_from_monad", "monad_of_category",
    "functor_leq", "dist_leq",
]


@dataclass(frozen=True)
class QTypedSet:
    """Finite set of object ids with a type in the base quantaloid each."""
    elems: tuple[str, ...]
    types: Mapping[str, str]

    def __init__(self, elems: Iterable[str], types: Mapping[str, str]):
        object.__setattr__(self, "elems", tuple(sorted(set(elems))))
        object.__setattr__(self, "types", dict(types))
        for e in self.elems:
            if e not in self.types:
                raise InputError(f"element {e!r} has no type")


class QCategory:
    """Hom-arrows A(y, x): tx -> ty subject to composition and unit laws."""

    def __init__(self, base: FiniteQuantaloid, objects: Iterable[str],
                 types: Mapping[str, str], hom: Mapping[tuple[str, str], str],
                 validate: bool = True):
        self.base = base
        self.objects = tuple(sorted(set(objects)))
        self.types = {x: types[x] for x in self.objects}
        self.hom = {(y, x): hom[(y, x)] for y in self.objects for x in self.objects}
        if validate:
            self._validate()

    def _validate(self):
        q = self.base
        for x in self.objects:
            t = self.types.get(x)
            if t not in q.objects:
                raise InputError(f"type of {x!r} is not a base object: {t!r}")
        for y in self.objects:
            for x in self.objects:
                e = self.hom.get((y, x))
                lat = q.hom(self.types[x], self.types[y])
                if e is None or e not in lat._index:
                    raise InputError(f"hom({y},{x}) missing or outside Q({self.types[x]},{self.types[y]})")
        for x in self.objects:
            tx = self.types[x]
            if not q.hom(tx, tx).leq(q.ids[tx], self.hom[(x, x)]):
                raise InputError(f"unit law fails at object {x!r}")
        for z in self.objects:
            for y in self.objects:
                for x in self.objects:
                    tx, ty, tz = self.types[x], self.types[y], self.types[z]
                    comp = q.compose_elt(tx, ty, tz, self.hom[(z, y)], self.hom[(y, x)])
                    if not q.hom(tx, tz).leq(comp, self.hom[(z, x)]):
                        raise InputError(f"composition law fails at ({z},{y},{x})")

    def hom_morphism(self, y: str, x: str) -> Morphism:
        return Morphism(self.types[x], self.types[y], self.hom[(y, x)])

    def carrier(self) -> QTypedSet:
        return QTypedSet(self.objects, self.types)

    def canonical_key(self):
        return (tuple(self.types[x] for x in self.objects),
                tuple(self.hom[(y, x)] for y in self.objects for x in self.objects))

    def __eq__(self, other):
        return (isinstance(other, QCategory) and self.base is other.base
                and self.objects == other.objects and self.types == other.types
                and self.hom == other.hom)

    def __hash__(self):
        return hash((self.objects, tuple(sorted(self.types.items())),
                     tuple(sorted(self.hom.items()))))

    def __repr__(self):
        return f"QCategory({len(self.objects)} objects)"

    def to_json(self) -> dict:
        return {"objects": dict(sorted(self.types.items())),
                "hom": sorted([y, x, e] for (y, x), e in self.hom.items())}

    @classmethod
    def from_json(cls, base: FiniteQuantaloid, data: dict) -> "QCategory":
        if "objects" not in data:
            raise InputError("category JSON needs an 'objects' map")
        types = dict(data["objects"])
        hom = {}
        for y, x, e in data.get("hom", []):
            hom[(y, x)] = e
        return cls(base, types.keys(), types, hom)


class Functor:
    def __init__(self, dom: QCategory, cod: QCategory, mapping: Mapping[str, str],
                 validate: bool = True):
        self.dom = dom
        self.cod = cod
        self.mapping = dict(mapping)
        if validate:
            self._validate()

    def _validate(self):
        a, b = self.dom, self.cod
        if a.base is not b.base:
            raise InputError("functor endpoints live over different bases")
        q = a.base
        for x in a.objects:
            fx = self.mapping.get(x)
            if fx not in b.objects:
                raise InputError(f"functor undefined or out of range at {x!r}")
            if a.types[x] != b.types[fx]:
                raise InputError(f"functor changes the type of {x!r}")
        for y in a.objects:
            for x in a.objects:
                lat = q.hom(a.types[x], a.types[y])
                if not lat.leq(a.hom[(y, x)], b.hom[(self.mapping[y], self.mapping[x])]):
                    raise InputError(f"functor inequality fails at ({y},{x})")

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def __eq__(self, other):
        return (isinstance(other, Functor) and self.dom == other.dom
                and self.cod == other.cod and self.mapping == other.mapping)

    def __repr__(self):
        return f"Functor({self.mapping})"

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(),
                "map": dict(sorted(self.mapping.items()))}

    @classmethod
    def from_json(cls, base, data: dict) -> "Functor":
        if "dom" not in data or "cod" not in data or "map" not in data:
            raise InputError("functor JSON needs 'dom', 'cod' and 'map'")
        return cls(QCategory.from_json(base, data["dom"]),
                   QCategory.from_json(base, data["cod"]), dict(data["map"]))


def functor_leq(f: Functor, g: Functor) -> bool:
    """Local order: 1_{tx} <= B(Fx, Gx) for every x."""
    if f.dom != g.dom or f.cod != g.cod:
        raise CompositionError("functors are not parallel")
    a, b, q = f.dom, f.cod, f.dom.base
    for x in a.objects:
        tx = a.types[x]
        if not q.hom(tx, tx).leq(q.ids[tx], b.hom[(f(x), g(x))]):
            return False
    return True


class Distributor:
    """Elements elt[(y, x)]: tx -> ty for x in dom, y in cod, subject to the
    two action inequalities."""

    def __init__(self, dom: QCategory, cod: QCategory,
                 elt: Mapping[tuple[str, str], str], validate: bool = True):
        self.dom = dom
        self.cod = cod
        self.elt = {(y, x): elt[(y, x)] for y in cod.objects for x in dom.objects}
        if validate:
            self._validate()

    def _validate(self):
        a, b = self.dom, self.cod
        if a.base is not b.base:
            raise InputError("distributor endpoints live over different bases")
        q = a.base
        for y in b.objects:
            for x in a.objects:
                e = self.elt.get((y, x))
                if e is None or e not in q.hom(a.types[x], b.types[y])._index:
                    raise InputError(f"element ({y},{x}) missing or outside its hom")
        for y2 in b.objects:
            for y in b.objects:
                for x in a.objects:
                    tx, ty, ty2 = a.types[x], b.types[y], b.types[y2]
                    act = q.compose_elt(tx, ty, ty2, b.hom[(y2, y)], self.elt[(y, x)])
                    if not q.hom(tx, ty2).leq(act, self.elt[(y2, x)]):
                        raise InputError(f"left action fails at ({y2},{y},{x})")
        for y in b.objects:
            for x in a.objects:
                for x2 in a.objects:
                    tx2, tx, ty = a.types[x2], a.types[x], b.types[y]
                    act = q.compose_elt(tx2, tx, ty, self.elt[(y, x)], a.hom[(x, x2)])
                    if not q.hom(tx2, ty).leq(act, self.elt[(y, x2)]):
                        raise InputError(f"right action fails at ({y},{x},{x2})")

    def __eq__(self, other):
        return (isinstance(other, Distributor) and self.dom == other.dom
                and self.cod == other.cod and self.elt == other.elt)

    def __hash__(self):
        return hash(tuple(sorted(self.elt.items())))

    def __repr__(self):
        return f"Distributor({len(self.dom.objects)}x{len(self.cod.objects)})"

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(),
                "elt": sorted([y, x, e] for (y, x), e in self.elt.items())}

    @classmethod
    def from_json(cls, base, data: dict) -> "Distributor":
        if "dom" not in data or "cod" not in data or "elt" not in data:
            raise InputError("distributor JSON needs 'dom', 'cod' and 'elt'")
        return cls(QCategory.from_json(base, data["dom"]),
                   QCategory.from_json(base, data["cod"]),
                   {(y, x): e for y, x, e in data["elt"]})


def identity_dist(a: QCategory) -> Distributor:
    """The hom of A, which is the unit for distributor composition."""
    return Distributor(a, a, dict(a.hom), validate=False)


def compose_dist(psi: Distributor, phi: Distributor) -> Distributor:
    """(Psi (x) Phi)(z, x) = sup_y Psi(z, y) o Phi(y, x)."""
    if phi.cod != psi.dom:
        raise CompositionError("distributors are not composable")
    a, b, c = phi.dom, phi.cod, psi.cod
    q = a.base
    elt = {}
    for z in c.objects:
        for x in a.objects:
            tx, tz = a.types[x], c.types[z]
            lat = q.hom(tx, tz)
            parts = [q.compose_elt(tx, b.types[y], tz, psi.elt[(z, y)], phi.elt[(y, x)])
                     for y in b.objects]
            elt[(z, x)] = lat.join(parts)
    return Distributor(a, c, elt, validate=False)


def dist_leq(phi: Distributor, psi: Distributor) -> bool:
    if phi.dom != psi.dom or phi.cod != psi.cod:
        raise CompositionError("distributors are not parallel")
    q = phi.dom.base
    for (y, x), e in phi.elt.items():
        if not q.hom(phi.dom.types[x], phi.cod.types[y]).leq(e, psi.elt[(y, x)]):
            return False
    return True


def is_symmetric(a: QCategory) -> bool:
    """A(x, y) = A(y, x)* for every two objects."""
    q = a.base
    if not q.involutive:
        raise CapabilityError("symmetry needs an involutive base")
    for y in a.objects:
        for x in a.objects:
            if a.hom[(x, y)] != q.involute_elt(a.types[x], a.types[y], a.hom[(y, x)]):
                return False
    return True


def symmetrise(a: QCategory) -> QCategory:
    """A_s(y, x) = A(y, x) /\\ A(x, y)*; the couniversal symmetric
    subcategory of A."""
    q = a.base
    if not q.involutive:
        raise CapabilityError("symmetrisation needs an involutive base")
    hom = {}
    for y in a.objects:
        for x in a.objects:
            lat = q.hom(a.types[x], a.types[y])
            hom[(y, x)] = lat.meet2(a.hom[(y, x)],
                                    q.involute_elt(a.types[x], a.types[y], a.hom[(x, y)]))
    return QCategory(q, a.objects, a.types, hom)


def involute_dist(phi: Distributor) -> Distributor:
    """Phi*(a, b) = Phi(b, a)*; endpoints must be symmetric for the result
    to satisfy the action axioms."""
    q = phi.dom.base
    if not q.involutive:
        raise CapabilityError("involute of a distributor needs an involutive base")
    if not (is_symmetric(phi.dom) and is_symmetric(phi.cod)):
        raise CapabilityError("involute of a distributor needs symmetric endpoints")
    a, b = phi.dom, phi.cod
    elt = {}
    for x in a.objects:
        for y in b.objects:
            elt[(x, y)] = q.involute_elt(a.types[x], b.types[y], phi.elt[(y, x)])
    return Distributor(b, a, elt)


def _raw_graph(f: Functor) -> Distributor:
    a, b = f.dom, f.cod
    elt = {(y, x): b.hom[(y, f(x))] for y in b.objects for x in a.objects}
    return Distributor(a, b, elt, validate=False)


def _raw_cograph(f: Functor) -> Distributor:
    a, b = f.dom, f.cod
    elt = {(x, y): b.hom[(f(x), y)] for x in a.objects for y in b.objects}
    return Distributor(b, a, elt, validate=False)


def _assert_graph_adjunction(f: Functor, gr: Distributor, co: Distributor):
    if not dist_leq(identity_dist(f.dom), compose_dist(co, gr)) or \
            not dist_leq(compose_dist(gr, co), identity_dist(f.cod)):
        raise InternalConsistencyError("graph -| cograph adjunction failed")


def graph_of(f: Functor) -> Distributor:
    """B(-, F-): A -|-> B, the left adjoint distributor represented by F;
    the adjunction against the cograph is asserted."""
    gr = _raw_graph(f)
    _assert_graph_adjunction(f, gr, _raw_cograph(f))
    return gr


def cograph_of(f: Functor) -> Distributor:
    """B(F-, -): B -|-> A, the right adjoint of the graph."""
    co = _raw_cograph(f)
    _assert_graph_adjunction(f, _raw_graph(f), co)
    return co


def is_left_adjoint_dist(phi: Distributor) -> Distributor | None:
    """Right adjoint candidate via the lifting of hom(B) through Phi; it is
    the right adjoint iff the unit inequality holds."""
    a, b = phi.dom, phi.cod
    q = a.base
    elt = {}
    for x in a.objects:
        for y in b.objects:
            tx, ty = a.types[x], b.types[y]
            lat = q.hom(ty, tx)
            cands = []
            for b2 in b.objects:
                f = Morphism(tx, b.types[b2], phi.elt[(b2, x)])
                g = Morphism(ty, b.types[b2], b.hom[(b2, y)])
                cands.append(q.right_residual(f, g).elt)
            elt[(x, y)] = lat.meet(cands) if cands else lat.top
    psi = Distributor(b, a, elt, validate=False)
    if dist_leq(identity_dist(a), compose_dist(psi, phi)) and \
            dist_leq(compose_dist(phi, psi), identity_dist(b)):
        return psi
    return None


def is_representable(phi: Distributor) -> Functor | None:
    """Exhaustive search for a functor F with graph B(-, F-) equal to Phi
    elementwise; first witness in canonical object order."""
    a, b = phi.dom, phi.cod
    targets: list[list[str]] = []
    for x in a.objects:
        targets.append([y for y in b.objects if b.types[y] == a.types[x]])

    mapping: dict[str, str] = {}

    def rec(i: int):
        if i == len(a.objects):
            return True
        x = a.objects[i]
        for y in targets[i]:
            ok = all(b.hom[(z, y)] == phi.elt[(z, x)] for z in b.objects)
            if ok:
                mapping[x] = y
                if rec(i + 1):
                    return True
                del mapping[x]
        return False

    if rec(0):
        try:
            return Functor(a, b, mapping)
        except InputError as exc:
            raise InternalConsistencyError(
                f"graph matched but functor axioms fail: {exc}") from exc
    return None


def product(a: QCategory, b: QCategory) -> tuple[QCategory, dict[str, tuple[str, str]]]:
    """Product category on the same-type pairs; hom is the meet of homs.
    Returns the category and the object decoding map."""
    q = a.base
    pairs = [(x, y) for x in a.objects for y in b.objects if a.types[x] == b.types[y]]
    names = {p: f"({p[0]},{p[1]})" for p in pairs}
    types = {names[p]: a.types[p[0]] for p in pairs}
    hom = {}
    for p2 in pairs:
        for p in pairs:
            lat = q.hom(types[names[p]], types[names[p2]])
            hom[(names[p2], names[p])] = lat.meet2(a.hom[(p2[0], p[0])], b.hom[(p2[1], p[1])])
    cat = QCategory(q, names.values(), types, hom)
    return cat, {v: k for k, v in names.items()}


def map_tabulation(phi: Distributor, require_complete: bool = True,
                   ) -> tuple[QCategory, Functor, Functor]:
    """Tabulate Phi: A -|-> B by the full subcategory R of A x B on the
    pairs where the identity sits below Phi, with the two projections.

    Both endpoints must be Cauchy complete (checked unless
    `require_complete` is False); the projections T: R -> A and S: R -> B
    then satisfy graph(S) (x) cograph(T) = Phi over a weakly tabular base.
    """
    a, b = phi.dom, phi.cod
    q = a.base
    if require_complete:
        from .completion import is_cauchy_complete
        for side, cat in (("domain", a), ("codomain", b)):
            ok, _ = is_cauchy_complete(cat)
            if not ok:
                raise InputError(f"map_tabulation needs a Cauchy complete {side}")
    prod, decode = product(a, b)
    keep = []
    for r in prod.objects:
        x, y = decode[r]
        t = a.types[x]
        if q.hom(t, t).leq(q.ids[t], phi.elt[(y, x)]):
            keep.append(r)
    types = {r: prod.types[r] for r in keep}
    hom = {(r2, r): prod.hom[(r2, r)] for r2 in keep for r in keep}
    rcat = QCategory(q, keep, types, hom)
    t_fun = Functor(rcat, a, {r: decode[r][0] for r in keep})
    s_fun = Functor(rcat, b, {r: decode[r][1] for r in keep})
    return rcat, t_fun, s_fun


# -- discrete categories and the matrix calculus ------------------------------


def discrete_category(base: FiniteQuantaloid, typed_set: QTypedSet) -> QCategory:
    """Endo-homs are identities, distinct-object homs are zero morphisms."""
    hom = {}
    for y in typed_set.elems:
        for x in typed_set.elems:
            tx, ty = typed_set.types[x], typed_set.types[y]
            hom[(y, x)] = base.ids[tx] if x == y else base.hom(tx, ty).bottom
    return QCategory(base, typed_set.elems, typed_set.types, hom)


def delta_matrix(base: FiniteQuantaloid, typed_set: QTypedSet) -> Distributor:
    """Identity matrix: Kronecker deltas on a typed set."""
    cat = discrete_category(base, typed_set)
    return identity_dist(cat)


def matrix(base: FiniteQuantaloid, dom: QTypedSet, cod: QTypedSet,
           elt: Mapping[tuple[str, str], str]) -> Distributor:
    """A matrix is exactly a distributor between discrete categories."""
    return Distributor(discrete_category(base, dom), discrete_category(base, cod), elt)


def direct_sum(base: FiniteQuantaloid, parts: list[QTypedSet],
               ) -> tuple[QTypedSet, list[Distributor], list[Distributor]]:
    """Disjoint union with injection and projection matrices satisfying
    p_i o s_j = delta_ij and sup_i s_i o p_i = identity."""
    elems, types = [], {}
    renames: list[dict[str, str]] = []
    for k, part in enumerate(parts):
        ren = {}
        for e in part.elems:
            name = f"{k}:{e}"
            ren[e] = name
            elems.append(name)
            types[name] = part.types[e]
        renames.append(ren)
    whole = QTypedSet(elems, types)
    injections, projections = [], []
    for k, part in enumerate(parts):
        ren = renames[k]
        s_elt, p_elt = {}, {}
        for e in part.elems:
            for w in whole.elems:
                tx, ty = part.types[e], whole.types[w]
                hit = (w == ren[e])
                s_elt[(w, e)] = base.ids[tx] if hit else base.hom(tx, ty).bottom
                p_elt[(e, w)] = base.ids[tx] if hit else base.hom(ty, tx).bottom
        injections.append(matrix(base, part, whole, s_elt))
        projections.append(matrix(base, whole, part, p_elt))
    return whole, injections, projections


def is_monad(m: Distributor) -> bool:
    """Delta <= M and M (x) M <= M; a monad among matrices is a category."""
    if m.dom != m.cod:
        raise InputError("monads are endo-matrices")
    return dist_leq(identity_dist(m.dom), m) and dist_leq(compose_dist(m, m), m)


def is_symmetric_monad(m: Distributor) -> bool:
    q = m.dom.base
    if not q.involutive:
        raise CapabilityError("symmetric monads need an involutive base")
    if not is_monad(m):
        return False
    return m == involute_dist(m)


def is_antisymmetric_monad(m: Distributor) -> bool:
    """Monad with M /\\ M* = Delta."""
    q = m.dom.base
    if not q.involutive:
        raise CapabilityError("anti-symmetric monads need an involutive base")
    if not is_monad(m):
        return False
    mo = involute_dist(m)
    delta = identity_dist(m.dom)
    for key, e in m.elt.items():
        y, x = key
        lat = q.hom(m.dom.types[x], m.cod.types[y])
        if lat.meet2(e, mo.elt[key]) != delta.elt[key]:
            return False
    return True


def category_from_monad(m: Distributor) -> QCategory:
    if not is_monad(m):
        raise InputError("not a monad: cannot read it as a category")
    a = m.dom
    return QCategory(a.base, a.objects, a.types, dict(m.elt))


def monad_of_category(a: QCategory) -> Distributor:
    """The hom-matrix of a category, as a matrix on its carrier."""
    disc = discrete_category(a.base, a.carrier())
    return Distributor(disc, disc, dict(a.hom))
