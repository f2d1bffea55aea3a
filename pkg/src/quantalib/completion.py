"""Presheaf enumeration, Yoneda embedding, Cauchy and symmetric completion.

A presheaf on A at base object X is a distributor into A from the
one-object category with identity hom at X; enumeration is exhaustive with
per-object pruning and a global node cap.
"""

from __future__ import annotations

from typing import Iterable

from .errors import (CapabilityError, InputError, InternalConsistencyError,
                     ResourceLimitError)
from .quantaloid import FiniteQuantaloid, Morphism
from .qcat import (Distributor, QCategory, compose_dist, identity_dist,
                   involute_dist, is_left_adjoint_dist, is_symmetric)

__all__ = [
    "Presheaf", "unit_category", "presheaves", "presheaf_hom", "yoneda",
    "left_adjoint_presheaves", "symmetric_left_adjoint_presheaves",
    "cauchy_completion", "symmetric_completion",
    "is_cauchy_complete", "is_symmetrically_complete",
    "presheaf_iso", "iso_class_count", "yoneda_is_morita",
]

DEFAULT_MAX_NODES = 10 ** 6


class Presheaf:
    """Element family elt[a]: X -> ta satisfying A(a', a) o elt[a] <= elt[a']."""

    __slots__ = ("category", "at", "elt")

    def __init__(self, category: QCategory, at: str, elt: dict[str, str],
                 validate: bool = True):
        self.category = category
        self.at = at
        self.elt = dict(elt)
        if validate:
            self._validate()

    def _validate(self):
        a = self.category
        q = a.base
        if self.at not in q.objects:
            raise InputError(f"presheaf base object {self.at!r} unknown")
        for x in a.objects:
            e = self.elt.get(x)
            if e is None or e not in q.hom(self.at, a.types[x])._index:
                raise InputError(f"presheaf element at {x!r} missing or outside hom")
        for x2 in a.objects:
            for x in a.objects:
                act = q.compose_elt(self.at, a.types[x], a.types[x2],
                                    a.hom[(x2, x)], self.elt[x])
                if not q.hom(self.at, a.types[x2]).leq(act, self.elt[x2]):
                    raise InputError(f"presheaf action fails at ({x2},{x})")

    def key(self):
        return (self.at, tuple(self.elt[x] for x in self.category.objects))

    def name(self) -> str:
        inner = ",".join(f"{x}={self.elt[x]}" for x in self.category.objects)
        return f"{self.at}|{inner}"

    def morphism_at(self, x: str) -> Morphism:
        return Morphism(self.at, self.category.types[x], self.elt[x])

    def to_distributor(self) -> Distributor:
        star = unit_category(self.category.base, self.at)
        elt = {(x, "*"): self.elt[x] for x in self.category.objects}
        return Distributor(star, self.category, elt, validate=False)

    def __eq__(self, other):
        return (isinstance(other, Presheaf) and self.category == other.category
                and self.key() == other.key())

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Presheaf({self.name()})"


def unit_category(base: FiniteQuantaloid, at: str) -> QCategory:
    """*_X: one object of type X whose single hom-arrow is the identity."""
    return QCategory(base, ["*"], {"*": at}, {("*", "*"): base.ids[at]})


def presheaves(a: QCategory, at: str, max_nodes: int = DEFAULT_MAX_NODES) -> list:
    """All presheaves on `a` at base object `at`, in canonical order.

    Backtracks over objects in sorted order; a candidate value must receive
    every already-assigned action and push its own action below the
    assigned values.  Exceeding `max_nodes` partial assignments raises a
    resource error.
    """
    q = a.base
    objs = a.objects
    out: list[Presheaf] = []
    budget = [max_nodes]
    assign: dict[str, str] = {}

    def ok(i: int, v: str) -> bool:
        x = objs[i]
        tx = a.types[x]
        act = q.compose_elt(at, tx, tx, a.hom[(x, x)], v)
        if not q.hom(at, tx).leq(act, v):
            return False
        for j in range(i):
            y = objs[j]
            ty = a.types[y]
            w = assign[y]
            if not q.hom(at, tx).leq(q.compose_elt(at, ty, tx, a.hom[(x, y)], w), v):
                return False
            if not q.hom(at, ty).leq(q.compose_elt(at, tx, ty, a.hom[(y, x)], v), w):
                return False
        return True

    def rec(i: int):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError(
                f"presheaf enumeration exceeded {max_nodes} partial assignments",
                limit=max_nodes, reached=len(out))
        if i == len(objs):
            out.append(Presheaf(a, at, dict(assign), validate=False))
            return
        x = objs[i]
        for v in q.hom(at, a.types[x]).elements:
            if ok(i, v):
                assign[x] = v
                rec(i + 1)
                del assign[x]

    rec(0)
    return out


def presheaf_hom(psi: Presheaf, phi: Presheaf) -> str:
    """P(A)(psi, phi) = [psi, phi], the lifting through psi, computed as the
    meet over objects of the pointwise lifting; an element of
    Q(phi.at, psi.at)."""
    if psi.category != phi.category:
        raise InputError("presheaves live on different categories")
    a = psi.category
    q = a.base
    lat = q.hom(phi.at, psi.at)
    cands = [q.right_residual(psi.morphism_at(x), phi.morphism_at(x)).elt
             for x in a.objects]
    return lat.meet(cands) if cands else lat.top


def yoneda(a: QCategory, obj: str) -> Presheaf:
    """The representable presheaf A(-, obj) at t(obj)."""
    if obj not in a.objects:
        raise InputError(f"unknown object {obj!r}")
    return Presheaf(a, a.types[obj], {x: a.hom[(x, obj)] for x in a.objects},
                    validate=False)


def left_adjoint_presheaves(a: QCategory, ats: Iterable[str] | None = None,
                            max_nodes: int = DEFAULT_MAX_NODES) -> list[Presheaf]:
    q = a.base
    out = []
    for at in (sorted(ats) if ats is not None else q.objects):
        for phi in presheaves(a, at, max_nodes):
            if is_left_adjoint_dist(phi.to_distributor()) is not None:
                out.append(phi)
    return out


def is_symmetric_left_adjoint_presheaf(phi: Presheaf) -> bool:
    """Left adjoint whose right adjoint is its involute, as a distributor."""
    d = phi.to_distributor()
    psi = is_left_adjoint_dist(d)
    if psi is None:
        return False
    return psi == involute_dist(d)


def symmetric_left_adjoint_presheaves(a: QCategory, ats: Iterable[str] | None = None,
                                      max_nodes: int = DEFAULT_MAX_NODES) -> list[Presheaf]:
    q = a.base
    if not q.involutive:
        raise CapabilityError("symmetric left adjoints need an involutive base")
    if not is_symmetric(a):
        raise CapabilityError("symmetric completion machinery needs a symmetric category")
    out = []
    for at in (sorted(ats) if ats is not None else q.objects):
        for phi in presheaves(a, at, max_nodes):
            if is_symmetric_left_adjoint_presheaf(phi):
                out.append(phi)
    return out


def _completion_category(a: QCategory, objects: list[Presheaf]) -> tuple[QCategory, dict]:
    objects = sorted(objects, key=lambda p: p.key())
    names = {}
    for p in objects:
        names[p.name()] = p
    types = {p.name(): p.at for p in objects}
    hom = {}
    for p2 in objects:
        for p in objects:
            hom[(p2.name(), p.name())] = presheaf_hom(p2, p)
    cat = QCategory(a.base, [p.name() for p in objects], types, hom)
    return cat, names


def cauchy_completion(a: QCategory, max_nodes: int = DEFAULT_MAX_NODES):
    """Full subcategory of P(A) on the left adjoint presheaves, plus the
    corestricted Yoneda functor A -> A_cc."""
    from .qcat import Functor
    objs = left_adjoint_presheaves(a, max_nodes=max_nodes)
    cc, names = _completion_category(a, objs)
    mapping = {x: yoneda(a, x).name() for x in a.objects}
    for x, nm in mapping.items():
        if nm not in names:
            raise InternalConsistencyError(
                f"representable presheaf at {x!r} is not left adjoint")
    return cc, Functor(a, cc, mapping), names


def symmetric_completion(a: QCategory, max_nodes: int = DEFAULT_MAX_NODES):
    """Full subcategory of A_cc on the symmetric left adjoint presheaves."""
    from .qcat import Functor
    objs = symmetric_left_adjoint_presheaves(a, max_nodes=max_nodes)
    sc, names = _completion_category(a, objs)
    if not is_symmetric(sc):
        raise InternalConsistencyError("symmetric completion is not symmetric")
    mapping = {x: yoneda(a, x).name() for x in a.objects}
    for x, nm in mapping.items():
        if nm not in names:
            raise InternalConsistencyError(
                f"representable presheaf at {x!r} is not a symmetric left adjoint")
    return sc, Functor(a, sc, mapping), names


def presheaf_iso(psi: Presheaf, phi: Presheaf) -> bool:
    """Isomorphism inside P(A): same type and mutually 1 <= [,-]."""
    if psi.at != phi.at:
        return False
    q = psi.category.base
    one = q.ids[psi.at]
    lat = q.hom(psi.at, psi.at)
    return lat.leq(one, presheaf_hom(psi, phi)) and lat.leq(one, presheaf_hom(phi, psi))


def iso_class_count(items: list[Presheaf]) -> int:
    reps: list[Presheaf] = []
    for p in sorted(items, key=lambda x: x.key()):
        if not any(presheaf_iso(p, r) for r in reps):
            reps.append(p)
    return len(reps)


def is_cauchy_complete(a: QCategory, max_nodes: int = DEFAULT_MAX_NODES):
    """Every left adjoint presheaf is isomorphic in P(A) to a representable."""
    for phi in left_adjoint_presheaves(a, max_nodes=max_nodes):
        if not any(presheaf_iso(phi, yoneda(a, x)) for x in a.objects
                   if a.types[x] == phi.at):
            return False, {"presheaf": phi.name()}
    return True, None


def is_symmetrically_complete(a: QCategory, max_nodes: int = DEFAULT_MAX_NODES):
    for phi in symmetric_left_adjoint_presheaves(a, max_nodes=max_nodes):
        if not any(presheaf_iso(phi, yoneda(a, x)) for x in a.objects
                   if a.types[x] == phi.at):
            return False, {"presheaf": phi.name()}
    return True, None


def yoneda_is_morita(a: QCategory, max_nodes: int = DEFAULT_MAX_NODES):
    """The distributor induced by the corestricted Yoneda functor is an
    isomorphism in Dist: graph and cograph compose to the two homs."""
    from .qcat import cograph_of, graph_of
    cc, y_fun, _ = cauchy_completion(a, max_nodes=max_nodes)
    gr, co = graph_of(y_fun), cograph_of(y_fun)
    down = compose_dist(co, gr)
    up = compose_dist(gr, co)
    ok = (down == identity_dist(a)) and (up == identity_dist(cc))
    if ok:
        return True, None
    return False, {"co_gr_is_hom_A": down == identity_dist(a),
                   "gr_co_is_hom_Acc": up == identity_dist(cc)}
