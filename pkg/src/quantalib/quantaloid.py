"""Finite (involutive) quantaloids.

Composition, residuation, adjoints, the axiomatic predicates used to
recognise closed-crible and Grothendieck quantaloids, and idempotent
splitting.  Values are immutable after construction and all operations are
pure; caches are per-value dictionaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (CapabilityError, CompositionError, InputError,
                     InternalConsistencyError, ResourceLimitError)
from .lattice import FiniteSupLattice
from .report import Report, from_predicate

__all__ = [
    "Morphism", "FiniteQuantaloid",
    "is_locally_localic", "is_map_discrete", "is_weakly_tabular",
    "is_map_tabular", "is_weakly_modular", "is_tabular", "is_modular",
    "is_simple", "is_semi_simple", "is_weakly_semi_simple",
    "is_stably_gelfand", "is_cauchy_bilateral", "is_closed_crible",
    "is_grothendieck", "is_grothendieck_quantale_via_top",
    "derived_involution", "with_involution",
    "split_idempotents", "symmetric_idempotents", "all_idempotents",
    "ssi", "si", "predicate_report", "PREDICATE_NAMES",
    "find_isomorphism", "mutate_composition",
]


@dataclass(frozen=True)
class Morphism:
    src: str
    dst: str
    elt: str

    def __repr__(self):
        return f"{self.elt}:{self.src}->{self.dst}"


class FiniteQuantaloid:
    """Objects, hom-lattices, composition tables, identities, optional
    involution.

    `comp` maps (X, Y, Z) to a table {(g, f): g o f} with g in hom(Y,Z) and
    f in hom(X,Y).  Missing entries are a construction error, never
    inferred.
    """

    def __init__(self, objects: Iterable[str],
                 homs: dict[tuple[str, str], FiniteSupLattice],
                 comp: dict[tuple[str, str, str], dict[tuple[str, str], str]],
                 ids: dict[str, str],
                 inv: dict[tuple[str, str], dict[str, str]] | None = None,
                 validate: bool = True):
        self.objects: tuple[str, ...] = tuple(sorted(objects))
        self.homs = dict(homs)
        self.comp_table = {k: dict(v) for k, v in comp.items()}
        self.ids = dict(ids)
        self.inv_table = {k: dict(v) for k, v in inv.items()} if inv is not None else None
        self._maps_cache: dict[tuple[str, str], list[tuple[str, str]]] = {}
        self._rres_cache: dict[tuple, str] = {}
        self._lres_cache: dict[tuple, str] = {}
        if validate:
            bad = self.validate()
            if bad:
                raise InputError(f"invalid quantaloid: {bad[0]}"
                                 + (f" (+{len(bad)-1} more)" if len(bad) > 1 else ""))

    # -- structural access ---------------------------------------------------

    @property
    def involutive(self) -> bool:
        return self.inv_table is not None

    def hom(self, x: str, y: str) -> FiniteSupLattice:
        try:
            return self.homs[(x, y)]
        except KeyError:
            raise InputError(f"no hom-lattice for {x} -> {y}") from None

    def unit(self, x: str) -> Morphism:
        return Morphism(x, x, self.ids[x])

    def bottom(self, x: str, y: str) -> Morphism:
        return Morphism(x, y, self.hom(x, y).bottom)

    def top(self, x: str, y: str) -> Morphism:
        return Morphism(x, y, self.hom(x, y).top)

    def morphism(self, x: str, y: str, elt: str) -> Morphism:
        if elt not in self.hom(x, y)._index:
            raise InputError(f"{elt!r} is not an element of hom({x},{y})")
        return Morphism(x, y, elt)

    def morphisms(self, x: str, y: str):
        for e in self.hom(x, y).elements:
            yield Morphism(x, y, e)

    def all_morphisms(self):
        for x in self.objects:
            for y in self.objects:
                yield from self.morphisms(x, y)

    def leq(self, f: Morphism, g: Morphism) -> bool:
        if (f.src, f.dst) != (g.src, g.dst):
            raise CompositionError(f"cannot compare {f} with {g}")
        return self.hom(f.src, f.dst).leq(f.elt, g.elt)

    def join(self, x: str, y: str, morphisms: Iterable[Morphism]) -> Morphism:
        elts = []
        for m in morphisms:
            if (m.src, m.dst) != (x, y):
                raise CompositionError(f"join of mixed hom-types: {m} not in hom({x},{y})")
            elts.append(m.elt)
        return Morphism(x, y, self.hom(x, y).join(elts))

    def meet2(self, f: Morphism, g: Morphism) -> Morphism:
        if (f.src, f.dst) != (g.src, g.dst):
            raise CompositionError(f"cannot meet {f} with {g}")
        return Morphism(f.src, f.dst, self.hom(f.src, f.dst).meet2(f.elt, g.elt))

    def compose_elt(self, x: str, y: str, z: str, g: str, f: str) -> str:
        try:
            return self.comp_table[(x, y, z)][(g, f)]
        except KeyError:
            raise InputError(
                f"composition table has no entry for ({g} o {f}) at {x}->{y}->{z}") from None

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.dst != g.src:
            raise CompositionError(f"cannot compose {g} after {f}")
        return Morphism(f.src, g.dst, self.compose_elt(f.src, f.dst, g.dst, g.elt, f.elt))

    def involute(self, f: Morphism) -> Morphism:
        if self.inv_table is None:
            raise CapabilityError("quantaloid carries no involution")
        return Morphism(f.dst, f.src, self.inv_table[(f.src, f.dst)][f.elt])

    def involute_elt(self, x: str, y: str, elt: str) -> str:
        if self.inv_table is None:
            raise CapabilityError("quantaloid carries no involution")
        return self.inv_table[(x, y)][elt]

    # -- residuation and adjoints ---------------------------------------------

    def left_residual(self, g: Morphism, f: Morphism) -> Morphism:
        """Extension g <- f: the largest h: Y -> Z with h o f <= g, for
        g: X -> Z and f: X -> Y."""
        if g.src != f.src:
            raise CompositionError(f"left_residual needs a common source: {g}, {f}")
        x, y, z = f.src, f.dst, g.dst
        key = ("l", x, y, z, g.elt, f.elt)
        got = self._lres_cache.get(key)
        if got is None:
            hom_yz = self.hom(y, z)
            hom_xz = self.hom(x, z)
            table = self.comp_table[(x, y, z)]
            good = [h for h in hom_yz.elements if hom_xz.leq(table[(h, f.elt)], g.elt)]
            got = hom_yz.join(good)
            self._lres_cache[key] = got
        return Morphism(y, z, got)

    def right_residual(self, f: Morphism, g: Morphism) -> Morphism:
        """Lifting f -> g: the largest h: X -> Y with f o h <= g, for
        f: Y -> Z and g: X -> Z."""
        if f.dst != g.dst:
            raise CompositionError(f"right_residual needs a common target: {f}, {g}")
        x, y, z = g.src, f.src, f.dst
        key = ("r", x, y, z, f.elt, g.elt)
        got = self._rres_cache.get(key)
        if got is None:
            hom_xy = self.hom(x, y)
            hom_xz = self.hom(x, z)
            table = self.comp_table[(x, y, z)]
            good = [h for h in hom_xy.elements if hom_xz.leq(table[(f.elt, h)], g.elt)]
            got = hom_xy.join(good)
            self._rres_cache[key] = got
        return Morphism(x, y, got)

    def right_adjoint_of(self, f: Morphism) -> Morphism | None:
        """The right adjoint f* when f is a left adjoint, else None.

        Candidate is the lifting of the identity through f; when it
        satisfies the unit inequality it is the (unique) right adjoint.
        """
        cand = self.right_residual(f, self.unit(f.dst))
        unit = self.compose(cand, f)
        if self.leq(self.unit(f.src), unit):
            return cand
        return None

    def left_adjoints(self, x: str, y: str) -> list[tuple[str, str]]:
        """All (f, f*) element pairs with f: x -> y a left adjoint; cached."""
        key = (x, y)
        got = self._maps_cache.get(key)
        if got is None:
            got = []
            for f in self.morphisms(x, y):
                fs = self.right_adjoint_of(f)
                if fs is not None:
                    got.append((f.elt, fs.elt))
            self._maps_cache[key] = got
        return got

    def is_symmetric_left_adjoint(self, f: Morphism) -> bool:
        if self.inv_table is None:
            raise CapabilityError("symmetric left adjoints need an involution")
        fs = self.right_adjoint_of(f)
        return fs is not None and fs == self.involute(f)

    def spans_of_left_adjoints(self, x: str, y: str):
        """Spans (f: Z -> y, g: Z -> x) of left adjoints, with adjoints:
        yields (z, f, fstar, g, gstar)."""
        for z in self.objects:
            for f, fstar in self.left_adjoints(z, y):
                for g, gstar in self.left_adjoints(z, x):
                    yield z, f, fstar, g, gstar

    # -- validation ------------------------------------------------------------

    def validate(self) -> list[str]:
        problems: list[str] = []
        obs = self.objects
        for x in obs:
            for y in obs:
                if (x, y) not in self.homs:
                    problems.append(f"missing hom({x},{y})")
        if problems:
            return problems
        for x in obs:
            if x not in self.ids or self.ids[x] not in self.hom(x, x)._index:
                problems.append(f"missing/invalid identity at {x}")
        for x in obs:
            for y in obs:
                for z in obs:
                    table = self.comp_table.get((x, y, z))
                    if table is None:
                        problems.append(f"missing composition table {x}->{y}->{z}")
                        continue
                    hxy, hyz, hxz = self.hom(x, y), self.hom(y, z), self.hom(x, z)
                    for g in hyz.elements:
                        for f in hxy.elements:
                            h = table.get((g, f))
                            if h is None:
                                problems.append(f"no entry ({g} o {f}) at {x}->{y}->{z}")
                            elif h not in hxz._index:
                                problems.append(f"({g} o {f}) at {x}->{y}->{z} lands outside hom")
        if problems:
            return problems
        problems.extend(self._validate_units())
        problems.extend(self._validate_associativity())
        problems.extend(self._validate_join_preservation())
        if self.inv_table is not None:
            problems.extend(self._validate_involution())
        return problems

    def _validate_units(self):
        out = []
        for x in self.objects:
            for y in self.objects:
                hxy = self.hom(x, y)
                for f in hxy.elements:
                    if self.compose_elt(x, y, y, self.ids[y], f) != f:
                        out.append(f"unit law fails: 1_{y} o {f} != {f} at {x}->{y}")
                    if self.compose_elt(x, x, y, f, self.ids[x]) != f:
                        out.append(f"unit law fails: {f} o 1_{x} != {f} at {x}->{y}")
        return out

    def _validate_associativity(self):
        out = []
        obs = self.objects
        for x in obs:
            for y in obs:
                hxy = self.hom(x, y).elements
                for z in obs:
                    hyz = self.hom(y, z).elements
                    for w in obs:
                        hzw = self.hom(z, w).elements
                        for h in hzw:
                            for g in hyz:
                                hg = self.compose_elt(y, z, w, h, g)
                                for f in hxy:
                                    gf = self.compose_elt(x, y, z, g, f)
                                    if (self.compose_elt(x, z, w, h, gf)
                                            != self.compose_elt(x, y, w, hg, f)):
                                        out.append(
                                            f"associativity fails at ({h},{g},{f}) "
                                            f"{x}->{y}->{z}->{w}")
                                        if len(out) > 4:
                                            return out
        return out

    def _validate_join_preservation(self):
        out = []
        obs = self.objects
        for x in obs:
            for y in obs:
                hxy = self.hom(x, y)
                for z in obs:
                    hyz = self.hom(y, z)
                    hxz = self.hom(x, z)
                    table = self.comp_table[(x, y, z)]
                    bot_xy, bot_yz, bot_xz = hxy.bottom, hyz.bottom, hxz.bottom
                    for g in hyz.elements:
                        if table[(g, bot_xy)] != bot_xz:
                            out.append(f"{g} o bottom != bottom at {x}->{y}->{z}")
                    for f in hxy.elements:
                        if table[(bot_yz, f)] != bot_xz:
                            out.append(f"bottom o {f} != bottom at {x}->{y}->{z}")
                    for g in hyz.elements:
                        for f1 in hxy.elements:
                            for f2 in hxy.elements:
                                if f2 < f1:
                                    continue
                                lhs = table[(g, hxy.join2(f1, f2))]
                                rhs = hxz.join2(table[(g, f1)], table[(g, f2)])
                                if lhs != rhs:
                                    out.append(
                                        f"right join preservation fails: "
                                        f"{g} o ({f1} v {f2}) at {x}->{y}->{z}")
                    for f in hxy.elements:
                        for g1 in hyz.elements:
                            for g2 in hyz.elements:
                                if g2 < g1:
                                    continue
                                lhs = table[(hyz.join2(g1, g2), f)]
                                rhs = hxz.join2(table[(g1, f)], table[(g2, f)])
                                if lhs != rhs:
                                    out.append(
                                        f"left join preservation fails: "
                                        f"({g1} v {g2}) o {f} at {x}->{y}->{z}")
                    if len(out) > 4:
                        return out
        return out

    def _validate_involution(self):
        out = []
        inv = self.inv_table
        obs = self.objects
        for x in obs:
            for y in obs:
                if (x, y) not in inv:
                    out.append(f"missing involution table on hom({x},{y})")
                    continue
                hxy, hyx = self.hom(x, y), self.hom(y, x)
                t = inv[(x, y)]
                for f in hxy.elements:
                    fo = t.get(f)
                    if fo is None or fo not in hyx._index:
                        out.append(f"involution undefined/outside hom for {f} at {x}->{y}")
                        continue
                    if inv[(y, x)][fo] != f:
                        out.append(f"involution not involutive at {f} ({x}->{y})")
                for f1 in hxy.elements:
                    for f2 in hxy.elements:
                        if hxy.leq(f1, f2) and not hyx.leq(t[f1], t[f2]):
                            out.append(f"involution not monotone at {f1}<={f2} ({x}->{y})")
                for f1 in hxy.elements:
                    for f2 in hxy.elements:
                        if f2 < f1:
                            continue
                        if t[hxy.join2(f1, f2)] != hyx.join2(t[f1], t[f2]):
                            out.append(f"involution breaks joins at {f1},{f2} ({x}->{y})")
        if out:
            return out
        for x in obs:
            if inv[(x, x)][self.ids[x]] != self.ids[x]:
                out.append(f"(1_{x})* != 1_{x}")
        for x in obs:
            for y in obs:
                for z in obs:
                    for g in self.hom(y, z).elements:
                        for f in self.hom(x, y).elements:
                            gf = self.compose_elt(x, y, z, g, f)
                            lhs = inv[(x, z)][gf]
                            rhs = self.compose_elt(z, y, x, inv[(x, y)][f], inv[(y, z)][g])
                            if lhs != rhs:
                                out.append(f"(g o f)* != f* o g* at ({g},{f}) {x}->{y}->{z}")
                                if len(out) > 4:
                                    return out
        return out

    # -- interchange -------------------------------------------------------------

    def to_json(self) -> dict:
        arrow = lambda x, y: f"{x}->{y}"
        comp = {}
        for (x, y, z), table in sorted(self.comp_table.items()):
            comp[f"{x}->{y}->{z}"] = sorted([g, f, h] for (g, f), h in table.items())
        out = {
            "objects": list(self.objects),
            "homs": {arrow(x, y): self.homs[(x, y)].to_json()
                     for x in self.objects for y in self.objects},
            "comp": comp,
            "id": dict(sorted(self.ids.items())),
        }
        if self.inv_table is not None:
            out["inv"] = {arrow(x, y): sorted([f, fo] for f, fo in t.items())
                          for (x, y), t in sorted(self.inv_table.items())}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FiniteQuantaloid":
        if not isinstance(data, dict) or "objects" not in data:
            raise InputError("quantaloid JSON needs an 'objects' list")
        objects = list(data["objects"])

        def split_arrow(key, parts):
            bits = key.split("->")
            if len(bits) != parts:
                raise InputError(f"bad arrow key {key!r}")
            for b in bits:
                if b not in objects:
                    raise InputError(f"unknown object {b!r} in key {key!r}")
            return tuple(bits)

        homs = {}
        for key, lat in data.get("homs", {}).items():
            homs[split_arrow(key, 2)] = FiniteSupLattice.from_json(lat)
        comp = {}
        for key, entries in data.get("comp", {}).items():
            x, y, z = split_arrow(key, 3)
            table = {}
            for entry in entries:
                try:
                    g, f, h = entry
                except (TypeError, ValueError):
                    raise InputError(f"bad composition entry {entry!r} in {key!r}") from None
                table[(g, f)] = h
            comp[(x, y, z)] = table
        ids = data.get("id", {})
        inv = None
        if "inv" in data:
            inv = {}
            for key, pairs in data["inv"].items():
                inv[split_arrow(key, 2)] = {f: fo for f, fo in pairs}
        return cls(objects, homs, comp, ids, inv)

    def __repr__(self):
        n = sum(len(l.elements) for l in self.homs.values())
        tag = "involutive, " if self.involutive else ""
        return f"FiniteQuantaloid({tag}{len(self.objects)} objects, {n} morphisms)"


# -- predicates ----------------------------------------------------------------
# Each predicate returns (holds, detail); the detail is a replayable
# counterexample on failure and an optional witness on success.


def is_locally_localic(q: FiniteQuantaloid):
    for x in q.objects:
        for y in q.objects:
            ok, bad = q.hom(x, y).is_locale()
            if not ok:
                return False, {"hom": [x, y], **bad}
    return True, None


def is_map_discrete(q: FiniteQuantaloid):
    for x in q.objects:
        for y in q.objects:
            maps = q.left_adjoints(x, y)
            hxy = q.hom(x, y)
            for f, _ in maps:
                for g, _ in maps:
                    if f != g and hxy.leq(f, g):
                        return False, {"hom": [x, y], "f": f, "g": g}
    return True, None


def _weak_tabulation_sup(q: FiniteQuantaloid, x: str, y: str, target: str) -> tuple[str, list]:
    """sup of f o g* over spans of left adjoints (f: Z->y, g: Z->x) with
    f o g* <= target; also returns the contributing spans."""
    hxy = q.hom(x, y)
    parts, spans = [], []
    for z, f, _, g, gstar in q.spans_of_left_adjoints(x, y):
        fg = q.compose_elt(x, z, y, f, gstar)
        if hxy.leq(fg, target):
            parts.append(fg)
            spans.append({"apex": z, "f": f, "g": g})
    return hxy.join(parts), spans


def is_weakly_tabular(q: FiniteQuantaloid):
    for x in q.objects:
        for y in q.objects:
            for target in q.hom(x, y).elements:
                got, _ = _weak_tabulation_sup(q, x, y, target)
                if got != target:
                    return False, {"hom": [x, y], "q": target, "sup": got}
    return True, None


def is_map_tabular(q: FiniteQuantaloid):
    for x in q.objects:
        for y in q.objects:
            hxy = q.hom(x, y)
            for target in hxy.elements:
                found = None
                for z, f, fstar, g, gstar in q.spans_of_left_adjoints(x, y):
                    if q.compose_elt(x, z, y, f, gstar) != target:
                        continue
                    ff = q.compose_elt(z, y, z, fstar, f)
                    gg = q.compose_elt(z, x, z, gstar, g)
                    if q.hom(z, z).meet2(ff, gg) == q.ids[z]:
                        found = {"apex": z, "f": f, "g": g}
                        break
                if found is None:
                    return False, {"hom": [x, y], "q": target}
    return True, None


def is_weakly_modular(q: FiniteQuantaloid):
    for x in q.objects:
        for y in q.objects:
            hxy = q.hom(x, y)
            spans = list(q.spans_of_left_adjoints(x, y))
            for z, f, fstar, g, gstar in spans:
                fg = q.compose_elt(x, z, y, f, gstar)
                for w, m, mstar, n, nstar in spans:
                    mn = q.compose_elt(x, w, y, m, nstar)
                    lhs = hxy.meet2(fg, mn)
                    gn = q.compose_elt(w, x, z, gstar, n)
                    fm = q.compose_elt(w, y, z, fstar, m)
                    mid = q.hom(w, z).meet2(gn, fm)
                    rhs = q.compose_elt(x, w, y,
                                        q.compose_elt(w, z, y, f, mid), nstar)
                    if not hxy.leq(lhs, rhs):
                        return False, {"hom": [x, y],
                                       "span1": {"apex": z, "f": f, "g": g},
                                       "span2": {"apex": w, "m": m, "n": n}}
    return True, None


def _require_involution(q: FiniteQuantaloid, what: str):
    if q.inv_table is None:
        raise CapabilityError(f"{what} needs an involutive quantaloid")


def is_tabular(q: FiniteQuantaloid):
    _require_involution(q, "tabularity")
    for x in q.objects:
        for y in q.objects:
            hxy = q.hom(x, y)
            for target in hxy.elements:
                found = None
                for z, f, _, g, _ in q.spans_of_left_adjoints(x, y):
                    go = q.involute_elt(z, x, g)
                    if q.compose_elt(x, z, y, f, go) != target:
                        continue
                    fo = q.involute_elt(z, y, f)
                    ff = q.compose_elt(z, y, z, fo, f)
                    gg = q.compose_elt(z, x, z, go, g)
                    if q.hom(z, z).meet2(ff, gg) == q.ids[z]:
                        found = {"apex": z, "f": f, "g": g}
                        break
                if found is None:
                    return False, {"hom": [x, y], "q": target}
    return True, None


def is_modular(q: FiniteQuantaloid):
    """g o f /\\ h <= g o (f /\\ g* o h) for all composable triples."""
    _require_involution(q, "modularity")
    for x in q.objects:
        for y in q.objects:
            hxy = q.hom(x, y)
            for z in q.objects:
                hyz = q.hom(y, z)
                hxz = q.hom(x, z)
                for g in hyz.elements:
                    go = q.involute_elt(y, z, g)
                    for f in hxy.elements:
                        gf = q.compose_elt(x, y, z, g, f)
                        for h in hxz.elements:
                            lhs = hxz.meet2(gf, h)
                            goh = q.compose_elt(x, z, y, go, h)
                            rhs = q.compose_elt(x, y, z, g, hxy.meet2(f, goh))
                            if not hxz.leq(lhs, rhs):
                                return False, {"f": [x, y, f], "g": [y, z, g],
                                               "h": [x, z, h], "lhs": lhs, "rhs": rhs}
    return True, None


def is_simple(q: FiniteQuantaloid, m: Morphism) -> bool:
    """q o q* <= 1 under the involution."""
    _require_involution(q, "simplicity")
    mo = q.involute(m)
    return q.leq(q.compose(m, mo), q.unit(m.dst))


def simple_morphisms(q: FiniteQuantaloid, x: str, y: str) -> list[str]:
    return [m.elt for m in q.morphisms(x, y) if is_simple(q, m)]


def simple_morphism_listing(q: FiniteQuantaloid):
    """Informational entry for the report: the simple morphisms per hom."""
    _require_involution(q, "simplicity")
    return True, {f"{x}->{y}": simple_morphisms(q, x, y)
                  for x in q.objects for y in q.objects}


def _semi_simple_pairs(q: FiniteQuantaloid, x: str, y: str):
    """Pairs (z, f: z->y, g: z->x) of simple morphisms with their composite
    f o g*."""
    for z in q.objects:
        for f in simple_morphisms(q, z, y):
            for g in simple_morphisms(q, z, x):
                go = q.involute_elt(z, x, g)
                yield z, f, g, q.compose_elt(x, z, y, f, go)


def is_semi_simple(q: FiniteQuantaloid):
    _require_involution(q, "semi-simplicity")
    for x in q.objects:
        for y in q.objects:
            for target in q.hom(x, y).elements:
                if not any(fg == target for _, _, _, fg in _semi_simple_pairs(q, x, y)):
                    return False, {"hom": [x, y], "q": target}
    return True, None


def is_weakly_semi_simple(q: FiniteQuantaloid):
    _require_involution(q, "weak semi-simplicity")
    for x in q.objects:
        for y in q.objects:
            hxy = q.hom(x, y)
            for target in hxy.elements:
                parts = [fg for _, _, _, fg in _semi_simple_pairs(q, x, y)
                         if hxy.leq(fg, target)]
                got = hxy.join(parts)
                if got != target:
                    return False, {"hom": [x, y], "q": target, "sup": got}
    return True, None


def is_stably_gelfand(q: FiniteQuantaloid):
    """f o f* o f <= f implies f <= f o f* o f."""
    _require_involution(q, "stable Gelfandness")
    for x in q.objects:
        for y in q.objects:
            hxy = q.hom(x, y)
            for f in hxy.elements:
                fo = q.involute_elt(x, y, f)
                ffo = q.compose_elt(y, x, y, f, fo)
                fff = q.compose_elt(x, y, y, ffo, f)
                if hxy.leq(fff, f) and not hxy.leq(f, fff):
                    return False, {"hom": [x, y], "f": f}
    return True, None


def is_cauchy_bilateral(q: FiniteQuantaloid, max_nodes: int = 1 << 20):
    """Family condition bridging symmetrisation and Cauchy completion.

    Valid index families are compatibility cliques of pairs
    (f: X -> Xi, g: Xi -> X); by monotonicity of both sides it suffices to
    explore cliques whose premise-sup first dominates the identity, with
    vertices that do not strictly grow the premise skipped.  Aborts with a
    resource error above `max_nodes` explored states.
    """
    _require_involution(q, "Cauchy-bilaterality")
    budget = [max_nodes]
    for x in q.objects:
        bad = _cauchy_bilateral_at(q, x, budget)
        if bad is not None:
            return False, bad
    return True, None


def _cauchy_bilateral_at(q: FiniteQuantaloid, x: str, budget: list[int]):
    hxx = q.hom(x, x)
    one = q.ids[x]
    verts = []
    for xi in q.objects:
        hfwd, hbwd = q.hom(x, xi), q.hom(xi, x)
        for f in hfwd.elements:
            for g in hbwd.elements:
                gf = q.compose_elt(x, xi, x, g, f)
                fg = q.compose_elt(xi, x, xi, f, g)
                fgf = q.compose_elt(x, xi, xi, fg, f)
                gfg = q.compose_elt(xi, x, x, gf, g)
                if not (hfwd.leq(fgf, f) and hbwd.leq(gfg, g)):
                    continue
                fo = q.involute_elt(x, xi, f)
                go = q.involute_elt(xi, x, g)
                c = q.compose_elt(x, xi, x, hbwd.meet2(g, fo), hfwd.meet2(go, f))
                verts.append((xi, f, g, gf, c))
    nv = len(verts)
    compat = [0] * nv
    for i in range(nv):
        xi, fi, gi, gfi, _ = verts[i]
        hfi, hbi = q.hom(x, xi), q.hom(xi, x)
        for j in range(nv):
            xj, fj, gj, gfj, _ = verts[j]
            # f_j o g_i o f_i <= f_j  and  g_i o f_i o g_j <= g_j
            a = q.hom(x, xj).leq(q.compose_elt(x, x, xj, fj, gfi), fj)
            b = q.hom(xj, x).leq(q.compose_elt(xj, x, x, gfi, gj), gj)
            if a and b:
                compat[i] |= 1 << j

    suffix_pot = [hxx.bottom] * (nv + 1)
    for i in range(nv - 1, -1, -1):
        suffix_pot[i] = hxx.join2(suffix_pot[i + 1], verts[i][3])

    def conclusion_fails(chosen):
        sup = hxx.join([verts[i][4] for i in chosen])
        if hxx.leq(one, sup):
            return None
        return {"object": x,
                "family": [{"apex": verts[i][0], "f": verts[i][1], "g": verts[i][2]}
                           for i in chosen],
                "premise_sup": hxx.join([verts[i][3] for i in chosen]),
                "conclusion_sup": sup}

    if hxx.leq(one, hxx.bottom):
        bad = conclusion_fails([])
        if bad is not None:
            return bad

    def rec(start: int, chosen: list[int], mask_ok: int, cur_p: str):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError(
                "Cauchy-bilaterality clique search exceeded its node cap",
                limit=None, reached="max_nodes")
        for i in range(start, nv):
            if not (mask_ok >> i) & 1:
                continue
            p = verts[i][3]
            if hxx.leq(p, cur_p):
                continue  # adds nothing to the premise: redundant for minimal cliques
            new_p = hxx.join2(cur_p, p)
            chosen.append(i)
            if hxx.leq(one, new_p):
                bad = conclusion_fails(chosen)
                if bad is not None:
                    return bad
            else:
                new_mask = mask_ok & compat[i]
                if hxx.leq(one, hxx.join2(new_p, suffix_pot[i + 1])):
                    bad = rec(i + 1, chosen, new_mask, new_p)
                    if bad is not None:
                        return bad
            chosen.pop()
        return None

    # only self-compatible vertices are candidates at the root
    root_mask = 0
    for i in range(nv):
        if (compat[i] >> i) & 1:
            root_mask |= 1 << i
    return rec(0, [], root_mask, hxx.bottom)


def is_closed_crible(q: FiniteQuantaloid):
    """Axiomatic recognition: locally localic, map-discrete, weakly tabular
    and weakly modular."""
    for name, pred in (("locally_localic", is_locally_localic),
                       ("map_discrete", is_map_discrete),
                       ("weakly_tabular", is_weakly_tabular),
                       ("weakly_modular", is_weakly_modular)):
        ok, bad = pred(q)
        if not ok:
            return False, {"failed_axiom": name, "counterexample": bad}
    return True, None


def is_grothendieck(q: FiniteQuantaloid):
    """Modular + locally localic + weakly semi-simple; on success the
    witness records that splitting the symmetric idempotents yields a
    quantaloid passing the closed-crible axioms."""
    _require_involution(q, "the Grothendieck property")
    for name, pred in (("modular", is_modular),
                       ("locally_localic", is_locally_localic),
                       ("weakly_semi_simple", is_weakly_semi_simple)):
        ok, bad = pred(q)
        if not ok:
            return False, {"failed": name, "counterexample": bad}
    cc_ok, cc_bad = is_closed_crible(ssi(q))
    witness = {"ssi_closed_crible": cc_ok}
    if not cc_ok:
        witness["ssi_counterexample"] = cc_bad
    return True, witness


def is_grothendieck_quantale_via_top(q: FiniteQuantaloid):
    """One-object criterion: modular quantal frame whose top is a join of
    composites f o g* of simple elements.

    The frame law is checked before the involution is needed, so a
    non-localic candidate is refuted even when it carries no involution.
    """
    if len(q.objects) != 1:
        raise InputError("the quantal-frame criterion applies to one-object quantaloids")
    x = q.objects[0]
    hxx = q.hom(x, x)
    ok, bad = hxx.is_locale()
    if not ok:
        return False, {"failed": "locale", "counterexample": bad}
    _require_involution(q, "the quantal-frame criterion")
    ok, bad = is_modular(q)
    if not ok:
        return False, {"failed": "modular", "counterexample": bad}
    parts = [fg for _, _, _, fg in _semi_simple_pairs(q, x, x)]
    got = hxx.join(parts)
    if got != hxx.top:
        return False, {"failed": "weakly_semi_simple_top", "sup": got, "top": hxx.top}
    return True, {"top_decomposition_size": len(parts)}


PREDICATE_NAMES = {
    "locally_localic": (is_locally_localic, False),
    "map_discrete": (is_map_discrete, False),
    "weakly_tabular": (is_weakly_tabular, False),
    "map_tabular": (is_map_tabular, False),
    "weakly_modular": (is_weakly_modular, False),
    "tabular": (is_tabular, True),
    "modular": (is_modular, True),
    "simple_morphisms": (simple_morphism_listing, True),
    "semi_simple": (is_semi_simple, True),
    "weakly_semi_simple": (is_weakly_semi_simple, True),
    "stably_gelfand": (is_stably_gelfand, True),
    "cauchy_bilateral": (is_cauchy_bilateral, True),
    "closed_crible": (is_closed_crible, False),
    "grothendieck": (is_grothendieck, True),
}


def predicate_report(q: FiniteQuantaloid, subject: str,
                     which: Sequence[str] | None = None,
                     max_clique_nodes: int = 1 << 20) -> list[Report]:
    """Run the selected predicates (all applicable ones by default).

    Explicitly selecting an involution-dependent predicate on a plain
    quantaloid raises CapabilityError; the default selection just skips
    them.
    """
    import time
    selected = list(which) if which is not None else None
    if selected is not None:
        unknown = [n for n in selected if n not in PREDICATE_NAMES]
        if unknown:
            raise InputError(f"unknown predicates: {', '.join(unknown)}")
    names = selected or [n for n, (_, needs_inv) in PREDICATE_NAMES.items()
                         if q.involutive or not needs_inv]
    reports = []
    for name in names:
        fn, needs_inv = PREDICATE_NAMES[name]
        if needs_inv and not q.involutive:
            raise CapabilityError(f"predicate {name!r} needs an involution")
        t0 = time.perf_counter()
        if fn is is_cauchy_bilateral:
            ok, detail = fn(q, max_nodes=max_clique_nodes)
        else:
            ok, detail = fn(q)
        rep = from_predicate(subject, name, ok, detail)
        rep.elapsed = time.perf_counter() - t0
        reports.append(rep)
    return reports


# -- derived involution (Theorem-style reconstruction) --------------------------


def derived_involution(q: FiniteQuantaloid):
    """Involution table computed from spans of left adjoints.

    Returns None when the closed-crible axioms fail (not applicable);
    otherwise the table {(src, dst): {q: q*}}, which is guaranteed to make
    the quantaloid involutive and modular.
    """
    ok, _ = is_closed_crible(q)
    if not ok:
        return None
    table: dict[tuple[str, str], dict[str, str]] = {}
    for y in q.objects:
        for x in q.objects:
            hyx = q.hom(y, x)
            hxy = q.hom(x, y)
            t = {}
            for target in hyx.elements:
                parts = []
                for z, f, fstar, g, gstar in q.spans_of_left_adjoints(y, x):
                    # span (f: z->x, g: z->y); keep it when f o g* <= target
                    if hyx.leq(q.compose_elt(y, z, x, f, gstar), target):
                        parts.append(q.compose_elt(x, z, y, g, fstar))
                t[target] = hxy.join(parts)
            table[(y, x)] = t
    candidate = with_involution(q, table)
    ok, bad = is_modular(candidate)
    if not ok:
        raise InternalConsistencyError(
            f"derived involution failed to make the quantaloid modular: {bad}")
    return table


def with_involution(q: FiniteQuantaloid, table: dict[tuple[str, str], dict[str, str]],
                    ) -> FiniteQuantaloid:
    """Re-wrap with an involution table; all involution laws are validated."""
    try:
        return FiniteQuantaloid(q.objects, q.homs, q.comp_table, q.ids, table)
    except InputError as exc:
        raise InternalConsistencyError(f"proposed involution is invalid: {exc}") from exc


# -- idempotents and splitting ---------------------------------------------------


def all_idempotents(q: FiniteQuantaloid) -> list[Morphism]:
    out = []
    for x in q.objects:
        for e in q.hom(x, x).elements:
            if q.compose_elt(x, x, x, e, e) == e:
                out.append(Morphism(x, x, e))
    return out


def symmetric_idempotents(q: FiniteQuantaloid) -> list[Morphism]:
    _require_involution(q, "symmetric idempotents")
    return [m for m in all_idempotents(q)
            if q.involute_elt(m.src, m.src, m.elt) == m.elt]


def split_object_id(e: Morphism) -> str:
    return f"{e.src}:{e.elt}"


def split_idempotents(q: FiniteQuantaloid, idempotents: Sequence[Morphism],
                      require_involution: bool = False,
                      ) -> tuple[FiniteQuantaloid, dict[str, str] | None]:
    """Split the given idempotents.

    Objects of the result are the idempotents (named 'X:e'); the hom from e
    to f is the two-sided fixed-point set {x | f o x = x = x o e} with
    suprema as in q and identity e.  The involution is inherited when q is
    involutive and every idempotent is symmetric.  Returns (Q_E, embedding)
    with embedding the object map A -> '1_A object' when all identities are
    in E, else None.
    """
    for e in idempotents:
        if e.src != e.dst:
            raise InputError(f"{e} is not an endomorphism")
        if q.compose(e, e) != e:
            raise InputError(f"{e} is not idempotent")
    symmetric = None
    if q.involutive:
        symmetric = all(q.involute(e) == e for e in idempotents)
    if require_involution:
        if not q.involutive:
            raise CapabilityError("cannot inherit an involution: base has none")
        if not symmetric:
            bad = [e for e in idempotents if q.involute(e) != e]
            raise InputError(f"non-symmetric idempotent(s) in E: {bad[0]}")
    es = sorted(set(idempotents), key=lambda m: (m.src, m.elt))
    names = {e: split_object_id(e) for e in es}
    objects = [names[e] for e in es]
    if len(set(objects)) != len(objects):
        raise InternalConsistencyError("idempotent object ids collide")

    homs: dict[tuple[str, str], FiniteSupLattice] = {}
    member: dict[tuple[str, str], list[str]] = {}
    for e in es:
        for f in es:
            parent = q.hom(e.src, f.src)
            keep = []
            for x in parent.elements:
                if (q.compose_elt(e.src, f.src, f.src, f.elt, x) == x
                        and q.compose_elt(e.src, e.src, f.src, x, e.elt) == x):
                    keep.append(x)
            member[(names[e], names[f])] = keep
            sub = parent.restrict(keep)
            # suprema in the splitting are computed as in the base
            if sub.bottom != parent.bottom or any(
                    sub.join2(a, b) != parent.join2(a, b)
                    for a in keep for b in keep):
                raise InternalConsistencyError(
                    f"fixed-point hom of ({names[e]},{names[f]}) is not sup-closed")
            homs[(names[e], names[f])] = sub

    comp: dict[tuple[str, str, str], dict[tuple[str, str], str]] = {}
    for e in es:
        for f in es:
            for g in es:
                table = {}
                for gg in member[(names[f], names[g])]:
                    for ff in member[(names[e], names[f])]:
                        table[(gg, ff)] = q.compose_elt(e.src, f.src, g.src, gg, ff)
                comp[(names[e], names[f], names[g])] = table
    ids = {names[e]: e.elt for e in es}
    inv = None
    if q.involutive and symmetric:
        inv = {}
        for e in es:
            for f in es:
                inv[(names[e], names[f])] = {
                    x: q.involute_elt(e.src, f.src, x) for x in member[(names[e], names[f])]}
    try:
        qe = FiniteQuantaloid(objects, homs, comp, ids, inv)
    except InputError as exc:
        raise InternalConsistencyError(f"idempotent splitting broke validity: {exc}") from exc
    qe.split_info = {names[e]: (e.src, e.elt) for e in es}
    qe.split_base = q
    embedding = None
    identity_objects = {}
    for x in q.objects:
        e = Morphism(x, x, q.ids[x])
        if e in names:
            identity_objects[x] = names[e]
    if len(identity_objects) == len(q.objects):
        embedding = identity_objects
    return qe, embedding


def ssi(q: FiniteQuantaloid) -> FiniteQuantaloid:
    """Split all symmetric idempotents; the result inherits the involution."""
    qe, _ = split_idempotents(q, symmetric_idempotents(q), require_involution=True)
    return qe


def si(q: FiniteQuantaloid) -> FiniteQuantaloid:
    """Split all idempotents (no involution requirement on the result)."""
    qe, _ = split_idempotents(q, all_idempotents(q))
    return qe


# -- isomorphism search ------------------------------------------------------------


def find_isomorphism(q1: FiniteQuantaloid, q2: FiniteQuantaloid,
                     object_map: dict[str, str] | None = None):
    """Exhaustive search for a quantaloid isomorphism.

    Returns {"objects": sigma, "homs": {(x, y): elt-bijection}} or None.
    When `object_map` is given only element bijections are searched.
    """
    from itertools import permutations

    if len(q1.objects) != len(q2.objects):
        return None

    def hom_sig(q, x, y):
        lat = q.hom(x, y)
        return tuple(sorted(bin(u).count("1") for u in lat._up))

    candidates: list[dict[str, str]]
    if object_map is not None:
        candidates = [dict(object_map)]
    else:
        candidates = []
        for perm in permutations(q2.objects):
            sigma = dict(zip(q1.objects, perm))
            if all(hom_sig(q1, x, y) == hom_sig(q2, sigma[x], sigma[y])
                   for x in q1.objects for y in q1.objects):
                candidates.append(sigma)

    for sigma in candidates:
        tau = _match_elements(q1, q2, sigma)
        if tau is not None:
            return {"objects": sigma,
                    "homs": {f"{x}->{y}": t for (x, y), t in tau.items()}}
    return None


def _match_elements(q1, q2, sigma):
    """Element-by-element backtracking: order signatures prune candidates,
    composition and involution are checked incrementally on the assigned
    prefix."""
    hom_keys = [(x, y) for x in q1.objects for y in q1.objects]
    assignment: dict[tuple[str, str], dict[str, str]] = {}

    def signature(q, x, y, e):
        lat = q.hom(x, y)
        i = lat._index[e]
        return (bin(lat._up[i]).count("1"), bin(lat._down[i]).count("1"),
                e == q.ids.get(x) if x == y else False)

    def comp_ok_partial():
        """All composites whose operands and result are already assigned
        must commute with the assignment."""
        for x in q1.objects:
            for y in q1.objects:
                txy = assignment.get((x, y))
                if not txy:
                    continue
                for z in q1.objects:
                    tyz = assignment.get((y, z))
                    txz = assignment.get((x, z))
                    if not tyz or not txz:
                        continue
                    for g in tyz:
                        for f in txy:
                            h = q1.compose_elt(x, y, z, g, f)
                            if h not in txz:
                                continue
                            if txz[h] != q2.compose_elt(sigma[x], sigma[y], sigma[z],
                                                        tyz[g], txy[f]):
                                return False
        return True

    def inv_ok_partial():
        if q1.inv_table is None or q2.inv_table is None:
            return True
        for (x, y), t in assignment.items():
            tyx = assignment.get((y, x))
            if not tyx:
                continue
            for f in t:
                fo = q1.involute_elt(x, y, f)
                if fo in tyx and tyx[fo] != q2.involute_elt(sigma[x], sigma[y], t[f]):
                    return False
        return True

    def fill_hom(i):
        if i == len(hom_keys):
            return True
        x, y = hom_keys[i]
        e1 = q1.hom(x, y).elements
        e2 = q2.hom(sigma[x], sigma[y]).elements
        if len(e1) != len(e2):
            return False
        lat1, lat2 = q1.hom(x, y), q2.hom(sigma[x], sigma[y])
        t: dict[str, str] = {}
        assignment[(x, y)] = t
        used: set[str] = set()

        def place(k):
            if k == len(e1):
                return fill_hom(i + 1)
            a = e1[k]
            sig_a = signature(q1, x, y, a)
            for b in e2:
                if b in used or signature(q2, sigma[x], sigma[y], b) != sig_a:
                    continue
                ok = all(lat1.leq(a, c) == lat2.leq(b, t[c])
                         and lat1.leq(c, a) == lat2.leq(t[c], b) for c in t)
                if not ok:
                    continue
                t[a] = b
                used.add(b)
                if comp_ok_partial() and inv_ok_partial() and place(k + 1):
                    return True
                del t[a]
                used.discard(b)
            return False

        if place(0):
            return True
        del assignment[(x, y)]
        return False

    if fill_hom(0):
        return {k: dict(v) for k, v in assignment.items()}
    return None


# -- diagnostics -------------------------------------------------------------------


def mutate_composition(q: FiniteQuantaloid, x: str, y: str, z: str,
                       g: str, f: str, new_result: str) -> FiniteQuantaloid:
    """Return a copy with one composition entry overwritten and validation
    skipped.  Fault-injection hook for soundness testing only."""
    comp = {k: dict(v) for k, v in q.comp_table.items()}
    if (x, y, z) not in comp or (g, f) not in comp[(x, y, z)]:
        raise InputError(f"no composition entry ({g} o {f}) at {x}->{y}->{z}")
    if new_result not in q.hom(x, z)._index:
        raise InputError(f"{new_result!r} is not in hom({x},{z})")
    comp[(x, y, z)][(g, f)] = new_result
    return FiniteQuantaloid(q.objects, q.homs, comp, q.ids, q.inv_table, validate=False)
