"""Finite sites: categories, Grothendieck topologies, cribles and their
closure, the quantaloid of closed cribles, and the induced-site inverse
construction.

Sieves and cribles are stored extensionally as arrow/span sets.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .errors import (InputError, InternalConsistencyError, ResourceLimitError)
from .lattice import FiniteSupLattice
from .quantaloid import FiniteQuantaloid, is_closed_crible, is_modular

__all__ = [
    "FiniteCategory", "GrothendieckTopology",
    "poset_category", "maximal_sieve", "generate_sieve", "pullback_sieve",
    "all_sieves", "trivial_topology",
    "all_spans", "precompose_closure", "close", "transpose",
    "closed_crible_quantaloid", "topology_from_quantaloid",
    "canonical_site_of_locale", "site_from_json", "site_to_json",
]


class FiniteCategory:
    def __init__(self, objects: Iterable[str], arrows: Iterable[str],
                 src: dict[str, str], tgt: dict[str, str],
                 comp: dict[tuple[str, str], str], identities: dict[str, str],
                 validate: bool = True):
        self.objects = tuple(sorted(set(objects)))
        self.arrows = tuple(sorted(set(arrows)))
        self.src = dict(src)
        self.tgt = dict(tgt)
        self.comp = dict(comp)
        self.identities = dict(identities)
        if validate:
            self._validate()

    def _validate(self):
        for a in self.arrows:
            if self.src.get(a) not in self.objects or self.tgt.get(a) not in self.objects:
                raise InputError(f"arrow {a!r} has no valid source/target")
        for x in self.objects:
            i = self.identities.get(x)
            if i is None or self.src.get(i) != x or self.tgt.get(i) != x:
                raise InputError(f"missing identity arrow at {x!r}")
        for g in self.arrows:
            for f in self.arrows:
                if self.tgt[f] != self.src[g]:
                    continue
                h = self.comp.get((g, f))
                if h is None or h not in self.src:
                    raise InputError(f"missing composite {g} o {f}")
                if self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                    raise InputError(f"composite {g} o {f} has wrong endpoints")
        for f in self.arrows:
            if self.comp[(self.identities[self.tgt[f]], f)] != f \
                    or self.comp[(f, self.identities[self.src[f]])] != f:
                raise InputError(f"unit law fails at {f!r}")
        for h in self.arrows:
            for g in self.arrows:
                if self.tgt[g] != self.src[h]:
                    continue
                hg = self.comp[(h, g)]
                for f in self.arrows:
                    if self.tgt[f] != self.src[g]:
                        continue
                    if self.comp[(h, self.comp[(g, f)])] != self.comp[(hg, f)]:
                        raise InputError(f"associativity fails at ({h},{g},{f})")

    def compose(self, g: str, f: str) -> str:
        if self.tgt[f] != self.src[g]:
            raise InputError(f"arrows {g!r} o {f!r} are not composable")
        return self.comp[(g, f)]

    def arrows_into(self, x: str) -> list[str]:
        return [a for a in self.arrows if self.tgt[a] == x]

    def arrows_from(self, x: str) -> list[str]:
        return [a for a in self.arrows if self.src[a] == x]

    def hom_set(self, x: str, y: str) -> list[str]:
        return [a for a in self.arrows if self.src[a] == x and self.tgt[a] == y]

    def __eq__(self, other):
        return (isinstance(other, FiniteCategory) and self.objects == other.objects
                and self.arrows == other.arrows and self.src == other.src
                and self.tgt == other.tgt and self.comp == other.comp)

    def __repr__(self):
        return f"FiniteCategory({len(self.objects)} objects, {len(self.arrows)} arrows)"


def poset_category(lat: FiniteSupLattice) -> FiniteCategory:
    """A finite poset as a category: one arrow x -> y exactly when x <= y."""
    arrows, src, tgt, ids = [], {}, {}, {}
    for x in lat.elements:
        for y in lat.elements:
            if lat.leq(x, y):
                a = f"{x}<{y}"
                arrows.append(a)
                src[a], tgt[a] = x, y
                if x == y:
                    ids[x] = a
    comp = {}
    for g in arrows:
        for f in arrows:
            if tgt[f] == src[g]:
                comp[(g, f)] = f"{src[f]}<{tgt[g]}"
    return FiniteCategory(lat.elements, arrows, src, tgt, comp, ids)


# -- sieves and topologies ------------------------------------------------------


def maximal_sieve(cat: FiniteCategory, x: str) -> frozenset:
    return frozenset(cat.arrows_into(x))


def generate_sieve(cat: FiniteCategory, x: str, gens: Iterable[str]) -> frozenset:
    gens = list(gens)
    for a in gens:
        if cat.tgt[a] != x:
            raise InputError(f"{a!r} does not point at {x!r}")
    out = set()
    for a in gens:
        out.add(a)
        for w in cat.arrows_into(cat.src[a]):
            out.add(cat.comp[(a, w)])
    return frozenset(out)


def is_sieve(cat: FiniteCategory, x: str, s: frozenset) -> bool:
    for a in s:
        if cat.tgt[a] != x:
            return False
        for w in cat.arrows_into(cat.src[a]):
            if cat.comp[(a, w)] not in s:
                return False
    return True


def pullback_sieve(cat: FiniteCategory, s: frozenset, h: str) -> frozenset:
    """h*S = {f into dom(h) | h o f in S}."""
    return frozenset(f for f in cat.arrows_into(cat.src[h]) if cat.comp[(h, f)] in s)


def all_sieves(cat: FiniteCategory, x: str, max_arrows: int = 16) -> list[frozenset]:
    arrows = cat.arrows_into(x)
    if len(arrows) > max_arrows:
        raise ResourceLimitError(
            f"sieve enumeration on {x!r} needs 2^{len(arrows)} subsets",
            limit=max_arrows, reached=len(arrows))
    out = []
    for r in range(len(arrows) + 1):
        for sub in combinations(arrows, r):
            s = frozenset(sub)
            if is_sieve(cat, x, s):
                out.append(s)
    return out


class GrothendieckTopology:
    """Covering sieves per object; the three axioms are validated eagerly."""

    def __init__(self, cat: FiniteCategory, covering: dict[str, Iterable[frozenset]],
                 validate: bool = True):
        self.covering = {x: frozenset(frozenset(s) for s in covering.get(x, ()))
                         for x in cat.objects}
        if validate:
            bad = self.validate(cat)
            if bad:
                raise InputError(f"not a Grothendieck topology: {bad[0]}")

    def __getitem__(self, x: str) -> frozenset:
        return self.covering[x]

    def validate(self, cat: FiniteCategory) -> list[str]:
        problems = []
        for x in cat.objects:
            if maximal_sieve(cat, x) not in self.covering[x]:
                problems.append(f"maximal sieve on {x!r} is not covering")
            for s in self.covering[x]:
                if not is_sieve(cat, x, s):
                    problems.append(f"covering set on {x!r} is not a sieve")
        for x in cat.objects:
            for s in self.covering[x]:
                for h in cat.arrows_into(x):
                    if pullback_sieve(cat, s, h) not in self.covering[cat.src[h]]:
                        problems.append(
                            f"pullback of a cover of {x!r} along {h!r} is not covering")
        for x in cat.objects:
            sieves = all_sieves(cat, x)
            for s in self.covering[x]:
                for r in sieves:
                    if r in self.covering[x]:
                        continue
                    if all(pullback_sieve(cat, r, f) in self.covering[cat.src[f]]
                           for f in s):
                        problems.append(
                            f"transitivity fails on {x!r}: a locally-covering sieve "
                            "is not covering")
        return problems

    def __eq__(self, other):
        return isinstance(other, GrothendieckTopology) and self.covering == other.covering


def trivial_topology(cat: FiniteCategory) -> GrothendieckTopology:
    return GrothendieckTopology(cat, {x: [maximal_sieve(cat, x)] for x in cat.objects})


# -- cribles ---------------------------------------------------------------------


def all_spans(cat: FiniteCategory, x: str, y: str) -> list[tuple[str, str]]:
    """Spans (u: Z -> x, v: Z -> y) over all common apexes Z."""
    out = []
    for z in cat.objects:
        for u in cat.hom_set(z, x):
            for v in cat.hom_set(z, y):
                out.append((u, v))
    return sorted(out)


def precompose_closure(cat: FiniteCategory, spans: Iterable[tuple[str, str]]) -> frozenset:
    out = set(spans)
    frontier = list(out)
    while frontier:
        u, v = frontier.pop()
        for w in cat.arrows_into(cat.src[u]):
            p = (cat.comp[(u, w)], cat.comp[(v, w)])
            if p not in out:
                out.add(p)
                frontier.append(p)
    return frozenset(out)


def close(cat: FiniteCategory, topology: GrothendieckTopology,
          spans: Iterable[tuple[str, str]], x: str, y: str) -> frozenset:
    """Least J-closed crible containing the given spans: a span enters when
    some covering sieve of its apex pulls it into the crible; iterated to a
    fixpoint together with precomposition closure."""
    current = precompose_closure(cat, spans)
    universe = all_spans(cat, x, y)
    changed = True
    while changed:
        changed = False
        for u, v in universe:
            if (u, v) in current:
                continue
            w = cat.src[u]
            for t_sieve in topology[w]:
                if all((cat.comp[(u, t)], cat.comp[(v, t)]) in current for t in t_sieve):
                    current = precompose_closure(cat, current | {(u, v)})
                    changed = True
                    break
    return current


def transpose(spans: Iterable[tuple[str, str]]) -> frozenset:
    return frozenset((v, u) for u, v in spans)


def crible_id(spans: Iterable[tuple[str, str]]) -> str:
    return "{" + ";".join(f"{u},{v}" for u, v in sorted(spans)) + "}"


def _closed_cribles(cat, topology, x, y, max_spans):
    spans = all_spans(cat, x, y)
    if len(spans) > max_spans:
        raise ResourceLimitError(
            f"crible enumeration on ({x},{y}) needs 2^{len(spans)} subsets",
            limit=max_spans, reached=len(spans))
    seen = {}
    for r in range(len(spans) + 1):
        for sub in combinations(spans, r):
            c = close(cat, topology, sub, x, y)
            seen.setdefault(c, crible_id(c))
    return sorted(seen, key=crible_id)


def closed_crible_quantaloid(cat: FiniteCategory, topology: GrothendieckTopology,
                             max_spans: int = 14) -> FiniteQuantaloid:
    """The involutive quantaloid of closed cribles of a finite site.

    Hom-lattices are the closed cribles ordered by inclusion, composition is
    the closure of the span-relational composite, identities close the
    diagonal cribles, and the involution transposes spans.  The
    closed-crible axioms and modularity of the result are asserted.
    """
    cribles: dict[tuple[str, str], list[frozenset]] = {}
    for x in cat.objects:
        for y in cat.objects:
            cribles[(x, y)] = _closed_cribles(cat, topology, x, y, max_spans)

    homs = {}
    for (x, y), cs in cribles.items():
        ids = [crible_id(c) for c in cs]
        pairs = [(crible_id(c), crible_id(d)) for c in cs for d in cs if c <= d]
        homs[(x, y)] = FiniteSupLattice(ids, pairs)

    by_id = {(x, y): {crible_id(c): c for c in cs} for (x, y), cs in cribles.items()}

    def span_composite(r_spans, s_spans, x, y, z):
        """{(u o w, s o w') | (u,v) in R, (t,s) in S, v o w = t o w'}."""
        out = set()
        for u, v in r_spans:
            for t, s in s_spans:
                for w_apex in cat.objects:
                    for w in cat.hom_set(w_apex, cat.src[u]):
                        vw = cat.comp[(v, w)]
                        for w2 in cat.hom_set(w_apex, cat.src[t]):
                            if cat.comp[(t, w2)] == vw:
                                out.add((cat.comp[(u, w)], cat.comp[(s, w2)]))
        return out

    comp = {}
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                table = {}
                for s in cribles[(y, z)]:
                    sid = crible_id(s)
                    for r in cribles[(x, y)]:
                        raw = span_composite(r, s, x, y, z)
                        table[(sid, crible_id(r))] = crible_id(close(cat, topology, raw, x, z))
                comp[(x, y, z)] = table

    ids = {x: crible_id(close(cat, topology,
                              {(cat.identities[x], cat.identities[x])}, x, x))
           for x in cat.objects}

    inv = {}
    for (x, y), cs in cribles.items():
        table = {}
        for c in cs:
            t = transpose(c)
            if t not in by_id[(y, x)].values():
                raise InternalConsistencyError("transpose of a closed crible is not closed")
            table[crible_id(c)] = crible_id(t)
        inv[(x, y)] = table

    try:
        q = FiniteQuantaloid(cat.objects, homs, comp, ids, inv)
    except InputError as exc:
        raise InternalConsistencyError(f"closed-crible construction is invalid: {exc}") from exc

    ok, bad = is_closed_crible(q)
    if not ok:
        raise InternalConsistencyError(f"closed-crible quantaloid fails its axioms: {bad}")
    ok, bad = is_modular(q)
    if not ok:
        raise InternalConsistencyError(f"closed-crible quantaloid is not modular: {bad}")
    return q


# -- from quantaloid back to a site ------------------------------------------------


def topology_from_quantaloid(q: FiniteQuantaloid,
                             max_arrows: int = 16,
                             ) -> tuple[FiniteCategory, GrothendieckTopology, dict]:
    """The category of left adjoints of q with the covering sieves whose
    composites s o s* join to the identity.

    Returns (Map(q), J, labels) where labels maps arrow ids back to
    (src, dst, element).  Topology axioms are asserted when q satisfies the
    closed-crible axioms.
    """
    arrows, src, tgt, labels = [], {}, {}, {}
    adj = {}
    for x in q.objects:
        for y in q.objects:
            for f, fstar in q.left_adjoints(x, y):
                a = f"{x}>{y}|{f}"
                arrows.append(a)
                src[a], tgt[a] = x, y
                labels[a] = (x, y, f)
                adj[a] = fstar
    comp = {}
    for g in arrows:
        for f in arrows:
            if tgt[f] != src[g]:
                continue
            x, y = src[f], tgt[f]
            z = tgt[g]
            h = q.compose_elt(x, y, z, labels[g][2], labels[f][2])
            name = f"{x}>{z}|{h}"
            if name not in labels:
                raise InternalConsistencyError(
                    f"left adjoints are not closed under composition at {g} o {f}")
            comp[(g, f)] = name
    identities = {}
    for x in q.objects:
        name = f"{x}>{x}|{q.ids[x]}"
        if name not in labels:
            raise InternalConsistencyError(f"identity at {x!r} is not a left adjoint")
        identities[x] = name
    cat = FiniteCategory(q.objects, arrows, src, tgt, comp, identities)

    covering = {}
    for x in q.objects:
        hxx = q.hom(x, x)
        covers = []
        for s in all_sieves(cat, x, max_arrows=max_arrows):
            parts = []
            for a in s:
                ax, ay, f = labels[a]
                parts.append(q.compose_elt(ay, ax, ay, f, adj[a]))
            if hxx.join(parts) == q.ids[x]:
                covers.append(s)
        covering[x] = covers

    axioms_ok, _ = is_closed_crible(q)
    if axioms_ok:
        topo = GrothendieckTopology(cat, covering)
    else:
        topo = GrothendieckTopology(cat, covering, validate=False)
    return cat, topo, labels


def canonical_site_of_locale(lat: FiniteSupLattice) -> tuple[FiniteCategory, GrothendieckTopology]:
    """The poset of the locale with the join covers: a sieve covers x
    exactly when the join of its sources is x."""
    ok, bad = lat.is_locale()
    if not ok:
        raise InputError(f"not a locale: {bad}")
    cat = poset_category(lat)
    covering = {}
    for x in lat.elements:
        covers = []
        for s in all_sieves(cat, x):
            if lat.join([cat.src[a] for a in s]) == x:
                covers.append(s)
        covering[x] = covers
    return cat, GrothendieckTopology(cat, covering)


# -- interchange --------------------------------------------------------------------


def site_to_json(cat: FiniteCategory, topology: GrothendieckTopology) -> dict:
    arrows = [{"id": a, "src": cat.src[a], "tgt": cat.tgt[a]} for a in cat.arrows]
    covers = {x: sorted(sorted(s) for s in topology[x]) for x in cat.objects}
    return {"objects": list(cat.objects), "arrows": arrows,
            "comp": sorted([g, f, h] for (g, f), h in cat.comp.items()),
            "covers": covers}


def site_from_json(data: dict) -> tuple[FiniteCategory, GrothendieckTopology]:
    """Covers listed in the file generate sieves; the topology always
    contains the maximal sieves and is validated, never completed silently."""
    if not isinstance(data, dict) or "objects" not in data or "arrows" not in data:
        raise InputError("site JSON needs 'objects' and 'arrows'")
    objects = list(data["objects"])
    src, tgt = {}, {}
    arrows = []
    for rec in data["arrows"]:
        try:
            a, s, t = rec["id"], rec["src"], rec["tgt"]
        except (TypeError, KeyError):
            raise InputError(f"bad arrow record {rec!r}") from None
        arrows.append(a)
        src[a], tgt[a] = s, t
    comp = {}
    for g, f, h in data.get("comp", []):
        comp[(g, f)] = h
    identities = {}
    for x in objects:
        for a in arrows:
            if src[a] != x or tgt[a] != x:
                continue
            if all(comp.get((a, f)) == f for f in arrows if tgt[f] == x) and \
                    all(comp.get((g, a)) == g for g in arrows if src[g] == x):
                identities[x] = a
                break
        if x not in identities:
            raise InputError(f"no identity arrow found at {x!r}")
    cat = FiniteCategory(objects, arrows, src, tgt, comp, identities)
    covering = {x: {maximal_sieve(cat, x)} for x in objects}
    for x, families in data.get("covers", {}).items():
        if x not in covering:
            raise InputError(f"covers listed for unknown object {x!r}")
        for fam in families:
            covering[x] = covering[x] | {generate_sieve(cat, x, fam)}
    return cat, GrothendieckTopology(cat, covering)
