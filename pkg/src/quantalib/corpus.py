"""Named desk-scale instances used by the verification suites and the CLI.

Six standing quantaloids plus one designed non-modular counterexample, and
a small stock of symmetric enriched categories over them.
"""

from __future__ import annotations

from .constructions import (group_z2, groupoid_quantale, locale_quantale,
                            pair_groupoid)
from .lattice import FiniteSupLattice, chain, powerset
from .quantaloid import FiniteQuantaloid
from .qcat import QCategory, QTypedSet, discrete_category

__all__ = [
    "boolean_quantale", "three_chain_locale", "three_chain_quantale",
    "powerset2_quantale", "relation_quantale_2", "z2_quantale",
    "crible_2chain_quantale", "truncated_sum_quantale",
    "corpus_quantaloids", "corpus_symmetric_categories",
]


def three_chain_locale() -> FiniteSupLattice:
    return chain(["0", "m", "1"])


def boolean_quantale() -> FiniteQuantaloid:
    return locale_quantale(chain(["0", "1"]))


def three_chain_quantale() -> FiniteQuantaloid:
    return locale_quantale(three_chain_locale())


def powerset2_quantale() -> FiniteQuantaloid:
    return locale_quantale(powerset(["a", "b"]))


def relation_quantale_2() -> FiniteQuantaloid:
    """All sixteen relations on a two-element set, as the quantale of the
    pair groupoid."""
    return groupoid_quantale(pair_groupoid(["1", "2"]))


def z2_quantale() -> FiniteQuantaloid:
    return groupoid_quantale(group_z2())


def crible_2chain_quantale() -> FiniteQuantaloid:
    from .lattice import chain as _chain
    from .sites import closed_crible_quantaloid, poset_category, trivial_topology
    cat = poset_category(_chain(["0", "1"]))
    return closed_crible_quantaloid(cat, trivial_topology(cat))


def truncated_sum_quantale() -> FiniteQuantaloid:
    """Three-chain with truncated addition as composition and the identity
    involution: a commutative quantale that fails the modular law."""
    lat = chain(["0", "1", "2"])
    o = "*"
    val = {"0": 0, "1": 1, "2": 2}
    name = {0: "0", 1: "1", 2: "2"}

    def mul(a, b):
        return name[max(val[a] + val[b] - 2, 0)]

    comp = {(o, o, o): {(g, f): mul(g, f) for g in lat.elements for f in lat.elements}}
    inv = {(o, o): {e: e for e in lat.elements}}
    return FiniteQuantaloid([o], {(o, o): lat}, comp, {o: "2"}, inv)


def corpus_quantaloids() -> dict[str, FiniteQuantaloid]:
    """The six standing instances, keyed by stable names."""
    return {
        "boolean": boolean_quantale(),
        "chain3": three_chain_quantale(),
        "powerset2": powerset2_quantale(),
        "rel2": relation_quantale_2(),
        "z2": z2_quantale(),
        "crible2chain": crible_2chain_quantale(),
    }


def corpus_symmetric_categories() -> list[tuple[str, QCategory]]:
    """Symmetric categories with at most three objects over corpus bases."""
    out: list[tuple[str, QCategory]] = []

    b = boolean_quantale()
    o = b.objects[0]
    for n in (1, 2, 3):
        ts = QTypedSet([f"a{i}" for i in range(n)], {f"a{i}": o for i in range(n)})
        out.append((f"boolean-discrete-{n}", discrete_category(b, ts)))
    # two points glued by a full hom: a one-point set presented twice
    out.append(("boolean-glued-2", QCategory(
        b, ["a0", "a1"], {"a0": o, "a1": o},
        {("a0", "a0"): "1", ("a0", "a1"): "1", ("a1", "a0"): "1", ("a1", "a1"): "1"})))

    c3 = three_chain_quantale()
    o = c3.objects[0]
    out.append(("chain3-top-monoid", QCategory(c3, ["a"], {"a": o}, {("a", "a"): "1"})))
    out.append(("chain3-two-glued-m", QCategory(
        c3, ["a0", "a1"], {"a0": o, "a1": o},
        {("a0", "a0"): "1", ("a0", "a1"): "m", ("a1", "a0"): "m", ("a1", "a1"): "1"})))

    z2 = z2_quantale()
    o = z2.objects[0]
    out.append(("z2-regular", QCategory(z2, ["a"], {"a": o}, {("a", "a"): "{e}"})))
    out.append(("z2-folded", QCategory(z2, ["a"], {"a": o}, {("a", "a"): "{e,g}"})))
    out.append(("z2-two-point", QCategory(
        z2, ["a0", "a1"], {"a0": o, "a1": o},
        {("a0", "a0"): "{e}", ("a0", "a1"): "{g}",
         ("a1", "a0"): "{g}", ("a1", "a1"): "{e}"})))

    r2 = relation_quantale_2()
    o = r2.objects[0]
    diag = "{(1,1),(2,2)}"
    out.append(("rel2-discrete-1", QCategory(r2, ["a"], {"a": o}, {("a", "a"): diag})))
    full = "{(1,1),(1,2),(2,1),(2,2)}"
    out.append(("rel2-codiscrete", QCategory(r2, ["a"], {"a": o}, {("a", "a"): full})))

    cr = crible_2chain_quantale()
    hom = {}
    for y in cr.objects:
        for x in cr.objects:
            hom[(f"o{cr.objects.index(y)}", f"o{cr.objects.index(x)}")] = \
                cr.ids[y] if x == y else cr.hom(x, y).bottom
    out.append(("crible2chain-discrete-2", QCategory(
        cr, [f"o{i}" for i in range(len(cr.objects))],
        {f"o{i}": obj for i, obj in enumerate(cr.objects)}, hom)))

    return out
