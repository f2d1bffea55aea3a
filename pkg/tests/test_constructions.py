"""Generators, the Morita quantale, projection matrices, normalization and
the census machinery."""

import pytest

from quantalib.corpus import (boolean_quantale, relation_quantale_2,
                              three_chain_quantale, z2_quantale)
from quantalib.constructions import (FiniteGroupoid, enumerate_categories,
                                     enumerate_sheaves, group_z2,
                                     groupoid_quantale, locale_quantale,
                                     matrix_unit_id, morita_embedding,
                                     morita_quantale, morita_equivalent,
                                     normalize, pair_groupoid,
                                     projection_to_category,
                                     category_to_projection, sheaf_points,
                                     trivial_group)
from quantalib.errors import InputError, ResourceLimitError
from quantalib.lattice import antichain_with_bounds, chain
from quantalib.oracles import count_gset_iso_classes, count_set_iso_classes
from quantalib.qcat import (Distributor, QCategory, QTypedSet, compose_dist,
                            discrete_category, identity_dist)
from quantalib.quantaloid import (FiniteQuantaloid, Morphism,
                                  find_isomorphism, is_grothendieck,
                                  is_grothendieck_quantale_via_top, ssi)

O = "*"


class TestGenerators:
    def test_locale_2_is_boolean(self):
        q = locale_quantale(chain(["0", "1"]))
        assert q.ids[O] == "1"
        assert q.compose_elt(O, O, O, "1", "0") == "0"

    def test_locale_rejects_non_locale(self):
        with pytest.raises(InputError):
            locale_quantale(antichain_with_bounds(["a", "b", "c"]))

    def test_trivial_group_gives_boolean(self):
        q = groupoid_quantale(trivial_group())
        assert len(q.hom(O, O).elements) == 2
        iso = find_isomorphism(q, boolean_quantale())
        assert iso is not None

    def test_z2_arrow_composition(self):
        q = groupoid_quantale(group_z2())
        assert q.compose_elt(O, O, O, "{g}", "{g}") == "{e}"
        assert q.involute_elt(O, O, "{g}") == "{g}"

    def test_groupoid_cap(self):
        with pytest.raises(ResourceLimitError):
            groupoid_quantale(pair_groupoid(["1", "2", "3"]), max_arrows=4)

    def test_groupoid_json_roundtrip(self):
        g = group_z2()
        again = FiniteGroupoid.from_json(g.to_json())
        assert again.comp == g.comp and again.inv == g.inv

    def test_groupoid_json_derives_identities(self):
        g = group_z2()
        data = g.to_json()
        del data["identities"]
        again = FiniteGroupoid.from_json(data)
        assert again.identities == {"*": "e"}

    def test_groupoid_json_accepts_pair_list_inverses(self):
        g = group_z2()
        data = g.to_json()
        data["inv"] = sorted([a, b] for a, b in data["inv"].items())
        again = FiniteGroupoid.from_json(data)
        assert again.inv == g.inv


class TestMoritaQuantale:
    def test_one_object_is_isomorphic(self):
        q = three_chain_quantale()
        qm = morita_quantale(q)
        assert find_isomorphism(q, qm) is not None

    def test_two_object_boolean_homs_give_relations(self):
        """2x2 Boolean matrices are the relations on a two-element set."""
        lat = chain(["0", "1"])
        objs = ["A", "B"]
        homs = {(x, y): lat for x in objs for y in objs}
        comp = {(x, y, z): {(g, f): "1" if g == "1" and f == "1" else "0"
                            for g in "01" for f in "01"}
                for x in objs for y in objs for z in objs}
        ids = {x: "1" for x in objs}
        inv = {(x, y): {"0": "0", "1": "1"} for x in objs for y in objs}
        q = FiniteQuantaloid(objs, homs, comp, ids, inv)
        qm = morita_quantale(q)
        assert len(qm.hom(O, O).elements) == 16
        assert find_isomorphism(qm, relation_quantale_2()) is not None

    def test_identity_blocks_idempotent_symmetric(self):
        q = three_chain_quantale()
        qm = morita_quantale(q)
        for a in q.objects:
            m = matrix_unit_id(q, q.unit(a))
            assert qm.compose_elt(O, O, O, m, m) == m
            assert qm.involute_elt(O, O, m) == m

    def test_matrix_unit_map_preserves_structure(self):
        """f -> M_f preserves composition, binary joins and involution."""
        q = three_chain_quantale()
        qm = morita_quantale(q)
        lat, latm = q.hom(O, O), qm.hom(O, O)
        for f in lat.elements:
            for g in lat.elements:
                mf = matrix_unit_id(q, Morphism(O, O, f))
                mg = matrix_unit_id(q, Morphism(O, O, g))
                assert qm.compose_elt(O, O, O, mg, mf) == \
                    matrix_unit_id(q, Morphism(O, O, q.compose_elt(O, O, O, g, f)))
                assert latm.join2(mf, mg) == \
                    matrix_unit_id(q, Morphism(O, O, lat.join2(f, g)))
                assert qm.involute_elt(O, O, mf) == \
                    matrix_unit_id(q, Morphism(O, O, q.involute_elt(O, O, f)))

    def test_embedding_fully_faithful(self):
        # asserted elementwise inside morita_embedding
        for q in (three_chain_quantale(), z2_quantale()):
            qme, obj_map = morita_embedding(q)
            assert set(obj_map) == set(q.objects)

    def test_size_cap(self):
        with pytest.raises(ResourceLimitError):
            morita_quantale(relation_quantale_2(), max_size=8)


class TestProjections:
    def _diag(self, q, elts):
        names = [f"m{i}" for i in range(len(elts))]
        typed = QTypedSet(names, {n: O for n in names})
        disc = discrete_category(q, typed)
        elt = {}
        for i, y in enumerate(names):
            for j, x in enumerate(names):
                elt[(y, x)] = elts[i] if i == j else q.hom(O, O).bottom
        return Distributor(disc, disc, elt)

    def test_delta_gives_discrete(self):
        q = z2_quantale()
        p = self._diag(q, ["{e}", "{e}"])
        cat, q_ssi = projection_to_category(q, p)
        assert all(cat.hom[(y, x)] == ("{e}" if x == y else "{}")
                   for y in cat.objects for x in cat.objects)
        assert all(cat.types[x] == "*:{e}" for x in cat.objects)

    def test_roundtrip_identity(self):
        q = z2_quantale()
        q_ssi = ssi(q)
        for elts in (["{e}"], ["{e,g}"], ["{e}", "{e,g}"], ["{e}", "{e}"]):
            p = self._diag(q, elts)
            cat, _ = projection_to_category(q, p, q_ssi)
            back = category_to_projection(q, cat)
            assert back.elt == p.elt

    def test_per_projection_over_relations(self):
        """A partial equivalence relation is a projection; its category is
        typed by the PER itself."""
        q = relation_quantale_2()
        per = "{(1,1)}"
        p = self._diag(q, [per])
        cat, _ = projection_to_category(q, p)
        assert cat.types["m0"] == f"*:{per}"

    def test_rejects_non_projection(self):
        q = z2_quantale()
        p = self._diag(q, ["{g}"])
        with pytest.raises(InputError):
            projection_to_category(q, p)

    def test_normalize_already_normal(self):
        q = z2_quantale()
        q_ssi = ssi(q)
        p = self._diag(q, ["{e}", "{e,g}"])
        cat, _ = projection_to_category(q, p, q_ssi)
        normal, phi, psi = normalize(cat)
        assert normal.types == cat.types and normal.hom == cat.hom

    def test_normalize_retypes_fat_object(self):
        """One object with idempotent endo-hom gets retyped at it."""
        q = z2_quantale()
        q_ssi = ssi(q)
        cat = QCategory(q_ssi, ["a"], {"a": "*:{e}"}, {("a", "a"): "{e,g}"})
        normal, phi, psi = normalize(cat)
        assert normal.types["a"] == "*:{e,g}"
        assert compose_dist(phi, psi) == identity_dist(normal)
        assert compose_dist(psi, phi) == identity_dist(cat)

    def test_normalize_witnesses_on_corpus(self):
        q = z2_quantale()
        q_ssi = ssi(q)
        for cat in enumerate_categories(q_ssi, 2, symmetric=True)[:30]:
            normal, phi, psi = normalize(cat)
            assert compose_dist(psi, phi) == identity_dist(cat)
            assert compose_dist(phi, psi) == identity_dist(normal)


class TestCensus:
    def test_boolean_census_matches_set_count(self):
        for n in (0, 1, 2, 3):
            classes = enumerate_sheaves(boolean_quantale(), n)
            assert len(classes) == count_set_iso_classes(n) == n + 1

    def test_boolean_census_spec_example(self):
        assert len(enumerate_sheaves(boolean_quantale(), 2)) == 3

    def test_z2_census_matches_gset_count(self):
        g = group_z2()
        mult = {(a, b): g.comp[(a, b)] for a in g.arrows for b in g.arrows}
        for n in (0, 1, 2):
            classes = enumerate_sheaves(z2_quantale(), n)
            assert len(classes) == count_gset_iso_classes(list(g.arrows), "e", mult, n)

    def test_z3_census_matches_gset_count(self):
        """A third base for the census semantics: orbits of sizes 1 and 3
        only, so no two-element homogeneous part exists."""
        from quantalib.constructions import cyclic_group
        g = cyclic_group(3)
        mult = {(a, b): g.comp[(a, b)] for a in g.arrows for b in g.arrows}
        q = groupoid_quantale(g)
        for n in (0, 1, 2, 3):
            classes = enumerate_sheaves(q, n, max_count=4_000_000)
            assert len(classes) == count_gset_iso_classes(list(g.arrows), "r0", mult, n)

    def test_empty_quantaloid_single_class(self):
        empty = FiniteQuantaloid([], {}, {}, {}, inv={})
        classes = enumerate_sheaves(empty, 2)
        assert len(classes) == 1 and classes[0].points == 0

    def test_census_points_are_morita_invariant(self):
        classes = enumerate_sheaves(z2_quantale(), 2)
        for c in classes:
            assert sheaf_points(c.representative) == c.points

    def test_order_census_boolean(self):
        """'all' mode over the Boolean quantale: orders with <= 2 points."""
        classes = enumerate_sheaves(boolean_quantale(), 2, mode="all")
        # empty, point, 2 points discrete, 2-chain: the posets of size <= 2
        assert len(classes) == 4

    def test_morita_equivalent_basic(self):
        q = z2_quantale()
        q_ssi = ssi(q)
        a = QCategory(q_ssi, ["a"], {"a": "*:{e}"}, {("a", "a"): "{e}"})
        b = QCategory(q_ssi, ["b0", "b1"], {"b0": "*:{e}", "b1": "*:{e}"},
                      {("b0", "b0"): "{e}", ("b1", "b1"): "{e}",
                       ("b1", "b0"): "{g}", ("b0", "b1"): "{g}"})
        assert morita_equivalent(a, b) is True
        pt = QCategory(q_ssi, ["c"], {"c": "*:{e,g}"}, {("c", "c"): "{e,g}"})
        assert morita_equivalent(a, pt) is False

    def test_all_symmetric_categories_same_classes_as_normal(self):
        """Every symmetric ssi-category is Morita equivalent to a normal
        one: the class counts at two objects agree."""
        q = z2_quantale()
        q_ssi = ssi(q)
        cats = enumerate_categories(q_ssi, 2, symmetric=True)
        nonempty = [c for c in cats if c.objects]
        normal = [c for c in nonempty
                  if all(c.hom[(x, x)] == q_ssi.ids[c.types[x]] for x in c.objects)]

        def classes(items):
            reps = []
            for c in items:
                if not any(morita_equivalent(c, r) is True for r in reps):
                    reps.append(c)
            return reps

        assert len(classes(nonempty)) == len(classes(normal)) == 6
        # and normalize lands every category in the normal family
        for c in nonempty:
            n, _, _ = normalize(c)
            assert all(n.hom[(x, x)] == q_ssi.ids[n.types[x]] for x in n.objects)


class TestGroupoidGrothendieck:
    def test_groupoid_quantales_are_grothendieck(self):
        """Inverse quantal frames are Grothendieck quantales, by both
        routes."""
        from quantalib.constructions import cyclic_group
        for gpd in (trivial_group(), group_z2(), pair_groupoid(["1", "2"]),
                    cyclic_group(3)):
            q = groupoid_quantale(gpd)
            assert is_grothendieck(q)[0]
            assert is_grothendieck_quantale_via_top(q)[0]

    def test_split_quantaloids_stay_cauchy_bilateral(self):
        """Splitting symmetric idempotents preserves the locally-localic
        modular combination, hence Cauchy-bilaterality."""
        from quantalib.quantaloid import is_cauchy_bilateral
        for q in (relation_quantale_2(), z2_quantale()):
            assert is_cauchy_bilateral(ssi(q))[0]
