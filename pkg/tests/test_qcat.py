"""Enriched categories, functors, distributors, matrices and monads."""

import pytest

from quantalib.errors import CapabilityError, InputError
from quantalib.lattice import subset_id
from quantalib.qcat import (Distributor, Functor, QCategory, QTypedSet,
                            category_from_monad, cograph_of, compose_dist,
                            delta_matrix, direct_sum, discrete_category,
                            dist_leq, functor_leq, graph_of, identity_dist,
                            involute_dist, is_antisymmetric_monad,
                            is_left_adjoint_dist, is_monad, is_representable,
                            is_symmetric, is_symmetric_monad, map_tabulation,
                            matrix, monad_of_category, product, symmetrise)

O = "*"


@pytest.fixture(scope="module")
def boolean(corpus_quantaloidz=None):
    from quantalib.corpus import boolean_quantale
    return boolean_quantale()


@pytest.fixture(scope="module")
def rel2():
    from quantalib.corpus import relation_quantale_2
    return relation_quantale_2()


@pytest.fixture(scope="module")
def chain3():
    from quantalib.corpus import three_chain_quantale
    return three_chain_quantale()


def disc(base, n, prefix="a"):
    names = [f"{prefix}{i}" for i in range(n)]
    return discrete_category(base, QTypedSet(names, {x: O for x in names}))


def rel_matrix(base, dom, cod, pairs):
    """Relation between discrete Boolean categories as a distributor."""
    elt = {}
    for y in cod.objects:
        for x in dom.objects:
            elt[(y, x)] = "1" if (x, y) in pairs else "0"
    return Distributor(dom, cod, elt)


def matrix_rel(d):
    return {(x, y) for (y, x), e in d.elt.items() if e == "1"}


class TestComposeDist:
    def test_identity_distributor_is_unit(self, boolean):
        a = disc(boolean, 2)
        phi = rel_matrix(boolean, a, a, {("a0", "a1")})
        assert compose_dist(phi, identity_dist(a)) == phi
        assert compose_dist(identity_dist(a), phi) == phi

    def test_boolean_matrices_are_relations(self, boolean):
        """Composition of matrices over the Boolean quantale reproduces the
        relation calculus bit for bit (sets of size <= 3)."""
        for n in (1, 2, 3):
            for m in (1, 2):
                a, b, c = disc(boolean, n, "a"), disc(boolean, m, "b"), disc(boolean, 2, "c")
                rels_ab = [frozenset(p) for p in _all_pair_sets(a.objects, b.objects)]
                rels_bc = [frozenset(p) for p in _all_pair_sets(b.objects, c.objects)]
                for r in rels_ab:
                    for s in rels_bc:
                        got = matrix_rel(compose_dist(rel_matrix(boolean, b, c, s),
                                                      rel_matrix(boolean, a, b, r)))
                        want = {(x, z) for (x, y) in r for (y2, z) in s if y == y2}
                        assert got == want

    def test_locale_composite_is_meet(self, chain3):
        a = QCategory(chain3, ["a"], {"a": O}, {("a", "a"): "1"})
        phi = Distributor(a, a, {("a", "a"): "m"})
        psi = Distributor(a, a, {("a", "a"): "m"})
        assert compose_dist(psi, phi).elt[("a", "a")] == "m"

    def test_associative_unital_exhaustively(self, boolean):
        """Tensor associativity and unit laws over every distributor triple
        between small discrete categories."""
        from quantalib.constructions import _distributors
        a, b, c = disc(boolean, 1, "a"), disc(boolean, 2, "b"), disc(boolean, 1, "c")
        parallel_ab = list(_distributors(a, b, [10 ** 5]))
        parallel_bc = list(_distributors(b, c, [10 ** 5]))
        parallel_ca = list(_distributors(c, a, [10 ** 5]))
        for phi in parallel_ab:
            assert compose_dist(phi, identity_dist(a)) == phi
            assert compose_dist(identity_dist(b), phi) == phi
            for psi in parallel_bc:
                left = compose_dist(psi, phi)
                for chi in parallel_ca:
                    lhs = compose_dist(chi, left)
                    rhs = compose_dist(compose_dist(chi, psi), phi)
                    assert lhs == rhs

    def test_constructors_preserve_distributor_invariants(self, boolean, rel2):
        """Every distributor-producing constructor yields a value that
        re-validates."""
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        f = Functor(a, b, {"a0": "b1", "a1": "b0"})
        outputs = [graph_of(f), cograph_of(f),
                   compose_dist(graph_of(f), identity_dist(a)),
                   involute_dist(graph_of(f))]
        phi = rel_matrix(boolean, a, b, {("a0", "b0"), ("a1", "b0")})
        r, t, s = map_tabulation(phi)
        outputs.append(compose_dist(graph_of(s), cograph_of(t)))
        adj = is_left_adjoint_dist(graph_of(f))
        outputs.append(adj)
        for d in outputs:
            Distributor(d.dom, d.cod, d.elt)  # validates action axioms


def _all_pair_sets(xs, ys):
    import itertools
    pairs = [(x, y) for x in xs for y in ys]
    for r in range(len(pairs) + 1):
        yield from itertools.combinations(pairs, r)


class TestSymmetry:
    def test_discrete_is_symmetric(self, boolean):
        assert is_symmetric(disc(boolean, 3))

    def test_strict_preorder_is_not(self, boolean):
        a = QCategory(boolean, ["a0", "a1"], {"a0": O, "a1": O},
                      {("a0", "a0"): "1", ("a1", "a0"): "1",
                       ("a0", "a1"): "0", ("a1", "a1"): "1"})
        assert not is_symmetric(a)

    def test_symmetrise_fixes_symmetric(self, boolean):
        a = disc(boolean, 2)
        assert symmetrise(a) == a

    def test_symmetrise_preorder_gives_core(self, boolean):
        """Order-as-category: symmetrisation keeps x <= y and y <= x."""
        a = QCategory(boolean, ["a0", "a1", "a2"],
                      {x: O for x in ("a0", "a1", "a2")},
                      {("a0", "a0"): "1", ("a1", "a1"): "1", ("a2", "a2"): "1",
                       ("a1", "a0"): "1", ("a0", "a1"): "1",
                       ("a2", "a0"): "1", ("a0", "a2"): "0",
                       ("a2", "a1"): "1", ("a1", "a2"): "0"})
        s = symmetrise(a)
        assert s.hom[("a1", "a0")] == "1" and s.hom[("a0", "a1")] == "1"
        assert s.hom[("a2", "a0")] == "0" and s.hom[("a2", "a1")] == "0"
        assert is_symmetric(s)
        assert symmetrise(s) == s

    def test_symmetrise_is_couniversal(self, rel2):
        """A_s <= A, idempotent, and symmetric B mapping into A factors
        through A_s."""
        a = QCategory(rel2, ["a"], {"a": O},
                      {("a", "a"): subset_id(["(1,1)", "(1,2)", "(2,2)"])})
        s = symmetrise(a)
        lat = rel2.hom(O, O)
        assert lat.leq(s.hom[("a", "a")], a.hom[("a", "a")])
        assert symmetrise(s) == s
        for b_hom in lat.elements:
            try:
                b = QCategory(rel2, ["b"], {"b": O}, {("b", "b"): b_hom})
            except InputError:
                continue
            if not is_symmetric(b):
                continue
            try:
                Functor(b, a, {"b": "a"})
            except InputError:
                continue
            Functor(b, s, {"b": "a"})  # must not raise


class TestInvolute:
    def test_identity_distributor_selfinvolute(self, boolean):
        a = disc(boolean, 2)
        assert involute_dist(identity_dist(a)) == identity_dist(a)

    def test_matrix_transpose(self, boolean):
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        r = {("a0", "b1"), ("a1", "b0"), ("a0", "b0")}
        phi = rel_matrix(boolean, a, b, r)
        got = matrix_rel(involute_dist(phi))
        assert got == {(y, x) for x, y in r}

    def test_involution_laws(self, boolean):
        a, b, c = disc(boolean, 2, "a"), disc(boolean, 2, "b"), disc(boolean, 1, "c")
        phi = rel_matrix(boolean, a, b, {("a0", "b1")})
        psi = rel_matrix(boolean, b, c, {("b1", "c0")})
        assert involute_dist(involute_dist(phi)) == phi
        assert involute_dist(compose_dist(psi, phi)) == \
            compose_dist(involute_dist(phi), involute_dist(psi))

    def test_needs_symmetric_endpoints(self, boolean):
        a = QCategory(boolean, ["a0", "a1"], {"a0": O, "a1": O},
                      {("a0", "a0"): "1", ("a1", "a0"): "1",
                       ("a0", "a1"): "0", ("a1", "a1"): "1"})
        with pytest.raises(CapabilityError):
            involute_dist(identity_dist(a))


class TestGraphCograph:
    def test_identity_functor(self, boolean):
        a = disc(boolean, 2)
        ident = Functor(a, a, {x: x for x in a.objects})
        assert graph_of(ident) == identity_dist(a)
        assert cograph_of(ident) == identity_dist(a)

    def test_function_graph(self, boolean):
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        f = Functor(a, b, {"a0": "b1", "a1": "b1"})
        assert matrix_rel(graph_of(f)) == {("a0", "b1"), ("a1", "b1")}

    def test_constant_functor_column(self, chain3):
        a = QCategory(chain3, ["a0", "a1"], {"a0": O, "a1": O},
                      {("a0", "a0"): "1", ("a0", "a1"): "m",
                       ("a1", "a0"): "m", ("a1", "a1"): "1"})
        b = QCategory(chain3, ["b"], {"b": O}, {("b", "b"): "1"})
        f = Functor(a, b, {"a0": "b", "a1": "b"})
        gr = graph_of(f)
        assert gr.elt == {("b", "a0"): "1", ("b", "a1"): "1"}

    def test_adjunction_unit_counit(self, boolean, rel2):
        cases = []
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        cases.append(Functor(a, b, {"a0": "b0", "a1": "b0"}))
        cases.append(Functor(a, b, {"a0": "b1", "a1": "b0"}))
        for f in cases:
            gr, co = graph_of(f), cograph_of(f)
            assert dist_leq(identity_dist(f.dom), compose_dist(co, gr))
            assert dist_leq(compose_dist(gr, co), identity_dist(f.cod))

    def test_graph_is_symmetric_left_adjoint(self, boolean):
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        f = Functor(a, b, {"a0": "b1", "a1": "b0"})
        gr = graph_of(f)
        assert is_left_adjoint_dist(gr) == involute_dist(gr)


class TestLeftAdjointDist:
    def test_graph_has_cograph_adjoint(self, boolean):
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        f = Functor(a, b, {"a0": "b0", "a1": "b1"})
        assert is_left_adjoint_dist(graph_of(f)) == cograph_of(f)

    def test_hom_selfadjoint(self, boolean):
        a = disc(boolean, 2)
        assert is_left_adjoint_dist(identity_dist(a)) == identity_dist(a)

    def test_empty_relation_not_adjoint(self, boolean):
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        phi = rel_matrix(boolean, a, b, set())
        assert is_left_adjoint_dist(phi) is None


class TestRepresentable:
    def test_graph_is_representable(self, boolean):
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        f = Functor(a, b, {"a0": "b1", "a1": "b0"})
        g = is_representable(graph_of(f))
        assert g is not None and graph_of(g) == graph_of(f)

    def test_identity_hom_represented_by_identity(self, boolean):
        a = disc(boolean, 2)
        g = is_representable(identity_dist(a))
        assert g is not None and g.mapping == {x: x for x in a.objects}

    def test_nonrepresentable_left_adjoint(self):
        """A left adjoint presheaf on a non-complete category need not be
        representable: the two-atom locale and the two-element group both
        give witnesses."""
        from quantalib.completion import left_adjoint_presheaves
        from quantalib.corpus import powerset2_quantale, z2_quantale
        p2 = powerset2_quantale()
        a = disc(p2, 2)
        a = QCategory(p2, a.objects, a.types, a.hom)
        found = []
        for phi in left_adjoint_presheaves(a):
            if is_representable(phi.to_distributor()) is None:
                found.append(phi)
        assert found  # e.g. ({a}, {b}) split across the two objects
        z2 = z2_quantale()
        reg = QCategory(z2, ["a"], {"a": O}, {("a", "a"): "{e}"})
        twisted = [phi for phi in left_adjoint_presheaves(reg)
                   if is_representable(phi.to_distributor()) is None]
        assert [phi.elt["a"] for phi in twisted] == ["{g}"]

    def test_chain_left_adjoints_all_representable(self, chain3):
        """Derived scan: over a chain locale, the top component of the unit
        forces every left adjoint presheaf to be representable (checked on
        all two-object categories)."""
        from quantalib.completion import left_adjoint_presheaves
        from quantalib.constructions import enumerate_categories
        for a in enumerate_categories(chain3, 2, symmetric=True):
            if not a.objects:
                continue
            for phi in left_adjoint_presheaves(a):
                assert is_representable(phi.to_distributor()) is not None


class TestProductTabulation:
    def test_hom_tabulation_is_diagonal(self, boolean):
        a = disc(boolean, 2)
        r, t, s = map_tabulation(identity_dist(a))
        assert sorted(r.objects) == ["(a0,a0)", "(a1,a1)"]
        got = compose_dist(graph_of(s), cograph_of(t))
        assert got == identity_dist(a)

    def test_relation_tabulation(self, boolean):
        """Tabulating a Boolean relation recovers it from its span of
        element pairs."""
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        for pairs in _all_pair_sets(a.objects, b.objects):
            phi = rel_matrix(boolean, a, b, set(pairs))
            r, t, s = map_tabulation(phi)
            assert len(r.objects) == len(set(pairs))
            got = compose_dist(graph_of(s), cograph_of(t))
            assert got == phi

    def test_empty_tabulation(self, boolean):
        a, b = disc(boolean, 1, "a"), disc(boolean, 1, "b")
        phi = rel_matrix(boolean, a, b, set())
        r, t, s = map_tabulation(phi)
        assert r.objects == ()
        got = compose_dist(graph_of(s), cograph_of(t))
        assert all(e == "0" for e in got.elt.values())

    def test_product_topology(self, chain3):
        a = QCategory(chain3, ["a"], {"a": O}, {("a", "a"): "1"})
        b = QCategory(chain3, ["b"], {"b": O}, {("b", "b"): "1"})
        p, decode = product(a, b)
        assert p.objects == ("(a,b)",)
        assert decode["(a,b)"] == ("a", "b")


class TestMatrices:
    def test_delta_is_unit(self, rel2):
        a = disc(rel2, 2)
        m = matrix(rel2, a.carrier(), a.carrier(),
                   {(y, x): rel2.hom(O, O).elements[3] if x == y else "{}"
                    for y in a.objects for x in a.objects})
        assert compose_dist(delta_matrix(rel2, a.carrier()), m) == m

    def test_direct_sum_laws(self, boolean):
        """p_i o s_j = delta_ij and sup_i s_i o p_i = identity."""
        parts = [QTypedSet(["u"], {"u": O}), QTypedSet(["v"], {"v": O})]
        whole, injections, projections = direct_sum(boolean, parts)
        for i, p in enumerate(projections):
            for j, s in enumerate(injections):
                got = compose_dist(p, s)
                if i == j:
                    assert got == delta_matrix(boolean, parts[i])
                else:
                    assert all(e == "0" for e in got.elt.values())
        acc = None
        for s, p in zip(injections, projections):
            term = compose_dist(s, p)
            acc = term if acc is None else Distributor(
                term.dom, term.cod,
                {k: boolean.hom(O, O).join2(acc.elt[k], term.elt[k])
                 for k in term.elt}, validate=False)
        assert acc == delta_matrix(boolean, whole)

    def test_monads_are_categories(self, boolean):
        a = disc(boolean, 2)
        delta = identity_dist(a)
        assert is_monad(delta)
        assert is_symmetric_monad(delta)
        assert is_antisymmetric_monad(delta)
        # a preorder hom-matrix is a monad; antisymmetric iff a partial order
        order = Distributor(a, a, {("a0", "a0"): "1", ("a1", "a1"): "1",
                                   ("a1", "a0"): "1", ("a0", "a1"): "0"})
        assert is_monad(order)
        assert not is_symmetric_monad(order)
        assert is_antisymmetric_monad(order)
        equiv = Distributor(a, a, {("a0", "a0"): "1", ("a1", "a1"): "1",
                                   ("a1", "a0"): "1", ("a0", "a1"): "1"})
        assert is_symmetric_monad(equiv)
        assert not is_antisymmetric_monad(equiv)

    def test_category_monad_roundtrip(self, chain3):
        a = QCategory(chain3, ["a0", "a1"], {"a0": O, "a1": O},
                      {("a0", "a0"): "1", ("a0", "a1"): "m",
                       ("a1", "a0"): "m", ("a1", "a1"): "1"})
        m = monad_of_category(a)
        assert is_monad(m)
        back = category_from_monad(m)
        assert back.hom == a.hom and back.types == a.types

    def test_category_json_roundtrip(self, chain3):
        a = QCategory(chain3, ["a0", "a1"], {"a0": O, "a1": O},
                      {("a0", "a0"): "1", ("a0", "a1"): "m",
                       ("a1", "a0"): "m", ("a1", "a1"): "1"})
        again = QCategory.from_json(chain3, a.to_json())
        assert again == a

    def test_functor_json_roundtrip(self, boolean):
        a, b = disc(boolean, 2, "a"), disc(boolean, 1, "b")
        f = Functor(a, b, {"a0": "b0", "a1": "b0"})
        again = Functor.from_json(boolean, f.to_json())
        assert again == f

    def test_distributor_json_roundtrip(self, boolean):
        a, b = disc(boolean, 2, "a"), disc(boolean, 2, "b")
        phi = rel_matrix(boolean, a, b, {("a0", "b1")})
        again = Distributor.from_json(boolean, phi.to_json())
        assert again == phi

    def test_functor_local_order(self, boolean):
        a = disc(boolean, 1)
        b = QCategory(boolean, ["b0", "b1"], {"b0": O, "b1": O},
                      {("b0", "b0"): "1", ("b1", "b1"): "1",
                       ("b1", "b0"): "1", ("b0", "b1"): "0"})
        f = Functor(a, b, {"a0": "b0"})
        g = Functor(a, b, {"a0": "b1"})
        # hom[(b1, b0)] = 1 encodes an arrow b0 -> b1, so g sits below f
        assert functor_leq(g, f)
        assert not functor_leq(f, g)
