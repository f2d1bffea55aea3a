"""Brute-force oracles, independent of the main calculus.

These re-derive expected values from first principles (plain sets of
pairs, explicit group actions, presheaves on a poset) so the engine can be
checked against something that shares none of its code paths.
"""

from __future__ import annotations

from itertools import permutations, product

from .errors import ResourceLimitError

__all__ = [
    "all_relations", "compose_relations", "transpose_relation",
    "count_set_iso_classes", "count_gset_iso_classes",
    "count_poset_presheaf_classes", "join_irreducibles",
]


# -- relation calculus -----------------------------------------------------------


def all_relations(points: list) -> list[frozenset]:
    pairs = [(a, b) for a in points for b in points]
    out = []
    for mask in range(1 << len(pairs)):
        out.append(frozenset(p for i, p in enumerate(pairs) if (mask >> i) & 1))
    return out


def compose_relations(s: frozenset, r: frozenset) -> frozenset:
    """(s o r) = {(a, c) | (a, b) in r and (b, c) in s}: r first, then s."""
    return frozenset((a, c) for a, b in r for b2, c in s if b == b2)


def transpose_relation(r: frozenset) -> frozenset:
    return frozenset((b, a) for a, b in r)


# -- censuses ---------------------------------------------------------------------


def count_set_iso_classes(max_size: int) -> int:
    """Finite sets up to bijection: one class per cardinality, empty set
    included."""
    count = 0
    for k in range(max_size + 1):
        count += 1  # all k-element sets are isomorphic
    return count


def count_gset_iso_classes(elements: list[str], unit: str,
                           mult: dict[tuple[str, str], str], max_size: int) -> int:
    """Group actions on sets of size <= max_size up to equivariant
    bijection, by exhaustive enumeration of action tables."""
    count = 0
    for n in range(max_size + 1):
        xs = list(range(n))
        canon = set()
        maps = list(product(xs, repeat=n)) if n else [()]
        for combo in product(maps, repeat=len(elements)):
            act = dict(zip(elements, combo))
            if n and act[unit] != tuple(xs):
                continue
            ok = True
            for g in elements:
                for h in elements:
                    gh = act[mult[(g, h)]]
                    composite = tuple(act[g][act[h][x]] for x in xs)
                    if composite != gh:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            best = None
            for sigma in permutations(xs):
                inv = [0] * n
                for i, v in enumerate(sigma):
                    inv[v] = i
                key = tuple(tuple(sigma[act[g][inv[x]]] for x in xs) for g in elements)
                if best is None or key < best:
                    best = key
            canon.add(best)
        count += len(canon)
    return count


# -- sheaves on a finite locale via presheaves on its irreducibles -------------------


def join_irreducibles(lat) -> list[str]:
    """Elements that are not the join of their strict lower set."""
    out = []
    for x in lat.elements:
        below = [y for y in lat.lower_set(x) if y != x]
        if lat.join(below) != x:
            out.append(x)
    return out


def count_poset_presheaf_classes(elements: list[str],
                                 leq: dict[tuple[str, str], bool],
                                 max_total: int,
                                 max_tables: int = 500000) -> int:
    """Functors P^op -> FinSet with total size <= max_total, up to natural
    isomorphism, counted by canonical forms.

    For a finite locale, take P to be its join-irreducibles: sheaves on the
    locale are exactly presheaves on P.
    """
    elems = sorted(elements)
    pairs = [(p, r) for p in elems for r in elems if p != r and leq[(p, r)]]
    total_classes = 0
    sizes_space = _size_vectors(len(elems), max_total)
    for sizes in sizes_space:
        size_of = dict(zip(elems, sizes))
        map_choices = []
        for p, r in pairs:
            # restriction F(r) -> F(p)
            choices = list(product(range(size_of[p]), repeat=size_of[r]))
            map_choices.append(choices)
        canon = set()
        count_tables = 1
        for c in map_choices:
            count_tables *= max(1, len(c))
        if count_tables > max_tables:
            raise ResourceLimitError("presheaf oracle exceeded its table cap",
                                     limit=max_tables, reached=count_tables)
        for combo in product(*map_choices) if pairs else [()]:
            rho = {pr: m for pr, m in zip(pairs, combo)}
            if not _functorial(elems, leq, size_of, rho):
                continue
            canon.add(_presheaf_canon(elems, size_of, pairs, rho))
        total_classes += len(canon)
    return total_classes


def _size_vectors(n: int, max_total: int):
    if n == 0:
        yield ()
        return
    for first in range(max_total + 1):
        for rest in _size_vectors(n - 1, max_total - first):
            yield (first, *rest)


def _functorial(elems, leq, size_of, rho) -> bool:
    for p in elems:
        for q in elems:
            if p == q or not leq[(p, q)]:
                continue
            for r in elems:
                if q == r or not leq[(q, r)]:
                    continue
                if p == r:
                    continue
                via = tuple(rho[(p, q)][rho[(q, r)][x]] for x in range(size_of[r]))
                if via != rho[(p, r)]:
                    return False
    return True


def _presheaf_canon(elems, size_of, pairs, rho):
    perm_spaces = [list(permutations(range(size_of[p]))) for p in elems]
    best = None
    for sigmas in product(*perm_spaces):
        sig = dict(zip(elems, sigmas))
        key = []
        for (p, r) in pairs:
            sp, sr = sig[p], sig[r]
            inv_r = [0] * size_of[r]
            for i, v in enumerate(sr):
                inv_r[v] = i
            key.append(tuple(sp[rho[(p, r)][inv_r[x]]] for x in range(size_of[r])))
        key = (tuple(size_of[p] for p in elems), tuple(key))
        if best is None or key < best:
            best = key
    return best
