"""Finite complete lattices (sup-lattices).

A lattice is stored as a carrier of opaque string ids plus the order
relation; joins and meets are computed on demand from bitset up-/down-sets.
Completeness (every subset has a least upper bound) is validated eagerly at
construction.
"""

from __future__ import annotations

from typing import Iterable

from .errors import InputError

__all__ = [
    "FiniteSupLattice",
    "chain",
    "powerset",
    "antichain_with_bounds",
    "subset_id",
]


class FiniteSupLattice:
    """A finite complete lattice: sorted element ids + order bitsets.

    Values are immutable after construction; all queries are pure.
    """

    __slots__ = ("elements", "_index", "_up", "_down", "_bottom_ix", "_top_ix",
                 "_join_memo", "_meet_memo")

    def __init__(self, elements: Iterable[str], leq_pairs: Iterable[tuple[str, str]]):
        elems = sorted(set(elements))
        if not elems:
            raise InputError("a sup-lattice needs at least one element (the empty join)")
        self.elements: tuple[str, ...] = tuple(elems)
        self._index = {e: i for i, e in enumerate(elems)}
        n = len(elems)
        # reflexive-transitive closure of the generating relation
        up = [1 << i for i in range(n)]
        for a, b in leq_pairs:
            ia, ib = self._ix(a), self._ix(b)
            up[ia] |= 1 << ib
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = up[i]
                m = acc
                while m:
                    j = (m & -m).bit_length() - 1
                    m &= m - 1
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        # antisymmetry
        for i in range(n):
            for j in range(i + 1, n):
                if (up[i] >> j) & 1 and (up[j] >> i) & 1:
                    raise InputError(
                        f"order is not antisymmetric: {elems[i]} <= {elems[j]} <= {elems[i]}")
        self._up = up
        down = [0] * n
        for i in range(n):
            m = up[i]
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                down[j] |= 1 << i
        self._down = down
        self._join_memo: dict[int, int] = {}
        self._meet_memo: dict[int, int] = {}
        self._bottom_ix = self._validate_complete()
        self._top_ix = self._least_upper_ix((1 << n) - 1)

    # -- internals ---------------------------------------------------------

    def _ix(self, e: str) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise InputError(f"unknown lattice element: {e!r}") from None

    def _validate_complete(self) -> int:
        """Bottom plus all binary joins suffice for all joins, finitely."""
        n = len(self.elements)
        full = (1 << n) - 1
        bottom = None
        for i in range(n):
            if self._up[i] == full:
                bottom = i
                break
        if bottom is None:
            raise InputError("not a complete lattice: no bottom element")
        for i in range(n):
            for j in range(i + 1, n):
                ub = self._up[i] & self._up[j]
                if self._pick_least(ub) is None:
                    raise InputError(
                        "not a complete lattice: "
                        f"{{{self.elements[i]}, {self.elements[j]}}} has no least upper bound")
        return bottom

    def _pick_least(self, mask: int):
        """The member of `mask` below every member, or None."""
        m = mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            if self._up[i] & mask == mask:
                return i
        return None

    def _least_upper_ix(self, subset_mask: int) -> int:
        memo = self._join_memo
        got = memo.get(subset_mask)
        if got is not None:
            return got
        n = len(self.elements)
        ub = (1 << n) - 1
        m = subset_mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            ub &= self._up[i]
        least = self._pick_least(ub)
        if least is None:  # impossible after validation
            raise InputError("subset has no least upper bound")
        memo[subset_mask] = least
        return least

    def _greatest_lower_ix(self, subset_mask: int) -> int:
        memo = self._meet_memo
        got = memo.get(subset_mask)
        if got is not None:
            return got
        n = len(self.elements)
        lb = (1 << n) - 1
        m = subset_mask
        while m:
            i = (m & -m).bit_length() - 1
            m &= m - 1
            lb &= self._down[i]
        # join of the lower bounds; it is itself a lower bound
        greatest = None
        mm = lb
        while mm:
            i = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            if self._down[i] & lb == lb:
                greatest = i
                break
        if greatest is None:
            greatest = self._least_upper_ix(lb)
        memo[subset_mask] = greatest
        return greatest

    def _mask(self, subset: Iterable[str]) -> int:
        mask = 0
        for e in subset:
            mask |= 1 << self._ix(e)
        return mask

    # -- queries -----------------------------------------------------------

    @property
    def bottom(self) -> str:
        return self.elements[self._bottom_ix]

    @property
    def top(self) -> str:
        return self.elements[self._top_ix]

    def leq(self, a: str, b: str) -> bool:
        return bool((self._up[self._ix(a)] >> self._ix(b)) & 1)

    def join(self, subset: Iterable[str]) -> str:
        """Least upper bound; join of the empty set is bottom."""
        return self.elements[self._least_upper_ix(self._mask(subset))]

    def meet(self, subset: Iterable[str]) -> str:
        """Join of the common lower bounds; meet of the empty set is top."""
        return self.elements[self._greatest_lower_ix(self._mask(subset))]

    def join2(self, a: str, b: str) -> str:
        return self.elements[self._least_upper_ix((1 << self._ix(a)) | (1 << self._ix(b)))]

    def meet2(self, a: str, b: str) -> str:
        return self.elements[self._greatest_lower_ix((1 << self._ix(a)) | (1 << self._ix(b)))]

    def upper_set(self, a: str) -> list[str]:
        return [self.elements[i] for i in self._bits(self._up[self._ix(a)])]

    def lower_set(self, a: str) -> list[str]:
        return [self.elements[i] for i in self._bits(self._down[self._ix(a)])]

    def _bits(self, mask: int):
        while mask:
            i = (mask & -mask).bit_length() - 1
            mask &= mask - 1
            yield i

    def is_locale(self) -> tuple[bool, dict | None]:
        """Finite frame law: x /\\ (a \\/ b) = (x /\\ a) \\/ (x /\\ b) for all
        triples (binary distributivity induces the law for all joins), plus
        x /\\ bottom = bottom.  Returns (verdict, counterexample-or-None)."""
        es = self.elements
        bot = self.bottom
        for x in es:
            if self.meet2(x, bot) != bot:
                return False, {"x": x, "law": "x /\\ bottom = bottom"}
        for x in es:
            for a in es:
                xa = self.meet2(x, a)
                for b in es:
                    lhs = self.meet2(x, self.join2(a, b))
                    rhs = self.join2(xa, self.meet2(x, b))
                    if lhs != rhs:
                        return False, {"x": x, "a": a, "b": b, "lhs": lhs, "rhs": rhs}
        return True, None

    def restrict(self, subset: Iterable[str]) -> "FiniteSupLattice":
        """Sub-poset on `subset` with the inherited order.

        The caller promises the subset is closed under the joins it needs;
        completeness is re-validated by the constructor.
        """
        keep = sorted(set(subset))
        pairs = [(a, b) for a in keep for b in keep if self.leq(a, b)]
        return FiniteSupLattice(keep, pairs)

    # -- interchange --------------------------------------------------------

    def to_json(self) -> dict:
        pairs = []
        for i, a in enumerate(self.elements):
            for j in self._bits(self._up[i]):
                if j != i:
                    pairs.append([a, self.elements[j]])
        return {"elements": list(self.elements), "leq": sorted(pairs)}

    @classmethod
    def from_json(cls, data: dict) -> "FiniteSupLattice":
        if not isinstance(data, dict) or "elements" not in data:
            raise InputError("lattice JSON needs an 'elements' list")
        leq = data.get("leq", [])
        try:
            pairs = [(a, b) for a, b in leq]
        except (TypeError, ValueError):
            raise InputError("lattice 'leq' must be a list of [a, b] pairs") from None
        return cls(data["elements"], pairs)

    def __eq__(self, other):
        return (isinstance(other, FiniteSupLattice)
                and self.elements == other.elements and self._up == other._up)

    def __hash__(self):
        return hash((self.elements, tuple(self._up)))

    def __repr__(self):
        return f"FiniteSupLattice({len(self.elements)} elements)"


# -- stock builders ---------------------------------------------------------

def chain(labels: Iterable[str]) -> FiniteSupLattice:
    """Total order in the given label order (first is bottom)."""
    labels = list(labels)
    pairs = [(labels[i], labels[i + 1]) for i in range(len(labels) - 1)]
    return FiniteSupLattice(labels, pairs)


def subset_id(items: Iterable[str]) -> str:
    """Canonical id for a finite subset: '{a,b}' with sorted members."""
    return "{" + ",".join(sorted(items)) + "}"


def powerset(atoms: Iterable[str]) -> FiniteSupLattice:
    atoms = sorted(set(atoms))
    subs = []
    for mask in range(1 << len(atoms)):
        subs.append(frozenset(a for i, a in enumerate(atoms) if (mask >> i) & 1))
    elements = [subset_id(s) for s in subs]
    pairs = [(subset_id(s), subset_id(t)) for s in subs for t in subs if s <= t]
    return FiniteSupLattice(elements, pairs)


def antichain_with_bounds(mids: Iterable[str], bottom: str = "0", top: str = "1") -> FiniteSupLattice:
    """Bottom, top, and pairwise-incomparable middles (M3 for three mids)."""
    mids = sorted(set(mids))
    elems = [bottom, top, *mids]
    pairs = [(bottom, m) for m in mids] + [(m, top) for m in mids] + [(bottom, top)]
    return FiniteSupLattice(elems, pairs)
