"""Bounded distributive lattices and finite Priestley duality (H and K).

H sends a lattice to its poset of 0,1-lattice homomorphisms into the two-element
lattice under the pointwise order, which is the same as prime filters ordered by
inclusion. K builds the lattice of down-sets (or up-sets) of a finite poset.
The up-set composite K_up(H(L)) is isomorphic to L; the down-set composite gives
the order dual.
"""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import GuardExceeded, NotALattice
from .posets import Poset, bool_compose, dual, enumerate_downsets

DEFAULT_DISTRIBUTIVITY_GUARD = 2048
DEFAULT_HOM_SCAN_GUARD = 20


class Lattice:
    """Bounded lattice on an indexed carrier, stored as its order matrix."""

    __slots__ = ("elements", "leq", "bot", "top", "_meet", "_join")

    def __init__(self, elements, leq, check: bool = True):
        poset = Poset(elements, leq, check=check)
        self.elements = poset.elements
        self.leq = poset.leq
        mins = poset.minimal_elements()
        maxs = poset.maximal_elements()
        if len(mins) != 1 or len(maxs) != 1:
            raise NotALattice("carrier is not bounded")
        self.bot = mins[0]
        self.top = maxs[0]
        self._meet = None
        self._join = None

    @property
    def n(self) -> int:
        return len(self.elements)

    def poset(self) -> Poset:
        return Poset(self.elements, self.leq, check=False)

    def _tables(self):
        if self._meet is None:
            n = self.n
            down = [0] * n
            up = [0] * n
            for i in range(n):
                for j in range(n):
                    if self.leq[j, i]:
                        down[i] |= 1 << j
                    if self.leq[i, j]:
                        up[i] |= 1 << j
            by_down = {m: i for i, m in enumerate(down)}
            by_up = {m: i for i, m in enumerate(up)}
            meet = np.zeros((n, n), dtype=np.int16)
            join = np.zeros((n, n), dtype=np.int16)
            for i in range(n):
                for j in range(n):
                    lo = by_down.get(down[i] & down[j])
                    hi = by_up.get(up[i] & up[j])
                    if lo is None or hi is None:
                        raise NotALattice(f"pair ({i},{j}) has no meet or join")
                    meet[i, j] = lo
                    join[i, j] = hi
            meet.setflags(write=False)
            join.setflags(write=False)
            self._meet = meet
            self._join = join
        return self._meet, self._join

    def meet(self, i: int, j: int) -> int:
        return int(self._tables()[0][i, j])

    def join(self, i: int, j: int) -> int:
        return int(self._tables()[1][i, j])

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.elements == other.elements and np.array_equal(self.leq, other.leq)

    def __repr__(self):
        return f"Lattice({self.n} elements)"


def lattice_from_leq(elements, leq) -> Lattice:
    return Lattice(elements, leq)


def distributive_by_triples(L: Lattice, guard: int = 512) -> bool:
    """Exhaustive triple check of a meet(b join c) = (a meet b) join (a meet c)."""
    if L.n > guard:
        raise GuardExceeded(f"{L.n} elements exceed the triple-check guard {guard}")
    meet, join = L._tables()
    for a in range(L.n):
        lhs = meet[a, join]
        rhs = join[meet[a][:, None], meet[a][None, :]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_distributive(L: Lattice, guard: int = DEFAULT_DISTRIBUTIVITY_GUARD) -> bool:
    """Exact distributivity test.

    Small carriers get the exhaustive triple check; past 64 elements the count
    criterion is used instead: every element is the join of the irreducibles
    below it, so the comparison embedding into the down-sets of J(L) is onto
    exactly for distributive lattices.
    """
    if L.n > guard:
        raise GuardExceeded(f"{L.n} elements exceed distributivity guard {guard}")
    if L.n <= 64:
        return distributive_by_triples(L, guard=64)
    ji = join_irreducibles(L)
    sel = np.asarray(ji, dtype=np.int64)
    sub = Poset([str(i) for i in range(len(ji))], L.leq[np.ix_(sel, sel)], check=False)
    from .posets import count_downsets
    return count_downsets(sub) == L.n


def join_irreducibles(L: Lattice) -> list[int]:
    """Elements with exactly one lower cover (the bottom is excluded)."""
    lt = L.leq & ~np.eye(L.n, dtype=bool)
    via = bool_compose(lt, lt)
    cov = lt & ~via
    return [j for j in range(L.n) if int(cov[:, j].sum()) == 1]


def priestley_dual_of_lattice(L: Lattice, *, check_distributive: bool = True,
                              guard: int = DEFAULT_DISTRIBUTIVITY_GUARD) -> Poset:
    """H(L): homs into the two-element lattice under the pointwise order.

    Computed through join-irreducibles: the prime filters are their up-sets, and
    filter inclusion reverses the induced order on join-irreducibles.
    """
    if check_distributive and L.n <= guard and not is_distributive(L, guard=guard):
        raise NotALattice("input lattice is not distributive")
    ji = join_irreducibles(L)
    sel = np.asarray(ji, dtype=np.int64)
    sub = L.leq[np.ix_(sel, sel)]
    names = [f"pf_{L.elements[j]}" for j in ji]
    return Poset(names, sub.T, check=False)


def prime_filters(L: Lattice) -> list[frozenset[int]]:
    """Prime filters, in the element order of priestley_dual_of_lattice."""
    out = []
    for j in join_irreducibles(L):
        out.append(frozenset(int(i) for i in np.flatnonzero(L.leq[j])))
    return out


def priestley_dual_by_homs(L: Lattice, guard: int = DEFAULT_HOM_SCAN_GUARD) -> Poset:
    """Oracle construction of H(L): scan all 0,1-maps for lattice homomorphisms."""
    if L.n > guard:
        raise GuardExceeded(f"{L.n} elements exceed the hom-scan guard {guard}")
    meet, join = L._tables()
    homs = []
    for bits in itertools.product((0, 1), repeat=L.n):
        h = np.asarray(bits, dtype=np.int16)
        if h[L.bot] != 0 or h[L.top] != 1:
            continue
        if not np.array_equal(h[meet], np.minimum(h[:, None], h[None, :])):
            continue
        if not np.array_equal(h[join], np.maximum(h[:, None], h[None, :])):
            continue
        homs.append(bits)
    homs.sort()
    n = len(homs)
    leq = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            leq[a, b] = all(x <= y for x, y in zip(homs[a], homs[b]))
    return Poset([f"h{i}" for i in range(n)], leq)


def _family_lattice(masks: list[int], n_points: int, tag: str) -> Lattice:
    masks = sorted(masks, key=lambda m: (bin(m).count("1"), m))
    index = {m: i for i, m in enumerate(masks)}
    n = len(masks)
    leq = np.zeros((n, n), dtype=bool)
    for a, ma in enumerate(masks):
        for b, mb in enumerate(masks):
            leq[a, b] = (ma & ~mb) == 0
    names = []
    for m in masks:
        bits = ",".join(str(i) for i in range(n_points) if m >> i & 1)
        names.append(f"{tag}{{{bits}}}")
    return Lattice(names, leq, check=False)


def lattice_of_downsets(P: Poset) -> Lattice:
    """O(P): all down-sets under union and intersection, bounded by {} and P."""
    return _family_lattice(enumerate_downsets(P), P.n, "D")


def lattice_of_upsets(P: Poset) -> Lattice:
    """Up-sets of P (down-sets of the dual), the classical K(P)."""
    masks = enumerate_downsets(dual(P))
    return _family_lattice(masks, P.n, "U")


def lattices_isomorphic(L1: Lattice, L2: Lattice) -> bool:
    """Isomorphism of finite distributive lattices via their join-irreducible posets.

    Sound only for distributive inputs, where L is determined by J(L).
    """
    from .posets import are_isomorphic
    if L1.n != L2.n:
        return False
    ji1 = join_irreducibles(L1)
    ji2 = join_irreducibles(L2)
    if len(ji1) != len(ji2):
        return False
    s1 = np.asarray(ji1, dtype=np.int64)
    s2 = np.asarray(ji2, dtype=np.int64)
    P1 = Poset([str(i) for i in range(len(ji1))], L1.leq[np.ix_(s1, s1)], check=False)
    P2 = Poset([str(i) for i in range(len(ji2))], L2.leq[np.ix_(s2, s2)], check=False)
    return are_isomorphic(P1, P2) is not None
