"""The doubled Priestley space P(X), lattice-reduct translation, and exact counting.

P(X) glues a ranked space and its order dual: plain elements keep the amalgated
order, hatted elements reverse it, and the two halves are related through the
retraction onto the rank-0 block. Down-sets of P(M~n) count the one-generated
free algebra, split by how they meet the top block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import FiniteAlgebra, lattice_reduct
from .distlat import priestley_dual_of_lattice
from .multisorted import MultiMorphism, MultiSortedStructure, build_alter_ego, natural_dual
from .posets import Poset, are_isomorphic, enumerate_downsets, is_order_isomorphism
from .ranked import RankedPriestleySpace, functor_F


@dataclass
class DoubledSpace:
    """X together with a hatted copy; indices [0, m) are plain, [m, 2m) hatted."""

    base: RankedPriestleySpace
    poset: Poset
    m: int

    def plain(self, i: int) -> int:
        return i

    def hatted(self, i: int) -> int:
        return self.m + i

    def block_masks(self) -> tuple[int, int, int]:
        """Bit masks of the bottom, centre and top blocks."""
        rank = self.base.rank
        bottom = centre = top = 0
        for i in range(self.m):
            if rank[i] == 0:
                centre |= 1 << i
                centre |= 1 << (self.m + i)
            else:
                bottom |= 1 << i
                top |= 1 << (self.m + i)
        return bottom, centre, top


def construct_P(X: MultiSortedStructure) -> DoubledSpace:
    """Clause-by-clause doubling of F(X); the result must already be transitive.

    No transitive repair is applied: a failure here means the clauses were
    transcribed wrongly, and surfaces as a hard error from the Poset validator.
    """
    Y = functor_F(X)
    m = Y.poset.n
    leq = Y.poset.leq
    g = Y.g
    rank = Y.rank
    names = list(Y.poset.elements) + ["^" + e for e in Y.poset.elements]
    mat = np.zeros((2 * m, 2 * m), dtype=bool)
    for x in range(m):
        for y in range(m):
            # plain-plain: the amalgamated order, plus collapse onto the centre
            ok = leq[x, y]
            if rank[x] >= 1 and rank[y] == 0:
                ok = ok or leq[g[x], y]
            mat[x, y] = ok
            # hatted-hatted: reversed order, plus collapse onto the hatted centre
            ok = leq[y, x]
            if rank[x] == 0 and rank[y] >= 1:
                ok = ok or leq[g[y], x]
            mat[m + x, m + y] = ok
            # plain-to-hatted, split by membership in the rank-0 block
            if rank[x] >= 1 and rank[y] == 0:
                mat[x, m + y] = leq[y, g[x]]
            elif rank[x] == 0 and rank[y] >= 1:
                mat[x, m + y] = leq[x, g[y]]
            elif rank[x] >= 1 and rank[y] >= 1:
                mat[x, m + y] = leq[g[x], g[y]] or leq[g[y], g[x]]
    poset = Poset(names, mat)
    return DoubledSpace(Y, poset, m)


def transport_morphism(phi: MultiMorphism, PX: DoubledSpace, PY: DoubledSpace) -> tuple[int, ...]:
    """P(phi): plain to plain, hatted to hatted; checked order-preserving."""
    flat = []
    offs = [0]
    for k in range(phi.target.n + 1):
        offs.append(offs[-1] + len(phi.target.sorts[k]))
    for k in range(phi.source.n + 1):
        for i in range(len(phi.source.sorts[k])):
            flat.append(offs[k] + phi.maps[k][i])
    full = tuple(flat) + tuple(PY.m + v for v in flat)
    for a in range(PX.poset.n):
        for b in range(PX.poset.n):
            if PX.poset.leq[a, b] and not PY.poset.leq[full[a], full[b]]:
                raise AssertionError(f"transported map is not order-preserving at ({a},{b})")
    return full


def verify_translation(A: FiniteAlgebra, n: int | None = None,
                       generator_hints=()) -> bool:
    """H(A-flat) is order-isomorphic to P(D(A)), with the witness verified both ways."""
    if n is None:
        n = A.signature.n
    H = priestley_dual_of_lattice(lattice_reduct(A))
    dual_A = natural_dual(A, n, generator_hints=generator_hints)
    P = construct_P(dual_A.structure)
    witness = are_isomorphic(H, P.poset)
    if witness is None:
        return False
    return is_order_isomorphism(witness, H, P.poset)


# ----------------------------------------------------------------------------
# counting


@dataclass(frozen=True)
class FreeSizes:
    avoiding_top: int
    meeting_top: int
    total: int


def free_size_formula(n: int) -> FreeSizes:
    """Closed forms for the down-set count of P(M~n), split by meeting the top."""
    if n < 1:
        raise ValueError("the counting formulas require n >= 1")
    f4 = n**6 + 10 * n**5 + 41 * n**4 + 96 * n**3 + 148 * n**2 + 148 * n + 144
    g4 = n**6 + 10 * n**5 + 43 * n**4 + 108 * n**3 + 166 * n**2 + 148 * n
    t2 = n**6 + 10 * n**5 + 42 * n**4 + 102 * n**3 + 157 * n**2 + 148 * n + 72
    if f4 % 4 or g4 % 4 or t2 % 2:
        raise AssertionError("polynomial values must be integral")
    sizes = FreeSizes(f4 // 4, g4 // 4, t2 // 2)
    if sizes.avoiding_top + sizes.meeting_top != sizes.total:
        raise AssertionError("split does not sum to the total")
    return sizes


_CENTRE = {"bot": "bot0", "f": "f0", "t": "t0", "top": "top0",
           "hbot": "^bot0", "hf": "^f0", "ht": "^t0", "htop": "^top0"}


def table_avoiding_expected(n: int) -> dict[frozenset[str], int]:
    """Expected tallies for top-avoiding down-sets, grouped by the centre trace."""
    c = _CENTRE
    table: dict[frozenset[str], int] = {}
    table[frozenset()] = (n + 1) ** 4 * (n + 2) ** 2 // 4
    for key in ({c["bot"]}, {c["htop"]}):
        table[frozenset(key)] = (n + 1) ** 3 * (n + 2) ** 2 // 4
    for key in ({c["bot"], c["f"]}, {c["bot"], c["t"]},
                {c["htop"], c["hf"]}, {c["htop"], c["ht"]}):
        table[frozenset(key)] = (n + 1) ** 2 * (n + 2) // 2
    for key in ({c["bot"], c["f"], c["t"]}, {c["htop"], c["hf"], c["ht"]}):
        table[frozenset(key)] = n + 1
    table[frozenset({c["bot"], c["htop"]})] = (n + 1) ** 2 * (n + 2) ** 2 // 4
    for key in ({c["bot"], c["htop"], c["hf"]}, {c["bot"], c["htop"], c["ht"]},
                {c["bot"], c["f"], c["htop"]}, {c["bot"], c["t"], c["htop"]},
                {c["bot"], c["f"], c["htop"], c["hf"]},
                {c["bot"], c["t"], c["htop"], c["ht"]}):
        table[frozenset(key)] = (n + 1) * (n + 2) // 2
    plain_downsets = [frozenset(), frozenset({c["bot"]}), frozenset({c["bot"], c["f"]}),
                      frozenset({c["bot"], c["t"]}), frozenset({c["bot"], c["f"], c["t"]}),
                      frozenset({c["bot"], c["f"], c["t"], c["top"]})]
    hat_downsets = [frozenset(), frozenset({c["htop"]}), frozenset({c["htop"], c["hf"]}),
                    frozenset({c["htop"], c["ht"]}), frozenset({c["htop"], c["hf"], c["ht"]}),
                    frozenset({c["htop"], c["hf"], c["ht"], c["hbot"]})]
    for p in plain_downsets:
        for h in hat_downsets:
            table.setdefault(p | h, 1)
    if len(table) != 36:
        raise AssertionError("centre must have exactly 36 down-sets")
    return table


def table_meeting_expected(n: int) -> dict[frozenset[str], int]:
    """Expected tallies for top-meeting down-sets, grouped by the minimal-top trace."""
    z, b, t, o = f"^0{n}", f"^bot{n}", f"^top{n}", f"^1{n}"
    q = (n + 1) * (n + 2) // 2
    table: dict[frozenset[str], int] = {}
    table[frozenset({z})] = (q - 1) * (q + 8)
    table[frozenset({o})] = (q - 1) * (q + 8)
    table[frozenset({b})] = 5 * n
    table[frozenset({t})] = 5 * n
    table[frozenset({z, o})] = 4 * (q - 1) ** 2
    for key in ({z, t}, {z, b}, {t, o}, {b, o}):
        table[frozenset(key)] = 3 * n * (q - 1)
    table[frozenset({t, b})] = n * n
    for key in ({b, t, o}, {z, t, b}):
        table[frozenset(key)] = n * n * (q - 1)
    for key in ({z, t, o}, {z, b, o}):
        table[frozenset(key)] = 2 * n * (q - 1) ** 2
    table[frozenset({z, b, t, o})] = n * n * (q - 1) ** 2
    if len(table) != 15:
        raise AssertionError("the minimal top block has 15 nonempty traces")
    return table


@dataclass
class PartitionedCount:
    n: int
    avoiding_top: int
    meeting_top: int
    by_centre: dict[frozenset[str], int]
    by_min_top: dict[frozenset[str], int]


def partitioned_downset_count(n: int, space: DoubledSpace | None = None,
                              max_downsets: int = 10**7) -> PartitionedCount:
    """Enumerate down-sets of P(M~n) and classify them by block traces."""
    if space is None:
        space = construct_P(build_alter_ego(n))
    P = space.poset
    _, centre_mask, top_mask = space.block_masks()
    names = P.elements
    top_indices = [i for i in range(P.n) if top_mask >> i & 1]
    top_sub = P.restrict(top_indices)
    min_top = [top_indices[i] for i in top_sub.minimal_elements()]
    masks = enumerate_downsets(P, limit=max_downsets)
    by_centre: dict[frozenset[str], int] = {}
    by_min_top: dict[frozenset[str], int] = {}
    avoiding = meeting = 0
    for mask in masks:
        if mask & top_mask:
            meeting += 1
            key = frozenset(names[i] for i in min_top if mask >> i & 1)
            by_min_top[key] = by_min_top.get(key, 0) + 1
        else:
            avoiding += 1
            key = frozenset(names[i] for i in range(P.n)
                            if centre_mask >> i & 1 and mask >> i & 1)
            by_centre[key] = by_centre.get(key, 0) + 1
    return PartitionedCount(n, avoiding, meeting, by_centre, by_min_top)
