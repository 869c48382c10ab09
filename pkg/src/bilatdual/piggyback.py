"""Carrier maps into the two-element lattice and the piggyback relation machinery.

For each pair of carriers the maximal subuniverses of M_j x M_k inside the
carrier preimage of <= are computed from the full subuniverse family and named
against a fixed catalogue; an unnamed relation is a hard error because it would
mean the subuniverse landscape changed. The carrier space of an algebra glues
hom-sets tagged by carriers under the pointwise extension of these relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import (FiniteAlgebra, enumerate_subuniverses, lattice_reduct,
                      mk_algebras, product)
from .distlat import priestley_dual_of_lattice
from .multisorted import NaturalDual, build_alter_ego, natural_dual
from .posets import Poset, are_isomorphic, is_order_isomorphism


@dataclass(frozen=True)
class Carrier:
    """A bounded-lattice hom from a generating algebra's truth reduct onto {0,1}."""

    sort: int
    kind: str            # "gamma" | "delta"
    values: tuple[int, ...]

    @property
    def name(self) -> str:
        return f"{self.kind}{self.sort}"

    def prime(self) -> str:
        return "delta" if self.kind == "gamma" else "gamma"

    def __call__(self, element: int) -> int:
        return self.values[element]


def build_carriers(n: int) -> tuple[tuple[Carrier, Carrier], ...]:
    """The pairs (gamma_k, delta_k) for k in [0, n], with their invariants verified."""
    if n < 1:
        raise ValueError("carriers require n >= 1")
    mks = mk_algebras(n)
    out = []
    for k in range(n + 1):
        mk = mks[k]
        if k == 0:
            gamma_ones = {"top0", "t0"}
            delta_ones = {"bot0", "t0"}
        else:
            gamma_ones = {f"1{k}"}
            delta_ones = set(mk.elements) - {f"0{k}"}
        gamma = Carrier(k, "gamma",
                        tuple(1 if e in gamma_ones else 0 for e in mk.elements))
        delta = Carrier(k, "delta",
                        tuple(1 if e in delta_ones else 0 for e in mk.elements))
        for w in (gamma, delta):
            _assert_carrier(w, mk)
        out.append((gamma, delta))
    return tuple(out)


def _assert_carrier(w: Carrier, mk: FiniteAlgebra):
    lat = lattice_reduct(mk)
    if w.values[lat.bot] != 0 or w.values[lat.top] != 1:
        raise AssertionError(f"{w.name} does not preserve the bounds")
    for a in range(mk.size):
        for b in range(mk.size):
            if w.values[lat.meet(a, b)] != min(w.values[a], w.values[b]):
                raise AssertionError(f"{w.name} does not preserve truth meet")
            if w.values[lat.join(a, b)] != max(w.values[a], w.values[b]):
                raise AssertionError(f"{w.name} does not preserve truth join")


def all_carriers(n: int) -> list[Carrier]:
    return [w for pair in build_carriers(n) for w in pair]


def check_sep(n: int) -> tuple[bool, tuple | None]:
    """Each pair of distinct points of a sort is split by its own carriers or below g."""
    carriers = build_carriers(n)
    ego = build_alter_ego(n)
    mks = mk_algebras(n)
    for k in range(n + 1):
        omega_k = carriers[k]
        omega_0 = carriers[0]
        g = ego.g[k - 1] if k >= 1 else tuple(range(mks[0].size))
        for a in range(mks[k].size):
            for b in range(mks[k].size):
                if a == b:
                    continue
                if any(w(a) != w(b) for w in omega_k):
                    continue
                if any(w(g[a]) != w(g[b]) for w in omega_0):
                    continue
                return False, (k, mks[k].elements[a], mks[k].elements[b])
    return True, None


# ----------------------------------------------------------------------------
# named relations on M_j x M_k


def _g_map(n: int, k: int) -> tuple[int, ...]:
    mks = mk_algebras(n)
    if k == 0:
        return tuple(range(mks[0].size))
    ego = build_alter_ego(n)
    return ego.g[k - 1]


def build_S_relations(j: int, k: int, n: int) -> tuple[frozenset, frozenset]:
    """S_le and S_ge from M_j to M_k, asserted equal to their explicit unions.

    S_le relates a to b when g_j(a) sits below g_k(b) in the sort-0 order; the
    explicit union form and the converse identity are cross-checked.
    """
    mks = mk_algebras(n)
    mj, mk = mks[j], mks[k]
    gj, gk = _g_map(n, j), _g_map(n, k)
    le0 = mks[0].order_matrix("k")
    s_le = frozenset((a, b) for a in range(mj.size) for b in range(mk.size)
                     if le0[gj[a], gk[b]])
    s_ge = frozenset((a, b) for a in range(mj.size) for b in range(mk.size)
                     if le0[gk[b], gj[a]])

    def false_consts(m, s):
        return {m.index("f0")} if s == 0 else {m.index(f"f{s}"), m.index(f"0{s}")}

    def true_consts(m, s):
        return {m.index("t0")} if s == 0 else {m.index(f"t{s}"), m.index(f"1{s}")}

    top_k = mk.index("top0" if k == 0 else f"top{k}")
    bot_j = mj.index("bot0" if j == 0 else f"bot{j}")
    union = set()
    union |= {(a, top_k) for a in range(mj.size)}
    union |= {(bot_j, b) for b in range(mk.size)}
    union |= set(itertools.product(false_consts(mj, j), false_consts(mk, k)))
    union |= set(itertools.product(true_consts(mj, j), true_consts(mk, k)))
    if frozenset(union) != s_le:
        raise AssertionError(f"S_le^{j}{k} does not match its explicit union")
    # converse identity: S_ge from j to k equals the converse of S_le from k to j
    s_le_kj = frozenset((a, b) for a in range(mk.size) for b in range(mj.size)
                        if le0[gk[a], gj[b]])
    if frozenset((b, a) for a, b in s_le_kj) != s_ge:
        raise AssertionError(f"S_ge^{j}{k} is not the converse of S_le^{k}{j}")
    return s_le, s_ge


@lru_cache(maxsize=None)
def relation_catalogue(j: int, k: int, n: int) -> dict[str, frozenset]:
    """Named binary relations from M_j to M_k, first match wins on coincidences."""
    mks = mk_algebras(n)
    mj, mk = mks[j], mks[k]
    ego = build_alter_ego(n)
    out: dict[str, frozenset] = {}

    def put(name, rel):
        rel = frozenset(rel)
        if rel not in out.values():
            out[name] = rel

    if j == k:
        put(f"le{k}", ego.rel_sort[k])
        put(f"ge{k}", frozenset((b, a) for a, b in ego.rel_sort[k]))
    if 1 <= j < k:
        put(f"le{j}_{k}", ego.rel_cross[(j, k)])
    if 1 <= k < j:
        put(f"ge{j}_{k}", frozenset((b, a) for a, b in ego.rel_cross[(k, j)]))
    s_le, s_ge = build_S_relations(j, k, n)
    put(f"Sle{j}_{k}", s_le)
    put(f"Sge{j}_{k}", s_ge)
    put(f"Smeet{j}_{k}", s_le & s_ge)
    if j == k:
        put(f"diag{k}", frozenset((a, a) for a in range(mj.size)))
    if j == 0 and k >= 1:
        gk = _g_map(n, k)
        put(f"cograph_g{k}", frozenset((gk[b], b) for b in range(mk.size)))
    if k == 0 and j >= 1:
        gj = _g_map(n, j)
        put(f"graph_g{j}", frozenset((a, gj[a]) for a in range(mj.size)))
    put(f"full{j}_{k}", frozenset(itertools.product(range(mj.size), range(mk.size))))
    return out


def name_relation(rel: frozenset, j: int, k: int, n: int) -> str:
    catalogue = relation_catalogue(j, k, n)
    for name, known in catalogue.items():
        if known == rel:
            return name
    raise AssertionError(
        f"unnamed subuniverse of M_{j} x M_{k}: {sorted(rel)}")


# ----------------------------------------------------------------------------
# piggyback relations


@dataclass
class PiggybackRelationSet:
    omega1: Carrier
    omega2: Carrier
    relations: tuple[frozenset, ...]
    names: tuple[str, ...]


def preimage_sublattice(w1: Carrier, w2: Carrier, n: int) -> frozenset:
    """Pairs (a, b) with w1(a) <= w2(b); verified closed under truth meet/join."""
    mks = mk_algebras(n)
    mj, mk = mks[w1.sort], mks[w2.sort]
    rel = frozenset((a, b) for a in range(mj.size) for b in range(mk.size)
                    if w1(a) <= w2(b))
    mt_j, jt_j = mj.tables["meet_t"], mj.tables["join_t"]
    mt_k, jt_k = mk.tables["meet_t"], mk.tables["join_t"]
    for (a, b), (c, d) in itertools.product(rel, rel):
        if (int(mt_j[a, c]), int(mt_k[b, d])) not in rel:
            raise AssertionError("preimage not closed under truth meet")
        if (int(jt_j[a, c]), int(jt_k[b, d])) not in rel:
            raise AssertionError("preimage not closed under truth join")
    bot = (mj.consts["f_0"], mk.consts["f_0"])
    top = (mj.consts["t_0"], mk.consts["t_0"])
    if bot not in rel or top not in rel:
        raise AssertionError("preimage misses a bound pair")
    return rel


@lru_cache(maxsize=None)
def _subuniverse_pairs(n: int, j: int, k: int) -> tuple[frozenset, ...]:
    mks = mk_algebras(n)
    prod = product([mks[j], mks[k]])
    size_k = mks[k].size
    return tuple(frozenset(divmod(i, size_k) for i in member)
                 for member in enumerate_subuniverses(prod).members)


def piggyback_relations(w1: Carrier, w2: Carrier, n: int) -> PiggybackRelationSet:
    """Maximal subuniverses of M_j x M_k inside the carrier preimage of <=."""
    preimage = preimage_sublattice(w1, w2, n)
    family = []
    for pairs in _subuniverse_pairs(n, w1.sort, w2.sort):
        if pairs <= preimage:
            family.append(pairs)
    maximal = [rel for rel in family
               if not any(rel < other for other in family)]
    maximal.sort(key=sorted)
    names = tuple(name_relation(rel, w1.sort, w2.sort, n) for rel in maximal)
    order = sorted(range(len(names)), key=lambda i: names[i])
    return PiggybackRelationSet(w1, w2,
                                tuple(maximal[i] for i in order),
                                tuple(names[i] for i in order))


def expected_piggyback_names(w1: Carrier, w2: Carrier) -> tuple[str, ...]:
    """Schema of the published table, extended to every carrier pair."""
    j, k = w1.sort, w2.sort
    a, b = w1.kind, w2.kind
    if j == 0 and k == 0:
        return {("gamma", "gamma"): ("le0",), ("delta", "delta"): ("ge0",)}.get((a, b), ())
    if j == 0 and k >= 1:
        return {("gamma", "delta"): (f"Sle0_{k}",),
                ("delta", "delta"): (f"Sge0_{k}",)}.get((a, b), ())
    if j >= 1 and k == 0:
        return {("gamma", "gamma"): (f"Sle{j}_0",),
                ("gamma", "delta"): (f"Sge{j}_0",)}.get((a, b), ())
    if j == k:
        return {("gamma", "gamma"): (f"le{k}",),
                ("delta", "delta"): (f"ge{k}",),
                ("gamma", "delta"): (f"Sle{k}_{k}", f"Sge{k}_{k}")}.get((a, b), ())
    if j < k:
        return {("gamma", "gamma"): (f"le{j}_{k}",),
                ("gamma", "delta"): (f"Sle{j}_{k}", f"Sge{j}_{k}")}.get((a, b), ())
    return {("gamma", "delta"): (f"Sge{j}_{k}", f"Sle{j}_{k}"),
            ("delta", "delta"): (f"ge{j}_{k}",)}.get((a, b), ())


@dataclass
class Table3Row:
    omega1: str
    omega2: str
    names: tuple[str, ...]
    matches_schema: bool


def table3_report(n: int) -> list[Table3Row]:
    """Every carrier pair with its computed piggyback relations, checked per schema."""
    rows = []
    carriers = all_carriers(n)
    for w1 in carriers:
        for w2 in carriers:
            rel = piggyback_relations(w1, w2, n)
            expected = tuple(sorted(expected_piggyback_names(w1, w2)))
            rows.append(Table3Row(w1.name, w2.name, rel.names,
                                  tuple(sorted(rel.names)) == expected))
    return rows


def format_table3(rows: list[Table3Row]) -> str:
    width = max(len(",".join(r.names)) for r in rows) + 2
    out = [f"{'omega1':>8} {'omega2':>8}  relations"]
    for r in rows:
        cell = ",".join(r.names) if r.names else "-"
        flag = "" if r.matches_schema else "   << UNEXPECTED"
        out.append(f"{r.omega1:>8} {r.omega2:>8}  {cell:<{width}}{flag}")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------------
# the carrier space and the translation isomorphism


@dataclass
class CarrierSpace:
    algebra: FiniteAlgebra
    poset: Poset
    points: list[tuple[int, int, str]]   # (sort, hom index, carrier kind)
    dual: NaturalDual


class QuasiOrderNotAntisymmetric(ValueError):
    pass


def build_carrier_space(A: FiniteAlgebra, n: int | None = None,
                        generator_hints=()) -> CarrierSpace:
    """Hom-sets tagged by carriers, ordered by pointwise piggyback relations.

    Antisymmetry is asserted rather than quotiented: its failure would signal
    an implementation bug, not a mathematical possibility.
    """
    if n is None:
        n = A.signature.n
    dual_A = natural_dual(A, n, generator_hints=generator_hints)
    carriers = build_carriers(n)
    points = []
    for k in range(n + 1):
        for i in range(len(dual_A.homs[k])):
            for kind in ("gamma", "delta"):
                points.append((k, i, kind))
    rel_cache: dict[tuple[int, str, int, str], tuple[frozenset, ...]] = {}

    def rels(j, kindj, k, kindk):
        key = (j, kindj, k, kindk)
        if key not in rel_cache:
            w1 = carriers[j][0 if kindj == "gamma" else 1]
            w2 = carriers[k][0 if kindk == "gamma" else 1]
            rel_cache[key] = piggyback_relations(w1, w2, n).relations
        return rel_cache[key]

    m = len(points)
    mat = np.zeros((m, m), dtype=bool)
    size_A = A.size
    for p, (j, i1, kind1) in enumerate(points):
        x = dual_A.homs[j][i1]
        for q, (k, i2, kind2) in enumerate(points):
            y = dual_A.homs[k][i2]
            for rel in rels(j, kind1, k, kind2):
                if all((x[a], y[a]) in rel for a in range(size_A)):
                    mat[p, q] = True
                    break
    from .posets import check_relation
    res = check_relation(mat)
    if not res.ok:
        if res.kind == "antisymmetry":
            raise QuasiOrderNotAntisymmetric(f"witness {res.witness}")
        raise AssertionError(f"carrier-space relation fails {res.kind} at {res.witness}")
    names = [f"h{k}_{i}:{kind}" for k, i, kind in points]
    poset = Poset(names, mat, check=False)
    return CarrierSpace(A, poset, points, dual_A)


def verify_piggyback_iso(A: FiniteAlgebra, n: int | None = None,
                         generator_hints=()) -> bool:
    """Hat-to-delta relabelling is an order-iso, and the space matches H(A-flat)."""
    from .bridge import construct_P
    if n is None:
        n = A.signature.n
    space = build_carrier_space(A, n, generator_hints=generator_hints)
    doubled = construct_P(space.dual.structure)
    pos = {pt: i for i, pt in enumerate(space.points)}
    eta = []
    base_points = space.dual.structure.points()
    for k, i in base_points:
        eta.append(pos[(k, i, "gamma")])
    for k, i in base_points:
        eta.append(pos[(k, i, "delta")])
    if sorted(eta) != list(range(space.poset.n)):
        return False
    if not is_order_isomorphism(tuple(eta), doubled.poset, space.poset):
        return False
    H = priestley_dual_of_lattice(lattice_reduct(A))
    witness = are_isomorphic(H, space.poset)
    return witness is not None and is_order_isomorphism(witness, H, space.poset)
