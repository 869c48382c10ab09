"""Single-sorted ranked spaces with a retraction, and the structure functors F and G.

F glues the sorts of a multi-sorted structure into one poset whose order is the
amalgam of the sort orders and cross relations, extends the g-maps by the
identity on sort 0, and ranks each point by its sort. G slices a ranked space
back into sorts. They are mutually inverse on the nose.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .multisorted import (AxiomReport, AxiomVerdict, MultiSortedStructure,
                          amalgamated_relation, check_axioms)
from .posets import Poset, check_relation


class StructureAxiomError(ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"structure fails axioms: {report.failing()}")


@dataclass
class RankedPriestleySpace:
    poset: Poset
    g: tuple[int, ...]
    rank: tuple[int, ...]
    n: int

    def __post_init__(self):
        self.g = tuple(int(v) for v in self.g)
        self.rank = tuple(int(v) for v in self.rank)
        if len(self.g) != self.poset.n or len(self.rank) != self.poset.n:
            raise ValueError("g and rank must be total")
        if any(not 0 <= r <= self.n for r in self.rank):
            raise ValueError("rank out of range")
        if any(not 0 <= v < self.poset.n for v in self.g):
            raise ValueError("g image out of range")

    def __eq__(self, other):
        if not isinstance(other, RankedPriestleySpace):
            return NotImplemented
        return (self.n == other.n and self.poset == other.poset
                and self.g == other.g and self.rank == other.rank)

    def to_dict(self) -> dict:
        doc = self.poset.to_dict()
        doc["n"] = self.n
        doc["rank"] = list(self.rank)
        # identity on the rank-0 block is implied and omitted
        doc["g"] = {str(i): int(v) for i, v in enumerate(self.g) if self.rank[i] != 0}
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "RankedPriestleySpace":
        poset = Poset.from_dict(doc)
        rank = [int(r) for r in doc["rank"]]
        g = [i if rank[i] == 0 else int(doc["g"][str(i)]) for i in range(poset.n)]
        return cls(poset, tuple(g), tuple(rank), int(doc["n"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "RankedPriestleySpace":
        return cls.from_dict(json.loads(text))

    def to_dot(self, name: str = "ranked") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
        for r in range(self.n + 1):
            block = [i for i in range(self.poset.n) if self.rank[i] == r]
            if block:
                inner = "; ".join(f"n{i}" for i in block)
                lines.append(f"  {{ rank=same; {inner}; }}")
        for i, el in enumerate(self.poset.elements):
            lines.append(f'  n{i} [label="{el}"];')
        for i, j in self.poset.covers():
            lines.append(f"  n{i} -> n{j} [dir=none];")
        for i, v in enumerate(self.g):
            if i != v:
                lines.append(f"  n{i} -> n{v} [style=dashed, arrowhead=vee, constraint=false];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def functor_F(X: MultiSortedStructure) -> RankedPriestleySpace:
    """Amalgamate the sorts; fails (with the report) if X does not satisfy the axioms."""
    report = check_axioms(X)
    if not report.ok:
        raise StructureAxiomError(report)
    rel, points = amalgamated_relation(X)
    pos = {pt: i for i, pt in enumerate(points)}
    names = [X.sorts[k][i] for k, i in points]
    poset = Poset(names, rel)
    g = []
    rank = []
    for k, i in points:
        rank.append(k)
        g.append(pos[(0, X.g[k - 1][i])] if k >= 1 else pos[(0, i)])
    return RankedPriestleySpace(poset, tuple(g), tuple(rank), X.n)


def functor_G(Y: RankedPriestleySpace) -> MultiSortedStructure:
    """Slice a ranked space back into sorts; fails unless the B-axioms hold."""
    report = check_axioms_B(Y)
    if not report.ok:
        raise StructureAxiomError(report)
    n = Y.n
    blocks = [[i for i in range(Y.poset.n) if Y.rank[i] == k] for k in range(n + 1)]
    local = {}
    for k, block in enumerate(blocks):
        for pos, i in enumerate(block):
            local[i] = (k, pos)
    sorts = tuple(tuple(Y.poset.elements[i] for i in block) for block in blocks)
    g = []
    for k in range(1, n + 1):
        g.append(tuple(local[Y.g[i]][1] for i in blocks[k]))
    rel_sort = []
    for k in range(n + 1):
        pairs = set()
        for a in blocks[k]:
            for b in blocks[k]:
                if Y.poset.leq[a, b]:
                    pairs.add((local[a][1], local[b][1]))
        rel_sort.append(frozenset(pairs))
    cross = {}
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            pairs = set()
            for a in blocks[j]:
                for b in blocks[k]:
                    if Y.poset.leq[a, b]:
                        pairs.add((local[a][1], local[b][1]))
            cross[(j, k)] = frozenset(pairs)
    return MultiSortedStructure(n, sorts, tuple(g), tuple(rel_sort), cross)


def check_axioms_B(Y: RankedPriestleySpace) -> AxiomReport:
    """B1-B6 plus the first-order partition restatement of order-preserving rank.

    B3 applies to comparabilities leaving the retract: x <= y with rank(x) >= 1
    forces g(x) = g(y); inside the rank-0 block g is the identity and the order
    is unconstrained.
    """
    verdicts: dict[str, AxiomVerdict] = {}
    leq = Y.poset.leq
    m = Y.poset.n
    res = check_relation(leq)
    verdicts["B1"] = AxiomVerdict(res.ok, None if res.ok else (res.kind, res.witness), 1)

    w = None
    for i in range(m):
        if Y.g[Y.g[i]] != Y.g[i]:
            w = (i,)
            break
    verdicts["B2"] = AxiomVerdict(w is None, w, m)

    w = None
    count = 0
    for i in range(m):
        if Y.rank[i] == 0:
            continue
        for j in range(m):
            if leq[i, j] and i != j:
                count += 1
                if Y.g[i] != Y.g[j] and w is None:
                    w = (i, j)
    verdicts["B3"] = AxiomVerdict(w is None, w, count)

    image = {Y.g[i] for i in range(m)}
    comp = leq | leq.T
    seen = [False] * m
    w = None
    for start in range(m):
        if seen[start]:
            continue
        stack = [start]
        component = []
        while stack:
            v = stack.pop()
            if seen[v]:
                continue
            seen[v] = True
            component.append(v)
            stack.extend(int(u) for u in np.flatnonzero(comp[v]) if not seen[u])
        inside = [v in image for v in component]
        if any(inside) and not all(inside) and w is None:
            w = tuple(component)
    verdicts["B4"] = AxiomVerdict(w is None, w, m)

    w = None
    count = 0
    for i in range(m):
        for j in range(m):
            if leq[i, j]:
                count += 1
                if Y.rank[i] > Y.rank[j] and w is None:
                    w = (i, j)
    verdicts["B5"] = AxiomVerdict(w is None, w, count)

    zeros = {i for i in range(m) if Y.rank[i] == 0}
    holds = image == zeros
    verdicts["B6"] = AxiomVerdict(holds, None if holds else (tuple(sorted(image ^ zeros)),), m)

    # partition restatement: x in Y_k and x <= y imply rank(y) >= k
    w = None
    count = 0
    for i in range(m):
        for j in range(m):
            if leq[i, j]:
                count += 1
                if Y.rank[j] < Y.rank[i] and w is None:
                    w = (i, j)
    verdicts["B5_partition"] = AxiomVerdict(w is None, w, count)
    if verdicts["B5_partition"].holds != verdicts["B5"].holds:
        raise AssertionError("partition restatement disagrees with B5")
    return AxiomReport(verdicts)


def flat_map_of_multimorphism(phi) -> tuple[int, ...]:
    """A per-sort map as one map on the amalgamated carriers (sort-major layout)."""
    X, Y = phi.source, phi.target
    offs_y = [0]
    for k in range(Y.n + 1):
        offs_y.append(offs_y[-1] + len(Y.sorts[k]))
    flat = []
    for k in range(X.n + 1):
        for i in range(len(X.sorts[k])):
            flat.append(offs_y[k] + phi.maps[k][i])
    return tuple(flat)


def is_ranked_morphism(flat_map, Y1: RankedPriestleySpace, Y2: RankedPriestleySpace) -> bool:
    """Order-, g- and rank-preserving map between ranked spaces."""
    if len(flat_map) != Y1.poset.n:
        return False
    if any(not 0 <= v < Y2.poset.n for v in flat_map):
        return False
    for i in range(Y1.poset.n):
        if Y1.rank[i] != Y2.rank[flat_map[i]]:
            return False
        if flat_map[Y1.g[i]] != Y2.g[flat_map[i]]:
            return False
    for i in range(Y1.poset.n):
        for j in range(Y1.poset.n):
            if Y1.poset.leq[i, j] and not Y2.poset.leq[flat_map[i], flat_map[j]]:
                return False
    return True
