"""Seeded corpora: small algebras, multi-sorted structures, and sampled morphisms.

Everything is driven by an explicit random.Random seed so verification runs are
reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import (FiniteAlgebra, build_jn, generated_subalgebra, mk_algebras,
                      product)
from .multisorted import MultiSortedStructure, build_alter_ego, enumerate_multimorphisms


@dataclass
class CorpusAlgebra:
    label: str
    algebra: FiniteAlgebra
    generator_hints: tuple[int, ...] = ()


def seeded_subalgebras(n: int, count: int, seed: int) -> list[CorpusAlgebra]:
    """Seeded generated subalgebras of J_n squared (draws may repeat carriers)."""
    rng = random.Random(seed)
    jn = build_jn(n)
    square = product([jn, jn])
    out: list[CorpusAlgebra] = []
    for i in range(count):
        k = rng.choice((1, 1, 2))
        gens = tuple(sorted(rng.sample(range(square.size), k)))
        sub = generated_subalgebra(square, gens)
        hints = tuple(sub.embedding.index(g) for g in gens)
        out.append(CorpusAlgebra(f"sub(J{n}^2)#{i}", sub.algebra, hints))
    return out


def corpus_algebras(n: int, seed: int = 0, subalgebras: int = 5) -> list[CorpusAlgebra]:
    """The standard verification corpus at depth n."""
    out = [CorpusAlgebra(f"M{k}", alg) for k, alg in enumerate(mk_algebras(n))]
    out.append(CorpusAlgebra(f"J{n}", build_jn(n)))
    out.extend(seeded_subalgebras(n, subalgebras, seed))
    return out


def random_structure(n: int, rng: random.Random, max_sort: int = 3) -> MultiSortedStructure:
    """An arbitrary structure in the signature; most of these fail the axioms."""
    sizes = [rng.randint(1, max_sort)] + [rng.randint(0, max_sort) for _ in range(n)]
    sorts = tuple(tuple(f"s{k}e{i}" for i in range(sizes[k])) for k in range(n + 1))
    g = tuple(tuple(rng.randrange(sizes[0]) for _ in range(sizes[k]))
              for k in range(1, n + 1))
    rel_sort = []
    for k in range(n + 1):
        pairs = {(i, i) for i in range(sizes[k]) if rng.random() < 0.9}
        for a in range(sizes[k]):
            for b in range(sizes[k]):
                if a != b and rng.random() < 0.25:
                    pairs.add((a, b))
        rel_sort.append(frozenset(pairs))
    cross = {}
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            pairs = set()
            for a in range(sizes[j]):
                for b in range(sizes[k]):
                    if rng.random() < 0.3:
                        pairs.add((a, b))
            cross[(j, k)] = frozenset(pairs)
    return MultiSortedStructure(n, sorts, g, tuple(rel_sort), cross)


def member_substructure(n: int, rng: random.Random, power: int = 2,
                        max_sort: int = 3) -> MultiSortedStructure:
    """A closed substructure of the alter ego raised to a small power.

    Substructures only need closure under the g-operations; relations are
    induced pointwise, so the result always satisfies the axioms.
    """
    ego = build_alter_ego(n)
    chosen: list[set[tuple[int, ...]]] = []
    for k in range(n + 1):
        size = len(ego.sorts[k])
        points = set()
        for _ in range(rng.randint(0, max_sort)):
            points.add(tuple(rng.randrange(size) for _ in range(power)))
        chosen.append(points)
    for k in range(1, n + 1):
        gk = ego.g[k - 1]
        for p in chosen[k]:
            chosen[0].add(tuple(gk[v] for v in p))
    if not any(chosen):
        chosen[0].add(tuple(0 for _ in range(power)))
    points = [sorted(chosen[k]) for k in range(n + 1)]
    sorts = tuple(tuple(f"s{k}p" + "".join(map(str, p)) for p in points[k])
                  for k in range(n + 1))
    g = []
    for k in range(1, n + 1):
        gk = ego.g[k - 1]
        layer = []
        for p in points[k]:
            img = tuple(gk[v] for v in p)
            layer.append(points[0].index(img))
        g.append(tuple(layer))
    rel_sort = []
    for k in range(n + 1):
        rel = ego.rel_sort[k]
        pairs = set()
        for a, p in enumerate(points[k]):
            for b, q in enumerate(points[k]):
                if all((u, v) in rel for u, v in zip(p, q)):
                    pairs.add((a, b))
        rel_sort.append(frozenset(pairs))
    cross = {}
    for j in range(1, n + 1):
        for k in range(j + 1, n + 1):
            rel = ego.rel_cross[(j, k)]
            pairs = set()
            for a, p in enumerate(points[j]):
                for b, q in enumerate(points[k]):
                    if all((u, v) in rel for u, v in zip(p, q)):
                        pairs.add((a, b))
            cross[(j, k)] = frozenset(pairs)
    return MultiSortedStructure(n, sorts, tuple(g), tuple(rel_sort), cross)


def structure_corpus(n: int, count: int, seed: int, member_share: float = 0.5,
                     max_sort: int = 3) -> list[MultiSortedStructure]:
    """A mix of arbitrary structures and guaranteed members, seeded."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        if rng.random() < member_share:
            out.append(member_substructure(n, rng, max_sort=max_sort))
        else:
            out.append(random_structure(n, rng, max_sort=max_sort))
    return out


def sample_morphisms(structures, n: int, count: int, seed: int,
                     per_pair_cap: int = 200):
    """Sampled (source, target, morphism) triples between corpus structures."""
    from .algebra import GuardExceeded
    rng = random.Random(seed)
    ego = build_alter_ego(n)
    pool = []
    for X in structures:
        try:
            ms = enumerate_multimorphisms(X, ego, max_count=per_pair_cap)
        except GuardExceeded as err:
            ms = getattr(err, "partial", [])
        pool.extend((X, ego, phi) for phi in ms)
    rng.shuffle(pool)
    return pool[:count]
