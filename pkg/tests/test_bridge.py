"""The doubled space, its block structure, counting, and the reduct translation."""

import pytest

from bilatdual.algebra import build_jn, build_mk, lattice_reduct
from bilatdual.bridge import (construct_P, free_size_formula, partitioned_downset_count,
                              table_avoiding_expected, table_meeting_expected,
                              transport_morphism, verify_translation)
from bilatdual.corpus import corpus_algebras
from bilatdual.distlat import priestley_dual_of_lattice
from bilatdual.multisorted import (MultiMorphism, build_alter_ego,
                                   enumerate_multimorphisms, natural_dual)
from bilatdual.posets import (are_isomorphic, chain, count_downsets, direct_product,
                              disjoint_union, grid, is_order_isomorphism)


def test_doubled_space_size():
    for n in (1, 2, 3):
        sp = construct_P(build_alter_ego(n))
        assert sp.poset.n == 8 + 12 * n


def test_block_shapes():
    n = 3
    sp = construct_P(build_alter_ego(n))
    bottom, centre, top = sp.block_masks()
    P = sp.poset
    bot_poset = P.restrict([i for i in range(P.n) if bottom >> i & 1])
    expected = disjoint_union(disjoint_union(grid(2, n), chain(n)),
                              disjoint_union(chain(n), grid(2, n)))
    assert are_isomorphic(bot_poset, expected) is not None
    top_poset = P.restrict([i for i in range(P.n) if top >> i & 1])
    assert are_isomorphic(top_poset, expected) is not None
    centre_poset = P.restrict([i for i in range(P.n) if centre >> i & 1])
    assert count_downsets(centre_poset) == 36
    sq = direct_product(chain(2, "u"), chain(2, "v"))
    assert are_isomorphic(centre_poset, disjoint_union(sq, sq)) is not None


def test_min_top_block():
    n = 2
    sp = construct_P(build_alter_ego(n))
    _, _, top = sp.block_masks()
    P = sp.poset
    top_ix = [i for i in range(P.n) if top >> i & 1]
    sub = P.restrict(top_ix)
    mins = {sub.elements[i] for i in sub.minimal_elements()}
    assert mins == {f"^0{n}", f"^bot{n}", f"^top{n}", f"^1{n}"}


def test_hat_involution_is_an_anti_isomorphism():
    for n in (1, 2):
        sp = construct_P(build_alter_ego(n))
        P, m = sp.poset, sp.m
        for a in range(m):
            for b in range(m):
                assert P.leq[a, b] == P.leq[m + b, m + a]


def test_no_relations_between_plain_and_hatted_centre():
    sp = construct_P(build_alter_ego(1))
    P, m = sp.poset, sp.m
    rank = sp.base.rank
    for a in range(m):
        for b in range(m):
            if rank[a] == 0 and rank[b] == 0 and a != b:
                assert not P.leq[a, m + b]
                assert not P.leq[m + a, b]


def test_counts_match_formula_up_to_six():
    for n in range(1, 7):
        sp = construct_P(build_alter_ego(n))
        assert count_downsets(sp.poset) == free_size_formula(n).total


def test_formula_values():
    assert free_size_formula(1) == type(free_size_formula(1))(147, 119, 266)
    fs2 = free_size_formula(2)
    assert (fs2.avoiding_top, fs2.meeting_top, fs2.total) == (710, 724, 1434)
    for n in range(1, 51):
        fs = free_size_formula(n)
        assert fs.avoiding_top + fs.meeting_top == fs.total
    with pytest.raises(ValueError):
        free_size_formula(0)


def test_partitioned_tallies_match_tables():
    for n in (1, 2, 3, 4):
        pc = partitioned_downset_count(n)
        fs = free_size_formula(n)
        assert pc.avoiding_top == fs.avoiding_top
        assert pc.meeting_top == fs.meeting_top
        exp1, exp2 = table_avoiding_expected(n), table_meeting_expected(n)
        assert sum(exp1.values()) == fs.avoiding_top
        assert sum(exp2.values()) == fs.meeting_top
        for key, val in exp1.items():
            assert pc.by_centre.get(key, 0) == val, (n, sorted(key))
        for key, val in exp2.items():
            assert pc.by_min_top.get(key, 0) == val, (n, sorted(key))
        assert set(pc.by_centre) <= set(exp1)
        assert set(pc.by_min_top) <= set(exp2)


def test_specific_table_cells_n2():
    n = 2
    pc = partitioned_downset_count(n)
    assert pc.by_centre[frozenset()] == (n + 1) ** 4 * (n + 2) ** 2 // 4 == 324
    singles = [k for k, v in pc.by_centre.items() if v == 1]
    assert len(singles) == 20
    assert pc.by_min_top[frozenset({f"^top{n}", f"^bot{n}"})] == n * n == 4


def test_translation_on_corpus():
    for n in (1, 2):
        for item in corpus_algebras(n, seed=77, subalgebras=4):
            assert verify_translation(item.algebra, n,
                                      generator_hints=item.generator_hints), item.label


def test_translation_on_m0_two_antichain():
    H = priestley_dual_of_lattice(lattice_reduct(build_mk(1, 0)))
    d = natural_dual(build_mk(1, 0), 1)
    sp = construct_P(d.structure)
    assert sp.poset.n == 2
    assert H.n == 2
    assert are_isomorphic(H, sp.poset) is not None


def test_translation_free_algebra(free1):
    assert verify_translation(free1.algebra, 1,
                              generator_hints=free1.generator_indices)
    H = priestley_dual_of_lattice(lattice_reduct(free1.algebra))
    P = construct_P(build_alter_ego(1))
    assert H.n == 20 and P.poset.n == 20
    w = are_isomorphic(H, P.poset)
    assert w is not None and is_order_isomorphism(w, H, P.poset)


def test_transport_identity_and_composition():
    ego = build_alter_ego(1)
    dj = natural_dual(build_jn(1), 1)
    PX, PE = construct_P(dj.structure), construct_P(ego)
    morphs = enumerate_multimorphisms(dj.structure, ego)
    ident = MultiMorphism(ego, ego, tuple(tuple(range(len(s))) for s in ego.sorts))
    assert transport_morphism(ident, PE, PE) == tuple(range(PE.poset.n))
    endos = enumerate_multimorphisms(ego, ego, max_count=500)[:6]
    for phi in morphs:
        t_phi = transport_morphism(phi, PX, PE)
        for psi in endos:
            comp = MultiMorphism(dj.structure, ego, tuple(
                tuple(psi.maps[k][phi.maps[k][i]]
                      for i in range(len(dj.structure.sorts[k])))
                for k in range(2)))
            t_psi = transport_morphism(psi, PE, PE)
            assert transport_morphism(comp, PX, PE) == tuple(t_psi[v] for v in t_phi)


def test_constant_to_true_morphism_transports():
    ego = build_alter_ego(1)
    dj = natural_dual(build_jn(1), 1)
    m0, m1 = build_mk(1, 0), build_mk(1, 1)
    const = MultiMorphism(dj.structure, ego,
                          ((m0.index("t0"),), (m1.index("t1"),)))
    PX, PE = construct_P(dj.structure), construct_P(ego)
    transport_morphism(const, PX, PE)   # raises on failure
