"""Algebra construction, homomorphism enumeration, products, subuniverses."""

import random

import pytest

from bilatdual.algebra import (FiniteAlgebra, GuardExceeded, Homomorphism,
                               SignatureN, algebras_isomorphic,
                               bilattice_law_violations, build_jn, build_mk,
                               closure_indices, enumerate_hom_objects, enumerate_homs,
                               enumerate_homs_bruteforce, enumerate_subuniverses,
                               generated_subalgebra, is_homomorphism, lattice_reduct,
                               mk_algebras, product)


def test_signature_counts():
    sig = SignatureN(3)
    assert len(sig.constant_symbols) == 2 * 3 + 4
    assert sig.arity("meet_k") == 2
    assert sig.arity("neg") == 1
    assert sig.arity("f_2") == 0
    with pytest.raises(KeyError):
        sig.arity("nope")


def test_jn_basic_shape():
    j0 = build_jn(0)
    assert j0.size == 4
    for n in (1, 2, 3):
        jn = build_jn(n)
        assert jn.size == 2 * n + 4
        assert bilattice_law_violations(jn) == []


def test_j2_sampled_values():
    j2 = build_jn(2)
    top, f1, t1 = j2.index("top"), j2.index("f1"), j2.index("t1")
    assert j2.apply("neg", top) == top
    assert j2.apply("neg", j2.index("bot")) == j2.index("bot")
    assert j2.apply("neg", f1) == t1
    # truth-order meet along the false chain
    assert j2.apply("meet_t", j2.index("f0"), f1) == j2.index("f0")
    # knowledge meet of opposite branches collapses to bottom
    assert j2.apply("meet_k", f1, t1) == j2.index("bot")
    assert j2.apply("join_k", f1, t1) == top


def test_jn_order_chains():
    jn = build_jn(3)
    k = jn.order_matrix("k")
    t = jn.order_matrix("t")
    # knowledge: f3 < f2 < f1 < f0, all between bot and top
    for i in range(3):
        assert k[jn.index(f"f{i+1}"), jn.index(f"f{i}")]
        assert not k[jn.index(f"f{i}"), jn.index(f"f{i+1}")]
    assert all(k[jn.index("bot"), e] for e in range(jn.size))
    # truth: f0 < f3 < top,bot < t3 < t0; top/bot incomparable
    assert t[jn.index("f0"), jn.index("f3")]
    assert t[jn.index("f3"), jn.index("top")]
    assert t[jn.index("bot"), jn.index("t3")]
    assert not t[jn.index("top"), jn.index("bot")]
    assert not t[jn.index("bot"), jn.index("top")]


def test_mk_constants():
    m = build_mk(3, 2)
    assert m.elements[m.const("f_1")] == "02"
    assert m.elements[m.const("f_2")] == "f2"
    assert m.elements[m.const("t_0")] == "12"
    assert m.elements[m.const("t_3")] == "t2"
    m0 = build_mk(3, 0)
    assert m0.elements[m0.const("t_3")] == "t0"
    assert m0.elements[m0.const("f_0")] == "f0"


def test_mk_truth_chain():
    m = build_mk(1, 1)
    t = m.order_matrix("t")
    chain = ["01", "f1", "t1", "11"]
    for lo, hi in zip(chain, chain[1:]):
        assert t[m.index(lo), m.index(hi)]
    assert not t[m.index("top1"), m.index("bot1")]
    assert not t[m.index("bot1"), m.index("top1")]


def test_mk_out_of_range():
    with pytest.raises(ValueError):
        build_mk(2, 3)
    with pytest.raises(ValueError):
        build_mk(2, -1)


def test_bilattice_laws_all_generators():
    for n in (0, 1, 2, 3):
        for k in range(n + 1):
            assert bilattice_law_violations(build_mk(n, k)) == []


def test_interchange_roundtrip():
    for alg in (build_jn(2), build_mk(2, 1)):
        doc = alg.to_json()
        assert FiniteAlgebra.from_json(doc) == alg
        assert FiniteAlgebra.from_json(doc).to_json() == doc


# -- homomorphisms ------------------------------------------------------------


def test_hom_m0_endos():
    m0 = build_mk(1, 0)
    assert enumerate_homs(m0, m0) == [tuple(range(4))]


def test_hom_swap_rejected():
    m0 = build_mk(1, 0)
    swap = list(range(4))
    f, t = m0.index("f0"), m0.index("t0")
    swap[f], swap[t] = t, f
    assert not is_homomorphism(swap, m0, m0)


def test_hom_mj_to_mk_empty_upward():
    for n, j, k in ((2, 1, 2), (3, 1, 2), (3, 2, 3)):
        assert enumerate_homs(build_mk(n, j), build_mk(n, k)) == []


def test_hom_mk_to_m0_is_the_collapse():
    for n, k in ((2, 1), (2, 2)):
        mk, m0 = build_mk(n, k), build_mk(n, 0)
        homs = enumerate_homs(mk, m0)
        assert len(homs) == 1
        h = homs[0]
        assert m0.elements[h[mk.index(f"f{k}")]] == "f0"
        assert m0.elements[h[mk.index(f"0{k}")]] == "f0"
        assert m0.elements[h[mk.index(f"t{k}")]] == "t0"
        assert m0.elements[h[mk.index(f"1{k}")]] == "t0"
        assert m0.elements[h[mk.index(f"top{k}")]] == "top0"
        assert m0.elements[h[mk.index(f"bot{k}")]] == "bot0"


def test_hom_backtracker_matches_bruteforce_oracle():
    cases = [(build_mk(2, 0), build_mk(2, 0)), (build_mk(2, 1), build_mk(2, 0)),
             (build_mk(2, 1), build_mk(2, 1)), (build_mk(2, 1), build_mk(2, 2)),
             (build_jn(1), build_mk(1, 1)), (build_jn(1), build_jn(1)),
             (build_mk(2, 0), build_mk(2, 2))]
    for A, B in cases:
        assert enumerate_homs(A, B) == enumerate_homs_bruteforce(A, B)


def test_every_enumerated_hom_passes_the_checker():
    j1 = build_jn(1)
    for k in (0, 1):
        for h in enumerate_homs(j1, build_mk(1, k)):
            assert is_homomorphism(h, j1, build_mk(1, k))


def test_hom_signature_mismatch():
    with pytest.raises(Exception):
        enumerate_homs(build_jn(1), build_jn(2))


# -- products and subalgebras -------------------------------------------------


def test_product_sizes_and_guard():
    m0, m1 = build_mk(1, 0), build_mk(1, 1)
    assert product([m0]).size == 4
    assert product([m0, m1]).size == 24
    with pytest.raises(GuardExceeded):
        product([m1] * 10)


def test_product_constants_are_diagonal():
    m1 = build_mk(1, 1)
    sq = product([m1, m1])
    const_elems = {sq.elements[i] for i in sq.consts.values()}
    assert const_elems == {f"({e},{e})" for e in m1.elements}


def test_constant_closure_is_everything_on_m0():
    m0 = build_mk(2, 0)
    sub = generated_subalgebra(m0, [])
    assert sub.algebra.size == 4
    assert sub.embedding == (0, 1, 2, 3)


def test_generated_subalgebra_idempotent_monotone():
    rng = random.Random(3)
    j1 = build_jn(1)
    sq = product([j1, j1])
    for _ in range(10):
        gens = rng.sample(range(sq.size), rng.randint(1, 3))
        sub = generated_subalgebra(sq, gens)
        again = generated_subalgebra(sq, sub.embedding)
        assert again.embedding == sub.embedding
        bigger = generated_subalgebra(sq, gens + [rng.randrange(sq.size)])
        assert set(sub.embedding) <= set(bigger.embedding)


def test_free_algebra_sizes(free1, free2):
    assert free1.algebra.size == 266
    assert free2.algebra.size == 1434


def test_free_algebra_hom_counts(free1):
    for k, expected in ((0, 4), (1, 6)):
        homs = enumerate_homs(free1.algebra, build_mk(1, k),
                              generator_hints=free1.generator_indices)
        assert len(homs) == expected


def test_subuniverse_families():
    m0, m1, m2 = mk_algebras(2)
    fam = enumerate_subuniverses(product([m0, m0]))
    assert len(fam.members) == 4
    assert sorted(len(s) for s in fam.members) == [4, 9, 9, 16]
    assert sorted(len(s) for s in fam.meet_irreducibles) == [9, 9]
    fam = enumerate_subuniverses(product([m1, m1]))
    assert len(fam.members) == 7
    assert sorted(len(s) for s in fam.meet_irreducibles) == [8, 8, 19, 19]
    fam = enumerate_subuniverses(product([m1, m2]))
    assert len(fam.members) == 5
    assert min(len(s) for s in fam.members) == 8
    fam = enumerate_subuniverses(product([m0, m1]))
    assert len(fam.members) == 4


def test_subuniverses_closed_and_intersection_closed():
    m1 = build_mk(1, 1)
    sq = product([m1, m1])
    fam = enumerate_subuniverses(sq)
    consts = set(sq.consts.values())
    members = [set(s) for s in fam.members]
    for s in members:
        assert consts <= s
        assert set(closure_indices(sq, s)) == s
    for a in members:
        for b in members:
            assert a & b in [set(m) for m in members]


def test_subuniverse_guard():
    with pytest.raises(GuardExceeded):
        enumerate_subuniverses(product([build_jn(1)] * 2), max_carrier=10)


def test_pairwise_noniso_generators_and_shared_reduct():
    for n in (1, 2):
        algs = mk_algebras(n)
        for i in range(n + 1):
            for j in range(i + 1, n + 1):
                assert algebras_isomorphic(algs[i], algs[j]) is None
        j1 = build_jn(1)
        for k in range(1, n + 1):
            assert algebras_isomorphic(algs[k], j1, include_constants=False) is not None
        assert algebras_isomorphic(algs[0], j1, include_constants=False) is None


def test_lattice_reduct_bounds():
    L = lattice_reduct(build_jn(0))
    assert L.n == 4
    assert L.elements[L.bot] == "f0"
    assert L.elements[L.top] == "t0"
    L = lattice_reduct(build_mk(1, 1))
    assert L.n == 6
    for n in (1, 2, 3):
        L = lattice_reduct(build_jn(n))
        assert L.elements[L.bot] == "f0"


def test_homomorphism_objects():
    j1, m1, m0 = build_jn(1), build_mk(1, 1), build_mk(1, 0)
    quotients = enumerate_hom_objects(j1, m1)
    assert len(quotients) == 1
    collapse = enumerate_hom_objects(m1, m0)[0]
    composed = collapse.compose(quotients[0])
    assert composed.mapping == enumerate_homs(j1, m0)[0]
    assert collapse(m1.index("01")) == m0.index("f0")
    with pytest.raises(ValueError):
        Homomorphism(m0, m0, (1, 0, 2, 3))
