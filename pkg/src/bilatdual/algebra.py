"""Finite algebras with two lattice orders, an involution and indexed default constants.

Carriers are indexed finite sets; every operation is a dense table (numpy, read-only).
All values are immutable after construction, so everything here is safe to share
between threads; enumeration results are emitted in a canonical order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

BINARY_OPS = ("meet_k", "join_k", "meet_t", "join_t")

DEFAULT_PRODUCT_GUARD = 10**6
DEFAULT_TABLE_GUARD = 10**8
DEFAULT_SUBUNIVERSE_GUARD = 64
DEFAULT_HOM_ORACLE_GUARD = 10**7
DEFAULT_CLOSURE_GUARD = 200_000


class GuardExceeded(RuntimeError):
    """An operation was refused because its work estimate exceeds the configured guard."""


class SignatureMismatch(ValueError):
    pass


class NotALattice(ValueError):
    pass


@dataclass(frozen=True)
class SignatureN:
    """Signature for priority depth n: four binary ops, negation, and 2n+4 constants."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("priority depth n must be nonnegative")

    @property
    def constant_symbols(self) -> tuple[str, ...]:
        fs = tuple(f"f_{i}" for i in range(self.n + 1))
        ts = tuple(f"t_{i}" for i in range(self.n + 1))
        return ("bot", "top") + fs + ts

    @property
    def symbols(self) -> tuple[str, ...]:
        return BINARY_OPS + ("neg",) + self.constant_symbols

    def arity(self, symbol: str) -> int:
        if symbol in BINARY_OPS:
            return 2
        if symbol == "neg":
            return 1
        if symbol in self.constant_symbols:
            return 0
        raise KeyError(symbol)


def _as_table(values, size: int) -> np.ndarray:
    arr = np.asarray(values, dtype=np.int16)
    if arr.min(initial=0) < 0 or (arr.size and arr.max() >= size):
        raise ValueError("table entry out of carrier range")
    arr.setflags(write=False)
    return arr


class FiniteAlgebra:
    """A finite algebra in some SignatureN, given by dense operation tables."""

    __slots__ = ("signature", "elements", "tables", "neg", "consts", "_index")

    def __init__(self, signature: SignatureN, elements, tables, neg, consts):
        self.signature = signature
        self.elements = tuple(elements)
        n = len(self.elements)
        if len(set(self.elements)) != n:
            raise ValueError("element names must be distinct")
        self.tables = {}
        for op in BINARY_OPS:
            tab = _as_table(tables[op], n)
            if tab.shape != (n, n):
                raise ValueError(f"{op} table has wrong shape")
            self.tables[op] = tab
        self.neg = _as_table(neg, n)
        if self.neg.shape != (n,):
            raise ValueError("neg table has wrong shape")
        self.consts = dict(consts)
        for sym in signature.constant_symbols:
            if sym not in self.consts:
                raise ValueError(f"missing constant {sym}")
            if not 0 <= self.consts[sym] < n:
                raise ValueError(f"constant {sym} out of range")
        self._index = {name: i for i, name in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        return self._index[name]

    def const(self, symbol: str) -> int:
        return self.consts[symbol]

    def apply(self, op: str, *args: int) -> int:
        if op in BINARY_OPS:
            return int(self.tables[op][args[0], args[1]])
        if op == "neg":
            return int(self.neg[args[0]])
        return self.consts[op]

    def order_matrix(self, which: str) -> np.ndarray:
        """Partial order derived from a meet table: a <= b iff a meet b == a."""
        meet = self.tables["meet_k" if which == "k" else "meet_t"]
        leq = meet == np.arange(self.size, dtype=np.int16)[:, None]
        leq.setflags(write=False)
        return leq

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.elements == other.elements
            and self.consts == other.consts
            and np.array_equal(self.neg, other.neg)
            and all(np.array_equal(self.tables[op], other.tables[op]) for op in BINARY_OPS)
        )

    def __repr__(self):
        return f"FiniteAlgebra(n={self.signature.n}, size={self.size})"

    def to_dict(self) -> dict:
        return {
            "signature": {"n": self.signature.n},
            "elements": list(self.elements),
            "ops": {
                "meet_t": self.tables["meet_t"].tolist(),
                "join_t": self.tables["join_t"].tolist(),
                "meet_k": self.tables["meet_k"].tolist(),
                "join_k": self.tables["join_k"].tolist(),
                "neg": self.neg.tolist(),
                "consts": {sym: self.elements[i] for sym, i in sorted(self.consts.items())},
            },
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FiniteAlgebra":
        sig = SignatureN(int(doc["signature"]["n"]))
        elements = tuple(doc["elements"])
        index = {name: i for i, name in enumerate(elements)}
        ops = doc["ops"]
        consts = {sym: index[name] for sym, name in ops["consts"].items()}
        return cls(sig, elements, {op: ops[op] for op in BINARY_OPS}, ops["neg"], consts)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "FiniteAlgebra":
        return cls.from_dict(json.loads(text))


# ----------------------------------------------------------------------------
# order helpers


def _closure_of_covers(names, covers) -> np.ndarray:
    """Reflexive-transitive closure of a cover list given by element names."""
    n = len(names)
    idx = {name: i for i, name in enumerate(names)}
    leq = np.eye(n, dtype=bool)
    for a, b in covers:
        leq[idx[a], idx[b]] = True
    for _ in range(n):
        new = leq | (leq @ leq)
        if np.array_equal(new, leq):
            break
        leq = new
    return leq


def _lattice_tables_from_leq(leq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Meet and join tables of a finite lattice order; raises NotALattice if bounds fail."""
    n = leq.shape[0]
    down = [0] * n
    up = [0] * n
    for i in range(n):
        for j in range(n):
            if leq[j, i]:
                down[i] |= 1 << j
            if leq[i, j]:
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
                raise NotALattice(f"no meet/join for pair ({i}, {j})")
            meet[i, j] = lo
            join[i, j] = hi
    return meet, join


def _algebra_from_orders(sig, elements, k_leq, t_leq, neg_names, const_names) -> FiniteAlgebra:
    idx = {name: i for i, name in enumerate(elements)}
    meet_k, join_k = _lattice_tables_from_leq(k_leq)
    meet_t, join_t = _lattice_tables_from_leq(t_leq)
    neg = [idx[neg_names[name]] for name in elements]
    consts = {sym: idx[name] for sym, name in const_names.items()}
    tables = {"meet_k": meet_k, "join_k": join_k, "meet_t": meet_t, "join_t": join_t}
    return FiniteAlgebra(sig, elements, tables, neg, consts)


# ----------------------------------------------------------------------------
# the generating algebras


def build_jn(n: int) -> FiniteAlgebra:
    """The 2n+4 element bilattice with default constants graded by priority."""
    sig = SignatureN(n)
    fs = [f"f{i}" for i in range(n + 1)]
    ts = [f"t{i}" for i in range(n + 1)]
    elements = tuple(["bot"] + fs + ts + ["top"])
    k_covers = [("bot", fs[n]), ("bot", ts[n]), (fs[0], "top"), (ts[0], "top")]
    k_covers += [(fs[i + 1], fs[i]) for i in range(n)]
    k_covers += [(ts[i + 1], ts[i]) for i in range(n)]
    t_covers = [(fs[i], fs[i + 1]) for i in range(n)]
    t_covers += [(ts[i + 1], ts[i]) for i in range(n)]
    t_covers += [(fs[n], "top"), (fs[n], "bot"), ("top", ts[n]), ("bot", ts[n])]
    k_leq = _closure_of_covers(elements, k_covers)
    t_leq = _closure_of_covers(elements, t_covers)
    neg = {"bot": "bot", "top": "top"}
    neg.update({fs[i]: ts[i] for i in range(n + 1)})
    neg.update({ts[i]: fs[i] for i in range(n + 1)})
    consts = {"bot": "bot", "top": "top"}
    consts.update({f"f_{i}": fs[i] for i in range(n + 1)})
    consts.update({f"t_{i}": ts[i] for i in range(n + 1)})
    return _algebra_from_orders(sig, elements, k_leq, t_leq, neg, consts)


def build_mk(n: int, k: int) -> FiniteAlgebra:
    """The k-th generating algebra in SignatureN(n): 4 elements for k=0, 6 for k>=1.

    The constants below priority k collapse onto the inner pair; the rest land on
    the outer pair.
    """
    if not 0 <= k <= n:
        raise ValueError(f"sort index k={k} out of range [0, {n}]")
    sig = SignatureN(n)
    if k == 0:
        elements = ("bot0", "f0", "t0", "top0")
        k_covers = [("bot0", "f0"), ("bot0", "t0"), ("f0", "top0"), ("t0", "top0")]
        t_covers = [("f0", "top0"), ("f0", "bot0"), ("top0", "t0"), ("bot0", "t0")]
        neg = {"bot0": "bot0", "top0": "top0", "f0": "t0", "t0": "f0"}
        consts = {"bot": "bot0", "top": "top0"}
        for i in range(n + 1):
            consts[f"f_{i}"] = "f0"
            consts[f"t_{i}"] = "t0"
    else:
        b, f, z, t, o, tp = (f"bot{k}", f"f{k}", f"0{k}", f"t{k}", f"1{k}", f"top{k}")
        elements = (b, f, z, t, o, tp)
        k_covers = [(b, f), (b, t), (f, z), (t, o), (z, tp), (o, tp)]
        t_covers = [(z, f), (f, tp), (f, b), (tp, t), (b, t), (t, o)]
        neg = {b: b, tp: tp, f: t, t: f, z: o, o: z}
        consts = {"bot": b, "top": tp}
        for i in range(n + 1):
            consts[f"f_{i}"] = z if i < k else f
            consts[f"t_{i}"] = o if i < k else t
    k_leq = _closure_of_covers(elements, k_covers)
    t_leq = _closure_of_covers(elements, t_covers)
    return _algebra_from_orders(sig, elements, k_leq, t_leq, neg, consts)


@lru_cache(maxsize=None)
def mk_algebras(n: int) -> tuple[FiniteAlgebra, ...]:
    """The generating algebras M_0..M_n, cached since they are immutable."""
    return tuple(build_mk(n, k) for k in range(n + 1))


# ----------------------------------------------------------------------------
# homomorphisms


def is_homomorphism(mapping, A: FiniteAlgebra, B: FiniteAlgebra) -> bool:
    """Exhaustively check that the map preserves every operation and constant."""
    if A.signature != B.signature:
        raise SignatureMismatch("source and target must share a signature")
    h = np.asarray(mapping, dtype=np.int16)
    if h.shape != (A.size,) or h.min() < 0 or h.max() >= B.size:
        return False
    for sym, ia in A.consts.items():
        if h[ia] != B.consts[sym]:
            return False
    if not np.array_equal(h[A.neg], B.neg[h]):
        return False
    for op in BINARY_OPS:
        if not np.array_equal(h[A.tables[op]], B.tables[op][h[:, None], h[None, :]]):
            return False
    return True


class _Closure:
    """Incremental closure of a subset of A under all operations, one rule per element."""

    def __init__(self, A: FiniteAlgebra):
        self.A = A
        self.known = np.zeros(A.size, dtype=bool)
        self.order: list[int] = []
        self.rules: dict[int, tuple] = {}

    def add_seed(self, x: int):
        if not self.known[x]:
            self.known[x] = True
            self.order.append(x)
            self.rules[x] = ("seed",)

    def saturate(self):
        A = self.A
        while True:
            grew = False
            kidx = np.flatnonzero(self.known)
            for op in BINARY_OPS:
                sub = A.tables[op][np.ix_(kidx, kidx)]
                vals, first = np.unique(sub, return_index=True)
                for v, pos in zip(vals.tolist(), first.tolist()):
                    if not self.known[v]:
                        i, j = divmod(pos, len(kidx))
                        self.known[v] = True
                        self.order.append(v)
                        self.rules[v] = ("bin", op, int(kidx[i]), int(kidx[j]))
                        grew = True
            negs = A.neg[kidx]
            for src, v in zip(kidx.tolist(), negs.tolist()):
                if not self.known[v]:
                    self.known[v] = True
                    self.order.append(v)
                    self.rules[v] = ("neg", src)
                    grew = True
            if not grew:
                return

    def members(self) -> list[int]:
        return sorted(np.flatnonzero(self.known).tolist())


def closure_indices(A: FiniteAlgebra, generators) -> list[int]:
    """Least subuniverse containing the generators and all constants, as sorted indices."""
    cl = _Closure(A)
    for sym in A.signature.constant_symbols:
        cl.add_seed(A.consts[sym])
    for x in generators:
        cl.add_seed(int(x))
    cl.saturate()
    return cl.members()


def enumerate_homs(A: FiniteAlgebra, B: FiniteAlgebra,
                   generator_hints=()) -> list[tuple[int, ...]]:
    """All homomorphisms A -> B, lexicographically sorted as image tuples.

    Constants pin their images first; a greedy generating sequence with recorded
    derivations turns each assignment of generator images into a full candidate,
    which is then verified exhaustively. `generator_hints` are tried as seeds
    first, which keeps the search at |B|^g for callers that know a small
    generating set (the result does not depend on the hints).
    """
    if A.signature != B.signature:
        raise SignatureMismatch("source and target must share a signature")
    forced: dict[int, int] = {}
    for sym, ia in A.consts.items():
        ib = B.consts[sym]
        if forced.setdefault(ia, ib) != ib:
            return []
    cl = _Closure(A)
    for ia in sorted(forced):
        cl.add_seed(ia)
    cl.saturate()
    gens: list[int] = []
    for g in generator_hints:
        if not cl.known[g]:
            gens.append(int(g))
            cl.add_seed(int(g))
            cl.saturate()
    while len(cl.order) < A.size:
        g = int(np.flatnonzero(~cl.known)[0])
        gens.append(g)
        cl.add_seed(g)
        cl.saturate()
    results = []
    for assignment in itertools.product(range(B.size), repeat=len(gens)):
        h = np.full(A.size, -1, dtype=np.int16)
        for ia, ib in forced.items():
            h[ia] = ib
        for g, b in zip(gens, assignment):
            h[g] = b
        for v in cl.order:
            rule = cl.rules[v]
            if rule[0] == "bin":
                _, op, i, j = rule
                h[v] = B.tables[op][h[i], h[j]]
            elif rule[0] == "neg":
                h[v] = B.neg[h[rule[1]]]
        if is_homomorphism(h, A, B):
            results.append(tuple(int(x) for x in h))
    results.sort()
    return results


@dataclass(frozen=True)
class Homomorphism:
    """A verified structure-preserving map between algebras of one signature."""

    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(int(v) for v in self.mapping))
        if not is_homomorphism(self.mapping, self.source, self.target):
            raise ValueError("map does not preserve the operations")

    def __call__(self, element: int) -> int:
        return self.mapping[element]

    def compose(self, inner: "Homomorphism") -> "Homomorphism":
        if inner.target is not self.source and inner.target != self.source:
            raise ValueError("composition types do not match")
        return Homomorphism(inner.source, self.target,
                            tuple(self.mapping[v] for v in inner.mapping))


def enumerate_hom_objects(A: FiniteAlgebra, B: FiniteAlgebra,
                          generator_hints=()) -> list[Homomorphism]:
    return [Homomorphism(A, B, h)
            for h in enumerate_homs(A, B, generator_hints=generator_hints)]


def enumerate_homs_bruteforce(A, B, guard: int = DEFAULT_HOM_ORACLE_GUARD):
    """Oracle-grade naive scanner over all |B|^|A| maps; refuses large instances."""
    if A.signature != B.signature:
        raise SignatureMismatch("source and target must share a signature")
    if B.size ** A.size > guard:
        raise GuardExceeded(f"{B.size}^{A.size} maps exceed the oracle guard {guard}")
    out = []
    for h in itertools.product(range(B.size), repeat=A.size):
        if is_homomorphism(h, A, B):
            out.append(h)
    out.sort()
    return out


# ----------------------------------------------------------------------------
# products and generated subalgebras


def product(algebras, max_size: int = DEFAULT_PRODUCT_GUARD,
            max_table: int = DEFAULT_TABLE_GUARD) -> FiniteAlgebra:
    """Eager direct product with tuple-indexed carrier (row-major)."""
    algebras = list(algebras)
    if not algebras:
        raise ValueError("product of an empty family is not supported")
    sig = algebras[0].signature
    if any(a.signature != sig for a in algebras):
        raise SignatureMismatch("all factors must share a signature")
    sizes = [a.size for a in algebras]
    total = 1
    for s in sizes:
        total *= s
    if total > max_size:
        raise GuardExceeded(f"product carrier {total} exceeds guard {max_size}")
    if total * total > max_table:
        raise GuardExceeded(
            f"product tables need {total * total} entries (> {max_table}); "
            "use generated_subalgebra_in_product for large ambients")
    digits = []
    rem = np.arange(total, dtype=np.int64)
    for s in reversed(sizes):
        digits.append((rem % s).astype(np.int16))
        rem //= s
    digits.reverse()
    elements = []
    for ix in range(total):
        parts = [algebras[f].elements[int(digits[f][ix])] for f in range(len(algebras))]
        elements.append("(" + ",".join(parts) + ")")
    weights = [1] * len(sizes)
    for f in range(len(sizes) - 2, -1, -1):
        weights[f] = weights[f + 1] * sizes[f + 1]
    tables = {}
    for op in BINARY_OPS:
        acc = np.zeros((total, total), dtype=np.int64)
        for f, a in enumerate(algebras):
            d = digits[f]
            acc += weights[f] * a.tables[op][d[:, None], d[None, :]].astype(np.int64)
        tables[op] = acc.astype(np.int16)
    neg = np.zeros(total, dtype=np.int64)
    for f, a in enumerate(algebras):
        neg += weights[f] * a.neg[digits[f]].astype(np.int64)
    consts = {}
    for sym in sig.constant_symbols:
        ix = 0
        for f, a in enumerate(algebras):
            ix += weights[f] * a.consts[sym]
        consts[sym] = ix
    return FiniteAlgebra(sig, elements, tables, neg.astype(np.int16), consts)


@dataclass
class Subalgebra:
    """A generated subalgebra together with its embedding into the ambient algebra."""

    algebra: FiniteAlgebra
    ambient: FiniteAlgebra
    embedding: tuple[int, ...]


def generated_subalgebra(A: FiniteAlgebra, generators) -> Subalgebra:
    """Closure of generators (plus all constants) inside a materialized algebra."""
    members = closure_indices(A, generators)
    pos = {m: i for i, m in enumerate(members)}
    sel = np.array(members, dtype=np.int64)
    inv = np.full(A.size, -1, dtype=np.int16)
    inv[sel] = np.arange(len(members), dtype=np.int16)
    tables = {op: inv[A.tables[op][np.ix_(sel, sel)]] for op in BINARY_OPS}
    neg = inv[A.neg[sel]]
    consts = {sym: pos[i] for sym, i in A.consts.items()}
    elements = tuple(A.elements[m] for m in members)
    sub = FiniteAlgebra(A.signature, elements, tables, neg, consts)
    return Subalgebra(sub, A, tuple(members))


@dataclass
class ProductSubalgebra:
    """Subalgebra of a (never materialized) direct product, as explicit tuples."""

    algebra: FiniteAlgebra
    factors: tuple[FiniteAlgebra, ...]
    rows: tuple[tuple[int, ...], ...]
    generator_indices: tuple[int, ...]


def _pack_rows(rows: np.ndarray, radices) -> np.ndarray:
    packed = np.zeros(rows.shape[0], dtype=np.int64)
    for c, r in enumerate(radices):
        packed = packed * r + rows[:, c]
    return packed


def _unpack_keys(keys: np.ndarray, radices) -> np.ndarray:
    rows = np.empty((keys.shape[0], len(radices)), dtype=np.int16)
    rem = keys.copy()
    for c in range(len(radices) - 1, -1, -1):
        rows[:, c] = rem % radices[c]
        rem //= radices[c]
    return rows


def generated_subalgebra_in_product(factors, generator_rows,
                                    max_elements: int = DEFAULT_CLOSURE_GUARD) -> ProductSubalgebra:
    """Close generator tuples (plus the constant tuples) under pointwise operations.

    The ambient product is never materialized; only reachable tuples are kept.
    Coordinates are packed into int64 keys, so prod(sizes) must stay below 2**62.
    """
    factors = tuple(factors)
    sig = factors[0].signature
    if any(f.signature != sig for f in factors):
        raise SignatureMismatch("all factors must share a signature")
    radices = [f.size for f in factors]
    room = 1
    for r in radices:
        room *= r
    if room >= 2**62:
        raise GuardExceeded("product coordinate space too large to pack into int64 keys")
    m = len(factors)
    seed = [tuple(int(v) for v in row) for row in generator_rows]
    for sym in sig.constant_symbols:
        seed.append(tuple(f.consts[sym] for f in factors))
    rows = np.array(sorted(set(seed)), dtype=np.int16)
    known = np.unique(_pack_rows(rows, radices))
    frontier = rows
    while frontier.size:
        cand_keys = []
        for op in BINARY_OPS:
            acc = np.zeros((rows.shape[0], frontier.shape[0]), dtype=np.int64)
            for c in range(m):
                acc *= radices[c]
                acc += factors[c].tables[op][rows[:, c][:, None], frontier[:, c][None, :]]
            cand_keys.append(np.unique(acc.ravel()))
        negacc = np.zeros(frontier.shape[0], dtype=np.int64)
        for c in range(m):
            negacc *= radices[c]
            negacc += factors[c].neg[frontier[:, c]]
        cand_keys.append(negacc)
        cand = np.unique(np.concatenate(cand_keys))
        pos = np.searchsorted(known, cand)
        pos_c = np.minimum(pos, known.shape[0] - 1)
        fresh_keys = cand[(pos >= known.shape[0]) | (known[pos_c] != cand)]
        if fresh_keys.size == 0:
            break
        new_rows = _unpack_keys(fresh_keys, radices)
        known = np.union1d(known, fresh_keys)
        rows = np.concatenate([rows, new_rows], axis=0)
        if rows.shape[0] > max_elements:
            raise GuardExceeded(f"closure exceeded {max_elements} elements")
        frontier = new_rows
    order = np.argsort(_pack_rows(rows, radices))
    rows = rows[order]
    packed_sorted = _pack_rows(rows, radices)
    n = rows.shape[0]

    def lookup(packed_vals: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(packed_sorted, packed_vals)
        if pos.size and (pos.max() >= n or
                         not np.array_equal(packed_sorted[pos], packed_vals)):
            raise AssertionError("operation escaped the closed set")
        return pos.astype(np.int16)

    tables = {}
    for op in BINARY_OPS:
        packed = np.zeros((n, n), dtype=np.int64)
        for c in range(m):
            packed *= radices[c]
            packed += factors[c].tables[op][rows[:, c][:, None], rows[:, c][None, :]]
        tables[op] = lookup(packed.ravel()).reshape(n, n)
    negcols = np.stack([factors[c].neg[rows[:, c]] for c in range(m)], axis=-1)
    neg = lookup(_pack_rows(negcols, radices))
    consts = {}
    for sym in sig.constant_symbols:
        row = np.array([[f.consts[sym] for f in factors]], dtype=np.int16)
        consts[sym] = int(lookup(_pack_rows(row, radices))[0])
    elements = tuple(
        "(" + ",".join(factors[c].elements[int(rows[i, c])] for c in range(m)) + ")"
        for i in range(n))
    alg = FiniteAlgebra(sig, elements, tables, neg, consts)
    row_tuples = tuple(tuple(int(v) for v in row) for row in rows)
    gen_ix = []
    row_pos = {t: i for i, t in enumerate(row_tuples)}
    for g in generator_rows:
        gen_ix.append(row_pos[tuple(int(v) for v in g)])
    return ProductSubalgebra(alg, factors, row_tuples, tuple(gen_ix))


def free_algebra(n: int, max_elements: int = DEFAULT_CLOSURE_GUARD) -> ProductSubalgebra:
    """One-generated free algebra of the class generated by the M_k, built by closure.

    One coordinate per pair (k, a) with a in M_k; the generator picks out a in
    each coordinate, so distinct unary terms stay distinct.
    """
    mks = mk_algebras(n)
    factors = []
    gen = []
    for k in range(n + 1):
        for a in range(mks[k].size):
            factors.append(mks[k])
            gen.append(a)
    return generated_subalgebra_in_product(factors, [tuple(gen)], max_elements=max_elements)


# ----------------------------------------------------------------------------
# subuniverse enumeration


@dataclass
class SubuniverseSet:
    """All subuniverses of a small algebra, with meet-irreducible members marked."""

    ambient: FiniteAlgebra
    members: tuple[frozenset[int], ...]
    meet_irreducible: tuple[bool, ...]

    def named(self, member: frozenset[int]) -> frozenset[str]:
        return frozenset(self.ambient.elements[i] for i in member)

    @property
    def meet_irreducibles(self) -> tuple[frozenset[int], ...]:
        return tuple(s for s, mi in zip(self.members, self.meet_irreducible) if mi)


def enumerate_subuniverses(A: FiniteAlgebra,
                           max_carrier: int = DEFAULT_SUBUNIVERSE_GUARD) -> SubuniverseSet:
    """Breadth-first closure expansion from the constant-generated subuniverse."""
    if A.size > max_carrier:
        raise GuardExceeded(f"carrier {A.size} exceeds subuniverse guard {max_carrier}")
    n = A.size
    tabs = [A.tables[op] for op in BINARY_OPS]

    def close(mask: int) -> int:
        todo = [i for i in range(n) if mask >> i & 1]
        while todo:
            x = todo.pop()
            v = int(A.neg[x])
            if not mask >> v & 1:
                mask |= 1 << v
                todo.append(v)
            for tab in tabs:
                for y in range(n):
                    if mask >> y & 1:
                        for v in (int(tab[x, y]), int(tab[y, x])):
                            if not mask >> v & 1:
                                mask |= 1 << v
                                todo.append(v)
        return mask

    seed_mask = 0
    for i in A.consts.values():
        seed_mask |= 1 << i
    seed = close(seed_mask)
    family = {seed}
    queue = [seed]
    while queue:
        s = queue.pop()
        for x in range(n):
            if not s >> x & 1:
                t = close(s | (1 << x))
                if t not in family:
                    family.add(t)
                    queue.append(t)
    masks = sorted(family, key=lambda mk: (bin(mk).count("1"), mk))
    members = tuple(frozenset(i for i in range(n) if mk >> i & 1) for mk in masks)
    full = (1 << n) - 1
    flags = []
    for mk in masks:
        inter = full
        for other in masks:
            if other != mk and (other & mk) == mk:
                inter &= other
        flags.append(inter != mk)
    return SubuniverseSet(A, members, tuple(flags))


# ----------------------------------------------------------------------------
# structural checks


def bilattice_law_violations(A: FiniteAlgebra, max_size: int = 512) -> list[str]:
    """Violations of the two-lattice-plus-involution laws; empty list means all hold.

    Associativity is checked over all triples, so the carrier is guarded.
    """
    if A.size > max_size:
        raise GuardExceeded(f"carrier {A.size} exceeds law-check guard {max_size}")
    out = []
    rng = np.arange(A.size, dtype=np.int16)
    diag = np.broadcast_to(rng[:, None], (A.size, A.size))
    for which, meet_name, join_name in (("k", "meet_k", "join_k"), ("t", "meet_t", "join_t")):
        meet, join = A.tables[meet_name], A.tables[join_name]
        if not (np.array_equal(meet, meet.T) and np.array_equal(join, join.T)):
            out.append(f"{which}: commutativity")
        if not (np.array_equal(meet[rng, rng], rng) and np.array_equal(join[rng, rng], rng)):
            out.append(f"{which}: idempotence")
        if not np.array_equal(meet[rng[:, None], join], diag):
            out.append(f"{which}: absorption meet(a, join(a,b)) = a")
        if not np.array_equal(join[rng[:, None], meet], diag):
            out.append(f"{which}: absorption join(a, meet(a,b)) = a")
        for tab, label in ((meet, "meet"), (join, "join")):
            lhs = tab[tab[:, :, None], rng[None, None, :]]
            rhs = tab[rng[:, None, None], tab[None, :, :]]
            if not np.array_equal(lhs, rhs):
                out.append(f"{which}: associativity of {label}")
    if not np.array_equal(A.neg[A.neg], rng):
        out.append("neg: not an involution")
    km, kj = A.tables["meet_k"], A.tables["join_k"]
    tm, tj = A.tables["meet_t"], A.tables["join_t"]
    if not np.array_equal(A.neg[km], km[A.neg[:, None], A.neg[None, :]]):
        out.append("neg: does not preserve knowledge meet")
    if not np.array_equal(A.neg[kj], kj[A.neg[:, None], A.neg[None, :]]):
        out.append("neg: does not preserve knowledge join")
    if not np.array_equal(A.neg[tm], tj[A.neg[:, None], A.neg[None, :]]):
        out.append("neg: does not swap truth meet with truth join")
    if not np.array_equal(A.neg[tj], tm[A.neg[:, None], A.neg[None, :]]):
        out.append("neg: does not swap truth join with truth meet")
    return out


def algebras_isomorphic(A: FiniteAlgebra, B: FiniteAlgebra,
                        include_constants: bool = True) -> tuple[int, ...] | None:
    """Backtracking isomorphism search; returns a witness bijection or None.

    With include_constants=False only the five operation tables are compared,
    so algebras over different priority depths can be matched as bilattices.
    """
    if A.size != B.size:
        return None
    if include_constants and A.signature != B.signature:
        return None
    n = A.size
    forced: dict[int, int] = {}
    if include_constants:
        for sym, ia in A.consts.items():
            ib = B.consts[sym]
            if forced.setdefault(ia, ib) != ib:
                return None

    def extend(h: dict[int, int], used: set[int]) -> tuple[int, ...] | None:
        if len(h) == n:
            hm = [h[i] for i in range(n)]
            return tuple(hm) if _reduct_hom_ok(hm, A, B) else None
        x = min(i for i in range(n) if i not in h)
        for y in range(n):
            if y in used:
                continue
            h[x] = y
            used.add(y)
            if _partial_ok(h, A, B):
                res = extend(h, used)
                if res is not None:
                    return res
            del h[x]
            used.discard(y)
        return None

    def _partial_ok(h, A, B):
        for op in BINARY_OPS:
            ta, tb = A.tables[op], B.tables[op]
            for i in h:
                for j in h:
                    v = int(ta[i, j])
                    if v in h and h[v] != int(tb[h[i], h[j]]):
                        return False
        for i in h:
            v = int(A.neg[i])
            if v in h and h[v] != int(B.neg[h[i]]):
                return False
        return True

    def _reduct_hom_ok(hm, A, B):
        h = np.asarray(hm, dtype=np.int16)
        if not np.array_equal(h[A.neg], B.neg[h]):
            return False
        for op in BINARY_OPS:
            if not np.array_equal(h[A.tables[op]], B.tables[op][h[:, None], h[None, :]]):
                return False
        if include_constants:
            return all(h[ia] == B.consts[sym] for sym, ia in A.consts.items())
        return True

    return extend(dict(forced), set(forced.values()))


def lattice_reduct(A: FiniteAlgebra):
    """Bounded-distributive-lattice reduct: the truth order with bounds f_0 and t_0."""
    from .distlat import Lattice
    leq = A.order_matrix("t")
    L = Lattice(A.elements, leq, check=False)
    if L.bot != A.consts["f_0"] or L.top != A.consts["t_0"]:
        raise NotALattice("truth bounds do not match the f_0/t_0 constants")
    return L
