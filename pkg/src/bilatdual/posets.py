"""Finite posets: validation, combinators, down-set counting, isomorphism, DOT export.

Every finite poset is treated as a Priestley space with the discrete topology,
so "clopen up-set" means "up-set" throughout the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .algebra import GuardExceeded

DEFAULT_COUNT_BUDGET = 10**8
DEFAULT_ISO_GUARD = 64


@dataclass(frozen=True)
class PosetCheck:
    ok: bool
    kind: str | None = None   # "reflexivity" | "antisymmetry" | "transitivity"
    witness: tuple | None = None


def bool_compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean matrix product; routed through BLAS for matrices past ~64 rows."""
    if a.shape[0] <= 64:
        return a @ b
    return (a.astype(np.float32) @ b.astype(np.float32)) > 0.5


def check_relation(rel) -> PosetCheck:
    """Decide whether a square boolean matrix is a partial order, with a named witness."""
    mat = np.asarray(rel, dtype=bool)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("relation must be a square matrix")
    n = mat.shape[0]
    for i in range(n):
        if not mat[i, i]:
            return PosetCheck(False, "reflexivity", (i,))
    both = mat & mat.T & ~np.eye(n, dtype=bool)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        return PosetCheck(False, "antisymmetry", (i, j))
    closure = bool_compose(mat, mat)
    bad = closure & ~mat
    if bad.any():
        i, k = map(int, np.argwhere(bad)[0])
        j = int(np.flatnonzero(mat[i] & mat[:, k])[0])
        return PosetCheck(False, "transitivity", (i, j, k))
    return PosetCheck(True)


class Poset:
    """Finite poset over named elements; `leq` is a read-only boolean matrix."""

    __slots__ = ("elements", "leq")

    def __init__(self, elements, leq, check: bool = True):
        self.elements = tuple(elements)
        mat = np.array(leq, dtype=bool)
        if mat.shape != (len(self.elements),) * 2:
            raise ValueError("leq matrix shape does not match the carrier")
        if check:
            res = check_relation(mat)
            if not res.ok:
                raise ValueError(f"not a partial order: {res.kind} fails at {res.witness}")
        mat.setflags(write=False)
        self.leq = mat

    @property
    def n(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        return self.elements.index(name)

    def le(self, i: int, j: int) -> bool:
        return bool(self.leq[i, j])

    def __eq__(self, other):
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and np.array_equal(self.leq, other.leq)

    def __repr__(self):
        return f"Poset({self.n} elements)"

    # -- masks and covers ---------------------------------------------------

    def up_masks(self) -> list[int]:
        return [int.from_bytes(np.packbits(self.leq[i], bitorder="little").tobytes(), "little")
                for i in range(self.n)]

    def down_masks(self) -> list[int]:
        t = self.leq.T
        return [int.from_bytes(np.packbits(t[i], bitorder="little").tobytes(), "little")
                for i in range(self.n)]

    def covers(self) -> list[tuple[int, int]]:
        """Pairs (i, j) with i covered by j."""
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        via = bool_compose(lt, lt)
        cov = lt & ~via
        return [(int(i), int(j)) for i, j in np.argwhere(cov)]

    def minimal_elements(self) -> list[int]:
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        return [i for i in range(self.n) if not lt[:, i].any()]

    def maximal_elements(self) -> list[int]:
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        return [i for i in range(self.n) if not lt[i].any()]

    def restrict(self, indices) -> "Poset":
        sel = np.asarray(sorted(indices), dtype=np.int64)
        return Poset([self.elements[i] for i in sel], self.leq[np.ix_(sel, sel)], check=False)

    # -- interchange --------------------------------------------------------

    def to_dict(self) -> dict:
        pairs = [[int(i), int(j)] for i, j in np.argwhere(self.leq)]
        return {"elements": list(self.elements), "leq_pairs": pairs}

    @classmethod
    def from_dict(cls, doc: dict) -> "Poset":
        names = doc["elements"]
        mat = np.zeros((len(names), len(names)), dtype=bool)
        for i, j in doc["leq_pairs"]:
            mat[i, j] = True
        return cls(names, mat)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Poset":
        return cls.from_dict(json.loads(text))

    def to_dot(self, name: str = "poset") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];",
                 "  edge [dir=none];"]
        for i, el in enumerate(self.elements):
            lines.append(f'  n{i} [label="{el}"];')
        for i, j in self.covers():
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------------
# constructions


def from_covers(elements, covers) -> Poset:
    names = tuple(elements)
    idx = {el: i for i, el in enumerate(names)}
    mat = np.eye(len(names), dtype=bool)
    for a, b in covers:
        mat[idx[a], idx[b]] = True
    for _ in range(len(names)):
        new = mat | (mat @ mat)
        if np.array_equal(new, mat):
            break
        mat = new
    return Poset(names, mat)


def chain(n: int, prefix: str = "c") -> Poset:
    mat = np.triu(np.ones((n, n), dtype=bool))
    return Poset([f"{prefix}{i}" for i in range(n)], mat, check=False)


def antichain(n: int, prefix: str = "a") -> Poset:
    return Poset([f"{prefix}{i}" for i in range(n)], np.eye(n, dtype=bool), check=False)


def dual(P: Poset) -> Poset:
    return Poset(P.elements, P.leq.T, check=False)


def disjoint_union(P: Poset, Q: Poset) -> Poset:
    n, m = P.n, Q.n
    mat = np.zeros((n + m, n + m), dtype=bool)
    mat[:n, :n] = P.leq
    mat[n:, n:] = Q.leq
    names = [f"L.{e}" for e in P.elements] + [f"R.{e}" for e in Q.elements]
    return Poset(names, mat, check=False)


def linear_sum(P: Poset, Q: Poset) -> Poset:
    """Everything in P below everything in Q."""
    n, m = P.n, Q.n
    mat = np.zeros((n + m, n + m), dtype=bool)
    mat[:n, :n] = P.leq
    mat[n:, n:] = Q.leq
    mat[:n, n:] = True
    names = [f"L.{e}" for e in P.elements] + [f"R.{e}" for e in Q.elements]
    return Poset(names, mat, check=False)


def direct_product(P: Poset, Q: Poset) -> Poset:
    names = [f"({a},{b})" for a in P.elements for b in Q.elements]
    mat = np.kron(P.leq, Q.leq)
    return Poset(names, mat, check=False)


def grid(a: int, b: int) -> Poset:
    return direct_product(chain(a, "r"), chain(b, "s"))


# ----------------------------------------------------------------------------
# down-sets


@dataclass
class DownSetFamily:
    base: Poset
    count: int
    enumeration: list[frozenset[int]] | None = None


def count_downsets(P: Poset, budget: int = DEFAULT_COUNT_BUDGET) -> int:
    """Exact number of down-sets, by branching on a minimal element with memoization.

    Branch: a down-set either misses x's up-set entirely, or contains x and is
    otherwise free on the rest. Memoized on the residual element mask; `budget`
    bounds the number of recursion nodes.
    """
    up = P.up_masks()
    sdown = [m & ~(1 << i) for i, m in enumerate(P.down_masks())]
    memo: dict[int, int] = {}
    nodes = 0

    def rec(mask: int) -> int:
        nonlocal nodes
        if mask == 0:
            return 1
        hit = memo.get(mask)
        if hit is not None:
            return hit
        nodes += 1
        if nodes > budget:
            raise GuardExceeded(f"down-set counting exceeded {budget} nodes")
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if sdown[i] & mask == 0:
                break
            m &= m - 1
        res = rec(mask & ~(1 << i)) + rec(mask & ~up[i])
        memo[mask] = res
        return res

    return rec((1 << P.n) - 1)


def enumerate_downsets(P: Poset, limit: int | None = None) -> list[int]:
    """All down-sets as bit masks, by the same include/exclude branching."""
    up = P.up_masks()
    sdown = [m & ~(1 << i) for i, m in enumerate(P.down_masks())]
    out: list[int] = []

    def rec(mask: int, acc: int):
        if mask == 0:
            out.append(acc)
            if limit is not None and len(out) > limit:
                raise GuardExceeded(f"down-set enumeration exceeded {limit} sets")
            return
        m = mask
        while m:
            low = m & -m
            i = low.bit_length() - 1
            if sdown[i] & mask == 0:
                break
            m &= m - 1
        rec(mask & ~(1 << i), acc | (1 << i))
        rec(mask & ~up[i], acc)

    rec((1 << P.n) - 1, 0)
    return out


def downset_family(P: Poset, enumerate_all: bool = False,
                   budget: int = DEFAULT_COUNT_BUDGET) -> DownSetFamily:
    count = count_downsets(P, budget=budget)
    enum = None
    if enumerate_all:
        masks = enumerate_downsets(P)
        enum = [frozenset(i for i in range(P.n) if m >> i & 1) for m in masks]
        if len(enum) != count:
            raise AssertionError("enumeration and count disagree")
    return DownSetFamily(P, count, enum)


def is_downset_mask(mask: int, down_masks) -> bool:
    m = mask
    while m:
        i = (m & -m).bit_length() - 1
        if down_masks[i] & ~mask:
            return False
        m &= m - 1
    return True


def count_downsets_bruteforce(P: Poset, max_points: int = 20) -> int:
    """2^n scan used as a test oracle on small posets."""
    if P.n > max_points:
        raise GuardExceeded(f"{P.n} points exceed the brute-force oracle bound")
    down = P.down_masks()
    return sum(1 for mask in range(1 << P.n) if is_downset_mask(mask, down))


# ----------------------------------------------------------------------------
# isomorphism


def _refine_labels(P: Poset) -> tuple[int, ...]:
    leq = P.leq
    n = P.n
    labels = [int(leq[i].sum()) * (n + 1) + int(leq[:, i].sum()) for i in range(n)]
    for _ in range(n):
        sigs = []
        for i in range(n):
            above = tuple(sorted(labels[j] for j in range(n) if leq[i, j] and i != j))
            below = tuple(sorted(labels[j] for j in range(n) if leq[j, i] and i != j))
            sigs.append((labels[i], above, below))
        canon = {s: k for k, s in enumerate(sorted(set(sigs)))}
        new = [canon[s] for s in sigs]
        if new == labels:
            break
        labels = new
    return tuple(labels)


def are_isomorphic(P: Poset, Q: Poset,
                   guard: int = DEFAULT_ISO_GUARD) -> tuple[int, ...] | None:
    """Order-isomorphism by invariant refinement plus backtracking.

    Returns a witness mapping (image index per element of P) or None. Gives up
    (GuardExceeded) past `guard` points when refinement leaves the candidate
    space above 10**6.
    """
    if P.n != Q.n or int(P.leq.sum()) != int(Q.leq.sum()):
        return None
    lp, lq = _refine_labels(P), _refine_labels(Q)
    if sorted(lp) != sorted(lq):
        return None
    cands = [[j for j in range(Q.n) if lq[j] == lp[i]] for i in range(P.n)]
    space = 1.0
    for c in cands:
        space *= len(c)
    if P.n > guard and space > 10**6:
        raise GuardExceeded(f"isomorphism search space too large for {P.n} points")
    order = sorted(range(P.n), key=lambda i: len(cands[i]))
    mapping = [-1] * P.n
    used = [False] * Q.n
    leqP, leqQ = P.leq, Q.leq

    def rec(pos: int) -> bool:
        if pos == P.n:
            return True
        i = order[pos]
        for j in cands[i]:
            if used[j]:
                continue
            ok = True
            for pp in order[:pos]:
                qq = mapping[pp]
                if leqP[i, pp] != leqQ[j, qq] or leqP[pp, i] != leqQ[qq, j]:
                    ok = False
                    break
            if ok:
                mapping[i] = j
                used[j] = True
                if rec(pos + 1):
                    return True
                mapping[i] = -1
                used[j] = False
        return False

    if rec(0):
        return tuple(mapping)
    return None


def is_order_isomorphism(mapping, P: Poset, Q: Poset) -> bool:
    """Verify a witness: bijective and order-preserving in both directions."""
    if sorted(mapping) != list(range(P.n)) or Q.n != P.n:
        return False
    m = np.asarray(mapping, dtype=np.int64)
    return bool(np.array_equal(P.leq, Q.leq[np.ix_(m, m)]))
