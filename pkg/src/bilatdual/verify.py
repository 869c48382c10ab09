"""Named verification suites with deterministic, seed-controlled reports.

Each check is a thunk returning (ok, witness). Elapsed times are recorded but
left out of serialized output by default so identical invocations stay byte
identical.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .algebra import (GuardExceeded, build_jn, build_mk, enumerate_subuniverses,
                      free_algebra, mk_algebras, product)
from .bridge import (free_size_formula, partitioned_downset_count,
                     table_avoiding_expected, table_meeting_expected,
                     verify_translation)
from .corpus import corpus_algebras, sample_morphisms, seeded_subalgebras, structure_corpus
from .multisorted import (build_alter_ego, check_axioms, hom_algebra_E,
                          is_multimorphism, membership_by_separation, natural_dual,
                          verify_unit_iso)
from .piggyback import (build_carrier_space, check_sep, table3_report,
                        verify_piggyback_iso)
from .posets import count_downsets, grid
from .ranked import (check_axioms_B, flat_map_of_multimorphism, functor_F, functor_G,
                     is_ranked_morphism)

SUITES = ("duality", "axioms", "functors", "translation", "piggyback", "tables", "all")
DEFAULT_SEED = 20260809


@dataclass
class CheckRecord:
    id: str
    status: str               # "pass" | "fail" | "skip"
    witness: str | None = None
    elapsed: float = 0.0


@dataclass
class VerificationSuiteResult:
    suite: str
    n: int
    seed: int
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def overall(self) -> str:
        return "fail" if any(c.status == "fail" for c in self.checks) else "pass"

    def to_dict(self, timings: bool = False) -> dict:
        rows = []
        for c in self.checks:
            row = {"id": c.id, "status": c.status}
            if c.witness is not None:
                row["witness"] = c.witness
            if timings:
                row["elapsed"] = round(c.elapsed, 3)
            rows.append(row)
        return {"suite": self.suite, "n": self.n, "seed": self.seed,
                "overall": self.overall, "checks": rows}

    def format_text(self, timings: bool = False) -> str:
        lines = [f"suite {self.suite} (n={self.n}, seed={self.seed})"]
        for c in self.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[c.status]
            extra = f"  [{c.witness}]" if c.witness else ""
            stamp = f"  ({c.elapsed:.3f}s)" if timings else ""
            lines.append(f"  {mark}  {c.id}{extra}{stamp}")
        lines.append(f"overall: {self.overall}")
        return "\n".join(lines) + "\n"


class SuiteRunner:
    def __init__(self, suite: str, n: int, seed: int):
        self.result = VerificationSuiteResult(suite, n, seed)

    def check(self, check_id: str, thunk):
        t0 = time.perf_counter()
        try:
            out = thunk()
        except GuardExceeded as err:
            self.result.checks.append(
                CheckRecord(check_id, "skip", f"guard: {err}", time.perf_counter() - t0))
            return
        except Exception as err:   # noqa: BLE001 - verification must not abort the run
            self.result.checks.append(
                CheckRecord(check_id, "fail", f"{type(err).__name__}: {err}",
                            time.perf_counter() - t0))
            return
        ok, witness = out if isinstance(out, tuple) else (bool(out), None)
        status = "pass" if ok else "fail"
        self.result.checks.append(
            CheckRecord(check_id, status, None if ok else witness,
                        time.perf_counter() - t0))


# ----------------------------------------------------------------------------
# individual suites


def suite_duality(n: int, seed: int = DEFAULT_SEED) -> VerificationSuiteResult:
    r = SuiteRunner("duality", n, seed)
    for k in range(n + 1):
        r.check(f"unit-iso:M{k}", lambda k=k: verify_unit_iso(build_mk(n, k), n))
    r.check(f"unit-iso:J{n}", lambda: verify_unit_iso(build_jn(n), n))
    for item in seeded_subalgebras(n, 25, seed):
        r.check(f"unit-iso:{item.label}",
                lambda item=item: verify_unit_iso(item.algebra, n,
                                                  generator_hints=item.generator_hints))
    r.check("dual-sorts:M0",
            lambda: ([len(s) for s in natural_dual(build_mk(n, 0), n).structure.sorts]
                     == [1] + [0] * n, "unexpected sort sizes"))
    r.check("E-size:one-point",
            lambda: (_one_point_e_size(n) == 4, "E of the one-point structure is not M0-sized"))
    return r.result


def _one_point_e_size(n: int) -> int:
    from .multisorted import MultiSortedStructure
    one = MultiSortedStructure(
        n, (("p",),) + ((),) * n, ((),) * n,
        (frozenset({(0, 0)}),) + (frozenset(),) * n, {})
    return hom_algebra_E(one, n).algebra.size


def suite_axioms(n: int, seed: int = DEFAULT_SEED, count: int = 100) -> VerificationSuiteResult:
    r = SuiteRunner("axioms", n, seed)
    r.check("alter-ego-satisfies-axioms", lambda: check_axioms(build_alter_ego(n)).ok)
    if n == 1:
        def vacuous():
            rep = check_axioms(build_alter_ego(1))
            quiet = all(rep.verdicts[a].instances == 0 for a in ("A3", "A4", "A5", "A7"))
            return quiet, "cross-sort axioms not vacuous at n=1"
        r.check("n1-cross-axioms-vacuous", vacuous)
    structures = structure_corpus(n, count, seed)
    disagreements = []
    for i, X in enumerate(structures):
        ax = check_axioms(X).ok
        sep = membership_by_separation(X)
        if ax != sep:
            disagreements.append((i, ax, sep))
    r.check(f"axioms-vs-separation:{count}-structures",
            lambda: (not disagreements, f"disagreements at {disagreements[:3]}"))
    for item in corpus_algebras(n, seed, subalgebras=3):
        r.check(f"dual-satisfies-axioms:{item.label}",
                lambda item=item: check_axioms(
                    natural_dual(item.algebra, n,
                                 generator_hints=item.generator_hints).structure).ok)
    return r.result


def _structure_pool(n: int, seed: int):
    pool = [build_alter_ego(n)]
    for item in corpus_algebras(n, seed, subalgebras=3):
        pool.append(natural_dual(item.algebra, n,
                                 generator_hints=item.generator_hints).structure)
    pool.extend(X for X in structure_corpus(n, 30, seed) if check_axioms(X).ok)
    return pool


def suite_functors(n: int, seed: int = DEFAULT_SEED) -> VerificationSuiteResult:
    r = SuiteRunner("functors", n, seed)
    pool = _structure_pool(n, seed)
    for i, X in enumerate(pool):
        def roundtrip(X=X):
            Y = functor_F(X)
            if not check_axioms_B(Y).ok:
                return False, "F(X) fails the B axioms"
            if functor_G(Y) != X:
                return False, "G(F(X)) != X"
            if functor_F(functor_G(Y)) != Y:
                return False, "F(G(Y)) != Y"
            return True, None
        r.check(f"roundtrip:{i}", roundtrip)
    sampled = sample_morphisms(pool, n, 50, seed)
    ego = build_alter_ego(n)
    bad = []
    for idx, (X, Y, phi) in enumerate(sampled):
        FX, FY = functor_F(X), functor_F(Y)
        fwd = is_ranked_morphism(flat_map_of_multimorphism(phi), FX, FY)
        if not fwd:
            bad.append(("morphism-not-transported", idx))
        mutated = [list(m) for m in phi.maps]
        for k in range(n, -1, -1):
            if mutated[k]:
                mutated[k][0] = (mutated[k][0] + 1) % len(Y.sorts[k])
                break
        maps = tuple(tuple(m) for m in mutated)
        from .multisorted import MultiMorphism
        as_multi = is_multimorphism(maps, X, Y)
        as_ranked = is_ranked_morphism(
            flat_map_of_multimorphism(MultiMorphism(X, Y, maps)), FX, FY)
        if as_multi != as_ranked:
            bad.append(("transport-mismatch", idx))
    r.check("morphism-transport:50-samples",
            lambda: (not bad, f"failures {bad[:3]}"))
    return r.result


def suite_translation(n: int, seed: int = DEFAULT_SEED) -> VerificationSuiteResult:
    r = SuiteRunner("translation", n, seed)
    for item in corpus_algebras(n, seed):
        r.check(f"translation:{item.label}",
                lambda item=item: verify_translation(item.algebra, n,
                                                     generator_hints=item.generator_hints))
    if n <= 2:
        def free_case():
            F = free_algebra(n)
            return verify_translation(F.algebra, n, generator_hints=F.generator_indices)
        r.check(f"translation:F_V{n}(1)", free_case)
    return r.result


def suite_piggyback(n: int, seed: int = DEFAULT_SEED) -> VerificationSuiteResult:
    r = SuiteRunner("piggyback", n, seed)
    r.check("separation-condition", lambda: check_sep(n))
    for item in corpus_algebras(n, seed):
        def one(item=item):
            space = build_carrier_space(item.algebra, n,
                                        generator_hints=item.generator_hints)
            expected = sum(2 * len(space.dual.homs[k]) for k in range(n + 1))
            if space.poset.n != expected:
                return False, "carrier space has wrong size"
            return verify_piggyback_iso(item.algebra, n,
                                        generator_hints=item.generator_hints), "iso failed"
        r.check(f"carrier-space:{item.label}", one)
    return r.result


def suite_tables(n: int, seed: int = DEFAULT_SEED) -> VerificationSuiteResult:
    r = SuiteRunner("tables", n, seed)
    rows = table3_report(n)
    bad = [(row.omega1, row.omega2, row.names) for row in rows if not row.matches_schema]
    r.check(f"piggyback-table:{len(rows)}-pairs", lambda: (not bad, f"cells {bad[:3]}"))

    def meet_irreducibles():
        mks = mk_algebras(n)
        j, k = (1, 2) if n >= 2 else (1, 1)
        cases = [((0, 0), 4, {"le0", "ge0"}),
                 ((0, k), 4, {f"Sle0_{k}", f"Sge0_{k}"}),
                 ((k, k), 7, {f"le{k}", f"ge{k}", f"Sle{k}_{k}", f"Sge{k}_{k}"})]
        if n >= 2:
            cases.append(((j, k), 5, {f"le{j}_{k}", f"Sle{j}_{k}", f"Sge{j}_{k}"}))
        from .piggyback import name_relation
        for (a, b), size, expected in cases:
            fam = enumerate_subuniverses(product([mks[a], mks[b]]))
            if len(fam.members) != size:
                return False, f"Sub(M{a} x M{b}) has {len(fam.members)} members"
            got = set()
            for member, mi in zip(fam.members, fam.meet_irreducible):
                if mi:
                    pairs = frozenset(divmod(i, mks[b].size) for i in member)
                    got.add(name_relation(pairs, a, b, n))
            if got != expected:
                return False, f"meet-irreducibles of Sub(M{a} x M{b}) are {sorted(got)}"
        return True, None
    r.check("subuniverse-lattices", meet_irreducibles)

    def tallies():
        pc = partitioned_downset_count(n)
        fs = free_size_formula(n)
        if (pc.avoiding_top, pc.meeting_top) != (fs.avoiding_top, fs.meeting_top):
            return False, "top split does not match the closed forms"
        if n <= 4:
            exp1, exp2 = table_avoiding_expected(n), table_meeting_expected(n)
            for key, val in exp1.items():
                if pc.by_centre.get(key, 0) != val:
                    return False, f"centre cell {sorted(key)} tallies {pc.by_centre.get(key, 0)}"
            for key, val in exp2.items():
                if pc.by_min_top.get(key, 0) != val:
                    return False, f"top cell {sorted(key)} tallies {pc.by_min_top.get(key, 0)}"
        return True, None
    r.check("grouped-downset-tallies", tallies)

    def grid_counts():
        from .posets import enumerate_downsets
        for m in range(1, 51):
            expected = (m + 1) * (m + 2) // 2
            if m <= 12 and len(enumerate_downsets(grid(2, m))) != expected:
                return False, f"direct enumeration disagrees at {m}"
            if count_downsets(grid(2, m)) != expected:
                return False, f"memoized count disagrees at {m}"
        return True, None
    r.check("two-by-m-grid-counts", grid_counts)
    return r.result


def suite_all(n: int, seed: int = DEFAULT_SEED) -> VerificationSuiteResult:
    combined = VerificationSuiteResult("all", n, seed)
    for fn in (suite_duality, suite_axioms, suite_functors, suite_translation,
               suite_piggyback, suite_tables):
        part = fn(n, seed)
        for c in part.checks:
            combined.checks.append(CheckRecord(f"{part.suite}/{c.id}", c.status,
                                               c.witness, c.elapsed))
    return combined


def run_suite(suite: str, n: int, seed: int = DEFAULT_SEED) -> VerificationSuiteResult:
    table = {"duality": suite_duality, "axioms": suite_axioms, "functors": suite_functors,
             "translation": suite_translation, "piggyback": suite_piggyback,
             "tables": suite_tables, "all": suite_all}
    if suite not in table:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    if n < 1:
        raise ValueError("verification suites require n >= 1")
    return table[suite](n, seed)
