"""The eight acceptance criteria, one test each.

Every test prints a single PASS/FAIL line (also collected into the terminal
summary) with its timing against the allowed budget.
"""

import random
import time

from conftest import ACCEPTANCE_LINES
from helpers import mixed, random_aut, random_raw, twin_context
from linkmotion.catalog import htrivial, unlink
from linkmotion.fpauto import apply, check_fr_relations, compose, inner_aut, is_inner
from linkmotion.freeprod import FactorElement, FactorGroup, FreeProduct
from linkmotion.ltree import enumerate_trees, move_closure
from linkmotion.motion import R3, S3, MotionGroup
from linkmotion.presentation import evaluate, present
from oracles import brute_force_ltrees, naive_normalize


class Criterion:
    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget
        self.details: list[str] = []
        self.failures: list[str] = []

    def check(self, ok: bool, what: str):
        if not ok:
            self.failures.append(what)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"error: {exc!r}")
        if elapsed >= self.budget:
            self.failures.append(f"took {elapsed:.2f}s, budget {self.budget:.0f}s")
        verdict = "PASS" if not self.failures else "FAIL"
        extra = "; ".join(self.details + self.failures)
        line = f"criterion {self.number} [{self.title}]: {verdict} ({elapsed:.2f}s){' - ' + extra if extra else ''}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        if exc is None:
            assert not self.failures, line
        return False


def random_motion(M, rng, length=6):
    gens = M.generators()
    x = M.identity()
    for _ in range(rng.randint(0, length)):
        g = rng.choice(gens)
        x = M.multiply(x, g if rng.random() < 0.5 else M.inverse(g))
    return x


def test_criterion_1_fr_relations(seed):
    z3 = FreeProduct(tuple(FactorGroup.free([name]) for name in "abc"))
    h21 = htrivial(2, 1).product
    with Criterion(1, "FR relation suite", 5) as c:
        for label, P in (("Z*Z*Z", z3), ("H_{2,1}", h21)):
            report = check_fr_relations(P, trials=200, seed=seed)
            c.check(report.ok, f"{label}: {report.violations[:3]}")
            c.check(report.checked == {"1": 200, "2": 200, "3": 200}, f"{label}: counts {report.checked}")
        c.details.append("200 instantiations of each relation over both contexts")


def test_criterion_2_unlink_symmetric(rng):
    M = MotionGroup(unlink(3))
    P = M.product
    with Criterion(2, "unlink images are symmetric", 10) as c:
        for _ in range(300):
            aut = M.dahm(random_motion(M, rng, length=8))
            for i in range(P.n):
                syl = apply(aut, P.generator_word(i, 0)).syllables
                m = len(syl)
                core = syl[m // 2] if m % 2 else None
                palindromic = m % 2 == 1 and all(
                    syl[t].factor == syl[m - 1 - t].factor
                    and P.factors[syl[t].factor].inv(syl[t].payload) == syl[m - 1 - t].payload
                    for t in range(m // 2)
                )
                c.check(palindromic and core.payload in ((1,), (-1,)), f"image of a{i + 1}: {syl}")
        c.details.append("300 random elements of the U_3 motion group")


def test_criterion_3_semidirect_actions():
    M = MotionGroup(unlink(2))
    a1 = FactorElement(0, (1,))
    with Criterion(3, "semidirect actions", 1) as c:
        t = M.motion_generator(0, 0)
        lhs = M.multiply(M.multiply(t, M.chi(a1, 1)), M.inverse(t))
        c.check(M.equals(lhs, M.chi(FactorElement(0, (-1,)), 1)), "t chi(a,L2) t^-1 != chi(a^-1,L2)")
        s = M.transposition(0, 1)
        lhs = M.multiply(M.multiply(s, M.chi(a1, 1)), M.inverse(s))
        c.check(M.equals(lhs, M.chi(FactorElement(1, (1,)), 0)), "(1 2) chi(a1,L2) (1 2) != chi(a2,L1)")


def test_criterion_4_finiteness_dichotomy():
    with Criterion(4, "finiteness dichotomy", 60) as c:
        cases = [
            ("U r3", unlink(1), R3, ("Closed", 2)),
            ("H r3", htrivial(0, 1), R3, ("Closed", 8)),
            ("U+U r3", unlink(2), R3, ("ExceededBound", 10000)),
            ("U+U s3", unlink(2, "trivial"), S3, ("Closed", None)),
            ("H+H s3", htrivial(0, 2, "trivial"), S3, ("Closed", None)),
        ]
        for label, spec, mode, (status, order) in cases:
            r = MotionGroup(spec).finiteness_probe(mode, bound=10000)
            c.check(r.status == status and (order is None or r.order == order), f"{label}: {r}")
            c.details.append(f"{label}: {r}")


def test_criterion_5_inner_quotient(rng):
    M = MotionGroup(htrivial(2, 1, "trivial"))
    P = M.product
    with Criterion(5, "S^3 quotient by inner automorphisms", 10) as c:
        for _ in range(100):
            w = P.random_word(rng, max_syllables=6)
            x = M.iota(w)
            c.check(M.equals_in_s3(x, M.identity()), f"iota({w}) not S^3-trivial")
            witness = is_inner(M.dahm(x))
            c.check(witness is not None and witness.key() == w.key(), f"is_inner witness for {w}")
            c.check(M.dahm(x) == inner_aut(P, w), f"dahm(iota({w})) is not conjugation")
        c.details.append("100 random words over H_{2,1}")


def test_criterion_6_ltrees():
    with Criterion(6, "L-tree suite", 30) as c:
        c.check(len(enumerate_trees(1)) == 1, "enumerate(1) != 1")
        for n in (1, 2, 3, 4):
            c.check(all(t.vertex_count() <= 2 * n - 1 for t in enumerate_trees(n)), f"vertex bound, n={n}")
        c.check(len(enumerate_trees(2)) == 3, "enumerate(2) != 3")
        brute = len(brute_force_ltrees(3))
        c.check(len(enumerate_trees(3)) == brute, f"enumerate(3)={len(enumerate_trees(3))}, brute force {brute}")
        for n in (1, 2, 3):
            closure = [t.key for t in move_closure(n)]
            c.check(closure == [t.key for t in enumerate_trees(n)], f"move closure differs for n={n}")
        c.details.append(f"counts 1, 3, {brute}")


def test_criterion_7_presentation_soundness():
    with Criterion(7, "presentation soundness", 20) as c:
        for label, spec in (("U_3", unlink(3)), ("H_{2,1}", htrivial(2, 1))):
            M = MotionGroup(spec)
            pres = present(spec)
            bad = [str(r) for r in pres.relators if not M.equals(evaluate(r, M), M.identity())]
            c.check(not bad, f"{label}: nontrivial relators {bad[:3]}")
            c.details.append(f"{label}: {len(pres.relators)} relators")
        single = present(unlink(1))
        c.check(
            single.generators == ("G[1]:t",) and [str(r) for r in single.relators] == ["G[1]:t^2"],
            f"single unknot gives {single.to_text()!r}",
        )


def test_criterion_8_algebra_properties(seed):
    rng = random.Random(seed)
    with Criterion(8, "algebra property suites", 30) as c:
        P = mixed()
        for _ in range(500):
            raw = random_raw(P, rng)
            c.check(list(P.normalize(raw).key()) == naive_normalize(raw, P.factors), f"normal form of {raw}")
        for _ in range(300):
            u, v, w = (P.random_word(rng) for _ in range(3))
            c.check(((u * v) * w).key() == (u * (v * w)).key(), "word associativity")
            c.check((u * u.inverse()).syllables == (), "word inverse")
            c.check((u * P.identity()).key() == u.key(), "word identity")
        T = twin_context()
        gens = [T.generator_word(i, k) for i in range(T.n) for k in range(T.factors[i].rank)]
        for _ in range(100):
            f, g, h = (random_aut(T, rng, steps=3) for _ in range(3))
            lhs, rhs = compose(compose(f, g), h), compose(f, compose(g, h))
            c.check(all(apply(lhs, s).key() == apply(rhs, s).key() for s in gens), "automorphism associativity")
            c.check(compose(f, f.__class__(T, f.perm, f.factor_auts, f.conjugators)) == compose(f, f), "aut equality")
        M = MotionGroup(htrivial(2, 1))
        for _ in range(100):
            x, y, z = (random_motion(M, rng) for _ in range(3))
            c.check(M.equals(M.multiply(M.multiply(x, y), z), M.multiply(x, M.multiply(y, z))), "motion associativity")
            c.check(M.equals(M.multiply(x, M.inverse(x)), M.identity()), "motion inverse")
        for _ in range(300):
            x, y = random_motion(M, rng), random_motion(M, rng)
            xy = M.multiply(x, y)
            fresh = type(xy)(M, xy.fr, xy.g, xy.p)
            c.check(M.dahm(fresh) == compose(M.dahm(x), M.dahm(y)), "dahm homomorphism")
        c.details.append("500 normal forms, randomized triples, 300 dahm pairs")

