"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line (collected again in the terminal
summary).  Time limits are pinned below.
"""
import itertools
import random
import time

from wkit.complex_core import ChainMap, Complex, homotopy_witness, weak_homotopy_witness
from wkit.exact_linalg import Matrix, Ring
from wkit.fcat_verify import fcat7_suite, fcat7_three_by_three, fcat_suite, theta_from_pattern
from wkit.filtered import cone_alpha, lift_weight_decomposition, stupid_filtration, strong_wc_via_fcat
from wkit.fixtures import level_square, rank_one_projector, torsion_lifts
from wkit.homotopy_cat import Obstruction, Splitting, split_idempotent
from wkit.sampling import random_chain_map, random_complex
from wkit.swindle_k0 import build_swindle, k0_of_complex, k0_relation
from wkit.weight_complex import enumerate_lifts_and_check, strong_wc_standard
from wkit.weights import ws_axiom_suite

GF2, GF3, Z4 = Ring.gf(2), Ring.gf(3), Ring.zmod(4)

LIFTS_SECONDS = 1.0
FCAT7_SECONDS = 30.0
STRONG_WC_SECONDS = 60.0
SUITE_SAMPLES = 200

RESULTS = []


def report(n, name, ok, detail=""):
    line = f"criterion {n} {name}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    RESULTS.append(line)
    print(line)
    return ok


def _candidate(r, x, y):
    """The weight complex candidate of the lift (x, y)."""
    out = [g for g in r.candidates
           if g[0] == Matrix.from_rows(Z4, [[x]]) and g[1] == Matrix.from_rows(Z4, [[y]])]
    return out[0] if len(out) == 1 else None


def test_1_torsion_lifts():
    t0 = time.perf_counter()
    d = torsion_lifts()
    r = enumerate_lifts_and_check(d["f"], d["n"])
    elapsed = time.perf_counter() - t0
    table = sorted((x[0][0], y[0][0]) for x, y in r.table())
    a, b = _candidate(r, 0, 0), _candidate(r, 2, 0)
    ok = (table == [(0, 0), (0, 2), (2, 0), (2, 2)]
          and len(r.weak_pairs) == 6 and r.all_weakly_homotopic and r.witness_shape_ok
          and a is not None and b is not None
          and weak_homotopy_witness(a, b) is not None
          and homotopy_witness(a, b) is None
          and elapsed < LIFTS_SECONDS)
    assert report(1, "four lifts, all weakly homotopic, (0,0) vs (2,0) not homotopic", ok, f"{elapsed:.3f}s")


def test_2_projector_obstruction():
    ok = True
    for ring in (GF2, GF3):
        d = rank_one_projector(ring)
        s = split_idempotent(d["e"])
        ok = ok and isinstance(s, Splitting) and s.verify() and s.Y.total_rank == 1
        o = split_idempotent(d["e"], even_constraint=True)
        ok = ok and isinstance(o, Obstruction) and o.euler_characteristic % 2 == 1
    assert report(2, "rank-one projector splits, even-constrained split is obstructed", ok)


def test_3_three_by_three():
    t0 = time.perf_counter()
    d = level_square()
    r = fcat7_three_by_three(d["f"], d["n"])
    ok = r.ok and r.diagram.theta.comps == theta_from_pattern(r.diagram, d["pattern"])
    samples = 0
    for ring in (GF2, Z4):
        rep = fcat7_suite(ring, samples=50, seed=11)
        ok = ok and rep.passed
        samples += 50
    elapsed = time.perf_counter() - t0
    ok = ok and samples <= 100 and elapsed < FCAT7_SECONDS
    assert report(3, "3x3 axiom on the fixture and 100 samples over gf2/z4", ok, f"{elapsed:.1f}s")


def test_4_strong_weight_complex():
    t0 = time.perf_counter()
    ok = True
    for seed in range(50):
        ring = GF2 if seed % 2 == 0 else GF3
        rng = random.Random(seed)
        Y = random_complex(ring, rng, -1, 2, 2)
        r = strong_wc_via_fcat(Y)
        ok = ok and r.to_standard.target == strong_wc_standard(Y) and r.verify()
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < STRONG_WC_SECONDS
    assert report(4, "strong weight complex through lifts ~ standard one, 50 seeds", ok, f"{elapsed:.1f}s")


def test_5_cone_over_alpha():
    ok = True
    rng = random.Random(5)
    for ring in (GF2, GF3):
        for _ in range(10):
            A = random_complex(ring, rng, -1, 1, 2)
            B = random_complex(ring, rng, -1, 1, 2)
            g = random_chain_map(A, B, rng)
            m = ChainMap(stupid_filtration(A), stupid_filtration(B), g.comps)
            ok = ok and cone_alpha(m).ok
            r = cone_alpha(ChainMap.identity(stupid_filtration(A)))
            ok = ok and r.ok and r.null_witness is not None
            ok = ok and r.null_witness.verify(ChainMap.identity(r.null_witness.source))
    assert report(5, "cone over alpha comparison, identity gives a null witness", ok)


def test_6_axiom_suites():
    ok = True
    details = []
    for ring in (GF2, GF3, Z4):
        for rep in (ws_axiom_suite(ring, samples=SUITE_SAMPLES, seed=1),
                    fcat_suite(ring, samples=SUITE_SAMPLES, seed=1)):
            ok = ok and rep.passed and all(sum(c) >= SUITE_SAMPLES for c in rep.counts.values())
            details += rep.failures
    assert report(6, f"weight structure and filtered axiom suites, {SUITE_SAMPLES} samples each", ok,
                  "; ".join(details[:3]))


def _gf2_complexes():
    for a in range(5):
        for b in range(5 - a):
            for bits in itertools.product((0, 1), repeat=a * b):
                ranks = {n: r for n, r in ((0, a), (1, b)) if r}
                diffs = {0: Matrix(GF2, b, a, list(bits))} if a and b else {}
                yield Complex(GF2, ranks, diffs)


def _boundaries(X, Y):
    """Every d h + h d, enumerated over all h: X^1 -> Y^0."""
    out = set()
    for bits in itertools.product((0, 1), repeat=Y.rank(0) * X.rank(1)):
        H = Matrix(GF2, Y.rank(0), X.rank(1), list(bits))
        f0, f1 = H @ X.d(0), Y.d(0) @ H
        out.add((f0.entries, f1.entries))
    return out


def _chain_maps(X, Y, rng):
    s0, s1 = (Y.rank(0), X.rank(0)), (Y.rank(1), X.rank(1))
    k = s0[0] * s0[1] + s1[0] * s1[1]
    if k > 8:
        return [random_chain_map(X, Y, rng) for _ in range(16)]
    maps = []
    for bits in itertools.product((0, 1), repeat=k):
        f0 = Matrix(GF2, *s0, list(bits[:s0[0] * s0[1]]))
        f1 = Matrix(GF2, *s1, list(bits[s0[0] * s0[1]:]))
        if Y.d(0) @ f0 != f1 @ X.d(0):
            continue
        maps.append(ChainMap(X, Y, {0: f0, 1: f1}))
    return maps


def test_7_homotopy_solver_against_enumeration():
    Xs = list(_gf2_complexes())
    rng = random.Random(7)
    instances = mismatches = 0
    for X in Xs:
        for Y in Xs:
            B = _boundaries(X, Y)
            for f in _chain_maps(X, Y, rng):
                w = homotopy_witness(f)
                found = w is not None and w.verify(f)
                expect = (f[0].entries, f[1].entries) in B
                instances += 1
                mismatches += found != expect
    ok = mismatches == 0 and len(Xs) == 51
    assert report(7, "homotopy solver agrees with enumeration on all small GF(2) complexes", ok,
                  f"{len(Xs)} complexes, {instances} maps, {mismatches} mismatches")


def test_8_swindle():
    ok = True
    for seed in range(50):
        ring = (GF2, GF3, Z4)[seed % 3]
        rng = random.Random(seed)
        X = random_complex(ring, rng, -2, 2, 2)
        sw = build_swindle(X)
        a, b = sw.default_window(10)
        ok = ok and b - a + 1 == 10 and sw.verify(a, b)
        for direction in ("down", "up"):
            r = k0_relation(X, direction)
            ok = ok and r.replay() and not r.failures
        ok = ok and k0_of_complex(X).replay()
    assert report(8, "swindle isomorphism on width-10 windows and class derivations, 50 seeds", ok)


def test_9_lifted_weight_decompositions():
    ok = True
    for seed in range(50):
        ring = GF2 if seed % 2 == 0 else GF3
        rng = random.Random(seed)
        X = random_complex(ring, rng, -1, 1, 2, levels=(0, 1))
        n = rng.randint(-1, 1)
        D = lift_weight_decomposition(X, n)
        ok = ok and D.verify() and all(D.bounds().values())
    assert report(9, "lifted weight decompositions meet the membership and omega bounds, 50 seeds", ok)
