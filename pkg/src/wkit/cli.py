"""Command-line front end: ``wk <command> [options]``.

Inputs are JSON files (see :mod:`wkit.formats`), named fixtures, or, when
neither is given, seeded random samples.  Every command prints a versioned
plain-text report; ``--out DIR`` also writes the report and any produced
complexes, maps or certificates into DIR.

Exit status: 0 when every check passes, 1 on a verification failure, 2 on
unreadable input.  Items the toolkit cannot decide over the given ring are
reported as "undecided"; they fail the run only with ``--strict``.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from . import formats
from .complex_core import (
    ChainMap,
    Cohomology,
    Complex,
    Undecided,
    VerificationError,
    cone,
    homotopy_witness,
    shift,
    weak_homotopy_witness,
)
from .exact_linalg import Matrix, Ring, RingError, parse_ring
from .fcat_verify import fcat7_suite, fcat7_three_by_three, fcat_suite
from .filtered import (
    MembershipError,
    c_functor,
    cone_alpha,
    gr,
    lift_object,
    lift_weight_decomposition,
    memberships,
    omega,
    omega_adjunction_check,
    sigma_truncate,
    stupid_filtration,
    strong_wc_via_fcat,
)
from .fixtures import get as get_fixture
from .homotopy_cat import (
    Obstruction,
    Splitting,
    certify_triangle,
    complete_3x3,
    cone_triangle,
    split_idempotent,
)
from .sampling import random_chain_map, random_complex
from .swindle_k0 import SplittingUnavailable, build_swindle, k0_of_complex, k0_relation, swindle_split_trace
from .weight_complex import enumerate_lifts_and_check, wc_standard, wc_standard_map
from .weights import (
    WeightWindow,
    membership,
    retract_witness,
    stupid_truncate,
    torsion_truncate,
    ws_axiom_suite,
)

REPORT_VERSION = 1


class InputError(Exception):
    """Bad command-line input; exit status 2."""


# ---------------------------------------------------------------------------
# reports

class Report:
    def __init__(self, command: str, ring: Ring, seed: int):
        self.command = command
        self.ring = ring
        self.seed = seed
        self.info = []          # (key, value)
        self.checks = []        # (name, "pass" | "fail" | "undecided")
        self.artifacts = {}     # file name -> value

    def add(self, key, value):
        self.info.append((key, value))

    def check(self, name: str, ok):
        status = ok if isinstance(ok, str) else ("pass" if ok else "fail")
        self.checks.append((name, status))

    def suite(self, rep):
        for name in sorted(rep.counts):
            p, f = rep.counts[name]
            self.check(f"{rep.name}/{name} ({p} passed, {f} failed)", f == 0)
        for x in rep.failures:
            self.add("failure", x)

    def status(self, strict: bool) -> str:
        st = {s for _, s in self.checks}
        if "fail" in st or (strict and "undecided" in st):
            return "fail"
        return "undecided" if "undecided" in st else "pass"

    def render(self, strict: bool) -> str:
        out = [f"wk-report {REPORT_VERSION}", f"toolkit: {__version__}", f"command: {self.command}",
               f"ring: {self.ring.descriptor}", f"seed: {self.seed}", f"status: {self.status(strict)}"]
        out += [f"{k}: {v}" for k, v in self.info]
        out += [f"check {name}: {s}" for name, s in self.checks]
        out += [f"artifact: {name}" for name in sorted(self.artifacts)]
        return "\n".join(out) + "\n"


def _ranks(X: Complex) -> str:
    return "{" + ", ".join(f"{n}: {r}" for n, r in sorted(X.ranks.items())) + "}"


# ---------------------------------------------------------------------------
# inputs

def _rng(args) -> random.Random:
    return random.Random(args.seed)


def _window(args, default=None):
    if args.window is None:
        return default
    try:
        W = WeightWindow.parse(args.window)
    except ValueError as e:
        raise InputError(str(e)) from None
    return W


def _read(args, expect):
    if args.input is None:
        return None
    try:
        v = formats.read(args.input, expect)
    except formats.ParseError as e:
        raise InputError(str(e)) from None
    _note_ring(args, v)
    return v


def _note_ring(args, value):
    """The report names the ring of the actual input."""
    ring = getattr(value, "ring", None)
    if ring is None and hasattr(value, "triangle"):
        ring = value.triangle.ring
    if ring is not None:
        args.report.ring = ring


def _complex(args, levels=None) -> Complex:
    X = _read(args, Complex)
    if X is not None:
        return X
    return random_complex(args.ring, _rng(args), args.lo, args.hi, args.max_rank, levels=levels)


def _map(args, filtered=False) -> ChainMap:
    f = _read(args, ChainMap)
    if f is not None:
        return f
    rng = _rng(args)
    lv = (args.level_lo, args.level_hi) if filtered else None
    X = random_complex(args.ring, rng, args.lo, args.hi, args.max_rank, levels=lv)
    Y = random_complex(args.ring, rng, args.lo, args.hi, args.max_rank, levels=lv)
    return random_chain_map(X, Y, rng, filtered=filtered)


def _second_map(args, f: ChainMap):
    if getattr(args, "other", None) is None:
        return None
    try:
        g = formats.read(args.other, ChainMap)
    except formats.ParseError as e:
        raise InputError(str(e)) from None
    if g.source != f.source or g.target != f.target:
        raise InputError("the two maps have different source or target")
    return g


def _n(args, default: int = 0) -> int:
    return default if args.n is None else args.n


def _fixture(args, **kw):
    try:
        d = get_fixture(args.fixture, **kw)
    except KeyError as e:
        raise InputError(str(e)) from None
    for v in d.values():
        _note_ring(args, v)
    return d


# ---------------------------------------------------------------------------
# commands

def cmd_cone(args, rep):
    f = _map(args)
    C, iota, pi = cone(f)
    rep.add("cone ranks", _ranks(C))
    rep.check("d^2 = 0", _d2(C))
    rep.artifacts["cone.json"] = C


def _d2(X: Complex) -> bool:
    try:
        X.check()
        return True
    except VerificationError:
        return False


def cmd_shift(args, rep):
    X = _complex(args)
    Y = shift(X, args.k)
    rep.add("k", args.k)
    rep.add("ranks", _ranks(Y))
    rep.check("d^2 = 0", _d2(Y))
    rep.artifacts["shift.json"] = Y


def cmd_homotopy(args, rep):
    f = _map(args)
    g = _second_map(args, f)
    h = homotopy_witness(f, g)
    rep.add("homotopic" if g is not None else "null-homotopic", "yes" if h is not None else "no witness")
    if h is not None:
        rep.check("witness replays", h.verify(f, g))
        rep.artifacts["homotopy.json"] = h


def cmd_weak_homotopy(args, rep):
    f = _map(args)
    g = _second_map(args, f)
    w = weak_homotopy_witness(f, g)
    rep.add("weakly homotopic" if g is not None else "weakly null-homotopic", "yes" if w is not None else "no witness")
    if w is not None:
        rep.check("witness replays", w.verify(f, g))


def cmd_certify_triangle(args, rep):
    if args.input is not None:
        try:
            value = formats.read(args.input)
        except formats.ParseError as e:
            raise InputError(str(e)) from None
        _note_ring(args, value)
        if isinstance(value, formats.TriangleCertificate):
            rep.add("mode", "replay")
            rep.check("certificate replays", value.verify())
            return
        if not isinstance(value, ChainMap):
            raise InputError("certify-triangle takes a certificate or a map")
        f = value
    else:
        f = _map(args)
    c = certify_triangle(cone_triangle(f))
    rep.add("mode", "cone triangle of the input map")
    rep.check("certificate found", c is not None)
    if c is not None:
        rep.check("certificate replays", c.verify())
        rep.artifacts["certificate.json"] = c


def cmd_3x3(args, rep):
    u = _map(args)
    Y = u.target
    I = ChainMap.identity(Y)
    d = complete_3x3(u, I, u, I)
    r = d.report()
    rep.add("square", "(u, id) over (u, id)")
    rep.check("objects d^2 = 0", r["objects_d2"])
    rep.check("rows are triangles", r["rows_certified"])
    rep.check("columns are triangles", r["cols_certified"])
    rep.check("eight commutative squares", r["commutative"] == 8)
    rep.check("one anti-commutative square", r["anticommutative"] == 1)


def cmd_split_idempotent(args, rep):
    if args.fixture:
        e = _fixture(args, ring=args.ring if args.ring_given else None)["e"]
    else:
        e = _read(args, ChainMap)
        if e is None:
            X = _complex(args)
            if X.ring.is_field:
                H, p, i, _ = Cohomology(X).equivalence()
                D = {n: Matrix.diag(X.ring, [1] + [0] * (H.rank(n) - 1)) for n in H.support}
                e = i @ ChainMap(H, H, D) @ p
            else:
                e = ChainMap.identity(X)
    try:
        res = split_idempotent(e, even_constraint=args.even)
    except ValueError as ex:
        raise InputError(str(ex)) from None
    if isinstance(res, Splitting):
        rep.add("image ranks", _ranks(res.Y))
        if res.note:
            rep.add("note", res.note)
        rep.check("splitting verifies", res.verify())
        rep.artifacts["image.json"] = res.Y
    elif isinstance(res, Obstruction):
        rep.add("obstruction", res.reason)
        rep.add("euler characteristic", res.euler_characteristic)
        rep.check("obstruction reported", True)
    else:
        rep.add("reason", res.reason)
        rep.check("splitting", "undecided")


def cmd_truncate(args, rep):
    X = _complex(args)
    D = stupid_truncate(X, _n(args))
    rep.add("n", _n(args))
    rep.add("w>=n+1 ranks", _ranks(D.wge))
    rep.add("w<=n ranks", _ranks(D.wle))
    rep.check("triangle certificate replays", D.verify())
    rep.artifacts["certificate.json"] = D.certificate


def cmd_membership(args, rep):
    X = _complex(args)
    W = _window(args, WeightWindow(None, 0))
    m = membership(X, W)
    rep.add("window", str(W))
    rep.add("answer", m.answer)
    rep.add("reason", m.reason)
    if m.answer == "undecided":
        rep.check("membership", "undecided")
    elif m.answer == "yes" and m.to_model is not None:
        ok = all(h.verify(*_pair(k, m)) for k, h in m.witnesses.items() if _pair(k, m))
        rep.check("witnesses replay", ok)


def _pair(key, m):
    if key == "id_ip":
        return (ChainMap.identity(m.to_model.source), m.from_model @ m.to_model)
    if key == "id_zero":
        return (ChainMap.identity(m.to_model.source),)
    return None


def cmd_retract(args, rep):
    X = _complex(args)
    W = _window(args, WeightWindow(X.lo, X.hi) if not X.is_zero() else WeightWindow(0, 0))
    if W.a is None or W.b is None:
        raise InputError("retract needs a finite window a:b")
    try:
        r = retract_witness(X, W.a, W.b)
    except (ValueError, Undecided) as e:
        rep.add("reason", str(e))
        rep.check("retract", "undecided" if isinstance(e, Undecided) else "fail")
        return
    rep.add("window", str(W))
    rep.add("truncation ranks", _ranks(r.T))
    rep.check("p∘i ≃ id replays", r.verify())


def cmd_torsion_truncate(args, rep):
    X = _complex(args)
    try:
        t = torsion_truncate(X, _n(args), args.side)
    except (ValueError, Undecided) as e:
        rep.add("reason", str(e))
        rep.check("truncation", "undecided")
        return
    rep.add("mode", t.mode)
    rep.add("c", t.c)
    rep.check("triangle certificate replays", t.verify())


def cmd_ws_suite(args, rep):
    rep.suite(ws_axiom_suite(args.ring, samples=args.samples, seed=args.seed))


def cmd_wc(args, rep):
    if args.input is not None:
        try:
            v = formats.read(args.input)
        except formats.ParseError as e:
            raise InputError(str(e)) from None
        _note_ring(args, v)
    else:
        v = _complex(args)
    if isinstance(v, ChainMap):
        g = wc_standard_map(v)
        rep.add("kind", "map")
        rep.check("chain map", _is_chain_map(g))
        rep.artifacts["wc.json"] = g
    elif isinstance(v, Complex):
        S = wc_standard(v)
        rep.add("kind", "complex")
        rep.add("ranks", _ranks(S))
        rep.check("d^2 = 0", _d2(S))
        rep.artifacts["wc.json"] = S
    else:
        raise InputError("wc takes a complex or a map")


def _is_chain_map(f: ChainMap) -> bool:
    try:
        f.check()
        return True
    except VerificationError:
        return False


def cmd_wc_lifts(args, rep):
    if args.fixture:
        d = _fixture(args)
        f, n = d["f"], d["n"]
    else:
        f, n = _map(args), _n(args)
    if not f.ring.is_finite:
        raise InputError("lift enumeration needs a finite ring")
    r = enumerate_lifts_and_check(f, n)
    rep.add("n", n)
    rep.add("lifts", len(r.lifts))
    for x, y in r.table():
        rep.add("lift (x, y)", f"({_entry(x)}, {_entry(y)})")
    rep.add("distinct candidates", len(r.candidates))
    for i, g in enumerate(r.candidates):
        rep.add(f"candidate {i}", "(" + ", ".join(f"{n}: {_entry(M.to_lists())}" for n, M in sorted(g.comps.items())) + ")")
    for (i, j), w in sorted(r.weak_pairs.items()):
        rep.add(f"pair {i},{j}", f"weak={'yes' if w else 'no'} homotopic={'yes' if r.homotopic_pairs[(i, j)] else 'no'}")
    rep.check("all pairs weakly homotopic", r.all_weakly_homotopic)
    rep.check("weak witnesses replay", r.witness_shape_ok)


def _entry(x):
    if not x:
        return "-"
    return x[0][0] if len(x) == 1 and len(x[0]) == 1 else x


def _filtered(args) -> Complex:
    X = _complex(args, levels=(args.level_lo, args.level_hi))
    if not X.is_filtered:
        raise InputError("this command needs a filtered complex (terms with levels)")
    return X


def cmd_gr(args, rep):
    X = _filtered(args)
    G = gr(X, _n(args))
    rep.add("level", _n(args))
    rep.add("ranks", _ranks(G))
    rep.check("d^2 = 0", _d2(G))
    rep.artifacts["gr.json"] = G


def cmd_sigma(args, rep):
    X = _filtered(args)
    st = sigma_truncate(X, _n(args))
    rep.add("n", _n(args))
    rep.add("levels >= n ranks", _ranks(st.ge))
    rep.add("levels < n ranks", _ranks(st.le))
    rep.check("filtered triangle certificate replays", st.verify())
    rep.artifacts["sigma_ge.json"] = st.ge
    rep.artifacts["sigma_le.json"] = st.le


def cmd_omega(args, rep):
    X = _filtered(args)
    rep.add("ranks", _ranks(omega(X)))
    if max((x for L in X.levels.values() for x in L), default=0) <= 0:
        for k, v in sorted(omega_adjunction_check(X).items()):
            rep.check(f"adjunction {k}", v)
    else:
        rep.add("adjunction", "skipped (levels above 0)")
    rep.artifacts["omega.json"] = omega(X)


def cmd_cfun(args, rep):
    X = _read(args, Complex)
    if X is None:
        X = stupid_filtration(_complex(args))
    elif not X.is_filtered:
        raise InputError("cfun needs a filtered complex (terms with levels)")
    if not X.ring.is_field:
        rep.check("c functor", "undecided")
        return
    m = memberships(X)
    rep.add("pure graded pieces", "yes" if m.in_Ts else "no")
    try:
        C = c_functor(X)
    except MembershipError as e:
        rep.add("reason", str(e))
        rep.check("c lands in the heart", False)
        return
    rep.add("ranks", _ranks(C))
    rep.check("d^2 = 0", _d2(C))
    rep.artifacts["c.json"] = C


def _window_tuple(args, X: Complex):
    W = _window(args)
    if W is None:
        return None
    if W.a is None or W.b is None:
        raise InputError("this command needs a finite window a:b")
    return (W.a, W.b)


def cmd_lift(args, rep):
    Y = _complex(args)
    if not Y.ring.is_field:
        rep.check("lift", "undecided")
        return
    r = lift_object(Y, _window_tuple(args, Y), args.strategy)
    rep.add("strategy", r.strategy)
    rep.add("window", f"{r.window[0]}:{r.window[1]}")
    rep.add("lift ranks", _ranks(r.lift))
    rep.check("lift verifies", r.verify())
    rep.artifacts["lift.json"] = r.lift


def cmd_cone_alpha(args, rep):
    m = _read(args, ChainMap)
    if m is None:
        g = _map(args)
        m = ChainMap(stupid_filtration(g.source), stupid_filtration(g.target), g.comps)
    if not m.ring.is_field:
        rep.check("cone-alpha", "undecided")
        return
    r = cone_alpha(m)
    rep.add("Q ranks", _ranks(r.Q))
    rep.check("Q has pure graded pieces", r.in_Ts)
    rep.check("triangle certificate", r.triangle_certificate is not None)
    rep.check("comparison squares commute", r.squares_commute)
    rep.check("comparison maps invertible", r.isos_invertible)
    if m.source == m.target and m == ChainMap.identity(m.source):
        rep.check("c(Q) ≃ 0 witness", r.null_witness is not None)


def cmd_strong_wc(args, rep):
    Y = _complex(args)
    if not Y.ring.is_field:
        rep.check("strong-wc", "undecided")
        return
    r = strong_wc_via_fcat(Y, _window_tuple(args, Y), args.strategy)
    rep.add("ranks", _ranks(r.complex))
    rep.check("homotopy equivalent to S(Y)", r.verify())


def cmd_fcat_suite(args, rep):
    rep.suite(fcat_suite(args.ring, samples=args.samples, seed=args.seed))


def cmd_fcat7(args, rep):
    if args.fixture:
        d = _fixture(args)
        r = fcat7_three_by_three(d["f"], d["n"])
        for line in r.lines():
            name, _, st = line.rpartition(": ")
            rep.check(name, st == "ok")
        return
    f = _read(args, ChainMap)
    if f is not None:
        for line in fcat7_three_by_three(f, _n(args)).lines():
            name, _, st = line.rpartition(": ")
            rep.check(name, st == "ok")
        return
    rep.suite(fcat7_suite(args.ring, samples=args.samples, seed=args.seed))


def _swindle_window(args, sw):
    W = _window(args)
    if W is None:
        return sw.default_window()
    if W.a is None or W.b is None:
        raise InputError("the swindle window must be finite")
    return (W.a, W.b)


def cmd_swindle(args, rep):
    X = _complex(args)
    sw = build_swindle(X, args.direction)
    a, b = _swindle_window(args, sw)
    rep.add("direction", args.direction)
    rep.add("window", f"{a}:{b}")
    rep.add("ranks", "{" + ", ".join(f"{p}: {sw.S.rank(p)}" for p in range(a, b + 1)) + "}")
    rep.check("S(X) = X + [2]S(X) on the window", sw.verify(a, b))
    rep.check("ranks match the closed form",
              all(sw.S.rank(p) == sw.S.closed_form_rank(p) for p in range(a, b + 1)))
    rep.artifacts["window.json"] = sw.S.window(a, b)


def cmd_k0(args, rep):
    X = _complex(args)
    if args.combined:
        r = k0_of_complex(X, _n(args))
    else:
        W = _window(args)
        win = None if W is None else (W.a, W.b)
        r = k0_relation(X, args.direction, win)
    ok = r.replay()
    rep.add("window", f"{r.window[0]}:{r.window[1]}")
    for line in r.lines():
        rep.add("step", line)
    for fl in r.failures:
        rep.add("failure", fl)
    rep.check("derivation replays", ok)


def cmd_swindle_split(args, rep):
    M = _complex(args)
    if not M.ring.is_field:
        rep.check("swindle-split", "undecided")
        return
    e = None
    if args.other is not None:
        try:
            e = formats.read(args.other, ChainMap)
        except formats.ParseError as ex:
            raise InputError(str(ex)) from None
    if e is None:
        H, p, i, _ = Cohomology(M).equivalence()
        D = {n: Matrix.diag(M.ring, [1] + [0] * (H.rank(n) - 1)) for n in H.support}
        e = i @ ChainMap(H, H, D) @ p
    W = _window(args)
    try:
        tr = swindle_split_trace(M, e, args.n, None if W is None else (W.a, W.b))
    except SplittingUnavailable as ex:
        rep.add("reason", str(ex))
        rep.check("splitting", "undecided")
        return
    except ValueError as ex:
        raise InputError(str(ex)) from None
    rep.add("n", tr.n)
    rep.add("window", f"{tr.window[0]}:{tr.window[1]}")
    rep.add("E ranks", _ranks(tr.E))
    rep.add("F ranks", _ranks(tr.F))
    for k, v in tr.steps.items():
        rep.check(k, v)


def cmd_suite(args, rep):
    """Everything, deterministically from the seed."""
    R = args.ring
    rep.suite(ws_axiom_suite(R, samples=args.samples, seed=args.seed))
    rep.suite(fcat_suite(R, samples=args.samples, seed=args.seed))
    rep.suite(fcat7_suite(R, samples=max(1, args.samples // 4), seed=args.seed))
    d = get_fixture("torsion-lifts")
    r = enumerate_lifts_and_check(d["f"], d["n"])
    rep.check("torsion lifts: four lifts", len(r.lifts) == 4)
    rep.check("torsion lifts: all pairs weakly homotopic", r.all_weakly_homotopic)
    rep.check("torsion lifts: (0,0) and (2,0) not homotopic", not all(r.homotopic_pairs.values()))
    d = get_fixture("rank-one-projector")
    rep.check("rank-one projector: splits with image of rank 1", split_idempotent(d["e"]).Y.total_rank == 1)
    rep.check("rank-one projector: obstruction", isinstance(split_idempotent(d["e"], even_constraint=True), Obstruction))
    rng = random.Random(args.seed)
    sw_ok = k0_ok = True
    for _ in range(max(1, args.samples // 10)):
        X = random_complex(R, rng, -2, 2, 2)
        sw = build_swindle(X)
        sw_ok = sw_ok and sw.verify(*sw.default_window())
        k0_ok = k0_ok and k0_relation(X).replay()
    rep.check("swindle isomorphism on windows", sw_ok)
    rep.check("k0 derivations replay", k0_ok)
    if R.is_field:
        wc_ok = wd_ok = ca_ok = True
        for _ in range(max(1, args.samples // 20)):
            Y = random_complex(R, rng, -1, 1, 2)
            wc_ok = wc_ok and strong_wc_via_fcat(Y).verify()
            g = random_chain_map(Y, random_complex(R, rng, -1, 1, 2), rng)
            ca_ok = ca_ok and cone_alpha(ChainMap(stupid_filtration(g.source), stupid_filtration(g.target), g.comps)).ok
            X = random_complex(R, rng, -1, 1, 2, levels=(0, 1))
            n = rng.randint(-1, 1)
            D = lift_weight_decomposition(X, n)
            wd_ok = wd_ok and D.verify() and all(D.bounds().values())
        rep.check("strong weight complex via filtered lifts", wc_ok)
        rep.check("lifted weight decompositions", wd_ok)
        rep.check("cone over alpha comparison", ca_ok)


COMMANDS = {
    "cone": (cmd_cone, "mapping cone of a map"),
    "shift": (cmd_shift, "shift a complex by k"),
    "homotopy": (cmd_homotopy, "search a null-homotopy, or a homotopy to --other"),
    "weak-homotopy": (cmd_weak_homotopy, "search a weak homotopy"),
    "certify-triangle": (cmd_certify_triangle, "replay a certificate, or certify the cone triangle of a map"),
    "3x3": (cmd_3x3, "complete a commutative square to a 3x3 diagram"),
    "split-idempotent": (cmd_split_idempotent, "split an idempotent up to homotopy"),
    "truncate": (cmd_truncate, "weight decomposition by stupid truncation at n"),
    "membership": (cmd_membership, "membership in the weight window"),
    "retract": (cmd_retract, "retract witness into a strict truncation"),
    "torsion-truncate": (cmd_torsion_truncate, "truncation for the torsion pairs"),
    "ws-suite": (cmd_ws_suite, "sampled weight structure axioms"),
    "wc": (cmd_wc, "weak weight complex of a complex or map"),
    "wc-lifts": (cmd_wc_lifts, "enumerate lifts and compare them up to weak homotopy"),
    "gr": (cmd_gr, "graded piece of a filtered complex"),
    "sigma": (cmd_sigma, "filtration truncation with its triangle"),
    "omega": (cmd_omega, "forget the filtration"),
    "cfun": (cmd_cfun, "the functor c"),
    "lift": (cmd_lift, "lift a complex to a filtered complex with pure graded pieces"),
    "cone-alpha": (cmd_cone_alpha, "the cone of alpha after m"),
    "strong-wc": (cmd_strong_wc, "strong weight complex through filtered lifts"),
    "fcat-suite": (cmd_fcat_suite, "sampled f-category axioms"),
    "fcat7": (cmd_fcat7, "the 3x3 axiom"),
    "swindle": (cmd_swindle, "the swindle S(X) on a window"),
    "k0": (cmd_k0, "Grothendieck group relations from the swindle"),
    "swindle-split": (cmd_swindle_split, "membership chain for a split idempotent"),
    "suite": (cmd_suite, "all sampled checks and fixtures"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", default=None, help="gf2, gf3, z4, z, q, ... (default gf2)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--strict", action="store_true", help="treat undecided items as failures")
    common.add_argument("--window", default=None, metavar="a:b")
    common.add_argument("--out", default=None, metavar="DIR", help="write the report and artifacts here")
    common.add_argument("--in", dest="input", default=None, metavar="FILE")
    common.add_argument("--other", default=None, metavar="FILE", help="second map (homotopy) or idempotent")
    common.add_argument("--fixture", default=None, help="torsion-lifts, rank-one-projector or level-square")
    common.add_argument("--samples", type=int, default=200)
    common.add_argument("-n", "--n", type=int, default=None)
    common.add_argument("-k", "--k", type=int, default=1)
    common.add_argument("--lo", type=int, default=-1, help="lowest degree of random samples")
    common.add_argument("--hi", type=int, default=1, help="highest degree of random samples")
    common.add_argument("--max-rank", type=int, default=2)
    common.add_argument("--level-lo", type=int, default=0)
    common.add_argument("--level-hi", type=int, default=1)
    common.add_argument("--side", choices=["kernel", "cokernel"], default="kernel")
    common.add_argument("--strategy", choices=["stupid", "inductive"], default="stupid")
    common.add_argument("--direction", choices=["down", "up"], default="down")
    common.add_argument("--even", action="store_true", help="require even-dimensional terms")
    common.add_argument("--combined", action="store_true", help="k0: split X at n and use both swindles")
    p = argparse.ArgumentParser(prog="wk", description="Exact checks for homotopy categories and weights.")
    p.add_argument("--version", action="version", version=f"wk {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=helptext)
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.ring_given = args.ring is not None
    try:
        args.ring = parse_ring(args.ring or "gf2")
    except RingError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    rep = Report(args.command, args.ring, args.seed)
    args.report = rep
    fn = COMMANDS[args.command][0]
    try:
        fn(args, rep)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (VerificationError, MembershipError) as e:
        rep.add("error", str(e))
        rep.check("verification", False)
    except Undecided as e:
        rep.add("reason", str(e))
        rep.check("decision", "undecided")
    text = rep.render(args.strict)
    stdout.write(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(text)
        for name, value in rep.artifacts.items():
            formats.write(value, out / name)
    return 1 if rep.status(args.strict) == "fail" else 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
