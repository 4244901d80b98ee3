"""Acceptance gate.  Each test prints one PASS/FAIL line for its criterion.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines appear
in the terminal even when output capture is on.
"""

import itertools
import math
import random
import time

import pytest

from bdvtps.cli import main as cli_main
from bdvtps.delegation import DelegationSig, Warrant, sign_warrant, verify_warrant
from bdvtps.dvverify import compute_y_star, final_equation, verify
from bdvtps.harness import (BAD_PARTIAL_SIG, BAD_PROXY_SUBSHARE, BAD_VSS_SUBSHARE, BAD_Y_SHARE,
                            FAULT_STAGE, SMALL_QUORUM, WRONG_VERIFIER_KEY, FaultSpec,
                            ProtocolConfig, ProtocolRun, confinement_audit, random_keypair)
from bdvtps.idkgc import extract, setup
from bdvtps.pairing import curve_suite, large_suite, tiny_suite
from bdvtps.thsign import aggregate, build_context, lagrange_at_zero, make_y_share, partial_sign
from bdvtps.vss import SubShare, combine_shares, deal, subshare, verify_subshare

from conftest import verifier_inputs

SHAPES = [(1, 1), (1, 3), (2, 3), (3, 5), (5, 7)]


@pytest.fixture
def report(request):
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        else:
            print(line)
        assert ok, line
    return emit


def subsets(n, t, rng):
    every = list(itertools.combinations(range(1, n + 1), t))
    return every if n <= 5 else rng.sample(every, min(20, len(every)))


def finished(cfg, fault=None):
    prun = ProtocolRun(cfg, fault)
    prun.execute()
    return prun


def both_decisions(prun):
    q_alice, keys, reg = verifier_inputs(prun)
    out = {}
    for who in ("bob", "cindy"):
        me = prun.state[who]["identity-key"][who]
        out[who] = verify(prun.params, prun.signature, q_alice, keys, me, prun.warrant.x, reg)
    return out


# 1 -----------------------------------------------------------------------

def pairing_axioms(suite, cases, rng):
    P, q = suite.P, suite.q
    bad = 0
    one = suite.gt() ** 0
    if suite.gt() == one:
        bad += 1
    for _ in range(cases):
        a, b = rng.randrange(1, q), rng.randrange(1, q)
        A, B = rng.randrange(1, q) * P, rng.randrange(1, q) * P
        ok = (suite.pair(a * P, b * P) == suite.gt() ** (a * b)
              and suite.pair(a * A, B) == suite.pair(A, B) ** a == suite.pair(A, a * B)
              and suite.pair(A, B) == suite.pair(B, A)
              and suite.pair(A, P) != one
              and q * A == suite.identity
              and suite.pair(A, B) ** q == one)
        bad += not ok
    return bad


def test_criterion_1_pairing_axioms(report):
    rng = random.Random(1)
    results = {}
    for name, suite in [("transparent", tiny_suite()), ("transparent-large", large_suite())]:
        results[name] = pairing_axioms(suite, 100, rng)
    start = time.perf_counter()
    results["curve"] = pairing_axioms(curve_suite(), 100, rng)
    elapsed = time.perf_counter() - start
    ok = not any(results.values()) and elapsed < 60
    report(1, ok, f"failures per backend {results}; curve {elapsed:.1f}s (< 60s)")


# 2 -----------------------------------------------------------------------

def test_criterion_2_warrant_round_trip(report):
    rng = random.Random(2)
    accepted = {}
    for name, suite in [("transparent-large", large_suite()), ("curve", curve_suite())]:
        params, master = setup(suite, f"warrant-{name}")
        count = 0
        for k in range(100):
            alice = extract(params, master, f"alice{k}@example.org")
            wt = Warrant(alice.identity.decode(), ("p1", "p2", "p3"), 2, rng.randrange(1, suite.q), f"t{k}")
            count += verify_warrant(params, alice.Q, wt, sign_warrant(params, alice, wt, f"n{k}"))
        accepted[name] = count

    params, master = setup(large_suite(), "tamper")
    P, q = params.P, params.q
    rejected = 0
    fields = ("terms", "x", "t", "proxies", "original", "U_w", "V_w", "q_alice")
    for k in range(100):
        alice = extract(params, master, "alice@example.org")
        wt = Warrant("alice@example.org", ("p1", "p2", "p3"), 2, rng.randrange(1, q), f"t{k}")
        w = sign_warrant(params, alice, wt, f"n{k}")
        field, q_alice = fields[k % len(fields)], alice.Q
        if field == "terms":
            wt = Warrant(wt.original, wt.proxies, wt.t, wt.x, wt.terms + "x")
        elif field == "x":
            wt = Warrant(wt.original, wt.proxies, wt.t, (wt.x + 1) % q, wt.terms)
        elif field == "t":
            wt = Warrant(wt.original, wt.proxies, 3, wt.x, wt.terms)
        elif field == "proxies":
            wt = Warrant(wt.original, ("p1", "p2", "p4"), wt.t, wt.x, wt.terms)
        elif field == "original":
            wt = Warrant("mallory", wt.proxies, wt.t, wt.x, wt.terms)
        elif field == "U_w":
            w = DelegationSig(w.U_w + P, w.V_w)
        elif field == "V_w":
            w = DelegationSig(w.U_w, w.V_w + rng.randrange(1, q) * P)
        else:
            q_alice = (q_alice + 1) % q
        rejected += not verify_warrant(params, q_alice, wt, w)
    ok = all(v == 100 for v in accepted.values()) and rejected == 100
    report(2, ok, f"round trips accepted {accepted}/100; tampers rejected {rejected}/100")


# 3 -----------------------------------------------------------------------

def test_criterion_3_vss(report):
    tiny_params, _ = setup(tiny_suite(), "vss")
    exact_bad = 0
    for t, n in SHAPES:
        for seed in range(5):
            for i in range(1, n + 1):
                poly, com = deal(tiny_params, t, n, i, f"{t}{n}{seed}")
                for j in range(1, n + 1):
                    accepted = [v for v in range(11)
                                if verify_subshare(tiny_params, SubShare(i, j, v), com)]
                    exact_bad += accepted != [poly(j)]

    params, _ = setup(large_suite(), "vss")
    q = params.q
    interp_bad = 0
    for t, n in SHAPES:
        for trial in range(100):
            polys = [deal(params, t, n, k, f"{t}/{n}/{trial}")[0] for k in range(1, n + 1)]
            r = {j: combine_shares(params, j, [subshare(p, j) for p in polys], n).r
                 for j in range(1, n + 1)}
            secret = sum(p.coeffs[0] for p in polys) % q
            D = tuple(sorted(random.Random(trial).sample(range(1, n + 1), t)))
            eta = lagrange_at_zero(q, D)
            interp_bad += sum(eta[i] * r[i] for i in D) % q != secret
            one = polys[0]
            interp_bad += sum(eta[i] * one(i) for i in D) % q != one(0)
    ok = exact_bad == 0 and interp_bad == 0
    report(3, ok, f"Feldman exactness failures {exact_bad}; interpolation failures {interp_bad}")


# 4, 5 ----------------------------------------------------------------------

def correctness_runs(suite_name, shapes, rng):
    """Yield (prun, D) for every subset required by the correctness criterion."""
    for t, n in shapes:
        for D in subsets(n, t, rng):
            cfg = ProtocolConfig(t=t, n=n, suite=suite_name, seed=f"c{t}{n}{D}", signers=D,
                                 message=f"m{D}")
            yield finished(cfg), D


def check_correctness(prun):
    params, sig = prun.params, prun.signature
    _, keys, reg = verifier_inputs(prun)
    decisions = both_decisions(prun)
    equation = final_equation(params, sig, prun.ctx.H, keys)
    ys = [compute_y_star(params, prun.state[a]["identity-key"][a], prun.public_keys[b], prun.D,
                         prun.ctx.eta, reg, keys)
          for a, b in (("bob", "cindy"), ("cindy", "bob"))]
    agree = ys[0] == ys[1] == prun.ctx.Y
    return equation and all(d.accept for d in decisions.values()), agree


def dlog_oracle(prun):
    suite, q, sig = prun.suite, prun.params.q, prun.signature
    s = prun.state["kgc"]["master-key"]["kgc"].s
    key_sum = sum(prun.public_keys[f"P{k}"] for k in range(1, prun.n + 1))
    rhs = suite.dlog(sig.U) + prun.ctx.H * (key_sum * pow(s, -1, q) + prun.n * suite.dlog(sig.V_w))
    return suite.dlog(sig.V) == rhs % q


_RESULTS = {}


def _correctness_results():
    if _RESULTS:
        return _RESULTS
    rng = random.Random(4)
    runs, failures, disagreements, oracle_bad, audit_bad = 0, 0, 0, 0, 0
    start = time.perf_counter()
    for suite_name in ("transparent", "transparent-large"):
        for prun, D in correctness_runs(suite_name, SHAPES, rng):
            runs += 1
            good, agree = check_correctness(prun)
            failures += not good
            disagreements += not agree
            oracle_bad += not dlog_oracle(prun)
            audit_bad += len(confinement_audit(prun.transcript)["violations"])
    transparent_time = time.perf_counter() - start
    start = time.perf_counter()
    prun = finished(ProtocolConfig(t=2, n=3, suite="curve", seed="curve-spot"))
    good, agree = check_correctness(prun)
    curve_time = time.perf_counter() - start
    _RESULTS.update(runs=runs, failures=failures + (not good), disagreements=disagreements + (not agree),
                    oracle_bad=oracle_bad, audit_bad=audit_bad + len(confinement_audit(prun.transcript)["violations"]),
                    transparent_time=transparent_time, curve_time=curve_time)
    return _RESULTS


def test_criterion_4_correctness(report):
    r = _correctness_results()
    ok = (r["failures"] == 0 and r["oracle_bad"] == 0 and r["transparent_time"] < 5
          and r["curve_time"] < 120)
    report(4, ok, f"{r['runs']} transparent runs + curve (2,3); failures {r['failures']}; "
                  f"dlog oracle mismatches {r['oracle_bad']}; transparent {r['transparent_time']:.2f}s (< 5s); "
                  f"curve {r['curve_time']:.2f}s (< 120s)")


def test_criterion_5_y_agreement(report):
    r = _correctness_results()
    report(5, r["disagreements"] == 0, f"Y / Y*_bob / Y*_cindy disagreements {r['disagreements']} "
                                       f"over {r['runs'] + 1} runs")


# 6 -----------------------------------------------------------------------

def binomial_interval(n, p, level=0.95):
    """Equal-tailed interval [lo, hi] of Binomial(n, p) covering ``level``."""
    pmf = [math.comb(n, k) * p ** k * (1 - p) ** (n - k) for k in range(n + 1)]
    tail = (1 - level) / 2
    acc, lo = 0.0, 0
    while acc + pmf[lo] <= tail:
        acc += pmf[lo]
        lo += 1
    acc, hi = 0.0, n
    while acc + pmf[hi] <= tail:
        acc += pmf[hi]
        hi -= 1
    return lo, hi


def rogue_accepts(suite_name, runs):
    count = 0
    for k in range(runs):
        cfg = ProtocolConfig(t=2, n=3, suite=suite_name, seed=f"rogue{k}", message=f"message {k}",
                             terms=f"terms {k}")
        prun = finished(cfg)
        q_alice, keys, reg = verifier_inputs(prun)
        rogue = random_keypair(prun.params, f"rogue key {k}")
        count += verify(prun.params, prun.signature, q_alice, keys, rogue, prun.warrant.x, reg).accept
    return count


def test_criterion_6_strongness(report):
    small = rogue_accepts("transparent", 200)
    _, hi = binomial_interval(200, 2 / 11)
    big = rogue_accepts("transparent-large", 200)
    ok = small <= hi and big == 0
    report(6, ok, f"q=11: {small}/200 rogue accepts, bound 2/q allows at most {hi}; "
                  f"q>=2^61: {big}/200 rogue accepts")


# 7 -----------------------------------------------------------------------

def short_aggregate(prun, D):
    """Aggregate a signature from the signer set D using the run's shares."""
    params, q = prun.params, prun.params.q
    eta = lagrange_at_zero(q, D)
    r = {i: prun.state[f"P{i}"]["r"][f"P{i}"] for i in D}
    U = {i: r[i].U for i in D}
    Y = {i: make_y_share(params, i, prun.state[f"P{i}"]["identity-key"][f"P{i}"].S, r[i].r,
                         prun.warrant.x).Y for i in D}
    ctx = build_context(params, b"quorum", D, eta, U, Y, prun.warrant.x)
    partials, C = {}, {}
    for i in D:
        key = prun.state[f"P{i}"]["proxy-key"][f"P{i}"]
        partials[i] = partial_sign(ctx, i, U[i], key.SK)
        C[i] = key.C
    return aggregate(params, ctx, prun.warrant, prun.delegation.V_w, partials, C, prun.n)


def test_criterion_7_quorum(report):
    rng = random.Random(7)
    tried, accepted = 0, 0
    for t, n in [(t, n) for t, n in SHAPES if t >= 2] + [(2, 2), (4, 5)]:
        prun = finished(ProtocolConfig(t=t, n=n, suite="transparent-large", seed=f"q{t}{n}"))
        q_alice, keys, reg = verifier_inputs(prun)
        for D in subsets(n, t - 1, rng):
            sig = short_aggregate(prun, D)
            for who in ("bob", "cindy"):
                me = prun.state[who]["identity-key"][who]
                tried += 1
                accepted += verify(prun.params, sig, q_alice, keys, me, prun.warrant.x, reg).accept
    report(7, accepted == 0, f"{accepted}/{tried} (t-1)-subset verifications accepted")


# 8 -----------------------------------------------------------------------

FAULT_CASES = [
    (BAD_VSS_SUBSHARE, 2, "abort", 2),
    (BAD_PROXY_SUBSHARE, 3, "abort", 3),
    (BAD_PARTIAL_SIG, 2, "abort", 2),
    (BAD_Y_SHARE, 1, "reject", None),
    (SMALL_QUORUM, None, "reject", None),
    (WRONG_VERIFIER_KEY, "bob", "reject", None),
]


def fault_ok(kind, target, outcome, culprit, seed):
    prun = finished(ProtocolConfig(t=2, n=3, suite="transparent-large", seed=f"fault{seed}"),
                    FaultSpec(kind, target))
    tr = prun.transcript
    if tr.outcome != outcome:
        return False
    if outcome == "abort":
        return tr.abort["stage"] == FAULT_STAGE[kind] and tr.abort["culprit"] == culprit
    stages = [e["name"] for e in tr.events if e["event"] == "stage"]
    if stages[-1] != FAULT_STAGE[kind]:
        return False
    if kind == WRONG_VERIFIER_KEY:
        return tr.decisions["cindy"].accept and not tr.decisions["bob"].accept
    return not any(d.accept for d in tr.decisions.values())


def test_criterion_8_faults(report):
    misses = {}
    for kind, target, outcome, culprit in FAULT_CASES:
        bad = sum(not fault_ok(kind, target, outcome, culprit, seed) for seed in range(10))
        if bad:
            misses[kind] = bad
    report(8, not misses, f"{len(FAULT_CASES)} fault kinds x 10 seeds; mismatches {misses or 'none'}")


# 9 ------------------------------------------------------------------------

def test_criterion_9_confinement(report):
    r = _correctness_results()
    report(9, r["audit_bad"] == 0, f"confinement violations {r['audit_bad']} over {r['runs'] + 1} runs")


# 10 ----------------------------------------------------------------------

def test_criterion_10_determinism(report, tmp_path, capsys):
    configs = [(t, n, "transparent") for t, n in SHAPES] + [(2, 3, "curve-tiny")]
    differing = []
    for t, n, suite in configs:
        outputs = []
        for k in range(3):
            path = tmp_path / f"{t}-{n}-{suite}-{k}.jsonl"
            cli_main(["demo", "--t", str(t), "--n", str(n), "--suite", suite, "--transcript", str(path)])
            outputs.append(path.read_bytes())
        if len(set(outputs)) != 1:
            differing.append((t, n, suite))
    capsys.readouterr()
    report(10, not differing, f"{len(configs)} configurations x 3 demo runs; differing {differing or 'none'}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
