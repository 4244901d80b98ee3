import pytest

from bdvtps.errors import ParameterError
from bdvtps.harness import (BAD_PARTIAL_SIG, BAD_PROXY_SUBSHARE, BAD_VSS_SUBSHARE, BAD_Y_SHARE,
                            FAULT_STAGE, SMALL_QUORUM, WRONG_VERIFIER_KEY, FaultSpec,
                            ProtocolConfig, ProtocolRun, Registry, Transcript,
                            confinement_audit, run)


def test_config_defaults_and_validation():
    cfg = ProtocolConfig(t=2, n=4)
    assert cfg.signers == (1, 2) and len(cfg.proxies) == 4
    assert ProtocolConfig.from_dict(cfg.to_dict()) == cfg
    for bad in [dict(t=4, n=3), dict(t=0, n=3), dict(suite="nope"), dict(signers=(1,)),
                dict(signers=(1, 9)), dict(bob="alice@example.org"), dict(n=3, proxies=("a",))]:
        with pytest.raises(ParameterError):
            ProtocolConfig(**bad)


def test_fault_target_validation():
    cfg = ProtocolConfig()
    for fault in [FaultSpec(BAD_VSS_SUBSHARE, 9), FaultSpec(BAD_PARTIAL_SIG, 3),
                  FaultSpec(WRONG_VERIFIER_KEY, "alice")]:
        with pytest.raises(ParameterError):
            ProtocolRun(cfg, fault)
    with pytest.raises(ParameterError):
        ProtocolRun(ProtocolConfig(t=1, n=2), FaultSpec(SMALL_QUORUM))
    with pytest.raises(ParameterError):
        FaultSpec("Meteor")


def test_registry_is_append_only():
    reg = Registry()
    reg.publish("s", "p", "x", 1)
    with pytest.raises(ParameterError):
        reg.publish("s", "p", "x", 2)
    assert reg.get("s", "p", "x") == 1 and len(reg) == 1


@pytest.mark.parametrize("suite", ["transparent", "transparent-large", "curve-tiny"])
@pytest.mark.parametrize("t, n", [(1, 1), (2, 3), (3, 5)])
def test_honest_runs_accept(suite, t, n):
    tr = run(ProtocolConfig(t=t, n=n, suite=suite, seed="h"))
    assert tr.outcome == "accept"
    assert set(tr.decisions) == {"bob", "cindy"}


def test_transcript_is_deterministic_and_round_trips():
    cfg = ProtocolConfig(t=2, n=3, seed="det")
    a, b = run(cfg).to_jsonl(), run(cfg).to_jsonl()
    assert a == b
    assert run(ProtocolConfig(t=2, n=3, seed="other")).to_jsonl() != a
    back = Transcript.from_jsonl(a)
    assert back.outcome == "accept" and back.signature is not None
    assert back.to_jsonl() == a


@pytest.mark.parametrize("kind, target, check, culprit", [
    (BAD_VSS_SUBSHARE, 2, "verify_subshare", 2),
    (BAD_PROXY_SUBSHARE, 3, "verify_proxy_subshare", 3),
    (BAD_PARTIAL_SIG, 2, "clerk_verify_partial", 2),
])
def test_faults_that_abort(kind, target, check, culprit):
    tr = run(ProtocolConfig(t=2, n=3, seed="f"), FaultSpec(kind, target))
    assert tr.outcome == "abort"
    assert tr.abort == {"stage": FAULT_STAGE[kind], "check": check, "culprit": culprit}
    assert tr.signature is None if kind != BAD_PARTIAL_SIG else True


@pytest.mark.parametrize("fault", [FaultSpec(BAD_Y_SHARE, 1), FaultSpec(SMALL_QUORUM)])
def test_faults_that_both_verifiers_reject(fault):
    tr = run(ProtocolConfig(t=2, n=3, suite="transparent-large", seed="f"), fault)
    assert tr.outcome == "reject"
    assert {d.reason for d in tr.decisions.values()} == {"pairing-inequality"}


def test_wrong_verifier_key_hits_only_its_target():
    tr = run(ProtocolConfig(suite="transparent-large", seed="f"), FaultSpec(WRONG_VERIFIER_KEY, "cindy"))
    assert tr.decisions["bob"].accept and not tr.decisions["cindy"].accept


def test_honest_audit_is_clean():
    for t, n in [(1, 1), (2, 3), (4, 6)]:
        report = confinement_audit(run(ProtocolConfig(t=t, n=n, seed="a")))
        assert report["ok"] and report["holds_checked"] > 0


class LeakyRun(ProtocolRun):
    """Misroutes P1's proxy subshare for P2 to Alice."""

    def _route(self, recipient, kind):
        if kind == "proxy-subshare" and recipient == "P2":
            return "alice"
        return recipient


def test_audit_catches_misrouted_secret():
    tr = LeakyRun(ProtocolConfig(t=2, n=3, seed="leak")).execute()
    report = confinement_audit(tr)
    assert not report["ok"]
    assert {(v["party"], v["secret"]) for v in report["violations"]} == {("alice", "proxy-subshare")}
    assert tr.outcome == "abort"  # P2 never got its subshares


def test_state_exposes_oracle_values():
    prun = ProtocolRun(ProtocolConfig(seed="o"))
    prun.execute()
    master = prun.state["kgc"]["master-key"]["kgc"]
    assert master.s * prun.params.P == prun.params.P_pub
    assert "master-key" not in prun.state["alice"]
