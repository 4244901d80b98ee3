"""Deterministic in-process simulation of the whole protocol.

Parties: ``kgc``, ``alice``, proxy signers ``P1``..``Pn``, ``bob`` and
``cindy``.  The lowest-indexed member of the signing set acts as clerk.
Stages run in a fixed order and, inside a stage, in ascending party order,
so a (config, fault) pair always yields the same transcript bytes.

Public values go to an append-only :class:`Registry`; secret values travel
over per-party mailboxes.  Every time a party comes to hold a secret a
``hold`` event is logged, which is what :func:`confinement_audit` inspects.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from . import artifacts
from .delegation import (Warrant, deal_proxy, derive_proxy_secret, proxy_base_commitment,
                         proxy_subshare, receive_proxy_shares, sign_warrant, warrant_hash,
                         ProxyCommitments)
from .dvverify import Decision, verify
from .errors import CheckFailed, ParameterError, SubshareRejected
from .idkgc import KeyPair, as_bytes, derive_scalar, extract, key_is_sane, setup
from .pairing import G1Elem, G2Elem, SUITE_NAMES, named_suite
from .thsign import (aggregate, build_context, compute_X, lagrange_at_zero, make_y_share,
                     partial_sign, signer_set)
from .vss import SubShare, deal, receive_all, subshare

BAD_VSS_SUBSHARE = "BadVssSubshare"
BAD_PROXY_SUBSHARE = "BadProxySubshare"
BAD_PARTIAL_SIG = "BadPartialSig"
BAD_Y_SHARE = "BadYShare"
SMALL_QUORUM = "SmallQuorum"
WRONG_VERIFIER_KEY = "WrongVerifierKey"
FAULT_KINDS = (BAD_VSS_SUBSHARE, BAD_PROXY_SUBSHARE, BAD_PARTIAL_SIG, BAD_Y_SHARE,
               SMALL_QUORUM, WRONG_VERIFIER_KEY)

# where each fault is expected to surface
FAULT_STAGE = {
    BAD_VSS_SUBSHARE: "secret-share",
    BAD_PROXY_SUBSHARE: "proxy-share",
    BAD_PARTIAL_SIG: "signing",
    BAD_Y_SHARE: "verification",
    SMALL_QUORUM: "verification",
    WRONG_VERIFIER_KEY: "verification",
}

STAGES = ("setup", "key-generation", "secret-share", "proxy-share", "signing", "verification")


@dataclass(frozen=True)
class ProtocolConfig:
    t: int = 2
    n: int = 3
    suite: str = "transparent"
    seed: str = "42"
    alice: str = "alice@example.org"
    proxies: Tuple[str, ...] = ()
    bob: str = "bob@example.org"
    cindy: str = "cindy@example.org"
    message: str = "pay 100 units to carol"
    terms: str = "valid until 2030-01-01"
    signers: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "seed", str(self.seed))
        if not self.proxies:
            object.__setattr__(self, "proxies",
                               tuple(f"proxy{i}@example.org" for i in range(1, self.n + 1)))
        object.__setattr__(self, "proxies", tuple(self.proxies))
        object.__setattr__(self, "signers", tuple(self.signers) or tuple(range(1, self.t + 1)))
        if not 1 <= self.t <= self.n:
            raise ParameterError(f"need 1 <= t <= n, got t={self.t}, n={self.n}")
        if len(self.proxies) != self.n:
            raise ParameterError("number of proxy identities differs from n")
        names = [self.alice, *self.proxies, self.bob, self.cindy]
        if len(set(names)) != len(names):
            raise ParameterError("all party identities must be distinct")
        if self.suite not in SUITE_NAMES:
            raise ParameterError(f"unknown suite {self.suite!r}")
        if len(self.signers) != self.t:
            raise ParameterError(f"signing set {self.signers} does not have t={self.t} members")
        signer_set(self.signers, self.n)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["proxies"] = list(self.proxies)
        d["signers"] = list(self.signers)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ProtocolConfig":
        known = {k: v for k, v in d.items() if k in cls.__dataclass_fields__}
        for k in ("proxies", "signers"):
            if k in known:
                known[k] = tuple(known[k])
        return cls(**known)


@dataclass(frozen=True)
class FaultSpec:
    kind: str
    target: Any = None

    def __post_init__(self):
        if self.kind not in FAULT_KINDS:
            raise ParameterError(f"unknown fault kind {self.kind!r}")


class Registry:
    """Append-only public bulletin board keyed by (stage, party, label)."""

    def __init__(self):
        self._entries: Dict[Tuple[str, str, str], Any] = {}

    def publish(self, stage: str, party: str, label: str, value) -> None:
        key = (stage, party, label)
        if key in self._entries:
            raise ParameterError(f"registry entry {key} already published")
        self._entries[key] = value

    def get(self, stage: str, party: str, label: str):
        return self._entries[(stage, party, label)]

    def snapshot(self) -> Dict[Tuple[str, str, str], Any]:
        return dict(self._entries)

    def __len__(self) -> int:
        return len(self._entries)


@dataclass
class Transcript:
    events: List[dict] = field(default_factory=list)
    signature: Optional[dict] = None
    decisions: Dict[str, Decision] = field(default_factory=dict)
    abort: Optional[dict] = None

    @property
    def outcome(self) -> str:
        if self.abort:
            return "abort"
        if self.decisions and all(d.accept for d in self.decisions.values()):
            return "accept"
        return "reject"

    def to_jsonl(self) -> bytes:
        lines = [json.dumps(e, sort_keys=True, separators=(",", ":")) for e in self.events]
        return ("\n".join(lines) + "\n").encode()

    @classmethod
    def from_jsonl(cls, data: bytes) -> "Transcript":
        tr = cls()
        for line in data.decode().splitlines():
            if not line.strip():
                continue
            e = json.loads(line)
            tr.events.append(e)
            if e["event"] == "signature":
                tr.signature = e["value"]
            elif e["event"] == "decision":
                tr.decisions[e["verifier"]] = Decision(e["accept"], e.get("reason"))
            elif e["event"] == "abort":
                tr.abort = e
        return tr


def _hex(value) -> Any:
    if isinstance(value, (G1Elem, G2Elem)):
        return bytes(value).hex()
    if isinstance(value, (list, tuple)):
        return [_hex(v) for v in value]
    if isinstance(value, dict):
        return {k: _hex(v) for k, v in value.items()}
    return value


def _digest(value) -> str:
    raw = bytes(value) if isinstance(value, (G1Elem, G2Elem)) else str(value).encode()
    return hashlib.sha256(raw).hexdigest()[:16]


class ProtocolRun:
    """One execution of the six stages.  Use :func:`run` unless you need
    to reach into party state (test oracles) or override message routing."""

    def __init__(self, config: ProtocolConfig, fault: Optional[FaultSpec] = None):
        self.config = config
        self.fault = fault
        self.suite = named_suite(config.suite)
        self.registry = Registry()
        self.transcript = Transcript()
        self.state: Dict[str, Dict[str, Any]] = {}
        self.mailbox: Dict[str, List[dict]] = {}
        self.n, self.t = config.n, config.t
        self.proxy_names = [f"P{i}" for i in range(1, self.n + 1)]
        self.identity_of = {"alice": config.alice, "bob": config.bob, "cindy": config.cindy}
        self.identity_of.update(zip(self.proxy_names, config.proxies))
        for party in ["kgc", "alice", *self.proxy_names, "bob", "cindy"]:
            self.state[party] = {}
            self.mailbox[party] = []
        self._check_fault()

    # -- plumbing ----------------------------------------------------------
    def _check_fault(self) -> None:
        f = self.fault
        if f is None:
            return
        if f.kind in (BAD_VSS_SUBSHARE, BAD_PROXY_SUBSHARE):
            if not (isinstance(f.target, int) and 1 <= f.target <= self.n):
                raise ParameterError(f"{f.kind} needs a dealer index in 1..{self.n}")
        elif f.kind in (BAD_PARTIAL_SIG, BAD_Y_SHARE):
            if f.target not in self.config.signers:
                raise ParameterError(f"{f.kind} needs a target in the signing set {self.config.signers}")
        elif f.kind == SMALL_QUORUM:
            if self.t < 2:
                raise ParameterError("SmallQuorum needs t >= 2")
        elif f.kind == WRONG_VERIFIER_KEY:
            if f.target not in ("bob", "cindy"):
                raise ParameterError("WrongVerifierKey targets 'bob' or 'cindy'")

    def _faulty(self, kind: str) -> bool:
        return self.fault is not None and self.fault.kind == kind

    def _log(self, event: str, **data) -> None:
        data["event"] = event
        data["seq"] = len(self.transcript.events)
        self.transcript.events.append(data)

    def _seed(self, party: str, stage: str) -> bytes:
        return b"/".join([as_bytes(self.config.seed), party.encode(), stage.encode()])

    def _hold(self, party: str, secret: str, owner: str, value) -> None:
        self.state[party].setdefault(secret, {})[owner] = value
        self._log("hold", party=party, secret=secret, owner=owner, digest=_digest(value))

    def _publish(self, stage: str, party: str, label: str, value) -> None:
        self.registry.publish(stage, party, label, value)
        self._log("publish", stage=stage, party=party, label=label, value=_hex(value))

    def _route(self, recipient: str, kind: str) -> str:
        return recipient

    def _send_secret(self, sender: str, recipient: str, kind: str, owner: str, value) -> None:
        """Point-to-point secure channel; receiving a secret is a hold."""
        dest = self._route(recipient, kind)
        self._log("send", sender=sender, recipient=dest, kind=kind, owner=owner,
                  channel="secure", digest=_digest(value))
        self.mailbox[dest].append({"kind": kind, "owner": owner, "value": value, "sender": sender})
        self._hold(dest, kind, owner, value)

    def _send_public(self, sender: str, recipient: str, kind: str, value) -> None:
        self._log("send", sender=sender, recipient=recipient, kind=kind, channel="public",
                  value=_hex(value))
        self.mailbox[recipient].append({"kind": kind, "value": value, "sender": sender})

    def _inbox(self, party: str, kind: str) -> List[dict]:
        return [m for m in self.mailbox[party] if m["kind"] == kind]

    def _check(self, party: str, check: str, subject, ok: bool) -> None:
        self._log("check", party=party, check=check, subject=subject, ok=ok)

    # -- stages --------------------------------------------------------------
    def execute(self) -> Transcript:
        cfg = self.config
        self._log("config", config=cfg.to_dict(),
                  fault=None if self.fault is None else {"kind": self.fault.kind,
                                                         "target": self.fault.target})
        try:
            for stage, step in zip(STAGES, (self._setup, self._keygen, self._secret_shares,
                                            self._proxy_shares, self._signing, self._verification)):
                self.stage = stage
                self._log("stage", name=stage)
                step()
        except CheckFailed as exc:
            self.transcript.abort = {"stage": self.stage, "check": exc.check, "culprit": exc.culprit}
            self._log("abort", stage=self.stage, check=exc.check, culprit=exc.culprit,
                      party=getattr(exc, "party", None))
        self._log("end", outcome=self.transcript.outcome)
        return self.transcript

    def _setup(self) -> None:
        params, master = setup(self.suite, self._seed("kgc", "setup"))
        self.params = params
        self._hold("kgc", "master-key", "kgc", master)
        self._publish("setup", "kgc", "P_pub", params.P_pub)
        self._publish("setup", "kgc", "suite", json.dumps(self.suite.describe(), sort_keys=True))

    def _keygen(self) -> None:
        master = self.state["kgc"]["master-key"]["kgc"]
        self.public_keys: Dict[str, int] = {}
        for party, ident in self.identity_of.items():
            key = extract(self.params, master, ident)
            self._hold("kgc", "identity-key", party, key)
            self._send_secret("kgc", party, "identity-key", party, key)
            ok = key_is_sane(self.params, self.state[party]["identity-key"][party])
            self._check(party, "key_is_sane", party, ok)
            self.public_keys[party] = key.Q
            self._publish("key-generation", party, "Q_ID", key.Q)

    def _key(self, party: str) -> KeyPair:
        return self.state[party]["identity-key"][party]

    def _secret_shares(self) -> None:
        n, t = self.n, self.t
        commitments = {}
        for i, name in enumerate(self.proxy_names, start=1):
            poly, com = deal(self.params, t, n, i, self._seed(name, "secret-share"))
            self._hold(name, "vss-poly", name, poly)
            commitments[i] = com
            self._publish("secret-share", name, "A", list(com.points))
            for j in range(1, n + 1):
                share = subshare(poly, j)
                if self._faulty(BAD_VSS_SUBSHARE) and self.fault.target == i and j == self._victim(i):
                    share = SubShare(i, j, (share.value + 1) % self.params.q)
                owner = f"P{i}->P{j}"
                if j == i:
                    self._hold(name, "vss-subshare", owner, share)
                else:
                    self._send_secret(name, f"P{j}", "vss-subshare", owner, share)
        for j, name in enumerate(self.proxy_names, start=1):
            received = [v for v in self.state[name]["vss-subshare"].values() if v.recipient == j]
            published = {k: commitments[k] for k in range(1, n + 1)}
            try:
                share = receive_all(self.params, j, received, published, n)
            except SubshareRejected as exc:
                self._check(name, "verify_subshare", exc.culprit, False)
                exc.party = name
                raise
            self._check(name, "verify_subshare", "all", True)
            self._hold(name, "r", name, share)
            self._publish("secret-share", name, "U", share.U)

    def _victim(self, dealer: int) -> int:
        others = [j for j in range(1, self.n + 1) if j != dealer]
        return others[0] if others else dealer

    def _proxy_shares(self) -> None:
        cfg, n, t, params = self.config, self.n, self.t, self.params
        alice = self._key("alice")
        X = compute_X(params.q, self.public_keys["bob"], self.public_keys["cindy"])
        self.warrant = Warrant(cfg.alice, cfg.proxies, t, X, cfg.terms)
        nonce = derive_scalar(params.q, self._seed("alice", "proxy-share"), "nonce")
        self._hold("alice", "warrant-nonce", "alice", nonce)
        w = sign_warrant(params, alice, self.warrant, b"", nonce=nonce)
        self.delegation = w
        for name in self.proxy_names:
            self._send_public("alice", name, "warrant",
                              {"m_w": self.warrant.encode().decode(), **artifacts.delegation_payload(w)})
        q_alice = self.registry.get("key-generation", "alice", "Q_ID")
        commitments: Dict[int, ProxyCommitments] = {}
        for i, name in enumerate(self.proxy_names, start=1):
            try:
                secret = derive_proxy_secret(params, self._key(name), q_alice, self.warrant, w)
            except CheckFailed as exc:
                exc.party = name
                raise
            self._check(name, "verify_warrant", "alice", True)
            self._hold(name, "proxy-secret", name, secret)
            h_w = warrant_hash(params, self.warrant, w.U_w)
            poly, com = deal_proxy(params, secret, t, n, w.U_w, h_w, q_alice, self.public_keys[name],
                                   self._seed(name, "proxy-share"))
            self._hold(name, "proxy-poly", name, poly)
            commitments[i] = com
            self._publish("proxy-share", name, "B", list(com.B[1:]))
            for j in range(1, n + 1):
                share = proxy_subshare(poly, j)
                if self._faulty(BAD_PROXY_SUBSHARE) and self.fault.target == i and j == self._victim(i):
                    share = share + params.P
                owner = f"P{i}->P{j}"
                if j == i:
                    self._hold(name, "proxy-subshare", owner, share)
                else:
                    self._send_secret(name, f"P{j}", "proxy-subshare", owner, share)
        h_w = warrant_hash(params, self.warrant, w.U_w)
        for j, name in enumerate(self.proxy_names, start=1):
            held = self.state[name]["proxy-subshare"]
            shares = {k: held[f"P{k}->P{j}"] for k in range(1, n + 1) if f"P{k}->P{j}" in held}
            # B_k0 recomputed locally from public data, B_kl (l >= 1) read from the registry
            local = {}
            for k in range(1, n + 1):
                B0 = proxy_base_commitment(params, w.U_w, h_w, q_alice,
                                           self.registry.get("key-generation", f"P{k}", "Q_ID"))
                B = self.registry.get("proxy-share", f"P{k}", "B")
                local[k] = ProxyCommitments(k, (B0, *B))
            try:
                key_share = receive_proxy_shares(params, j, shares, local, n)
            except SubshareRejected as exc:
                self._check(name, "verify_proxy_subshare", exc.culprit, False)
                exc.party = name
                raise
            self._check(name, "verify_proxy_subshare", "all", True)
            self._hold(name, "proxy-key", name, key_share)
            self._publish("proxy-share", name, "C", key_share.C)

    def _signing(self) -> None:
        params = self.params
        D = tuple(sorted(self.config.signers))
        if self._faulty(SMALL_QUORUM):
            D = D[:-1]
        self.D = D
        clerk = f"P{D[0]}"
        self._log("clerk", party=clerk, signers=list(D))
        m = self.config.message.encode()
        X = self.warrant.x
        eta = lagrange_at_zero(params.q, D)
        for i in D:
            name = f"P{i}"
            r = self.state[name]["r"][name]
            y = make_y_share(params, i, self._key(name).S, r.r, X)
            Y_i = y.Y * params.suite.gt() if self._faulty(BAD_Y_SHARE) and self.fault.target == i else y.Y
            self._send_public(name, clerk, "round1", {"index": i, "U": r.U, "Y": Y_i})
        round1 = {msg["value"]["index"]: msg["value"] for msg in self._inbox(clerk, "round1")}
        ctx = build_context(params, m, D, eta, {i: v["U"] for i, v in round1.items()},
                            {i: v["Y"] for i, v in round1.items()}, X)
        self.ctx = ctx
        for i in D:
            self._send_public(clerk, f"P{i}", "round1-echo", {"H": ctx.H})
        for i in D:
            name = f"P{i}"
            H = self._inbox(name, "round1-echo")[-1]["value"]["H"]
            if H != ctx.H:
                raise ParameterError("clerk echoed inconsistent H")
            part = partial_sign(ctx, i, self.state[name]["r"][name].U,
                                self.state[name]["proxy-key"][name].SK)
            if self._faulty(BAD_PARTIAL_SIG) and self.fault.target == i:
                part = type(part)(i, part.U, part.V + params.P)
            self._send_public(name, clerk, "round2", {"index": i, "U": part.U, "V": part.V})
            self.state[clerk].setdefault("partials", {})[i] = part
        C = {i: self.registry.get("proxy-share", f"P{i}", "C") for i in D}
        try:
            sig = aggregate(params, ctx, self.warrant, self.delegation.V_w,
                            self.state[clerk]["partials"], C, self.n)
        except CheckFailed as exc:
            self._check(clerk, "clerk_verify_partial", exc.culprit, False)
            exc.party = clerk
            raise
        self._check(clerk, "clerk_verify_partial", "all", True)
        self.signature = sig
        self.transcript.signature = artifacts.signature_payload(sig)
        self._log("signature", party=clerk, value=self.transcript.signature)

    def _verification(self) -> None:
        params = self.params
        q_alice = self.registry.get("key-generation", "alice", "Q_ID")
        proxy_keys = [self.registry.get("key-generation", name, "Q_ID") for name in self.proxy_names]
        U_registry = {i: self.registry.get("secret-share", f"P{i}", "U")
                      for i in range(1, self.n + 1)}
        self.y_star = {}
        for verifier in ("bob", "cindy"):
            me = self._key(verifier)
            if self._faulty(WRONG_VERIFIER_KEY) and self.fault.target == verifier:
                me = random_keypair(params, self._seed(verifier, "verification"))
                self._log("substitute-key", party=verifier, Q=me.Q)
            decision = verify(params, self.signature, q_alice, proxy_keys, me, self.warrant.x, U_registry)
            self.transcript.decisions[verifier] = decision
            self._log("decision", verifier=verifier, accept=decision.accept, reason=decision.reason)


def random_keypair(params, seed) -> KeyPair:
    """A key pair that the KGC never issued: independent random Q and S."""
    q = params.q
    Q = derive_scalar(q, seed, "rogue-Q")
    S = derive_scalar(q, seed, "rogue-S") * params.P
    return KeyPair(b"rogue", Q, S)


def run(config: ProtocolConfig, fault: Optional[FaultSpec] = None) -> Transcript:
    return ProtocolRun(config, fault).execute()


# -- confinement audit --------------------------------------------------------

def _allowed(secret: str, owner: str) -> set:
    if secret == "master-key":
        return {"kgc"}
    if secret == "identity-key":
        return {"kgc", owner}
    if secret in ("vss-subshare", "proxy-subshare"):
        return set(owner.split("->"))
    return {owner}


def confinement_audit(transcript: Transcript) -> dict:
    """List every secret held by a party outside its allowed holder set.

    Covers the master key (KGC only), identity keys (KGC and owner),
    subshares (dealer and recipient), and r_i, proxy secrets, polynomials and
    SK_Pi (owner only).  In particular Alice can never appear holding any
    proxy signer's material.
    """
    violations = []
    holds = 0
    for e in transcript.events:
        if e["event"] != "hold":
            continue
        holds += 1
        if e["party"] not in _allowed(e["secret"], e["owner"]):
            violations.append({"party": e["party"], "secret": e["secret"], "owner": e["owner"],
                               "seq": e["seq"]})
    return {"ok": not violations, "holds_checked": holds, "violations": violations}
