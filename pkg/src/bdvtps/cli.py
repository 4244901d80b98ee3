"""Command-line front end over file-based artifacts.

All files live in a working directory (``-w``, default ``.``)::

    params.yaml  master.yaml  registry.yaml  warrant.yaml  delegation.yaml
    keys/<identity>.yaml  shares/*.yaml  signature.yaml

Exit status: 0 success/accept, 1 reject, 2 usage error, 3 protocol abort.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence

from . import artifacts
from .artifacts import ArtifactError
from .delegation import (ProxyCommitments, Warrant, deal_proxy, derive_proxy_secret,
                         proxy_base_commitment, proxy_subshare, receive_proxy_shares,
                         sign_warrant, warrant_hash)
from .dvverify import Decision, verify
from .errors import CheckFailed, ParameterError
from .harness import FAULT_KINDS, FaultSpec, ProtocolConfig, ProtocolRun, Transcript, confinement_audit
from .idkgc import SystemParams, extract, setup
from .pairing import SUITE_NAMES, named_suite
from .thsign import (aggregate, build_context, compute_X, lagrange_at_zero, make_y_share,
                     partial_sign, signer_set)
from .vss import FeldmanCommitments, SubShare, deal, receive_all, subshare

EXIT_OK, EXIT_REJECT, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3
SUITE_ENV = "BDVTPS_SUITE"


class UsageError(Exception):
    pass


class Workspace:
    def __init__(self, root: str, as_json: bool = False):
        self.root = Path(root)
        self.as_json = as_json

    def path(self, *parts: str) -> Path:
        return self.root.joinpath(*parts)

    def write(self, rel: str, kind: str, payload: dict) -> Path:
        p = self.path(rel)
        p.parent.mkdir(parents=True, exist_ok=True)
        artifacts.write(p, kind, payload, self.as_json)
        return p

    def read(self, rel: str, kind: str) -> dict:
        return artifacts.read(self.path(rel), kind)

    def params(self) -> SystemParams:
        return artifacts.params_from_payload(self.read("params.yaml", "params"))

    # registry -------------------------------------------------------------
    def registry(self) -> Dict[tuple, object]:
        p = self.path("registry.yaml")
        if not p.exists():
            return {}
        entries = artifacts.read(p, "registry").get("entries", [])
        return {(e["stage"], e["party"], e["label"]): e["value"] for e in entries}

    def publish(self, stage: str, party: str, label: str, value) -> None:
        reg = self.registry()
        key = (stage, party, label)
        if key in reg and reg[key] != value:
            raise UsageError(f"registry entry {stage}/{party}/{label} is already published")
        reg[key] = value
        entries = [{"stage": s, "party": pa, "label": la, "value": v}
                   for (s, pa, la), v in sorted(reg.items())]
        self.write("registry.yaml", "registry", {"entries": entries})


def _key_file(identity: str) -> str:
    return f"keys/{identity}.yaml"


def _require_insecure(args, what: str) -> None:
    if not args.insecure_write:
        raise UsageError(f"refusing to write {what} without --insecure-write")


def _load_key(ws: Workspace, params: SystemParams, path: str):
    p = Path(path)
    doc = artifacts.read(p if p.exists() else ws.path(path), "keypair")
    return artifacts.keypair_from_payload(params, doc)


# -- subcommands --------------------------------------------------------------

def cmd_setup(args, ws: Workspace) -> int:
    suite = named_suite(args.suite)
    params, master = setup(suite, args.seed)
    ws.write("params.yaml", "params", artifacts.params_payload(params))
    ws.publish("setup", "kgc", "P_pub", artifacts.g1_hex(params.P_pub))
    if args.insecure_write:
        ws.write("master.yaml", "masterkey", artifacts.master_payload(params, master))
    else:
        print("master key not saved (pass --insecure-write to keep it for keygen)", file=sys.stderr)
    print(f"params written to {ws.path('params.yaml')}")
    return EXIT_OK


def cmd_keygen(args, ws: Workspace) -> int:
    params = ws.params()
    master = artifacts.master_from_payload(params, ws.read("master.yaml", "masterkey"))
    _require_insecure(args, "an identity secret key")
    key = extract(params, master, args.id)
    ws.write(_key_file(args.id), "keypair", artifacts.keypair_payload(params, key))
    ws.publish("key-generation", args.id, "Q_ID", key.Q)
    print(f"{args.id}: Q_ID={key.Q}")
    return EXIT_OK


def cmd_vss_deal(args, ws: Workspace) -> int:
    params = ws.params()
    _require_insecure(args, "subshares")
    poly, com = deal(params, args.t, args.n, args.index, args.seed)
    ws.publish("secret-share", f"P{args.index}", "A", [artifacts.g1_hex(a) for a in com.points])
    for j in range(1, args.n + 1):
        s = subshare(poly, j)
        ws.write(f"shares/vss-{args.index}-{j}.yaml", "share",
                 {"dealer": s.dealer, "recipient": j, "value": artifacts.scalar_hex(params.suite, s.value)})
    print(f"dealer {args.index}: {args.n} subshares written")
    return EXIT_OK


def cmd_vss_combine(args, ws: Workspace) -> int:
    params = ws.params()
    _require_insecure(args, "a secret share")
    reg = ws.registry()
    shares, coms = [], {}
    for k in range(1, args.n + 1):
        rel = f"shares/vss-{k}-{args.index}.yaml"
        if ws.path(rel).exists():
            d = ws.read(rel, "share")
            shares.append(SubShare(int(d["dealer"]), int(d["recipient"]),
                                   artifacts.scalar_from_hex(params.suite, d["value"])))
        a = reg.get(("secret-share", f"P{k}", "A"))
        if a is not None:
            coms[k] = FeldmanCommitments(k, tuple(artifacts.g1_from_hex(params.suite, x) for x in a))
    share = receive_all(params, args.index, shares, coms, args.n)
    ws.write(f"shares/r-{args.index}.yaml", "share",
             {"holder": args.index, "r": artifacts.scalar_hex(params.suite, share.r)})
    ws.publish("secret-share", f"P{args.index}", "U", artifacts.g1_hex(share.U))
    print(f"P{args.index}: all subshares verified, U published")
    return EXIT_OK


def cmd_delegate(args, ws: Workspace) -> int:
    params = ws.params()
    alice = _load_key(ws, params, args.alice_key)
    proxies = tuple(p for p in args.proxies.split(",") if p)
    X = compute_X(params.q, params.hashes.h1(args.bob.encode()), params.hashes.h1(args.cindy.encode()))
    warrant = Warrant(alice.identity.decode(), proxies, args.t, X, args.terms)
    w = sign_warrant(params, alice, warrant, args.seed)
    ws.write("warrant.yaml", "warrant", warrant.to_dict())
    ws.write("delegation.yaml", "delegation", artifacts.delegation_payload(w))
    print(f"warrant for {len(proxies)} proxies, t={args.t}, X={X}")
    return EXIT_OK


def _warrant(ws: Workspace, params: SystemParams):
    warrant = Warrant.from_dict(ws.read("warrant.yaml", "warrant"))
    w = artifacts.delegation_from_payload(params, ws.read("delegation.yaml", "delegation"))
    return warrant, w


def cmd_proxy_share(args, ws: Workspace) -> int:
    params = ws.params()
    _require_insecure(args, "proxy key material")
    warrant, w = _warrant(ws, params)
    n, t, i = warrant.n, warrant.t, args.index
    q_alice = params.hashes.h1(warrant.original.encode())
    h_w = warrant_hash(params, warrant, w.U_w)
    if args.step == "deal":
        me = _load_key(ws, params, args.key or _key_file(warrant.proxies[i - 1]))
        secret = derive_proxy_secret(params, me, q_alice, warrant, w)
        if secret.owner != i:
            raise UsageError(f"key belongs to proxy {secret.owner}, not {i}")
        poly, com = deal_proxy(params, secret, t, n, w.U_w, h_w, q_alice, me.Q, args.seed)
        ws.publish("proxy-share", f"P{i}", "B", [artifacts.g2_hex(b) for b in com.B[1:]])
        for j in range(1, n + 1):
            ws.write(f"shares/proxy-{i}-{j}.yaml", "share",
                     {"dealer": i, "recipient": j, "value": artifacts.g1_hex(proxy_subshare(poly, j))})
        print(f"P{i}: warrant accepted, {n} proxy subshares written")
        return EXIT_OK
    reg = ws.registry()
    shares, coms = {}, {}
    for k in range(1, n + 1):
        rel = f"shares/proxy-{k}-{i}.yaml"
        if ws.path(rel).exists():
            shares[k] = artifacts.g1_from_hex(params.suite, ws.read(rel, "share")["value"])
        B = reg.get(("proxy-share", f"P{k}", "B"))
        if B is not None:
            q_k = params.hashes.h1(warrant.proxies[k - 1].encode())
            B0 = proxy_base_commitment(params, w.U_w, h_w, q_alice, q_k)
            coms[k] = ProxyCommitments(k, (B0, *(artifacts.g2_from_hex(params.suite, b) for b in B)))
    key_share = receive_proxy_shares(params, i, shares, coms, n)
    ws.write(f"shares/proxykey-{i}.yaml", "share", {"holder": i, "SK": artifacts.g1_hex(key_share.SK)})
    ws.publish("proxy-share", f"P{i}", "C", artifacts.g2_hex(key_share.C))
    print(f"P{i}: proxy subshares verified, C published")
    return EXIT_OK


def cmd_sign(args, ws: Workspace) -> int:
    params = ws.params()
    warrant, w = _warrant(ws, params)
    reg = ws.registry()
    D = signer_set((int(x) for x in args.signers.split(",") if x), warrant.n)
    eta = lagrange_at_zero(params.q, D)
    m = args.message.encode()
    U, Y, SK = {}, {}, {}
    for i in D:
        key = _load_key(ws, params, _key_file(warrant.proxies[i - 1]))
        r = artifacts.scalar_from_hex(params.suite, ws.read(f"shares/r-{i}.yaml", "share")["r"])
        SK[i] = artifacts.g1_from_hex(params.suite, ws.read(f"shares/proxykey-{i}.yaml", "share")["SK"])
        U[i] = r * params.P
        Y[i] = make_y_share(params, i, key.S, r, warrant.x).Y
    ctx = build_context(params, m, D, eta, U, Y, warrant.x)
    partials = {i: partial_sign(ctx, i, U[i], SK[i]) for i in D}
    C = {}
    for i in D:
        c = reg.get(("proxy-share", f"P{i}", "C"))
        if c is not None:
            C[i] = artifacts.g2_from_hex(params.suite, c)
    sig = aggregate(params, ctx, warrant, w.V_w, partials, C, warrant.n)
    ws.write(args.out, "signature", artifacts.signature_payload(sig))
    print(f"signature by {list(D)} written to {ws.path(args.out)}")
    return EXIT_OK


def cmd_verify(args, ws: Workspace) -> int:
    params = ws.params()
    me = _load_key(ws, params, args.key)
    sig_path = Path(args.signature) if Path(args.signature).exists() else ws.path(args.signature)
    try:
        sig = artifacts.signature_from_payload(params, artifacts.read(sig_path, "signature"))
    except ArtifactError as exc:
        decision = Decision(False, "malformed-signature")
        print(f"reject: {decision.reason} ({exc})")
        return EXIT_REJECT
    warrant = sig.warrant
    reg = ws.registry()
    U_reg = {}
    for i in range(1, warrant.n + 1):
        u = reg.get(("secret-share", f"P{i}", "U"))
        if u is not None:
            U_reg[i] = artifacts.g1_from_hex(params.suite, u)
    h1 = params.hashes.h1
    decision = verify(params, sig, h1(warrant.original.encode()),
                      [h1(p.encode()) for p in warrant.proxies], me, warrant.x, U_reg)
    print("accept" if decision.accept else f"reject: {decision.reason}")
    if args.report:
        ws.write(args.report, "report", {
            "verifier": me.identity.decode(), "accept": decision.accept, "reason": decision.reason,
            "signature_digest": hashlib.sha256(sig_path.read_bytes()).hexdigest()})
    return EXIT_OK if decision.accept else EXIT_REJECT


def cmd_demo(args, ws: Workspace) -> int:
    config = ProtocolConfig(t=args.t, n=args.n, suite=args.suite, seed=args.seed,
                            message=args.message,
                            signers=tuple(int(x) for x in args.signers.split(",")) if args.signers else ())
    fault = None
    if args.fault:
        target = args.fault_target
        if target is not None and target.isdigit():
            target = int(target)
        fault = FaultSpec(args.fault, target)
    tr = ProtocolRun(config, fault).execute()
    if args.transcript:
        Path(args.transcript).write_bytes(tr.to_jsonl())
    if tr.abort:
        a = tr.abort
        print(f"abort at {a['stage']}: {a['check']} failed, culprit {a['culprit']}")
        return EXIT_ABORT
    for name in ("bob", "cindy"):
        d = tr.decisions[name]
        print(f"{name}: accept" if d.accept else f"{name}: reject ({d.reason})")
    return EXIT_OK if tr.outcome == "accept" else EXIT_REJECT


def cmd_audit(args, ws: Workspace) -> int:
    p = Path(args.transcript)
    if not p.exists():
        raise UsageError(f"{p} does not exist")
    report = confinement_audit(Transcript.from_jsonl(p.read_bytes()))
    for v in report["violations"]:
        print(f"violation: {v['party']} held {v['secret']} of {v['owner']} (event {v['seq']})")
    print(f"{report['holds_checked']} holdings checked, {len(report['violations'])} violations")
    if args.report:
        ws.write(args.report, "report", report)
    return EXIT_OK if report["ok"] else EXIT_REJECT


# -- parser -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    default_suite = os.environ.get(SUITE_ENV, "transparent")
    parser = _Parser(prog="bdvtps", description=__doc__.splitlines()[0])
    parser.add_argument("-w", "--workdir", default=".")
    parser.add_argument("--json", action="store_true", help="write artifacts as JSON")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def secret_flag(p):
        p.add_argument("--insecure-write", action="store_true",
                       help="allow writing secret material to disk")

    p = sub.add_parser("setup", help="create system parameters")
    p.add_argument("--suite", default=default_suite, choices=SUITE_NAMES)
    p.add_argument("--seed", required=True)
    secret_flag(p)
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("keygen", help="extract an identity key pair")
    p.add_argument("--id", required=True)
    secret_flag(p)
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("vss-deal", help="deal one proxy signer's VSS polynomial")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", required=True)
    secret_flag(p)
    p.set_defaults(func=cmd_vss_deal)

    p = sub.add_parser("vss-combine", help="verify subshares and form r_i")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    secret_flag(p)
    p.set_defaults(func=cmd_vss_combine)

    p = sub.add_parser("delegate", help="write and sign a warrant")
    p.add_argument("--alice-key", required=True)
    p.add_argument("--proxies", required=True, help="comma-separated identities, in index order")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--bob", required=True)
    p.add_argument("--cindy", required=True)
    p.add_argument("--terms", default="")
    p.add_argument("--seed", required=True)
    p.set_defaults(func=cmd_delegate)

    p = sub.add_parser("proxy-share", help="deal or combine proxy key subshares")
    p.add_argument("--step", choices=("deal", "combine"), required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--key", help="identity key file (default keys/<proxy id>.yaml)")
    p.add_argument("--seed", default="")
    secret_flag(p)
    p.set_defaults(func=cmd_proxy_share)

    p = sub.add_parser("sign", help="threshold-sign a message with a signer set")
    p.add_argument("--signers", required=True, help="comma-separated indices")
    p.add_argument("--message", required=True)
    p.add_argument("--out", default="signature.yaml")
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("verify", help="verify as a designated verifier")
    p.add_argument("--key", required=True)
    p.add_argument("--signature", default="signature.yaml")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("demo", help="simulate the full protocol")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--suite", default=default_suite, choices=SUITE_NAMES)
    p.add_argument("--seed", default="42")
    p.add_argument("--message", default=ProtocolConfig.message)
    p.add_argument("--signers")
    p.add_argument("--fault", choices=FAULT_KINDS)
    p.add_argument("--fault-target")
    p.add_argument("--transcript", help="write the JSON-lines transcript here")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("audit", help="confinement audit of a transcript")
    p.add_argument("--transcript", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args, Workspace(args.workdir, args.json))
    except CheckFailed as exc:
        print(f"abort: {exc.check} failed, culprit {exc.culprit}", file=sys.stderr)
        return EXIT_ABORT
    except (UsageError, ParameterError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
