"""On-disk artifact documents.

Every file is a mapping ``{kind, version, payload}``.  The default rendering
is YAML; JSON is the canonical machine format.  Group elements and secret
scalars are hex strings of their fixed-width canonical encodings; public
keys and suite parameters are decimal integers.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping, Union

import yaml

from .delegation import DelegationSig, Warrant
from .errors import ParameterError
from .idkgc import HashFamily, KeyPair, MasterKey, SystemParams, as_bytes
from .pairing import G1Elem, G2Elem, PairingSuite, suite_from_description
from .thsign import AggregateSignature

VERSION = 1
KINDS = ("params", "masterkey", "keypair", "warrant", "delegation", "registry", "share",
         "signature", "transcript", "report", "config")


class ArtifactError(ParameterError):
    pass


def g1_hex(a: G1Elem) -> str:
    return bytes(a).hex()


def g2_hex(z: G2Elem) -> str:
    return bytes(z).hex()


def g1_from_hex(suite: PairingSuite, s: str) -> G1Elem:
    try:
        return suite.decode_g1(bytes.fromhex(s))
    except ValueError as exc:
        raise ArtifactError(f"bad G1 element: {exc}") from None


def g2_from_hex(suite: PairingSuite, s: str) -> G2Elem:
    try:
        return suite.decode_g2(bytes.fromhex(s))
    except ValueError as exc:
        raise ArtifactError(f"bad G2 element: {exc}") from None


def scalar_hex(suite: PairingSuite, k: int) -> str:
    return suite.encode_scalar(k).hex()


def scalar_from_hex(suite: PairingSuite, s: str) -> int:
    return suite.decode_scalar(bytes.fromhex(s))


# -- documents ---------------------------------------------------------------

def dumps(kind: str, payload: Mapping[str, Any], as_json: bool = False) -> str:
    if kind not in KINDS:
        raise ArtifactError(f"unknown artifact kind {kind!r}")
    doc = {"kind": kind, "version": VERSION, "payload": payload}
    if as_json:
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    return yaml.safe_dump(doc, sort_keys=True, width=1 << 16)


def loads(text: str, kind: str) -> dict:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ArtifactError(f"unparseable artifact: {exc}") from None
    if not isinstance(doc, dict) or "kind" not in doc or "payload" not in doc:
        raise ArtifactError("not an artifact document")
    if doc["kind"] != kind:
        raise ArtifactError(f"expected a {kind} file, found {doc['kind']}")
    if doc.get("version") != VERSION:
        raise ArtifactError(f"unsupported {kind} version {doc.get('version')!r}")
    return doc["payload"]


def write(path: Union[str, Path], kind: str, payload: Mapping[str, Any], as_json: bool = False) -> None:
    Path(path).write_text(dumps(kind, payload, as_json))


def read(path: Union[str, Path], kind: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ArtifactError(f"{p} does not exist")
    return loads(p.read_text(), kind)


# -- payload codecs ----------------------------------------------------------

def params_payload(params: SystemParams) -> dict:
    return {"suite": params.suite.describe(), "P_pub": g1_hex(params.P_pub),
            "hash": params.hashes.describe()}


def params_from_payload(d: Mapping) -> SystemParams:
    try:
        suite = suite_from_description(d["suite"])
        h = d.get("hash", {})
        hashes = HashFamily(suite.q, h.get("digest", "sha256"), h.get("domain", "bdvtps").encode())
        return SystemParams(suite, g1_from_hex(suite, d["P_pub"]), hashes)
    except (KeyError, TypeError) as exc:
        raise ArtifactError(f"malformed params: {exc}") from None


def master_payload(params: SystemParams, master: MasterKey) -> dict:
    return {"s": scalar_hex(params.suite, master.s)}


def master_from_payload(params: SystemParams, d: Mapping) -> MasterKey:
    master = MasterKey.from_secret(params.q, scalar_from_hex(params.suite, d["s"]))
    if master.s * params.P != params.P_pub:
        raise ArtifactError("master key does not match P_pub")
    return master


def keypair_payload(params: SystemParams, key: KeyPair) -> dict:
    return {"identity": key.identity.decode(), "Q": key.Q, "S": g1_hex(key.S),
            "suite": params.suite.tag}


def keypair_from_payload(params: SystemParams, d: Mapping) -> KeyPair:
    try:
        return KeyPair(as_bytes(d["identity"]), int(d["Q"]) % params.q, g1_from_hex(params.suite, d["S"]))
    except (KeyError, TypeError) as exc:
        raise ArtifactError(f"malformed key pair: {exc}") from None


def delegation_payload(w: DelegationSig) -> dict:
    return {"U_w": g1_hex(w.U_w), "V_w": g1_hex(w.V_w)}


def delegation_from_payload(params: SystemParams, d: Mapping) -> DelegationSig:
    return DelegationSig(g1_from_hex(params.suite, d["U_w"]), g1_from_hex(params.suite, d["V_w"]))


def signature_payload(sig: AggregateSignature) -> dict:
    return {"m": sig.m.hex(), "V_w": g1_hex(sig.V_w), "warrant": sig.warrant.to_dict(),
            "U": g1_hex(sig.U), "V": g1_hex(sig.V), "participants": list(sig.participants),
            "n": sig.n}


def signature_from_payload(params: SystemParams, d: Mapping) -> AggregateSignature:
    try:
        return AggregateSignature(
            bytes.fromhex(d["m"]), g1_from_hex(params.suite, d["V_w"]), Warrant.from_dict(d["warrant"]),
            g1_from_hex(params.suite, d["U"]), g1_from_hex(params.suite, d["V"]),
            tuple(int(i) for i in d["participants"]), int(d["n"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactError(f"malformed signature: {exc}") from None
