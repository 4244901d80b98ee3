"""Key generating center: master key, hash family and identity key extraction."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Union

from .errors import ParameterError
from .pairing import G1Elem, G2Elem, PairingSuite

Seed = Union[bytes, str, int]

H1, H2, H3 = "H1", "H2", "H3"
_ARITY = {H1: (), H2: (G1Elem,), H3: (G1Elem, G2Elem)}


def as_bytes(value: Seed) -> bytes:
    if isinstance(value, bytes):
        return value
    if isinstance(value, str):
        return value.encode()
    if isinstance(value, int):
        return value.to_bytes(max(1, (value.bit_length() + 8) // 8), "big", signed=True)
    raise TypeError(f"cannot use {type(value).__name__} as a byte string")


def _frame(*parts: bytes) -> bytes:
    return b"".join(len(p).to_bytes(4, "big") + p for p in parts)


def derive_scalar(q: int, seed: Seed, *labels: Seed) -> int:
    """Deterministic, near-uniform scalar in [1, q) from a seed and labels.

    128 surplus bits keep the modular bias below 2^-128.
    """
    width = (q.bit_length() + 7) // 8 + 16
    data = _frame(b"bdvtps/rand", as_bytes(seed), *(as_bytes(x) for x in labels))
    return int.from_bytes(hashlib.shake_256(data).digest(width), "big") % (q - 1) + 1


@dataclass(frozen=True)
class HashFamily:
    """H1, H2, H3 realised as one digest with per-function domain tags.

    Inputs are length-prefixed; a zero result is re-hashed with an
    incrementing counter byte so outputs always lie in [1, q).
    """

    q: int
    digest: str = "sha256"
    domain: bytes = b"bdvtps"

    def _hash(self, tag: str, parts: list) -> int:
        body = _frame(self.domain + b"/" + tag.encode(), *parts)
        counter = 0
        while True:
            h = hashlib.new(self.digest, body + bytes([counter])).digest()
            value = int.from_bytes(h, "big") % self.q
            if value:
                return value
            counter += 1
            if counter > 255:
                raise ArithmeticError("hash output stuck at zero")

    def h1(self, identity: bytes) -> int:
        return self._hash(H1, [as_bytes(identity)])

    def h2(self, message: bytes, u: G1Elem) -> int:
        return self._hash(H2, [as_bytes(message), bytes(u)])

    def h3(self, message: bytes, u: G1Elem, y: G2Elem) -> int:
        return self._hash(H3, [as_bytes(message), bytes(u), bytes(y)])

    def describe(self) -> dict:
        return {"digest": self.digest, "domain": self.domain.decode()}


@dataclass(frozen=True)
class MasterKey:
    s: int
    s_inv: int

    @classmethod
    def from_secret(cls, q: int, s: int) -> "MasterKey":
        s %= q
        if s == 0:
            raise ParameterError("master key must be nonzero")
        return cls(s, pow(s, -1, q))


@dataclass(frozen=True)
class SystemParams:
    suite: PairingSuite
    P_pub: G1Elem
    hashes: HashFamily = field(compare=False)

    @property
    def q(self) -> int:
        return self.suite.q

    @property
    def P(self) -> G1Elem:
        return self.suite.P

    def pair(self, a: G1Elem, b: G1Elem) -> G2Elem:
        return self.suite.pair(a, b)


@dataclass(frozen=True)
class KeyPair:
    identity: bytes
    Q: int
    S: G1Elem

    def public(self) -> tuple:
        return (self.identity, self.Q)


def params_for(suite: PairingSuite, master: MasterKey, hashes: HashFamily | None = None) -> SystemParams:
    return SystemParams(suite, master.s * suite.P, hashes or HashFamily(suite.q))


def setup(suite: PairingSuite, seed: Seed, hashes: HashFamily | None = None):
    """Draw the master key from ``seed`` and publish P_pub = s P."""
    if not as_bytes(seed):
        raise ParameterError("setup needs a nonempty seed")
    master = MasterKey.from_secret(suite.q, derive_scalar(suite.q, seed, "master-key"))
    return params_for(suite, master, hashes), master


def hash_to_scalar(params: SystemParams, tag: str, *inputs) -> int:
    """Evaluate H1/H2/H3 after checking the tag's arity and input types."""
    if tag not in _ARITY:
        raise ParameterError(f"unknown hash tag {tag!r}")
    extra = _ARITY[tag]
    if len(inputs) != 1 + len(extra):
        raise ParameterError(f"{tag} takes {1 + len(extra)} inputs, got {len(inputs)}")
    if not isinstance(inputs[0], (bytes, str)):
        raise ParameterError(f"{tag} needs a byte string first")
    for value, kind in zip(inputs[1:], extra):
        if not isinstance(value, kind):
            raise ParameterError(f"{tag} expects {kind.__name__}, got {type(value).__name__}")
    h = params.hashes
    return {H1: h.h1, H2: h.h2, H3: h.h3}[tag](*inputs)


def extract(params: SystemParams, master: MasterKey, identity: Union[bytes, str]) -> KeyPair:
    """Q_ID = H1(ID) and S_ID = s^-1 Q_ID P."""
    ident = as_bytes(identity)
    if not ident:
        raise ParameterError("identity must be nonempty")
    q_id = params.hashes.h1(ident)
    return KeyPair(ident, q_id, (master.s_inv * q_id % params.q) * params.P)


def key_is_sane(params: SystemParams, key: KeyPair) -> bool:
    """e(P_pub, S_ID) == e(P, P)^Q_ID."""
    return params.pair(params.P_pub, key.S) == params.suite.gt() ** key.Q
