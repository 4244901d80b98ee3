"""Verification by either of the two designated verifiers.

A verifier holding (Q_self, S_self) recovers the peer's public key from X,
rebuilds

    Y* = e(Q_peer S_self, sum_{i in D} eta_i Q_IDPi U_i)

which equals the signers' Y because Q_peer S_self = s^-1 X P for both
Bob and Cindy, derives H = H3(m, U, Y*) and accepts iff

    e(P_pub, V) == e(P_pub, U + n H V_w) * e(P, (sum_k Q_IDPk) P)^H

with the key sum taken over all n proxy signers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import ParameterError
from .idkgc import KeyPair, SystemParams
from .pairing import G1Elem, G2Elem, g1_lincomb
from .thsign import AggregateSignature, lagrange_at_zero, signer_set

U_MISMATCH = "U-mismatch"
REGISTRY_MISSING = "registry-missing"
PAIRING_INEQUALITY = "pairing-inequality"
MALFORMED_PARTICIPANTS = "malformed-participants"
WARRANT_MISMATCH = "warrant-mismatch"


@dataclass(frozen=True)
class Decision:
    accept: bool
    reason: Optional[str] = None

    def __post_init__(self):
        if self.accept == (self.reason is not None):
            raise ValueError("a reason is required exactly when rejecting")

    def __str__(self) -> str:
        return "accept" if self.accept else f"reject ({self.reason})"


ACCEPT = Decision(True)


def recover_peer(q: int, q_self: int, X: int) -> int:
    if q_self % q == 0:
        raise ParameterError("own public key must be nonzero")
    return pow(q_self, -1, q) * X % q


def compute_y_star(params: SystemParams, me: KeyPair, q_peer: int, D: Sequence[int],
                   eta: Mapping[int, int], U_registry: Mapping[int, G1Elem],
                   proxy_keys: Sequence[int]) -> G2Elem:
    """``proxy_keys[i - 1]`` is Q_IDPi."""
    missing = [i for i in D if i not in U_registry]
    if missing:
        raise KeyError(f"registry lacks U_i for {missing}")
    q = params.q
    W = g1_lincomb(params.suite, ((eta[i] * proxy_keys[i - 1] % q, U_registry[i]) for i in D))
    return params.pair((q_peer % q) * me.S, W)


def final_equation(params: SystemParams, sig: AggregateSignature, H: int,
                   proxy_keys: Sequence[int]) -> bool:
    q = params.q
    lhs = params.pair(params.P_pub, sig.V)
    key_sum = sum(proxy_keys) % q
    rhs = (params.pair(params.P_pub, sig.U + (sig.n * H % q) * sig.V_w)
           * params.pair(params.P, key_sum * params.P) ** H)
    return lhs == rhs


def verify(params: SystemParams, sig: AggregateSignature, q_alice: int, proxy_keys: Sequence[int],
           me: KeyPair, X: int, U_registry: Mapping[int, G1Elem]) -> Decision:
    q = params.q
    warrant = sig.warrant
    hashes = params.hashes
    if (sig.n != warrant.n or len(proxy_keys) != sig.n
            or hashes.h1(warrant.original.encode()) != q_alice % q
            or any(hashes.h1(p.encode()) != k % q for p, k in zip(warrant.proxies, proxy_keys))):
        return Decision(False, WARRANT_MISMATCH)
    try:
        D = signer_set(sig.participants, sig.n)
    except ParameterError:
        return Decision(False, MALFORMED_PARTICIPANTS)
    if tuple(sig.participants) != D:
        return Decision(False, MALFORMED_PARTICIPANTS)
    eta = lagrange_at_zero(q, D)
    if any(i not in U_registry for i in D):
        return Decision(False, REGISTRY_MISSING)
    U = g1_lincomb(params.suite, ((eta[i], U_registry[i]) for i in D))
    if U != sig.U:
        return Decision(False, U_MISMATCH)
    q_peer = recover_peer(q, me.Q, X)
    y_star = compute_y_star(params, me, q_peer, D, eta, U_registry, proxy_keys)
    H = hashes.h3(sig.m, sig.U, y_star)
    if not final_equation(params, sig, H, proxy_keys):
        return Decision(False, PAIRING_INEQUALITY)
    return ACCEPT
