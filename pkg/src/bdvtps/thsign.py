"""Threshold proxy signing by a t-subset D of the proxy group.

Signing takes two rounds through a clerk:

1. every i in D sends (U_i, Y_i) where Y_i = e(X P, S_IDi)^(r_i); the clerk
   forms U = sum eta_i U_i, Y = prod Y_i^(eta_i) and H = H3(m, U, Y) and
   echoes H;
2. every i in D answers V_i = U_i + H SK_Pi; the clerk checks each share
   and outputs V = sum eta_i V_i.

Y uses r_i (not eta_i) as the inner exponent so that it equals what a
designated verifier can rebuild from the public U_i; see ``dvverify``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .delegation import Warrant
from .errors import ParameterError, PartialRejected
from .idkgc import SystemParams
from .pairing import G1Elem, G2Elem, g1_lincomb, gt_prodpow


def signer_set(D: Iterable[int], n: int) -> Tuple[int, ...]:
    D = tuple(D)
    if len(set(D)) != len(D):
        raise ParameterError(f"duplicate indices in signer set {D}")
    if not D or any(not 1 <= i <= n for i in D):
        raise ParameterError(f"signer set {D} must be a nonempty subset of 1..{n}")
    return tuple(sorted(D))


def lagrange_at_zero(q: int, D: Iterable[int]) -> Dict[int, int]:
    """eta_i = prod_{j != i} j / (j - i) mod q."""
    D = tuple(D)
    if len(set(D)) != len(D):
        raise ParameterError("duplicate indices")
    if any(i % q == 0 for i in D):
        raise ParameterError("index congruent to 0 mod q")
    eta = {}
    for i in D:
        num, den = 1, 1
        for j in D:
            if j != i:
                num = num * j % q
                den = den * (j - i) % q
        eta[i] = num * pow(den, -1, q) % q
    return eta


def compute_X(q: int, q_bob: int, q_cindy: int) -> int:
    if q_bob % q == 0 or q_cindy % q == 0:
        raise ParameterError("verifier public keys must be nonzero")
    return q_bob * q_cindy % q


@dataclass(frozen=True)
class YShare:
    index: int
    G_V: G2Elem
    Y: G2Elem


@dataclass(frozen=True)
class SignContext:
    m: bytes
    X: int
    D: Tuple[int, ...]
    eta: Mapping[int, int]
    U: G1Elem
    Y: G2Elem
    H: int


@dataclass(frozen=True)
class PartialSignature:
    index: int
    U: G1Elem
    V: G1Elem


@dataclass(frozen=True)
class AggregateSignature:
    m: bytes
    V_w: G1Elem
    warrant: Warrant
    U: G1Elem
    V: G1Elem
    participants: Tuple[int, ...]
    n: int


def make_y_share(params: SystemParams, i: int, S_id: G1Elem, r_i: int, X: int) -> YShare:
    g_v = params.pair((X % params.q) * params.P, S_id)
    return YShare(i, g_v, g_v ** r_i)


def build_context(params: SystemParams, m: bytes, D: Sequence[int], eta: Mapping[int, int],
                  U_shares: Mapping[int, G1Elem], Y_shares: Mapping[int, G2Elem],
                  X: int = 0) -> SignContext:
    D = tuple(sorted(D))
    missing = [i for i in D if i not in U_shares or i not in Y_shares or i not in eta]
    if missing:
        raise ParameterError(f"no round-1 data for signers {missing}")
    U = g1_lincomb(params.suite, ((eta[i], U_shares[i]) for i in D))
    Y = gt_prodpow(params.suite, ((Y_shares[i], eta[i]) for i in D))
    H = params.hashes.h3(m, U, Y)
    return SignContext(bytes(m), X, D, dict(eta), U, Y, H)


def partial_sign(ctx: SignContext, i: int, U_i: G1Elem, SK_i: G1Elem) -> PartialSignature:
    return PartialSignature(i, U_i, U_i + ctx.H * SK_i)


def clerk_verify_partial(params: SystemParams, sig: PartialSignature, C_i: G2Elem, H: int) -> bool:
    """e(P_pub, V_i) == e(P_pub, U_i) * C_i^H."""
    try:
        return params.pair(params.P_pub, sig.V) == params.pair(params.P_pub, sig.U) * C_i ** H
    except (TypeError, ValueError, AttributeError):
        return False


def aggregate(params: SystemParams, ctx: SignContext, warrant: Warrant, V_w: G1Elem,
              partials: Mapping[int, PartialSignature], commitments: Mapping[int, G2Elem],
              n: int) -> AggregateSignature:
    """Clerk side of round 2.  Raises PartialRejected naming the first bad signer."""
    for i in ctx.D:
        sig = partials.get(i)
        if sig is None or sig.index != i or i not in commitments:
            raise PartialRejected("clerk_verify_partial", i, f"no usable partial from signer {i}")
        if not clerk_verify_partial(params, sig, commitments[i], ctx.H):
            raise PartialRejected("clerk_verify_partial", i)
    V = g1_lincomb(params.suite, ((ctx.eta[i], partials[i].V) for i in ctx.D))
    return AggregateSignature(ctx.m, V_w, warrant, ctx.U, V, ctx.D, n)
