"""Warrant signing and the proxy signing key shares derived from it.

Alice signs the warrant m_w with a short identity-based signature
w = (U_w, V_w).  Each proxy signer P_i checks w, turns it into a proxy
secret S_i = S_IDi + V_w and reshares S_i with a G1-valued polynomial

    g_i(x) = S_i + sum_{l>=1} b_il x^l.

The commitments are B_i0 = e(P_pub, S_i), which anyone can compute from
public data, and B_il = e(P_pub, b_il).  Publishing e(P, b_il) instead
would not satisfy the check e(P_pub, g_j(i)) = prod_k B_jk^(i^k), so the
P_pub base is used for every coefficient.  The key share is the sum of
the g_k(i) over all n dealers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple, Union

from .errors import ParameterError, SubshareRejected, WarrantRejected
from .idkgc import KeyPair, Seed, SystemParams, as_bytes, derive_scalar
from .pairing import G1Elem, G2Elem, gt_prodpow
from .vss import check_threshold


@dataclass(frozen=True)
class Warrant:
    """Delegation terms.  The order of ``proxies`` fixes indices 1..n.

    ``x`` binds the two designated verifiers (X = Q_IDB * Q_IDC mod q).
    """

    original: str
    proxies: Tuple[str, ...]
    t: int
    x: int
    terms: str = ""

    def __post_init__(self):
        if not self.original:
            raise ParameterError("warrant needs the original signer")
        if not self.proxies or len(set(self.proxies)) != len(self.proxies):
            raise ParameterError("warrant needs distinct proxy identities")
        if not 1 <= self.t <= len(self.proxies):
            raise ParameterError(f"threshold {self.t} invalid for {len(self.proxies)} proxies")

    @property
    def n(self) -> int:
        return len(self.proxies)

    def index_of(self, identity: Union[bytes, str]) -> int:
        ident = identity.decode() if isinstance(identity, bytes) else identity
        try:
            return self.proxies.index(ident) + 1
        except ValueError:
            raise ParameterError(f"{ident!r} is not a proxy signer in this warrant") from None

    def to_dict(self) -> dict:
        return {"original": self.original, "proxies": list(self.proxies), "t": self.t,
                "x": self.x, "terms": self.terms}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Warrant":
        return cls(str(d["original"]), tuple(str(p) for p in d["proxies"]), int(d["t"]),
                   int(d["x"]), str(d.get("terms", "")))

    def encode(self) -> bytes:
        """Canonical bytes m_w that get signed and hashed."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()


@dataclass(frozen=True)
class DelegationSig:
    U_w: G1Elem
    V_w: G1Elem


@dataclass(frozen=True)
class ProxySecret:
    owner: int
    S: G1Elem


@dataclass(frozen=True)
class ProxyPolynomial:
    index: int
    S: G1Elem
    coeffs: Tuple[G1Elem, ...]
    n: int

    @property
    def t(self) -> int:
        return len(self.coeffs) + 1

    def __call__(self, x: int) -> G1Elem:
        q = self.S.suite.q
        acc = self.S
        for l, b in enumerate(self.coeffs, start=1):
            acc = acc + pow(x, l, q) * b
        return acc


@dataclass(frozen=True)
class ProxyCommitments:
    index: int
    B: Tuple[G2Elem, ...]


@dataclass(frozen=True)
class ProxyKeyShare:
    holder: int
    SK: G1Elem
    C: G2Elem


def _message(warrant: Union[Warrant, bytes]) -> bytes:
    return warrant.encode() if isinstance(warrant, Warrant) else as_bytes(warrant)


def warrant_hash(params: SystemParams, warrant: Union[Warrant, bytes], U_w: G1Elem) -> int:
    return params.hashes.h2(_message(warrant), U_w)


def sign_warrant(params: SystemParams, alice: KeyPair, warrant: Union[Warrant, bytes], seed: Seed,
                 nonce: Optional[int] = None) -> DelegationSig:
    """U_w = r_w Q_A P, V_w = (r_w + h_w) S_A with h_w = H2(m_w, U_w)."""
    q = params.q
    r_w = derive_scalar(q, seed, "warrant-nonce", alice.identity) if nonce is None else nonce % q
    if r_w == 0:
        raise ParameterError("warrant nonce must be nonzero")
    U_w = (r_w * alice.Q % q) * params.P
    h_w = warrant_hash(params, warrant, U_w)
    return DelegationSig(U_w, ((r_w + h_w) % q) * alice.S)


def verify_warrant(params: SystemParams, q_alice: int, warrant: Union[Warrant, bytes],
                   w: DelegationSig) -> bool:
    try:
        h_w = warrant_hash(params, warrant, w.U_w)
        lhs = params.pair(params.P_pub, w.V_w)
        return lhs == params.pair(params.P, w.U_w + (h_w * q_alice % params.q) * params.P)
    except (TypeError, ValueError, AttributeError):
        return False


def derive_proxy_secret(params: SystemParams, me: KeyPair, q_alice: int, warrant: Warrant,
                        w: DelegationSig) -> ProxySecret:
    """S_i = S_IDi + V_w, refused unless the warrant signature verifies."""
    index = warrant.index_of(me.identity)
    if not verify_warrant(params, q_alice, warrant, w):
        raise WarrantRejected("verify_warrant", "alice")
    return ProxySecret(index, me.S + w.V_w)


def proxy_base_commitment(params: SystemParams, U_w: G1Elem, h_w: int, q_alice: int,
                          q_proxy: int) -> G2Elem:
    """B_i0 = e(P, U_w + (Q_IDPi + h_w Q_IDA) P), computable by anyone."""
    return params.pair(params.P, U_w + ((q_proxy + h_w * q_alice) % params.q) * params.P)


def deal_proxy(params: SystemParams, secret: ProxySecret, t: int, n: int, U_w: G1Elem, h_w: int,
               q_alice: int, q_proxy: int, seed: Seed,
               coeffs: Optional[Sequence[int]] = None):
    """Reshare S_i; ``coeffs`` gives the b_il as scalars times P (test seam)."""
    check_threshold(t, n, params.q)
    i = secret.owner
    if coeffs is None:
        coeffs = [derive_scalar(params.q, seed, "proxy", i, l) for l in range(1, t)]
    elif len(coeffs) != t - 1:
        raise ParameterError(f"expected {t - 1} coefficients, got {len(coeffs)}")
    b = tuple(c * params.P for c in coeffs)
    poly = ProxyPolynomial(i, secret.S, b, n)
    B0 = proxy_base_commitment(params, U_w, h_w, q_alice, q_proxy)
    return poly, ProxyCommitments(i, (B0,) + tuple(params.pair(params.P_pub, x) for x in b))


def proxy_subshare(poly: ProxyPolynomial, j: int) -> G1Elem:
    if not 1 <= j <= poly.n:
        raise ParameterError(f"recipient {j} outside 1..{poly.n}")
    return poly(j)


def verify_proxy_subshare(params: SystemParams, share: G1Elem, i: int,
                          commitments: ProxyCommitments) -> bool:
    try:
        rhs = gt_prodpow(params.suite, ((B, pow(i, k, params.q))
                                        for k, B in enumerate(commitments.B)))
        return bool(commitments.B) and params.pair(params.P_pub, share) == rhs
    except (TypeError, ValueError, AttributeError):
        return False


def combine_proxy_shares(params: SystemParams, holder: int, shares: Mapping[int, G1Elem],
                         n: int) -> ProxyKeyShare:
    """SK_Pi = sum_{k=1}^{n} g_k(i); publish C_i = e(P_pub, SK_Pi)."""
    missing = sorted(set(range(1, n + 1)) - set(shares))
    if missing:
        raise ParameterError(f"missing proxy subshares from dealers {missing}")
    if set(shares) - set(range(1, n + 1)):
        raise ParameterError("proxy subshare from a dealer outside 1..n")
    sk = params.suite.identity
    for k in sorted(shares):
        sk = sk + shares[k]
    return ProxyKeyShare(holder, sk, params.pair(params.P_pub, sk))


def receive_proxy_shares(params: SystemParams, holder: int, shares: Mapping[int, G1Elem],
                         commitments: Mapping[int, ProxyCommitments], n: int) -> ProxyKeyShare:
    for k in range(1, n + 1):
        if k not in shares:
            raise SubshareRejected("receive_proxy_subshare", k)
    for k in sorted(shares):
        com = commitments.get(k)
        if com is None or not verify_proxy_subshare(params, shares[k], holder, com):
            raise SubshareRejected("verify_proxy_subshare", k)
    return combine_proxy_shares(params, holder, shares, n)
