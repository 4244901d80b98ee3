"""(t, n) Feldman verifiable secret sharing inside the proxy group.

Every proxy signer deals a polynomial f_i of degree t - 1, publishes
commitments A_il = a_il P and hands f_i(j) to signer j.  Signer j checks
f_i(j) P = sum_k j^k A_ik and, once all n dealers pass, keeps
r_j = sum_i f_i(j) and publishes U_j = r_j P.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple

from .errors import ParameterError, SubshareRejected
from .idkgc import Seed, SystemParams, derive_scalar
from .pairing import G1Elem, g1_lincomb


def check_threshold(t: int, n: int, q: int) -> None:
    if not 1 <= t <= n:
        raise ParameterError(f"need 1 <= t <= n, got t={t}, n={n}")
    if n >= q:
        raise ParameterError(f"n={n} must be below the group order {q}")


def poly_eval(coeffs: Sequence[int], x: int, q: int) -> int:
    y = 0
    for c in reversed(coeffs):
        y = (y * x + c) % q
    return y


@dataclass(frozen=True)
class DealerPolynomial:
    index: int
    coeffs: Tuple[int, ...]
    n: int
    q: int

    @property
    def t(self) -> int:
        return len(self.coeffs)

    def __call__(self, x: int) -> int:
        return poly_eval(self.coeffs, x, self.q)


@dataclass(frozen=True)
class FeldmanCommitments:
    index: int
    points: Tuple[G1Elem, ...]


@dataclass(frozen=True)
class SubShare:
    dealer: int
    recipient: int
    value: int


@dataclass(frozen=True)
class SecretShare:
    holder: int
    r: int
    U: G1Elem


def commit(params: SystemParams, poly: DealerPolynomial) -> FeldmanCommitments:
    return FeldmanCommitments(poly.index, tuple(a * params.P for a in poly.coeffs))


def deal(params: SystemParams, t: int, n: int, dealer_index: int, seed: Seed,
         coeffs: Optional[Sequence[int]] = None):
    """Sample a degree t-1 polynomial with nonzero coefficients and commit to it.

    ``coeffs`` replaces the seeded coefficients (test seam).
    """
    check_threshold(t, n, params.q)
    if not 1 <= dealer_index <= n:
        raise ParameterError(f"dealer index {dealer_index} outside 1..{n}")
    if coeffs is None:
        coeffs = [derive_scalar(params.q, seed, "vss", dealer_index, l) for l in range(t)]
    elif len(coeffs) != t:
        raise ParameterError(f"expected {t} coefficients, got {len(coeffs)}")
    poly = DealerPolynomial(dealer_index, tuple(c % params.q for c in coeffs), n, params.q)
    return poly, commit(params, poly)


def subshare(poly: DealerPolynomial, j: int) -> SubShare:
    if not 1 <= j <= poly.n:
        raise ParameterError(f"recipient {j} outside 1..{poly.n}")
    return SubShare(poly.index, j, poly(j))


def verify_subshare(params: SystemParams, share: SubShare, commitments: FeldmanCommitments) -> bool:
    if share.dealer != commitments.index or not commitments.points:
        return False
    try:
        j = share.recipient
        expected = g1_lincomb(params.suite, ((pow(j, k, params.q), a)
                                             for k, a in enumerate(commitments.points)))
        return share.value * params.P == expected
    except (TypeError, ValueError):
        return False


def combine_shares(params: SystemParams, holder: int, subshares: Sequence[SubShare], n: int) -> SecretShare:
    """r_i = sum over all n dealers of f_k(i); U_i = r_i P."""
    by_dealer: Mapping[int, SubShare] = {s.dealer: s for s in subshares}
    if len(by_dealer) != len(subshares):
        raise ParameterError("duplicate dealer among subshares")
    missing = sorted(set(range(1, n + 1)) - set(by_dealer))
    if missing:
        raise ParameterError(f"missing subshares from dealers {missing}")
    if set(by_dealer) - set(range(1, n + 1)):
        raise ParameterError("subshare from a dealer outside 1..n")
    for s in subshares:
        if s.recipient != holder:
            raise ParameterError(f"subshare from dealer {s.dealer} is addressed to {s.recipient}")
    r = sum(s.value for s in subshares) % params.q
    return SecretShare(holder, r, r * params.P)


def receive_all(params: SystemParams, holder: int, subshares: Sequence[SubShare],
                commitments: Mapping[int, FeldmanCommitments], n: int) -> SecretShare:
    """Check every subshare against its dealer's commitments, then combine.

    Raises :class:`SubshareRejected` naming the first dealer whose subshare
    fails, in ascending dealer order; a dealer whose subshare never arrived
    is named the same way under the ``receive_subshare`` check.
    """
    got = {s.dealer for s in subshares}
    for k in range(1, n + 1):
        if k not in got:
            raise SubshareRejected("receive_subshare", k)
    for s in sorted(subshares, key=lambda s: s.dealer):
        com = commitments.get(s.dealer)
        if com is None or not verify_subshare(params, s, com):
            raise SubshareRejected("verify_subshare", s.dealer)
    return combine_shares(params, holder, subshares, n)
