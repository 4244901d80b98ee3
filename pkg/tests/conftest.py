import pytest

from bdvtps.idkgc import HashFamily, KeyPair, MasterKey, params_for
from bdvtps.pairing import TINY_CURVE, curve_suite, large_suite, tiny_suite


class StubHashes:
    """Fixed hash outputs so that the q=11 worked examples are reproducible."""

    def __init__(self, q, h1=None, h2=5, h3=3):
        self.q = q
        self.h1_table = dict(h1 or {})
        self.fixed_h2 = h2
        self.fixed_h3 = h3
        self.real = HashFamily(q)

    def h1(self, identity):
        ident = identity.decode() if isinstance(identity, bytes) else identity
        return self.h1_table.get(ident) or self.real.h1(identity)

    def h2(self, m, u):
        return self.fixed_h2

    def h3(self, m, u, y):
        return self.fixed_h3

    def describe(self):
        return {"digest": "stub", "domain": "test"}


@pytest.fixture(scope="session")
def tiny():
    return tiny_suite()


@pytest.fixture(scope="session")
def large():
    return large_suite()


@pytest.fixture(scope="session")
def curve():
    return curve_suite()


@pytest.fixture(scope="session")
def curve_tiny():
    return curve_suite(TINY_CURVE)


@pytest.fixture
def desk(tiny):
    """q=11, p=23, g=2, s=4, with H1(alice)=7, H1(proxy1)=2, H2=5, H3=3."""
    hashes = StubHashes(11, {"alice": 7, "proxy1": 2})
    master = MasterKey.from_secret(11, 4)
    return params_for(tiny, master, hashes), master


def keypair(params, identity, Q, S):
    return KeyPair(identity.encode(), Q, params.suite.g1(S))


def verifier_inputs(prun):
    """Public inputs a designated verifier reads off a finished run."""
    reg = prun.registry
    q_alice = reg.get("key-generation", "alice", "Q_ID")
    proxy_keys = [reg.get("key-generation", f"P{i}", "Q_ID") for i in range(1, prun.n + 1)]
    U_registry = {i: reg.get("secret-share", f"P{i}", "U") for i in range(1, prun.n + 1)}
    return q_alice, proxy_keys, U_registry
