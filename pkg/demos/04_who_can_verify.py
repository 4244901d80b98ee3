"""
Who can verify?
===============

Bob and Cindy accept.  A key the KGC never issued is rejected, except for
the chance that the hash still lands on the right value, which is large
when q is tiny.  Any key the KGC did issue rebuilds the same Y, so it
verifies too.
"""

from bdvtps import ProtocolConfig
from bdvtps.dvverify import verify
from bdvtps.harness import ProtocolRun, random_keypair
from bdvtps.idkgc import extract


def public_inputs(prun):
    reg = prun.registry
    keys = [reg.get("key-generation", f"P{i}", "Q_ID") for i in range(1, prun.n + 1)]
    U = {i: reg.get("secret-share", f"P{i}", "U") for i in range(1, prun.n + 1)}
    return reg.get("key-generation", "alice", "Q_ID"), keys, U


for suite in ("transparent", "transparent-large"):
    accepted = 0
    for k in range(200):
        prun = ProtocolRun(ProtocolConfig(suite=suite, seed=k, message=f"m{k}", terms=f"t{k}"))
        prun.execute()
        q_alice, keys, U = public_inputs(prun)
        rogue = random_keypair(prun.params, f"rogue {k}")
        accepted += verify(prun.params, prun.signature, q_alice, keys, rogue, prun.warrant.x, U).accept
    print(f"{suite:18s} q={prun.params.q}: rogue key accepted {accepted}/200")

# a third party holding a genuine extracted key
master = prun.state["kgc"]["master-key"]["kgc"]
dave = extract(prun.params, master, "dave@example.org")
print("dave:", verify(prun.params, prun.signature, q_alice, keys, dave, prun.warrant.x, U))
