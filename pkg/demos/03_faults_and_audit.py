"""
Injected faults and the confinement audit
=========================================

Each fault kind is caught at a fixed stage.  Dealers and signers that
cheat are named; a tampered Y share or a short quorum only shows up as a
rejection at the verifiers.
"""

from bdvtps import FaultSpec, ProtocolConfig, confinement_audit, run
from bdvtps.harness import FAULT_KINDS, ProtocolRun

cfg = ProtocolConfig(t=2, n=3, suite="transparent-large", seed="faults")
targets = {"BadVssSubshare": 2, "BadProxySubshare": 3, "BadPartialSig": 2, "BadYShare": 1,
           "SmallQuorum": None, "WrongVerifierKey": "cindy"}

for kind in FAULT_KINDS:
    tr = run(cfg, FaultSpec(kind, targets[kind]))
    if tr.abort:
        a = tr.abort
        print(f"{kind:18s} abort at {a['stage']} ({a['check']}), culprit {a['culprit']}")
    else:
        print(f"{kind:18s} " + ", ".join(f"{w}: {d}" for w, d in tr.decisions.items()))

# an honest run keeps every secret with its owner
report = confinement_audit(run(cfg))
print("honest audit:", report["holds_checked"], "holdings,", len(report["violations"]), "violations")


# a run that routes one proxy subshare to Alice by mistake
class Leaky(ProtocolRun):
    def _route(self, recipient, kind):
        return "alice" if (kind, recipient) == ("proxy-subshare", "P2") else recipient


report = confinement_audit(Leaky(cfg).execute())
for v in report["violations"]:
    print("leak:", v["party"], "held", v["secret"], "of", v["owner"])
