"""Threshold proxy signing with identity-based keys and two designated verifiers.

Module map:

- :mod:`bdvtps.pairing` symmetric pairing suites (transparent oracle, Tate pairing)
- :mod:`bdvtps.idkgc` key generating center and hash family
- :mod:`bdvtps.vss` Feldman VSS among proxy signers
- :mod:`bdvtps.delegation` warrant signature and proxy key shares
- :mod:`bdvtps.thsign` threshold signing
- :mod:`bdvtps.dvverify` designated-verifier verification
- :mod:`bdvtps.harness` deterministic protocol simulator
- :mod:`bdvtps.cli` command-line front end
"""

from .harness import FaultSpec, ProtocolConfig, confinement_audit, run
from .pairing import curve_suite, large_suite, named_suite, tiny_suite

__all__ = ["FaultSpec", "ProtocolConfig", "confinement_audit", "run", "curve_suite",
           "large_suite", "named_suite", "tiny_suite"]
__version__ = "0.1.0"
