"""Link-level simulation of physical-layer security for power-domain NOMA.

Submodules:

* :mod:`securenoma.channel` - path loss, Rayleigh fading, array responses
* :mod:`securenoma.noma` - rates, SIC decoding-order strategies, common outage
* :mod:`securenoma.secrecy` - secrecy capacity, ZF / AN precoding, beamfocusing
* :mod:`securenoma.covert` - radiometer detection and the Pinsker bound
* :mod:`securenoma.waveform` - QPSK, SC/SIC, WFRFT, frequency hopping, overlap
* :mod:`securenoma.harness` - configs, deterministic sweeps, CSV and the CLI
"""

from .rng import derive_trial_rng

__version__ = "0.1.0"

__all__ = ["derive_trial_rng", "__version__"]
