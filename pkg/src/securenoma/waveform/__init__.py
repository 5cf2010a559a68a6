"""Baseband chain of the NOMA / covert prototypes."""

from .hopping import HopPlan, fh_carrier, fh_waveform, hop_sequence
from .iqfile import read_iq, write_iq
from .modulation import (
    awgn,
    qpsk_demod,
    qpsk_mod,
    sc_transmit,
    sic_receive,
    sic_second_stage,
)
from .overlap import OverlapReport, overlap_analysis
from .wfrft import WfrftParams, wfrft, wfrft_weights

__all__ = [
    "HopPlan",
    "OverlapReport",
    "WfrftParams",
    "awgn",
    "fh_carrier",
    "fh_waveform",
    "hop_sequence",
    "overlap_analysis",
    "qpsk_demod",
    "qpsk_mod",
    "read_iq",
    "sc_transmit",
    "sic_receive",
    "sic_second_stage",
    "wfrft",
    "wfrft_weights",
    "write_iq",
]
