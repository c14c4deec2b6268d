"""Sleep-spike nonce leakage simulator and lattice key recovery."""

from ._sleepspike import (
    InvalidArgument,
    activity,
    curve_names,
    curve_order,
    engine_names,
    extract_peak,
    figure,
    is_lll_reduced,
    keygen,
    lll_reduce,
    moving_average,
    oracle_attack,
    public_key,
    scalar_mul,
    select_low_spike,
    sign,
    simulate,
    verify,
)

__all__ = [
    "InvalidArgument",
    "activity",
    "curve_names",
    "curve_order",
    "engine_names",
    "extract_peak",
    "figure",
    "is_lll_reduced",
    "keygen",
    "lll_reduce",
    "moving_average",
    "oracle_attack",
    "public_key",
    "scalar_mul",
    "select_low_spike",
    "sign",
    "simulate",
    "verify",
]
