"""Relative jet sufficiency checks for polynomial map germs."""

from ._jetcheck import (
    CapabilityError,
    ConfigError,
    EstimationError,
    InputError,
    JetcheckError,
    PolyMap,
    Report,
    ShellSample,
    Sigma,
    Thresholds,
    __version__,
    analyze,
    analyze_file,
    check,
    dual_apply,
    eta,
    eta_tilde,
    gram_det,
    gram_ratio,
    jacobian_minor_sum,
    kuo_distance,
    rabier_nu,
    sample_shells,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
