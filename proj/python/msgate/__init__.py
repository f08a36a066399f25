"""Python access to the msgate simulator core."""

import os as _os
from pathlib import Path as _Path

_here = _Path(__file__).resolve().parent
# wheels ship the presets next to the module
if (_here / "presets").is_dir():
    _os.environ.setdefault("MSGATE_PRESET_DIR", str(_here / "presets"))

from ._core import (  # noqa: E402
    ConfigError,
    ConvergenceError,
    DomainError,
    TruncationError,
    __version__,
    bell_fidelity,
    correction_table,
    crosstalk_estimate,
    fit_parity,
    load_preset,
    ms_unitary,
    parity_sigma,
    resolve_config,
    run,
    shaped_pulse_crosstalk,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "TruncationError",
    "__version__",
    "bell_fidelity",
    "correction_table",
    "crosstalk_estimate",
    "fit_parity",
    "load_preset",
    "ms_unitary",
    "parity_sigma",
    "resolve_config",
    "run",
    "shaped_pulse_crosstalk",
]
