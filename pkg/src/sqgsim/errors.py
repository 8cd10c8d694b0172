"""Exception hierarchy shared across the solver, experiments and CLI.

Each CLI-visible failure maps onto one machine-readable category so batch
drivers can branch on exit codes instead of parsing tracebacks.
"""


class SQGError(Exception):
    """Base class for all package errors."""

    category = "error"


class ConfigError(SQGError):
    """Invalid configuration, datum parameters or resolution request."""

    category = "config_error"


class CFLViolationError(SQGError):
    """Advective CFL bound violated; carries the offending time."""

    category = "cfl_violation"

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (t={t:g})")
        self.t = t


class BlowUpError(SQGError):
    """Non-finite state encountered; carries the failing time."""

    category = "blow_up"

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (t={t:g})")
        self.t = t


class PaddingError(SQGError):
    """Requested band-limits cannot be handled alias-free within the grid cap."""

    category = "config_error"


class CheckpointFormatError(SQGError):
    """Checkpoint file is corrupt or not in the SQGF1 format."""

    category = "io_error"
