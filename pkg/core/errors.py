"""
Error hierarchy for dispersia.

Every error carries a `detail` message and the process `exit_code` the CLI
reports, the same way an HTTP layer pairs a status code with a detail.
"""


class DispersiaError(Exception):
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigError(DispersiaError):
    exit_code = 2


# --- Geometry preconditions ---

class GeometryError(DispersiaError, ValueError):
    exit_code = 2


class CoincidentPointError(GeometryError):
    pass


class NonPositiveHeightError(GeometryError):
    pass


class OutOfGapError(GeometryError):
    pass


class InsideSphereError(GeometryError):
    pass


class StencilDomainError(GeometryError):
    pass


# --- Numerics ---

class BesselDomainError(DispersiaError, ValueError):
    exit_code = 2


class ConvergenceError(DispersiaError):
    exit_code = 3


class VerificationError(DispersiaError):
    exit_code = 1
