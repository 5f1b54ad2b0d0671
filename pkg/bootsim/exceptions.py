"""
Defines exceptions the simulator may raise

Every exception carries the exit code the CLI reports for it: 2 for configuration problems, 1 for numerical
failures during a run.
"""


class SimulationError(Exception):
    def __init__(self, message: str = "Simulation failed", code: int = 1):
        super().__init__(message)
        self.code = code
        self._message = message

    def get_message(self):
        return self._message


class ConfigError(SimulationError):
    def __init__(self, message: str = "Invalid configuration"):
        super().__init__(message, code=2)


class FieldTypeError(ConfigError):
    def __init__(self, key: str, message: str = "Data type error for field {0}"):
        self.key = key
        super().__init__(message.format(key))


class FieldMissingError(ConfigError):
    def __init__(self, key: str, message: str = "Field {0} is missing"):
        self.key = key
        super().__init__(message.format(key))


class ParameterError(ConfigError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"Invalid value for {key}: {message}")


class UnsupportedDgpError(ConfigError):
    def __init__(self, kind: str, operation: str = "conditional simulation"):
        self.kind = kind
        super().__init__(f"DGP \"{kind}\" does not support {operation}")


class SingularDesignError(SimulationError):
    def __init__(self, message: str = "Regressor matrix is rank deficient"):
        super().__init__(message)


class DegenerateDesignError(SimulationError):
    def __init__(self, message: str = "Regressor moment matrix is not positive"):
        super().__init__(message)


class DegenerateSplitError(SimulationError):
    def __init__(self, message: str = "Break split leaves too few observations in a segment"):
        super().__init__(message)


class DegenerateNormalizationError(SimulationError):
    def __init__(self, message: str = "CUSUM normalization is zero"):
        super().__init__(message)


class InfiniteStatisticError(SimulationError):
    def __init__(self, message: str = "Unrestricted fit is exact, F statistic is infinite"):
        super().__init__(message)


class ReplicationError(SimulationError):
    """
    Wraps a failure raised inside a Monte Carlo replication with its coordinates, so a run never silently
    drops a replication.
    """

    def __init__(self, coordinates: tuple[int, ...], cause: SimulationError):
        self.coordinates = coordinates
        self.cause = cause
        where = ", ".join(str(c) for c in coordinates)
        super().__init__(f"Replication ({where}) failed: {cause.get_message()}", code=cause.code)
