"""Exception types shared across the package."""


class NmqwalkError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(NmqwalkError, ValueError):
    """Operand dimensions are inconsistent with the declared factorization."""


class KernelRangeError(NmqwalkError, ValueError):
    """A decoherence kernel value left the physical range [-1, 1]."""


class NonInvertibleMapError(NmqwalkError, ValueError):
    """The dynamical map cannot be inverted because the kernel vanishes."""


class EdgeAmplitudeError(NmqwalkError, RuntimeError):
    """The walker reached the lattice boundary; the lattice was sized wrong."""


class FitError(NmqwalkError, RuntimeError):
    """Nonlinear fit failed to converge."""


class ConfigError(NmqwalkError, ValueError):
    """Experiment configuration is malformed or violates a parameter range."""
