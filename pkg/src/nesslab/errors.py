"""Exception hierarchy shared by all nesslab modules."""


class NessLabError(Exception):
    """Base class for every error raised by nesslab."""


class NumericalError(NessLabError):
    """A numerical routine could not produce a trustworthy result."""


class DimensionMismatch(NessLabError, ValueError):
    pass


class NonHermitianInput(NessLabError, ValueError):
    pass


class NoConvergence(NumericalError):
    pass


class OverflowRisk(NumericalError):
    pass


class NotPSD(NumericalError, ValueError):
    pass


class NotFaithful(NumericalError, ValueError):
    """State has eigenvalues too small for the entropy formulas."""


class OutOfTable(NessLabError, ValueError):
    pass


class CutoffTooSmall(NessLabError, ValueError):
    pass


class EmptyInput(NessLabError, ValueError):
    pass


class NonRealValue(NumericalError):
    pass


class NonRealFlux(NonRealValue):
    pass


class NoStationaryState(NumericalError):
    pass


class NonUniqueStationaryState(NumericalError):
    """Kernel of the generator is not one-dimensional."""

    def __init__(self, kernel_dim: int):
        super().__init__(f"stationary state is not unique: kernel dimension {kernel_dim}")
        self.kernel_dim = kernel_dim


class ConfigError(NessLabError, ValueError):
    pass
