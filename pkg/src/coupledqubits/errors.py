"""Exception and warning types shared across the package."""


class DetuningConstraintViolation(ValueError):
    """Two-qubit detunings do not satisfy d1 + d3 == d2 + d4."""


class StrongCouplingWarning(UserWarning):
    """The three-qubit ladder reduction is used outside the strong-coupling regime."""


class StepFailure(RuntimeError):
    """The ODE stepper could not meet its tolerance."""


class DimensionTooLarge(ValueError):
    pass


class UnknownBasis(ValueError):
    pass


class BothZero(ValueError):
    """Mixing angle requested with both Rabi frequencies equal to zero."""


class DimensionMismatch(ValueError):
    pass
