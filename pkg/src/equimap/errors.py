"""Exception hierarchy shared across the package."""


class EquimapError(Exception):
    """Base class for every error this package raises deliberately."""


class ShapeError(EquimapError):
    """Operand dimensions do not fit the operation."""


class ContractViolation(EquimapError):
    """An input breaks a documented precondition, e.g. a non-Hermitian
    matrix where a Hermitian one is required, or a callable that fails
    the linearity probe."""


class CapacityError(EquimapError):
    """A request exceeds the supported desk-scale size caps."""


class ParameterError(EquimapError):
    """A parameter is outside its documented range, or a spec string
    does not parse."""
