"""Exception hierarchy shared by every fnalg module."""


class FnAlgError(Exception):
    """Base class for all library errors."""


class DomainError(FnAlgError, ArithmeticError):
    """A function was applied outside the set of points where it is defined."""

    def __init__(self, function, x, reason=""):
        self.function = function
        self.x = x
        self.reason = reason
        name = getattr(function, "name", None) or str(function)
        msg = f"{name} is undefined at x={x!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class CapabilityError(FnAlgError, TypeError):
    """An operation needs a capability tier the object does not carry."""

    def __init__(self, function, tier, detail=""):
        self.function = function
        self.tier = tier
        self.detail = detail
        name = getattr(function, "name", None) or str(function)
        msg = f"{name} is not {tier}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotAFunctionError(FnAlgError, TypeError):
    def __init__(self, value):
        self.value = value
        super().__init__(f"{value!r} is not a Function")


class InverseValidationError(FnAlgError, ValueError):
    """A proposed inverse failed its roundtrip check."""

    def __init__(self, law, worst_x, error, tol):
        self.law = law
        self.worst_x = worst_x
        self.error = error
        self.tol = tol
        super().__init__(
            f"{law} roundtrip failed: worst sample x={worst_x!r}, "
            f"error={error:.3g} > tol={tol:.3g}"
        )


class DimensionError(FnAlgError, ValueError):
    pass


class SingularMatrixError(FnAlgError, ArithmeticError):
    pass


class ConvergenceError(FnAlgError, ArithmeticError):
    def __init__(self, previous, last, refinements):
        self.previous = previous
        self.last = last
        self.refinements = refinements
        super().__init__(
            f"Simpson estimates did not converge after {refinements} refinements: "
            f"{previous!r} vs {last!r}"
        )


class InsufficientDataError(FnAlgError, ValueError):
    pass


class DegenerateError(FnAlgError, ValueError):
    """A computed quantity collapsed to zero where a positive value is required."""


class NotFoundError(FnAlgError, KeyError):
    def __init__(self, key, available):
        self.key = key
        self.available = list(available)
        super().__init__(f"unknown function {key!r}; available: {', '.join(self.available)}")

    def __str__(self):
        return self.args[0]
