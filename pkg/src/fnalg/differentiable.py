"""Derivatives: finite-difference defaults and the calculus rules.

``derivative(f)`` returns the memoized derivative object of ``f``. Objects
registered with a closed form hand that back; everything else falls back on
central differences with the library step (0.001 unless reconfigured). The
rules below build derivatives of composites and pointwise combinations without
touching the operands' own derivative slots until a value is actually needed.
"""

import dataclasses

from . import config
from .core import Function, add, compose, describe, div, mul, neg, sub
from .errors import CapabilityError

__all__ = [
    "FDConfig",
    "chain_rule",
    "derivative",
    "fd_derivative",
    "inverse_derivative",
    "lazy_derivative",
    "nth_derivative",
    "value_and_derivative",
]


@dataclasses.dataclass(frozen=True)
class FDConfig:
    """Central-difference stencil: ``(f(x+step) - f(x-step)) / (2*step)``."""

    step: float = config.DEFAULT_FD_STEP

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"finite-difference step must be positive, got {self.step!r}")

    @property
    def divisor(self):
        return 2.0 * self.step

    @classmethod
    def current(cls):
        return cls(config.settings.fd_step)


def derivative(f):
    return f.derivative()


def nth_derivative(f, n):
    for _ in range(n):
        f = f.derivative()
    return f


def fd_derivative(f, cfg=None):
    """Central-difference derivative of any applicable ``f``.

    The result is differentiable again by the same stencil, so nesting gives
    higher derivatives. It also serves as the oracle for closed forms. Without
    ``cfg`` the step is the library setting at application time.
    """
    if not isinstance(f, Function):
        raise TypeError(f"{f!r} is not a Function")
    fa = f.apply
    if cfg is None:
        # follow the library step as it is when applied, so memoized
        # derivatives pick up a reconfigured step
        def body(x):
            h = config.settings.fd_step
            return (fa(x + h) - fa(x - h)) / (2.0 * h)
    else:
        h, divisor = cfg.step, cfg.divisor

        def body(x):
            return (fa(x + h) - fa(x - h)) / divisor

    d = Function(body, f"fd({describe(f)})", derivative=lambda: fd_derivative(d, cfg))
    return d


def lazy_derivative(f):
    """A stand-in for ``derivative(f)`` that defers building it until applied."""
    cell = f.derivative_cell
    if cell is None:
        raise CapabilityError(f, "differentiable")
    built = cell.peek()
    if built is not None:
        return built
    return Function(
        lambda x: f.derivative().apply(x),
        f"{describe(f)}'",
        derivative=lambda: lazy_derivative(f.derivative()),
    )


def chain_rule(f, g):
    """``(f ∘ g)' = (f' ∘ g) × g'``."""
    return mul(compose(lazy_derivative(f), g), lazy_derivative(g))


def sum_rule(f, g):
    return add(lazy_derivative(f), lazy_derivative(g))


def difference_rule(f, g):
    return sub(lazy_derivative(f), lazy_derivative(g))


def product_rule(f, g):
    return add(mul(lazy_derivative(f), g), mul(f, lazy_derivative(g)))


def quotient_rule(f, g):
    top = sub(mul(lazy_derivative(f), g), mul(f, lazy_derivative(g)))
    return div(top, mul(g, g))


def negation_rule(f):
    return neg(lazy_derivative(f))


def value_and_derivative(f, x):
    """``(f(x), f'(x))`` in one call, using the object's override if it has one."""
    return f.value_and_derivative(x)


def inverse_derivative(f):
    """``(f⁻¹)'(y) = 1 / f'(f⁻¹(y))`` for an invertible, differentiable ``f``.

    Opt-in helper for building the derivative of an inverse; nothing applies it
    automatically.
    """
    if not f.capabilities.both:
        missing = "invertible" if f.differentiable else "differentiable"
        raise CapabilityError(f, missing)
    return div(1.0, compose(lazy_derivative(f), f.inverse()))
