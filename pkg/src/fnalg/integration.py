"""Definite integrals by composite Simpson's rule, and antiderivative objects."""

import dataclasses

from . import config
from .core import Function, describe
from .errors import ConvergenceError, NotAFunctionError

__all__ = ["QuadratureConfig", "antiderivative", "definite_integral", "simpson"]


@dataclasses.dataclass(frozen=True)
class QuadratureConfig:
    panels: int = config.DEFAULT_QUAD_PANELS
    max_refinements: int = config.DEFAULT_QUAD_MAX_REFINEMENTS
    abs_tol: float = config.DEFAULT_QUAD_TOL

    def __post_init__(self):
        if self.panels < 2 or self.panels % 2:
            raise ValueError(f"panel count must be even and >= 2, got {self.panels}")
        if self.max_refinements < 0:
            raise ValueError("max_refinements must be non-negative")
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")

    @classmethod
    def current(cls):
        s = config.settings
        return cls(s.quad_panels, s.quad_max_refinements, s.quad_tol)


def simpson(f, lo, hi, panels):
    """Composite Simpson's rule with a fixed, even number of panels."""
    if panels < 2 or panels % 2:
        raise ValueError(f"panel count must be even and >= 2, got {panels}")
    fa = f.apply if isinstance(f, Function) else f
    h = (hi - lo) / panels
    odd = sum(fa(lo + i * h) for i in range(1, panels, 2))
    even = sum(fa(lo + i * h) for i in range(2, panels, 2))
    return h * (fa(lo) + fa(hi) + 4.0 * odd + 2.0 * even) / 3.0


def definite_integral(f, lo, hi, cfg=None, *, closed_form=True):
    """Integral of ``f`` over ``[lo, hi]``.

    A registered closed-form antiderivative ``G`` short-circuits to
    ``G(hi) - G(lo)`` unless ``closed_form=False``. Otherwise the panel count
    doubles from ``cfg.panels`` until two successive Simpson estimates differ
    by at most ``cfg.abs_tol``; the finer estimate is returned.

    Raises:
        ConvergenceError: still apart after ``cfg.max_refinements`` doublings.
        DomainError: ``f`` is undefined somewhere on a sample point.
    """
    if not isinstance(f, Function):
        raise NotAFunctionError(f)
    lo, hi = float(lo), float(hi)
    if lo == hi:
        return 0.0
    if closed_form:
        G = f.closed_form_antiderivative
        if G is not None:
            return G.apply(hi) - G.apply(lo)
    if hi < lo:
        return -definite_integral(f, hi, lo, cfg, closed_form=closed_form)
    cfg = cfg or QuadratureConfig.current()
    fa = f.apply

    n = cfg.panels
    h = (hi - lo) / n
    ends = fa(lo) + fa(hi)
    odd = sum(fa(lo + i * h) for i in range(1, n, 2))
    even = sum(fa(lo + i * h) for i in range(2, n, 2))
    estimate = h * (ends + 4.0 * odd + 2.0 * even) / 3.0
    previous = float("nan")
    for _ in range(cfg.max_refinements):
        # every old sample point becomes an even point of the finer grid
        even += odd
        n *= 2
        h = (hi - lo) / n
        odd = sum(fa(lo + i * h) for i in range(1, n, 2))
        previous, estimate = estimate, h * (ends + 4.0 * odd + 2.0 * even) / 3.0
        if abs(estimate - previous) <= cfg.abs_tol:
            return estimate
    raise ConvergenceError(previous, estimate, cfg.max_refinements)


def antiderivative(f, base=0.0, cfg=None):
    """``F(x) = ∫_base^x f``, built without evaluating ``f``.

    ``F`` is differentiable with derivative exactly ``f`` and can itself be
    integrated again. Each application integrates afresh.
    """
    if not isinstance(f, Function):
        raise NotAFunctionError(f)
    base = float(base)
    G = None

    def body(x):
        nonlocal G
        if G is None:
            G = f.closed_form_antiderivative or False
        if G:
            return G.apply(x) - G.apply(base)
        return definite_integral(f, base, x, cfg)

    return Function(body, f"int({describe(f)},{base:g},x)", derivative=f)
