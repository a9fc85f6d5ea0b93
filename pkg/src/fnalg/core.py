"""Function objects: application, composition and pointwise arithmetic.

A :class:`Function` wraps a scalar evaluation rule together with a fixed set of
capabilities. Every function can be applied and composed. Some also carry a
registered inverse, a lazily built derivative, or both. Composition and
arithmetic propagate those capabilities::

    >>> from fnalg.catalog import lookup
    >>> exp, succ = lookup("exp").object, lookup("succ").object
    >>> h = exp @ succ               # x -> exp(x + 1)
    >>> h.capabilities.tier
    'invertible+differentiable'
    >>> round(h.inverse()(h(2.0)), 12)
    2.0

Objects are immutable once they escape their constructor; the only internal
state that changes afterwards is the memoized derivative slot.
"""

import enum
import itertools
import math
import numbers
from functools import lru_cache
from typing import NamedTuple

from .errors import CapabilityError, DomainError, NotAFunctionError
from .lazy import LazyCell

__all__ = [
    "Capabilities",
    "Function",
    "InverseKind",
    "add",
    "apply",
    "compose",
    "constant",
    "describe",
    "div",
    "identity",
    "iterate",
    "mul",
    "neg",
    "sub",
]

_serials = itertools.count()

# marker for "differentiable, no closed form": use finite differences
_FD = object()


class Capabilities(NamedTuple):
    invertible: bool = False
    differentiable: bool = False

    @property
    def both(self):
        return self.invertible and self.differentiable

    @property
    def tier(self):
        if self.both:
            return "invertible+differentiable"
        if self.invertible:
            return "invertible"
        if self.differentiable:
            return "differentiable"
        return "applicable"

    def __and__(self, other):
        return Capabilities(
            self.invertible and other.invertible,
            self.differentiable and other.differentiable,
        )


class InverseKind(enum.Enum):
    """How the registered inverse relates to its owner.

    ``LEFT_ONLY`` means ``inverse(f)(f(x)) == x``; ``RIGHT_ONLY`` means
    ``f(inverse(f)(y)) == y``. The two halves of a one-sided pair carry
    mirrored kinds.
    """

    TWO_SIDED = "two_sided"
    LEFT_ONLY = "left_only"
    RIGHT_ONLY = "right_only"

    @property
    def mirrored(self):
        if self is InverseKind.LEFT_ONLY:
            return InverseKind.RIGHT_ONLY
        if self is InverseKind.RIGHT_ONLY:
            return InverseKind.LEFT_ONLY
        return self


def combine_kinds(outer, inner):
    """Kind of ``inverse(compose(f, g))`` given the kinds of ``f`` and ``g``.

    Returns ``None`` when a left-only and a right-only inverse meet, since
    nothing can be guaranteed about that composite.
    """
    kinds = {outer, inner}
    if kinds == {InverseKind.TWO_SIDED}:
        return InverseKind.TWO_SIDED
    kinds.discard(InverseKind.TWO_SIDED)
    if len(kinds) == 1:
        return kinds.pop()
    return None


def _check(value):
    if not isinstance(value, Function):
        raise NotAFunctionError(value)
    return value


class Function:
    """An immutable real-valued function object.

    Args:
        body: callable evaluating the function at one point.
        name: display name; defaults to ``"f<serial>"``.
        derivative: closed form for the derivative, either a ``Function`` or a
            zero-argument callable returning one. It is built on first demand.
        differentiable: mark the function differentiable without a closed
            form; the derivative then defaults to central finite differences.
        value_and_derivative: optional faster ``x -> (f(x), f'(x))``.
        antiderivative: closed form ``G`` with ``G' = f`` (``Function`` or
            zero-argument callable), used by definite integration.
        domain: ``(lo, hi)`` interval used when sampling for law checks.

    Inverses are attached with :func:`fnalg.invertible.make_invertible`.
    """

    __slots__ = (
        "serial",
        "_name",
        "_body",
        "_dspec",
        "_dcell",
        "_inverse",
        "_kind",
        "_vd",
        "_aspec",
        "_acell",
        "domain",
        "_why_not_invertible",
        "__weakref__",
    )

    def __init__(
        self,
        body,
        name=None,
        *,
        derivative=None,
        differentiable=False,
        value_and_derivative=None,
        antiderivative=None,
        domain=None,
    ):
        if not callable(body):
            raise TypeError(f"body must be callable, got {body!r}")
        if derivative is None and differentiable:
            derivative = _FD
        if domain is not None:
            lo, hi = domain
            if not lo < hi:
                raise ValueError(f"empty domain {domain!r}")
            domain = (float(lo), float(hi))
        init = object.__setattr__
        init(self, "serial", next(_serials))
        init(self, "_name", name)
        init(self, "_body", body)
        init(self, "_dspec", derivative)
        init(self, "_inverse", None)
        init(self, "_kind", None)
        init(self, "_vd", value_and_derivative)
        init(self, "_aspec", antiderivative)
        init(self, "domain", domain)
        init(self, "_dcell", None)
        init(self, "_acell", None)
        init(self, "_why_not_invertible", "")
        self._build_cells()

    def __setattr__(self, key, value):
        raise AttributeError(f"{type(self).__name__} objects are immutable")

    def _build_cells(self):
        init = object.__setattr__
        spec = self._dspec
        if spec is None:
            init(self, "_dcell", None)
        else:
            maker = _derivative_maker(self, spec)
            if self._inverse is not None:
                maker = _strip_inverse(maker)
            init(self, "_dcell", LazyCell(maker))
        aspec = self._aspec
        if aspec is None:
            init(self, "_acell", None)
        elif isinstance(aspec, Function):
            init(self, "_acell", LazyCell(lambda: aspec))
        else:
            init(self, "_acell", LazyCell(aspec))

    def _clone(self):
        return Function(
            self._body,
            self._name,
            derivative=self._dspec,
            value_and_derivative=self._vd,
            antiderivative=self._aspec,
            domain=self.domain,
        )

    # -- identity and capabilities -------------------------------------

    @property
    def name(self):
        return describe(self)

    @property
    def capabilities(self):
        return Capabilities(self._inverse is not None, self._dcell is not None)

    @property
    def invertible(self):
        return self._inverse is not None

    @property
    def differentiable(self):
        return self._dcell is not None

    @property
    def inverse_kind(self):
        return self._kind

    @property
    def derivative_cell(self):
        return self._dcell

    @property
    def has_closed_form_derivative(self):
        return self._dspec is not None and self._dspec is not _FD

    @property
    def closed_form_antiderivative(self):
        """The registered antiderivative, or ``None``."""
        return None if self._acell is None else self._acell.get()

    # -- operations ------------------------------------------------------

    def apply(self, x):
        if isinstance(x, float) and not math.isfinite(x):
            raise DomainError(self, x, "non-finite argument")
        try:
            y = self._body(x)
        except DomainError:
            raise
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(self, x, str(exc)) from exc
        if isinstance(y, float) and not math.isfinite(y):
            raise DomainError(self, x, f"result is {y}")
        return y

    __call__ = apply

    def inverse(self):
        if self._inverse is None:
            raise CapabilityError(self, "invertible", self._why_not_invertible)
        return self._inverse

    def derivative(self):
        if self._dcell is None:
            raise CapabilityError(self, "differentiable")
        return self._dcell.get()

    def value_and_derivative(self, x):
        if self._dcell is None:
            raise CapabilityError(self, "differentiable")
        if self._vd is not None:
            return self._vd(x)
        return self.apply(x), self.derivative().apply(x)

    def compose(self, g):
        return compose(self, g)

    def __matmul__(self, g):
        return compose(self, g) if isinstance(g, Function) else NotImplemented

    def __add__(self, g):
        return add(self, g)

    def __radd__(self, g):
        return add(g, self)

    def __sub__(self, g):
        return sub(self, g)

    def __rsub__(self, g):
        return sub(g, self)

    def __mul__(self, g):
        return mul(self, g)

    def __rmul__(self, g):
        return mul(g, self)

    def __truediv__(self, g):
        return div(self, g)

    def __rtruediv__(self, g):
        return div(g, self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n):
        """``f ** n`` is n-fold self-composition, not a pointwise power."""
        return iterate(self, n)

    def __str__(self):
        return describe(self)

    def __repr__(self):
        return f"<Function {describe(self)} [{self.capabilities.tier}]>"


def _derivative_maker(owner, spec):
    if spec is _FD:
        def maker():
            from .differentiable import fd_derivative

            return fd_derivative(owner)

        return maker
    if isinstance(spec, Function):
        return lambda: spec
    if callable(spec):
        return spec
    raise TypeError(f"derivative must be a Function or a callable, got {spec!r}")


def _strip_inverse(maker):
    # the derivative of an invertible function is differentiable only
    return lambda: differentiable_only(maker())


def differentiable_only(f):
    """A view of ``f`` without its inverse; ``f`` itself if it has none."""
    if f._inverse is None:
        return f
    return Function(
        f._body,
        f._name,
        derivative=(lambda: f.derivative()) if f.differentiable else None,
        value_and_derivative=f._vd,
        antiderivative=f._aspec,
        domain=f.domain,
    )


def _knot(forward, backward, kind):
    """Register ``backward`` as the inverse of ``forward`` and vice versa.

    Both objects must be fresh; this is the only place inverse slots are set.
    """
    kind = InverseKind(kind)
    object.__setattr__(forward, "_inverse", backward)
    object.__setattr__(forward, "_kind", kind)
    if backward is not forward:
        object.__setattr__(backward, "_inverse", forward)
        object.__setattr__(backward, "_kind", kind.mirrored)
        backward._build_cells()
    forward._build_cells()


def apply(f, x):
    return _check(f).apply(x)


def describe(f):
    """``f``'s name, or ``"f<serial>"`` when it was created unnamed."""
    _check(f)
    return f._name if f._name is not None else f"f{f.serial}"


def compose(f, g):
    """``f ∘ g``: apply ``g`` first, then ``f``.

    The result is invertible when both are (its inverse is ``g⁻¹ ∘ f⁻¹``) and
    differentiable when both are (derivative by the chain rule, built lazily).
    """
    _check(f)
    _check(g)
    fg = _raw_compose(f, g)
    if f.invertible and g.invertible:
        kind = combine_kinds(f.inverse_kind, g.inverse_kind)
        if kind is None:
            object.__setattr__(
                fg,
                "_why_not_invertible",
                f"composes {f.inverse_kind.value} with {g.inverse_kind.value} inverses",
            )
        else:
            _knot(fg, _raw_compose(g.inverse(), f.inverse()), kind)
    return fg


def _raw_compose(f, g):
    fa, ga = f.apply, g.apply
    spec = None
    if f.differentiable and g.differentiable:
        def spec():
            from .differentiable import chain_rule

            return chain_rule(f, g)

    return Function(
        lambda x: fa(ga(x)),
        f"({describe(f)}.{describe(g)})",
        derivative=spec,
    )


def iterate(f, n):
    """n-fold self-composition; ``iterate(f, 0)`` is the identity."""
    _check(f)
    if not isinstance(n, numbers.Integral) or n < 0:
        raise ValueError(f"iteration count must be a non-negative integer, got {n!r}")
    if n == 0:
        return identity()
    result = f
    for _ in range(n - 1):
        result = compose(f, result)
    return result


def _lift(value):
    if isinstance(value, Function):
        return value
    if isinstance(value, numbers.Real):
        return constant(value)
    raise NotAFunctionError(value)


def _pointwise(f, g, symbol, op, rule):
    f, g = _lift(f), _lift(g)
    fa, ga = f.apply, g.apply
    spec = None
    if f.differentiable and g.differentiable:
        def spec():
            from . import differentiable

            return getattr(differentiable, rule)(f, g)

    return Function(
        lambda x: op(fa(x), ga(x)),
        f"({describe(f)}{symbol}{describe(g)})",
        derivative=spec,
    )


def _divide(a, b):
    if b == 0:
        raise ZeroDivisionError("division by zero")
    return a / b


def add(f, g):
    """Pointwise ``f + g``. Numbers are promoted to constant functions."""
    return _pointwise(f, g, "+", lambda a, b: a + b, "sum_rule")


def sub(f, g):
    return _pointwise(f, g, "-", lambda a, b: a - b, "difference_rule")


def mul(f, g):
    return _pointwise(f, g, "*", lambda a, b: a * b, "product_rule")


def div(f, g):
    """Pointwise ``f / g``; applying it where ``g`` is zero is a domain error."""
    return _pointwise(f, g, "/", _divide, "quotient_rule")


def neg(f):
    f = _lift(f)
    fa = f.apply
    spec = None
    if f.differentiable:
        def spec():
            from .differentiable import negation_rule

            return negation_rule(f)

    return Function(lambda x: -fa(x), f"-{describe(f)}", derivative=spec)


def constant(c):
    """The constant function ``x -> c``; its derivative is the zero constant."""
    c = float(c)
    return Function(
        lambda x: c,
        f"{c:g}",
        derivative=lambda: constant(0.0),
        antiderivative=lambda: Function(lambda x: c * x, f"({c:g}*id)", derivative=constant(c)),
    )


@lru_cache(maxsize=None)
def identity():
    """The unit of composition; its own inverse, with derivative one."""
    f = Function(
        lambda x: x,
        "id",
        derivative=lambda: constant(1.0),
        value_and_derivative=lambda x: (x, 1.0),
        domain=(-10.0, 10.0),
    )
    _knot(f, f, InverseKind.TWO_SIDED)
    return f
