"""Ready-made function objects with their inverses and closed-form derivatives.

Keys double as the CLI's function vocabulary. ``build_catalog`` constructs a
fresh set; ``catalog``/``lookup`` share one process-wide instance.
"""

import dataclasses
import math
from functools import lru_cache

from . import multivariate
from .core import Function, InverseKind, constant, identity, neg
from .errors import NotFoundError
from .invertible import make_invertible
from .multivariate import VectorFunction, identity_map, sum_of_squares
from .specialized import PermutationFunction

__all__ = ["FAULTS", "CatalogEntry", "build_catalog", "catalog", "lookup"]

# fault injections understood by build_catalog (and `fnalg check --inject-fault`)
FAULTS = ("wrong-inverse", "wrong-derivative", "broken-perm")


@dataclasses.dataclass(frozen=True)
class CatalogEntry:
    key: str
    object: object
    tier: str
    domain: tuple | list | None = None
    # where finite differences are trustworthy enough to check the derivative
    derivative_domain: tuple | None = None

    @property
    def check_domain(self):
        return self.derivative_domain or self.domain


def _tier(obj):
    if isinstance(obj, Function):
        return obj.capabilities.tier
    if isinstance(obj, PermutationFunction):
        return "invertible"
    if isinstance(obj, VectorFunction):
        return "invertible+differentiable" if obj.invertible else "differentiable"
    raise TypeError(obj)


def _one_over(x):
    return 1.0 / x


def build_catalog(fault=None):
    """Construct every entry; ``fault`` plants one deliberate defect for testing."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {', '.join(FAULTS)}")
    fns = {}

    one = constant(1.0)
    succ = Function(lambda x: x + 1, "succ", derivative=one, domain=(-10, 10))
    pred = Function(lambda x: x - 1, "pred", derivative=one, domain=(-10, 10))
    if fault == "wrong-inverse":
        pred = Function(lambda x: x - 2, "pred", derivative=one, domain=(-10, 10))
    succ = make_invertible(succ, pred, domain=(-10, 10), check=fault != "wrong-inverse")

    double = Function(lambda x: 2.0 * x, "double", derivative=constant(2.0))
    sqr_real = Function(lambda x: x * x, "sqr_real", derivative=double, domain=(-10, 10))
    sqr = Function(lambda n: n * n, "sqr", domain=(-10, 10))

    sin_derivative = (lambda: fns["cos"]) if fault != "wrong-derivative" else (
        lambda: Function(lambda x: -math.cos(x), "cos")
    )
    sin = Function(
        math.sin,
        "sin",
        derivative=sin_derivative,
        value_and_derivative=lambda x: (math.sin(x), math.cos(x)),
        domain=(-10, 10),
    )
    cos = Function(math.cos, "cos", derivative=lambda: neg(fns["sin"]), domain=(-10, 10))
    fns["sin"], fns["cos"] = sin, cos

    def _arcsin_derivative(y):
        return 1.0 / math.sqrt(1.0 - y * y)

    arcsin = Function(
        math.asin,
        "arcsin",
        derivative=Function(_arcsin_derivative, "arcsin'", differentiable=True),
        domain=(-1, 1),
    )
    sin_restricted = Function(math.sin, "sin_restricted", derivative=lambda: fns["cos"], domain=(-1, 1))
    sin_restricted = make_invertible(sin_restricted, arcsin, InverseKind.RIGHT_ONLY, (-1, 1))

    # 1/x is its own inverse
    one_over = Function(
        _one_over,
        "oneOver",
        derivative=lambda: Function(lambda x: -1.0 / (x * x), "-1/x^2", differentiable=True),
        domain=(1e-3, 1e3),
    )
    one_over = make_invertible(one_over, one_over, domain=(1e-3, 1e3))

    exp = Function(
        math.exp,
        "exp",
        derivative=lambda: fns["exp"],
        value_and_derivative=lambda x: (math.exp(x),) * 2,
        antiderivative=lambda: fns["exp"],
        domain=(-5, 5),
    )
    log = Function(math.log, "log", derivative=lambda: fns["oneOver"], domain=(1e-6, 1e6))
    exp = make_invertible(exp, log, domain=(-5, 5))
    fns["exp"], fns["oneOver"] = exp, one_over
    log = exp.inverse()

    exp2x = Function(lambda x: math.exp(2.0 * x), "exp2x", differentiable=True, domain=(-10, 10))

    cycle = [1, 2, 0]
    if fault == "broken-perm":
        cycle = [1, 1, 0]
    perm = PermutationFunction(cycle, "cycle3", check=fault != "broken-perm")

    entries = [
        CatalogEntry("identity", identity(), "", (-10, 10)),
        CatalogEntry("succ", succ, "", (-10, 10)),
        CatalogEntry("pred", succ.inverse(), "", (-10, 10)),
        CatalogEntry("sqr", sqr, "", (-10, 10)),
        CatalogEntry("sqr_real", sqr_real, "", (-10, 10)),
        CatalogEntry("abs", Function(abs, "abs"), "", (-10, 10)),
        CatalogEntry("floor", Function(math.floor, "floor"), "", (-10, 10)),
        CatalogEntry("ceil", Function(math.ceil, "ceil"), "", (-10, 10)),
        CatalogEntry("round", Function(round, "round"), "", (-10, 10)),
        CatalogEntry("sin", sin, "", (-10, 10)),
        CatalogEntry("cos", cos, "", (-10, 10)),
        CatalogEntry("sin_restricted", sin_restricted, "", (-1, 1)),
        CatalogEntry("arcsin", sin_restricted.inverse(), "", (-1, 1), (-0.9, 0.9)),
        CatalogEntry("exp", exp, "", (-5, 5), (-10, 10)),
        CatalogEntry("log", log, "", (1e-6, 1e6), (0.1, 100)),
        CatalogEntry("oneOver", one_over, "", (1e-3, 1e3), (0.5, 10)),
        CatalogEntry("exp2x", exp2x, "", (-10, 10)),
        CatalogEntry("leng", Function(len, "leng"), "", None),
        CatalogEntry("polar2cartesian", multivariate.polar2cartesian, "", multivariate.polar2cartesian.domain),
        CatalogEntry("cartesian2polar", multivariate.cartesian2polar, "", multivariate.cartesian2polar.domain),
        CatalogEntry("identity_map_2d", identity_map(2), "", [(-10, 10)] * 2),
        CatalogEntry("sum_of_squares", sum_of_squares(3), "", [(-10, 10)] * 3),
        CatalogEntry("cycle3", perm, "", None),
    ]
    return [dataclasses.replace(e, tier=_tier(e.object)) for e in entries]


@lru_cache(maxsize=None)
def _shared():
    return tuple(build_catalog())


def catalog():
    return list(_shared())


def lookup(key, entries=None):
    entries = _shared() if entries is None else entries
    for entry in entries:
        if entry.key == key:
            return entry
    raise NotFoundError(key, [e.key for e in entries])
