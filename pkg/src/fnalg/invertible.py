"""Attaching, validating and composing inverses."""

import dataclasses

import numpy as np

from .core import Function, InverseKind, _knot, combine_kinds
from .errors import DomainError, InverseValidationError, NotAFunctionError

__all__ = [
    "InverseKind",
    "InversePair",
    "combine_kinds",
    "inverse",
    "make_invertible",
    "pair",
    "roundtrip_report",
]

DEFAULT_SAMPLES = 16
DEFAULT_TOL = 1e-8

LEFT_LAW = "left-inverse"    # inverse(f)(f(x)) == x
RIGHT_LAW = "right-inverse"  # f(inverse(f)(y)) == y


@dataclasses.dataclass(frozen=True)
class InversePair:
    forward: Function
    backward: Function
    kind: InverseKind


def inverse(f):
    if not isinstance(f, Function):
        raise NotAFunctionError(f)
    return f.inverse()


def pair(f):
    return InversePair(f, inverse(f), f.inverse_kind)


def make_invertible(
    f,
    finv,
    kind=InverseKind.TWO_SIDED,
    domain=(-10.0, 10.0),
    *,
    samples=DEFAULT_SAMPLES,
    tol=DEFAULT_TOL,
    check=True,
):
    """Return a copy of ``f`` whose inverse is a copy of ``finv``, and vice versa.

    ``domain`` is where the asserted law's inner function is sampled: the
    domain of ``f`` for two-sided and left-only pairs, the domain of ``finv``
    for right-only pairs. Pass ``check=False`` to skip validation.

    Raises:
        NotAFunctionError: either argument is not a ``Function``.
        InverseValidationError: a roundtrip exceeds ``tol * (1 + |x|)``;
            the message names the worst sample.
    """
    for value in (f, finv):
        if not isinstance(value, Function):
            raise NotAFunctionError(value)
    kind = InverseKind(kind)
    forward = f._clone()
    backward = forward if finv is f else finv._clone()
    if backward is forward and kind is not InverseKind.TWO_SIDED:
        raise ValueError("a self-inverse function must be two-sided")
    _knot(forward, backward, kind)
    if check:
        for law, worst_x, err in roundtrip_report(forward, domain, samples):
            if not err <= tol:
                raise InverseValidationError(law, worst_x, err, tol)
    return forward


def sample_points(domain, k):
    lo, hi = domain
    if not lo < hi:
        raise ValueError(f"empty domain {domain!r}")
    return lo + (np.arange(k) + 0.5) * (hi - lo) / k


def roundtrip_report(f, domain=None, samples=DEFAULT_SAMPLES):
    """Worst relative roundtrip error for each law ``f``'s inverse kind asserts.

    Returns ``[(law, worst_x, error), ...]``; the error at a point is
    ``|roundtrip - x| / (1 + |x|)`` and a domain error counts as infinite.
    """
    finv = f.inverse()
    kind = f.inverse_kind
    domain = domain or f.domain or (-10.0, 10.0)
    points = [float(x) for x in sample_points(domain, samples)]
    report = []
    if kind in (InverseKind.TWO_SIDED, InverseKind.LEFT_ONLY):
        report.append((LEFT_LAW, *_worst(lambda x: finv.apply(f.apply(x)), points)))
    if kind is InverseKind.TWO_SIDED:
        images = []
        for x in points:
            try:
                images.append(f.apply(x))
            except DomainError:
                images.append(x)  # left law already reports this point
        report.append((RIGHT_LAW, *_worst(lambda y: f.apply(finv.apply(y)), images)))
    elif kind is InverseKind.RIGHT_ONLY:
        report.append((RIGHT_LAW, *_worst(lambda y: f.apply(finv.apply(y)), points)))
    return report


def _worst(roundtrip, points):
    worst_x, worst = None, -1.0
    for x in points:
        try:
            err = abs(roundtrip(x) - x) / (1.0 + abs(x))
        except DomainError:
            err = float("inf")
        if not err <= worst:
            worst_x, worst = x, err
    return worst_x, worst
