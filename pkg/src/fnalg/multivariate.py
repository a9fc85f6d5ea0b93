"""Vector-valued functions: gradients, Jacobians and Jacobian determinants.

A :class:`VectorFunction` maps an ``n_in``-vector to an ``n_out``-vector.
Jacobians come from a registered closed form when there is one and from
column-by-column central differences otherwise; they are returned as
``(n_out, n_in)`` numpy arrays with entry ``(i, j) = ∂f_i/∂x_j``.
"""

import itertools
import math

import numpy as np

from . import config
from .errors import (
    CapabilityError,
    DimensionError,
    DomainError,
    InverseValidationError,
    NotAFunctionError,
)

__all__ = [
    "SINGULAR_PIVOT",
    "VectorFunction",
    "cartesian2polar",
    "compose",
    "determinant",
    "fd_jacobian",
    "gradient",
    "identity_map",
    "jacobian",
    "jacobian_determinant",
    "lu_decompose",
    "make_invertible",
    "polar2cartesian",
    "sum_of_squares",
]

SINGULAR_PIVOT = 1e-12

_serials = itertools.count()


class VectorFunction:
    """A map from R^n_in to R^n_out.

    ``jacobian`` is an optional closed form ``x -> (n_out, n_in) array``.
    ``domain`` is a sequence of ``n_in`` intervals used for sampling.
    """

    rep = "vector"

    def __init__(self, body, n_in, n_out, name=None, *, jacobian=None, domain=None):
        if n_in < 1 or n_out < 1:
            raise DimensionError(f"dimensions must be positive, got {n_in}->{n_out}")
        self.serial = next(_serials)
        self.n_in = int(n_in)
        self.n_out = int(n_out)
        self._name = name
        self._body = body
        self._jacobian = jacobian
        self.domain = None if domain is None else [tuple(map(float, d)) for d in domain]
        self._inverse = None

    @property
    def name(self):
        return self._name if self._name is not None else f"v{self.serial}"

    @property
    def invertible(self):
        return self._inverse is not None

    @property
    def has_closed_form_jacobian(self):
        return self._jacobian is not None

    def _point(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_in,):
            raise DimensionError(f"{self.name} expects a {self.n_in}-vector, got shape {x.shape}")
        return x

    def apply(self, x):
        x = self._point(x)
        try:
            with np.errstate(all="raise", under="ignore"):
                y = np.asarray(self._body(x), dtype=float)
        except DomainError:
            raise
        except (ValueError, ZeroDivisionError, OverflowError, FloatingPointError) as exc:
            raise DomainError(self, tuple(x), str(exc)) from exc
        if y.shape != (self.n_out,):
            raise DimensionError(f"{self.name} produced shape {y.shape}, expected ({self.n_out},)")
        if not np.all(np.isfinite(y)):
            raise DomainError(self, tuple(x), "non-finite result")
        return y

    __call__ = apply

    def jacobian(self, x):
        x = self._point(x)
        if self._jacobian is None:
            return fd_jacobian(self, x)
        J = np.asarray(self._jacobian(x), dtype=float)
        if J.shape != (self.n_out, self.n_in):
            raise DimensionError(f"{self.name} Jacobian has shape {J.shape}")
        return J

    def inverse(self):
        if self._inverse is None:
            raise CapabilityError(self, "invertible")
        return self._inverse

    def __matmul__(self, g):
        return compose(self, g) if isinstance(g, VectorFunction) else NotImplemented

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} R^{self.n_in}->R^{self.n_out}>"


def _check(f):
    if not isinstance(f, VectorFunction):
        raise NotAFunctionError(f)
    return f


def fd_jacobian(f, x, step=None):
    """Central-difference Jacobian, one column per input coordinate."""
    _check(f)
    h = config.settings.fd_step if step is None else step
    x = f._point(x)
    J = np.empty((f.n_out, f.n_in))
    for j in range(f.n_in):
        e = np.zeros(f.n_in)
        e[j] = h
        J[:, j] = (f.apply(x + e) - f.apply(x - e)) / (2.0 * h)
    return J


def jacobian(f, x):
    return _check(f).jacobian(x)


def gradient(f, x):
    """Gradient of a scalar-valued ``f`` (``n_out == 1``) as a 1-D array."""
    _check(f)
    if f.n_out != 1:
        raise DimensionError(f"gradient needs a scalar-valued function, {f.name} has n_out={f.n_out}")
    return f.jacobian(x)[0]


def lu_decompose(a):
    """Doolittle LU with partial pivoting.

    Returns ``(lu, perm, sign)`` with ``L`` below the diagonal of ``lu`` (unit
    diagonal implied) and ``U`` on and above it, ``perm`` the row order and
    ``sign`` the permutation parity. Returns ``None`` when a pivot's magnitude
    falls below ``SINGULAR_PIVOT``.
    """
    lu = np.array(a, dtype=float)
    if lu.ndim != 2 or lu.shape[0] != lu.shape[1]:
        raise DimensionError(f"LU needs a square matrix, got shape {lu.shape}")
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) < SINGULAR_PIVOT:
            return None
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, sign


def determinant(a):
    """Determinant via pivoted LU; numerically singular matrices give 0.0."""
    decomposition = lu_decompose(a)
    if decomposition is None:
        return 0.0
    lu, _, sign = decomposition
    return sign * float(np.prod(np.diag(lu)))


def jacobian_determinant(f, x):
    _check(f)
    if f.n_in != f.n_out:
        raise DimensionError(f"{f.name} is not square ({f.n_in}->{f.n_out})")
    return determinant(f.jacobian(x))


def compose(f, g):
    """``f ∘ g`` with Jacobian ``J_f(g(x)) · J_g(x)``; invertible if both are."""
    _check(f)
    _check(g)
    if f.n_in != g.n_out:
        raise DimensionError(f"cannot compose {f.name} (n_in={f.n_in}) after {g.name} (n_out={g.n_out})")
    fg = _raw_compose(f, g)
    if f.invertible and g.invertible:
        _knot(fg, _raw_compose(g.inverse(), f.inverse()))
    return fg


def _raw_compose(f, g):
    return VectorFunction(
        lambda x: f.apply(g.apply(x)),
        g.n_in,
        f.n_out,
        f"({f.name}.{g.name})",
        jacobian=lambda x: f.jacobian(g.apply(x)) @ g.jacobian(x),
        domain=g.domain,
    )


def _knot(forward, backward):
    forward._inverse = backward
    backward._inverse = forward


def sample_points(domain, k, seed=0):
    rng = np.random.default_rng(seed)
    lo = np.array([d[0] for d in domain])
    hi = np.array([d[1] for d in domain])
    return lo + (hi - lo) * rng.random((k, len(domain)))


def roundtrip_error(f, points):
    """Worst ``max|f⁻¹(f(x)) - x| / (1 + max|x|)`` over ``points``, with its argmax."""
    finv = f.inverse()
    worst_x, worst = None, -1.0
    for x in points:
        try:
            err = float(np.max(np.abs(finv.apply(f.apply(x)) - x)) / (1.0 + np.max(np.abs(x))))
        except DomainError:
            err = math.inf
        if not err <= worst:
            worst_x, worst = tuple(float(v) for v in x), err
    return worst_x, worst


def make_invertible(f, finv, domain=None, *, samples=16, tol=1e-8, check=True):
    """Register ``f`` and ``finv`` as mutual inverses (in place, before use).

    ``domain`` defaults to ``f.domain``; both directions are sampled, the
    backward one at the images of the forward samples.
    """
    _check(f)
    _check(finv)
    if f.n_in != f.n_out or finv.n_in != f.n_out or finv.n_out != f.n_in:
        raise DimensionError("mutual inverses must both be square with matching dimension")
    if f.invertible or finv.invertible:
        raise ValueError("inverse already registered")
    _knot(f, finv)
    if check:
        domain = domain or f.domain
        if domain is None:
            raise ValueError(f"{f.name} has no sampling domain")
        pts = sample_points(domain, samples)
        x, err = roundtrip_error(f, pts)
        if not err <= tol:
            f._inverse = finv._inverse = None
            raise InverseValidationError("left-inverse", x, err, tol)
        images = [f.apply(p) for p in pts]
        x, err = roundtrip_error(finv, images)
        if not err <= tol:
            f._inverse = finv._inverse = None
            raise InverseValidationError("right-inverse", x, err, tol)
    return f


def identity_map(n):
    """Identity on R^n; registered as its own inverse."""
    f = VectorFunction(
        lambda x: x.copy(),
        n,
        n,
        f"id{n}",
        jacobian=lambda x: np.eye(n),
        domain=[(-10.0, 10.0)] * n,
    )
    _knot(f, f)
    return f


def sum_of_squares(n):
    return VectorFunction(
        lambda x: [float(np.dot(x, x))],
        n,
        1,
        f"sumsq{n}",
        jacobian=lambda x: 2.0 * x[np.newaxis, :],
        domain=[(-10.0, 10.0)] * n,
    )


def _p2c(p):
    r, theta = p
    if not r > 0:
        raise DomainError(polar2cartesian, tuple(p), "radius must be positive")
    return [r * math.cos(theta), r * math.sin(theta)]


def _p2c_jacobian(p):
    r, theta = p
    c, s = math.cos(theta), math.sin(theta)
    return [[c, -r * s], [s, r * c]]


def _c2p(q):
    x, y = q
    r = math.hypot(x, y)
    if r == 0.0:
        raise DomainError(cartesian2polar, tuple(q), "the origin has no angle")
    return [r, math.atan2(y, x)]


def _c2p_jacobian(q):
    x, y = q
    r2 = x * x + y * y
    if r2 == 0.0:
        raise DomainError(cartesian2polar, tuple(q), "the origin has no angle")
    r = math.sqrt(r2)
    return [[x / r, y / r], [-y / r2, x / r2]]


# (r, θ) with r > 0 and θ in (-π, π]
polar2cartesian = VectorFunction(
    _p2c,
    2,
    2,
    "polar2cartesian",
    jacobian=_p2c_jacobian,
    domain=[(0.1, 10.0), (-math.pi + 1e-9, math.pi)],
)
cartesian2polar = VectorFunction(
    _c2p,
    2,
    2,
    "cartesian2polar",
    jacobian=_c2p_jacobian,
    domain=[(-10.0, 10.0), (-10.0, 10.0)],
)
make_invertible(polar2cartesian, cartesian2polar)
