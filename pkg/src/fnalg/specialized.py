"""Functions with a concrete representation that makes compose and inverse cheap.

Permutations of ``[0, n)`` are stored as index arrays and linear maps as
matrices. Composing two of either gives another of the same kind, computed
directly from the representation rather than by chaining closures.
Composition reads right to left everywhere: ``(p ∘ q)(i) = p(q(i))``.
"""

import json
import math
import re

import numpy as np

from .core import Capabilities, Function
from .errors import DimensionError, SingularMatrixError
from .multivariate import VectorFunction, lu_decompose

__all__ = [
    "LinearMap",
    "PermutationFunction",
    "format_permutation",
    "identity_matrix",
    "identity_perm",
    "linear_compose",
    "linear_inverse",
    "parse_matrix",
    "parse_permutation",
    "perm_apply",
    "perm_compose",
    "perm_inverse",
    "rotation",
]


class PermutationFunction:
    """A bijection of ``{0, ..., n-1}`` stored as ``mapping[i] = p(i)``.

    Always invertible. Indices stay integers; use :meth:`as_function` for a
    real-valued :class:`~fnalg.core.Function` view that composes generically.
    """

    rep = "permutation"
    capabilities = Capabilities(invertible=True, differentiable=False)

    __slots__ = ("mapping", "name", "_inverse")

    def __init__(self, mapping, name=None, *, check=True):
        mapping = tuple(int(i) for i in mapping)
        if not mapping:
            raise ValueError("a permutation needs at least one element")
        if check and sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"{list(mapping)} is not a permutation of [0, {len(mapping)})")
        object.__setattr__(self, "mapping", mapping)
        object.__setattr__(self, "name", name or format_permutation(mapping))
        object.__setattr__(self, "_inverse", None)

    def __setattr__(self, key, value):
        raise AttributeError("PermutationFunction objects are immutable")

    @property
    def n(self):
        return len(self.mapping)

    def is_valid(self):
        return sorted(self.mapping) == list(range(self.n))

    def apply(self, i):
        return perm_apply(self, i)

    __call__ = apply

    def inverse(self):
        return perm_inverse(self)

    def __matmul__(self, other):
        if isinstance(other, PermutationFunction):
            return perm_compose(self, other)
        return NotImplemented

    def as_function(self):
        mapping = self.mapping

        def body(x):
            i = int(x)
            if i != x or not 0 <= i < len(mapping):
                raise ValueError(f"index {x!r} outside [0, {len(mapping)})")
            return float(mapping[i])

        return Function(body, self.name)

    def __eq__(self, other):
        if isinstance(other, PermutationFunction):
            return self.mapping == other.mapping
        return NotImplemented

    def __hash__(self):
        return hash(self.mapping)

    def __str__(self):
        return format_permutation(self.mapping)

    def __repr__(self):
        return f"PermutationFunction({list(self.mapping)})"


def identity_perm(n):
    return PermutationFunction(range(n))


def perm_apply(p, i):
    if not 0 <= i < p.n:
        raise IndexError(f"index {i} outside [0, {p.n})")
    return p.mapping[i]


def perm_compose(p, q):
    """``p ∘ q`` as a new array: ``result[i] = p[q[i]]``."""
    if p.n != q.n:
        raise DimensionError(f"cannot compose permutations of sizes {p.n} and {q.n}")
    pm = p.mapping
    return PermutationFunction([pm[j] for j in q.mapping], check=False)


def perm_inverse(p):
    if p._inverse is None:
        inv = [0] * p.n
        for i, j in enumerate(p.mapping):
            inv[j] = i
        q = PermutationFunction(inv, check=False)
        object.__setattr__(q, "_inverse", p)
        object.__setattr__(p, "_inverse", q)
    return p._inverse


def parse_permutation(text):
    """Parse ``"[2,0,1]"`` into a permutation."""
    if not re.fullmatch(r"\s*\[\s*(\d+\s*(,\s*\d+\s*)*)?\]\s*", text):
        raise ValueError(f"not a bracketed integer list: {text!r}")
    return PermutationFunction(json.loads(text))


def format_permutation(mapping):
    if isinstance(mapping, PermutationFunction):
        mapping = mapping.mapping
    return "[" + ",".join(str(i) for i in mapping) + "]"


class LinearMap(VectorFunction):
    """``x -> M x`` for an ``m × n`` matrix ``M``; its Jacobian is ``M`` everywhere."""

    rep = "matrix"

    def __init__(self, matrix, name=None):
        m = np.array(matrix, dtype=float)
        if m.ndim != 2 or 0 in m.shape:
            raise DimensionError(f"a linear map needs a 2-D matrix, got shape {m.shape}")
        m.setflags(write=False)
        self.matrix = m
        rows, cols = m.shape
        super().__init__(
            lambda x: m @ x,
            cols,
            rows,
            name,
            jacobian=lambda x: m,
            domain=[(-10.0, 10.0)] * cols,
        )

    @property
    def rows(self):
        return self.matrix.shape[0]

    @property
    def cols(self):
        return self.matrix.shape[1]

    def inverse(self):
        return linear_inverse(self)

    @property
    def invertible(self):
        return self.rows == self.cols and lu_decompose(self.matrix) is not None

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            return linear_compose(self, other)
        return super().__matmul__(other)

    def to_list(self):
        return self.matrix.tolist()


def linear_compose(a, b):
    """``a ∘ b``: matrix product ``a.matrix @ b.matrix``."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot compose {a.rows}x{a.cols} after {b.rows}x{b.cols}")
    return LinearMap(a.matrix @ b.matrix)


def linear_inverse(a, tol=1e-10):
    """Matrix inverse, registered as mutual inverse of ``a``.

    The residual ``|A A⁻¹ - I|`` must stay below ``tol`` scaled by a crude
    condition estimate ``n · max|A| · max|A⁻¹|``.
    """
    if a._inverse is not None:
        return a._inverse
    if a.rows != a.cols:
        raise DimensionError(f"only square maps can be inverted, got {a.rows}x{a.cols}")
    decomposition = lu_decompose(a.matrix)
    if decomposition is None:
        raise SingularMatrixError(f"{a.name} is singular")
    lu, perm, sign = decomposition
    det = sign * float(np.prod(np.diag(lu)))
    if abs(det) < 1e-12:
        raise SingularMatrixError(f"{a.name} is singular (det={det:.3g})")
    inv = _lu_inverse(lu, perm)
    n = a.rows
    cond = n * np.max(np.abs(a.matrix)) * np.max(np.abs(inv))
    residual = np.max(np.abs(a.matrix @ inv - np.eye(n)))
    if residual > tol * max(1.0, cond):
        raise SingularMatrixError(f"{a.name} is too ill-conditioned to invert (residual {residual:.3g})")
    b = LinearMap(inv)
    a._inverse = b
    b._inverse = a
    return b


def _lu_inverse(lu, perm):
    n = lu.shape[0]
    inv = np.empty((n, n))
    for col in range(n):
        e = (perm == col).astype(float)
        y = np.empty(n)
        for i in range(n):
            y[i] = e[i] - lu[i, :i] @ y[:i]
        x = np.empty(n)
        for i in reversed(range(n)):
            x[i] = (y[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
        inv[:, col] = x
    return inv


def identity_matrix(n):
    return LinearMap(np.eye(n), f"I{n}")


def rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    return LinearMap([[c, -s], [s, c]], f"rot({theta:g})")


def parse_matrix(text):
    """Parse a row-major nested list such as ``"[[1,2],[3,4]]"``."""
    rows = json.loads(text)
    if not rows or not all(isinstance(r, list) and len(r) == len(rows[0]) for r in rows):
        raise ValueError(f"not a rectangular nested list: {text!r}")
    return LinearMap(rows)
