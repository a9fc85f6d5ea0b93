"""Continuous probability models and their transformation by invertible maps.

A transformed model describes raw data ``y`` while the base model describes
``x = f(y)``: fitting a log-Normal means fitting a Normal to ``log(y)``. Hence

* density:  ``p_y(y) = p_x(f(y)) · |f'(y)|``  (``|det J_f(y)|`` for vectors),
* sampling: draw ``x`` from the base model and return ``f⁻¹(x)``,
* accuracy of measurement: ``aom_x = aom_y · |f'(y)|``.

Random sources are always passed in explicitly (``numpy.random.Generator``).
"""

import csv
import dataclasses
import json
import math

import numpy as np

from .core import Function, identity
from .errors import (
    CapabilityError,
    DegenerateError,
    DimensionError,
    InsufficientDataError,
    NotAFunctionError,
)
from .integration import QuadratureConfig, definite_integral
from .multivariate import VectorFunction, jacobian_determinant

__all__ = [
    "ContinuousModel",
    "Datum",
    "MultivariateNormal",
    "MultivariateTransformedModel",
    "N01",
    "Normal",
    "TransformedModel",
    "fit_normal",
    "model_from_json",
    "model_to_json",
    "normalization",
    "read_data_csv",
    "transform_model",
    "transform_model_multivariate",
    "transformed_aom",
]

DEFAULT_AOM = 1e-6
SUPPORT_SIGMAS = 8.0


@dataclasses.dataclass(frozen=True)
class Datum:
    value: float
    aom: float = DEFAULT_AOM

    def __post_init__(self):
        if not self.aom > 0:
            raise ValueError(f"accuracy of measurement must be positive, got {self.aom!r}")


class ContinuousModel:
    """Base class for univariate models of continuous data."""

    name = "model"

    @property
    def params(self):
        return {}

    def density(self, x):
        raise NotImplementedError

    def sample(self, rng, size):
        raise NotImplementedError

    def support(self):
        """Interval holding all but a negligible amount of probability mass."""
        raise NotImplementedError

    def support_breaks(self):
        """Increasing points splitting the support into pieces of comparable mass."""
        return list(self.support())

    def pr(self, datum):
        """Probability of a datum measured to within ``datum.aom``."""
        return self.density(datum.value) * datum.aom

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.name}({args})"


class Normal(ContinuousModel):
    name = "Normal"

    def __init__(self, mu=0.0, sigma=1.0):
        if not sigma > 0:
            raise DegenerateError(f"standard deviation must be positive, got {sigma!r}")
        self.mu = float(mu)
        self.sigma = float(sigma)

    @property
    def params(self):
        return {"mu": self.mu, "sigma": self.sigma}

    def density(self, x):
        z = (x - self.mu) / self.sigma
        return math.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2.0 * math.pi))

    def sample(self, rng, size):
        return rng.normal(self.mu, self.sigma, size)

    def support(self):
        return (self.mu - SUPPORT_SIGMAS * self.sigma, self.mu + SUPPORT_SIGMAS * self.sigma)

    def support_breaks(self):
        k = int(SUPPORT_SIGMAS)
        return [self.mu + i * self.sigma for i in range(-k, k + 1)]


N01 = Normal(0.0, 1.0)


def _require_combined(f):
    if not isinstance(f, Function):
        raise NotAFunctionError(f)
    if not f.invertible:
        raise CapabilityError(f, "invertible", "a model transform needs f⁻¹ for sampling")
    if not f.differentiable:
        raise CapabilityError(f, "differentiable", "a model transform needs f' for the density")
    if f.inverse_kind.value != "two_sided":
        raise CapabilityError(f, "invertible", f"its inverse is {f.inverse_kind.value}, not two-sided")


class TransformedModel(ContinuousModel):
    def __init__(self, base, f, name=None):
        _require_combined(f)
        self.base = base
        self.map = f
        self.name = name or f"{base.name}∘{f.name}"
        self._df = f.derivative()
        self._finv = f.inverse()

    @property
    def params(self):
        return self.base.params

    def density(self, y):
        return self.base.density(self.map.apply(y)) * abs(self._df.apply(y))

    def sample(self, rng, size):
        finv = self._finv.apply
        return np.array([finv(float(x)) for x in self.base.sample(rng, size)])

    def support(self):
        lo, hi = self.base.support()
        a, b = self._finv.apply(lo), self._finv.apply(hi)
        return (min(a, b), max(a, b))

    def support_breaks(self):
        return sorted(self._finv.apply(x) for x in self.base.support_breaks())

    def pr(self, datum):
        x = Datum(self.map.apply(datum.value), transformed_aom(self.map, datum))
        return self.base.pr(x)


def transform_model(base, f, name=None):
    """Model of raw data ``y`` whose image ``f(y)`` follows ``base``."""
    return TransformedModel(base, f, name)


def transformed_aom(f, d):
    """Accuracy of measurement of ``f(d.value)``: ``d.aom · |f'(d.value)|``."""
    if not isinstance(f, Function):
        raise NotAFunctionError(f)
    value = d.aom * abs(f.derivative().apply(d.value))
    if value == 0.0:
        raise DegenerateError(f"{f.name}' vanishes at {d.value!r}; transformed AoM is zero")
    return value


def fit_normal(data):
    """Normal with the sample mean and the (n-1)-divisor standard deviation."""
    values = [d.value if isinstance(d, Datum) else float(d) for d in data]
    if len(values) < 2:
        raise InsufficientDataError(f"need at least 2 data to fit a Normal, got {len(values)}")
    arr = np.asarray(values, dtype=float)
    sigma = float(np.std(arr, ddof=1))
    if sigma == 0.0:
        raise DegenerateError("all data are equal; the fitted spread is zero")
    return Normal(float(np.mean(arr)), sigma)


def normalization(model, cfg=None):
    """Numerical integral of ``model.density`` over ``model.support()``.

    The support is integrated piecewise between ``model.support_breaks()`` so
    that a sharply peaked density on a long support is still resolved.
    """
    density = Function(model.density, f"p[{model.name}]")
    breaks = model.support_breaks()
    cfg = cfg or QuadratureConfig()
    return sum(definite_integral(density, a, b, cfg) for a, b in zip(breaks[:-1], breaks[1:]))


class MultivariateNormal:
    name = "MultivariateNormal"

    def __init__(self, mean, cov):
        self.mean = np.asarray(mean, dtype=float)
        self.cov = np.asarray(cov, dtype=float)
        d = self.mean.shape[0]
        if self.cov.shape != (d, d):
            raise DimensionError(f"covariance shape {self.cov.shape} does not match mean length {d}")
        self._chol = np.linalg.cholesky(self.cov)
        self._prec = np.linalg.inv(self.cov)
        self._norm = 1.0 / math.sqrt((2.0 * math.pi) ** d * np.linalg.det(self.cov))

    @classmethod
    def standard(cls, d):
        return cls(np.zeros(d), np.eye(d))

    @property
    def dim(self):
        return self.mean.shape[0]

    @property
    def params(self):
        return {"mean": self.mean.tolist(), "cov": self.cov.tolist()}

    def density(self, x):
        z = np.asarray(x, dtype=float) - self.mean
        return self._norm * math.exp(-0.5 * float(z @ self._prec @ z))

    def sample(self, rng, size):
        return self.mean + rng.standard_normal((size, self.dim)) @ self._chol.T


class MultivariateTransformedModel:
    def __init__(self, base, f, name=None):
        if not isinstance(f, VectorFunction):
            raise NotAFunctionError(f)
        if f.n_in != f.n_out or f.n_in != base.dim:
            raise DimensionError(f"{f.name} must map R^{base.dim} to itself")
        if not f.invertible:
            raise CapabilityError(f, "invertible", "a model transform needs f⁻¹ for sampling")
        if not f.has_closed_form_jacobian:
            raise CapabilityError(f, "differentiable", "a model transform needs a registered Jacobian")
        self.base = base
        self.map = f
        self.name = name or f"{base.name}∘{f.name}"

    @property
    def dim(self):
        return self.base.dim

    def density(self, y):
        return self.base.density(self.map.apply(y)) * abs(jacobian_determinant(self.map, y))

    def sample(self, rng, size):
        finv = self.map.inverse()
        return np.array([finv.apply(x) for x in self.base.sample(rng, size)])


def transform_model_multivariate(base, f, name=None):
    return MultivariateTransformedModel(base, f, name)


def read_data_csv(path):
    """Read ``value[,aom]`` rows; a header row naming ``value`` is optional."""
    data = []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    start = 0
    if rows and rows[0] and rows[0][0].strip().lower() == "value":
        start = 1
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if not row or not "".join(row).strip():
            continue
        try:
            value = float(row[0])
            aom = float(row[1]) if len(row) > 1 and row[1].strip() else DEFAULT_AOM
        except ValueError as exc:
            raise ValueError(f"row {lineno}: {exc}") from exc
        data.append((lineno, Datum(value, aom)))
    return data


def model_to_json(model):
    if isinstance(model, TransformedModel):
        payload = {
            "name": model.base.name,
            "params": model.base.params,
            "transform_name": model.map.name,
        }
    else:
        payload = {"name": model.name, "params": model.params, "transform_name": None}
    return json.dumps(payload, sort_keys=True)


_MODELS = {"Normal": Normal}


def model_from_json(text, resolve=None):
    """Rebuild a model; ``resolve`` maps a transform name to a ``Function``.

    Defaults to catalog lookup.
    """
    payload = json.loads(text)
    base = _MODELS[payload["name"]](**payload["params"])
    tname = payload.get("transform_name")
    if tname is None:
        return base
    if resolve is None:
        from .catalog import lookup

        def resolve(key):
            if key == "id":
                return identity()
            return lookup(key).object

    return transform_model(base, resolve(tname))
