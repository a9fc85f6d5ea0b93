"""Function objects with capability tiers, lazy derivatives and change-of-variables models."""

from .catalog import build_catalog, catalog, lookup
from .core import (
    Capabilities,
    Function,
    InverseKind,
    add,
    apply,
    compose,
    constant,
    describe,
    div,
    identity,
    iterate,
    mul,
    neg,
    sub,
)
from .differentiable import derivative, fd_derivative, nth_derivative, value_and_derivative
from .errors import (
    CapabilityError,
    ConvergenceError,
    DegenerateError,
    DimensionError,
    DomainError,
    FnAlgError,
    InsufficientDataError,
    InverseValidationError,
    NotAFunctionError,
    NotFoundError,
    SingularMatrixError,
)
from .integration import QuadratureConfig, antiderivative, definite_integral, simpson
from .invertible import inverse, make_invertible
from .models import Datum, Normal, fit_normal, transform_model, transformed_aom
from .multivariate import VectorFunction, jacobian, jacobian_determinant
from .specialized import LinearMap, PermutationFunction, linear_compose, linear_inverse, perm_compose, perm_inverse

__version__ = "0.1.0"
