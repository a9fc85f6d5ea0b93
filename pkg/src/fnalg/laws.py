"""Executable law suites behind ``fnalg check``.

Each suite takes a catalog (a list of :class:`~fnalg.catalog.CatalogEntry`)
and returns one :class:`LawResult` per law, carrying the worst sample and its
error so a failure says where it went wrong.
"""

import dataclasses
import itertools
import math

import numpy as np

from . import config, lazy
from .core import Function, add, compose, identity
from .differentiable import fd_derivative, nth_derivative
from .errors import DomainError, FnAlgError
from .integration import QuadratureConfig, antiderivative, definite_integral, simpson
from .invertible import roundtrip_report, sample_points
from .models import (
    Datum,
    MultivariateNormal,
    N01,
    Normal,
    normalization,
    transform_model,
    transform_model_multivariate,
    transformed_aom,
)
from .multivariate import (
    cartesian2polar,
    compose as vcompose,
    fd_jacobian,
    jacobian_determinant,
    polar2cartesian,
)
from .specialized import (
    LinearMap,
    PermutationFunction,
    identity_perm,
    perm_compose,
    perm_inverse,
)

SUITES = ("algebra", "inverse", "derivative", "integral", "multivariate", "perm", "model")

DEFAULT_SAMPLES = 100
CHAIN_RULE_KEYS = ("sin", "cos", "exp", "sqr_real", "exp2x")
# exp2x∘exp2x has local growth rate ~4e^{2|x|}; beyond |x|=0.5 the O(h²)
# error of the finite-difference oracle itself exceeds 1e-4
CHAIN_RULE_DOMAIN = (-0.5, 0.5)


@dataclasses.dataclass
class LawResult:
    suite: str
    law: str
    passed: bool
    error: float
    tol: float
    worst: object = None

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        where = "" if self.worst is None else f" worst_at={_fmt(self.worst)}"
        return f"{status} {self.suite}.{self.law} error={self.error:.3g} tol={self.tol:.3g}{where}"


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, tuple):
        return "(" + ",".join(_fmt(v) for v in value) + ")"
    return str(value)


def _law(suite, law, samples, tol):
    """Reduce ``(where, error)`` pairs to the worst one.

    A library error raised while producing samples fails the law outright.
    """
    worst_at, worst = None, 0.0
    try:
        for where, err in samples:
            if not err <= worst:
                worst_at, worst = where, err
                if math.isnan(err):
                    break
    except FnAlgError as exc:
        worst_at, worst = f"{type(exc).__name__}: {exc}", math.inf
    return LawResult(suite, law, worst <= tol, worst, tol, worst_at)


def _rel(a, b):
    return abs(a - b) / (1.0 + abs(b))


def _agree(left, right, x):
    """Relative gap between two evaluations; a lone domain error counts as infinite."""
    try:
        a = left.apply(x)
    except DomainError:
        a = None
    try:
        b = right.apply(x)
    except DomainError:
        b = None
    if a is None and b is None:
        return 0.0
    if a is None or b is None:
        return math.inf
    return _rel(a, b)


def _scalar(entries, keys=None):
    out = [e for e in entries if isinstance(e.object, Function) and e.key != "leng"]
    if keys is not None:
        by_key = {e.key: e for e in out}
        out = [by_key[k] for k in keys]
    return out


def _points(entry, k=DEFAULT_SAMPLES, check=False):
    domain = (entry.check_domain if check else entry.domain) or (-10.0, 10.0)
    return [float(x) for x in sample_points(domain, k)]


# -- algebra -------------------------------------------------------------------

ASSOC_KEYS = ("identity", "succ", "pred", "sqr_real", "sin", "cos", "abs", "floor")


def algebra_suite(entries):
    s = "algebra"
    scalar = _scalar(entries)
    assoc = _scalar(entries, ASSOC_KEYS)

    def associativity():
        for f, g, h in itertools.product(assoc, repeat=3):
            left = compose(compose(f.object, g.object), h.object)
            right = compose(f.object, compose(g.object, h.object))
            for x in _points(h, 25):
                yield (f"({f.key},{g.key},{h.key})@{x:.4g}", _agree(left, right, x))

    def identity_laws():
        one = identity()
        for e in scalar:
            f = e.object
            for x in _points(e, 25):
                yield (f"{e.key}@{x:.4g}", max(_agree(compose(one, f), f, x), _agree(compose(f, one), f, x)))

    def propagation():
        for a, b in itertools.product(scalar, repeat=2):
            f, g = a.object, b.object
            expected = f.capabilities & g.capabilities
            if expected.invertible and {f.inverse_kind.value, g.inverse_kind.value} == {"left_only", "right_only"}:
                expected = expected._replace(invertible=False)
            yield (f"({a.key}.{b.key})", 0.0 if compose(f, g).capabilities == expected else 1.0)

    def determinism():
        for e in scalar:
            for x in _points(e, 10):
                try:
                    first = e.object.apply(x)
                    again = [e.object.apply(x) for _ in range(3)]
                except DomainError:
                    continue
                same = all(v == first or (v != v and first != first) for v in again)
                yield (f"{e.key}@{x:.4g}", 0.0 if same else 1.0)

    def serials():
        made = [Function(lambda x: x) for _ in range(1000)]
        yield ("1000 objects", float(1000 - len({f.serial for f in made})))

    return [
        _law(s, "associativity", associativity(), 1e-12),
        _law(s, "identity", identity_laws(), 1e-12),
        _law(s, "capability-propagation", propagation(), 0.0),
        _law(s, "apply-determinism", determinism(), 0.0),
        _law(s, "serial-uniqueness", serials(), 0.0),
    ]


# -- inverse -------------------------------------------------------------------

def _invertible(entries):
    return [e for e in _scalar(entries) if e.object.invertible]


def inverse_suite(entries):
    s = "inverse"
    results = []
    inv = _invertible(entries)
    for e in inv:
        for law, worst_x, err in roundtrip_report(e.object, e.domain, DEFAULT_SAMPLES):
            results.append(LawResult(s, f"roundtrip[{e.key}].{law}", err <= 1e-8, err, 1e-8, worst_x))

    def involution():
        for e in inv:
            yield (e.key, 0.0 if e.object.inverse().inverse() is e.object else 1.0)

    results.append(_law(s, "involution", involution(), 0.0))

    def pairs():
        for a, b in itertools.product(inv, repeat=2):
            fg = compose(a.object, b.object)
            if fg.invertible:
                yield a, b, fg

    def composition_law():
        for a, b, fg in pairs():
            expected = compose(b.object.inverse(), a.object.inverse())
            for x in _points(b, 20):
                try:
                    y = fg.apply(x)
                except DomainError:
                    continue
                yield (f"({a.key}.{b.key})@{y:.4g}", _agree(fg.inverse(), expected, y))

    def composite_roundtrip():
        for a, b, fg in pairs():
            if fg.inverse_kind.value != "two_sided":
                continue
            back = fg.inverse()
            for x in _points(b, 20):
                try:
                    y = back.apply(fg.apply(x))
                except DomainError:
                    continue
                yield (f"({a.key}.{b.key})@{x:.4g}", _rel(y, x))

    results.append(_law(s, "composition-inverse", composition_law(), 1e-8))
    results.append(_law(s, "composite-roundtrip", composite_roundtrip(), 1e-8))
    return results


# -- derivative ----------------------------------------------------------------

def derivative_suite(entries):
    s = "derivative"
    results = []
    scalar = _scalar(entries)
    for e in scalar:
        f = e.object
        if not f.has_closed_form_derivative:
            continue
        closed, oracle = f.derivative(), fd_derivative(f)

        def gaps(closed=closed, oracle=oracle, e=e):
            for x in _points(e, check=True):
                try:
                    cf = closed.apply(x)
                except DomainError:
                    continue
                yield (x, abs(cf - oracle.apply(x)) / (1.0 + abs(cf)))

        results.append(_law(s, f"closed-form-vs-fd[{e.key}]", gaps(), 1e-4))

    chain = _scalar(entries, CHAIN_RULE_KEYS)

    def chain_rule():
        for a, b in itertools.product(chain, repeat=2):
            fg = compose(a.object, b.object)
            d, oracle = fg.derivative(), fd_derivative(fg)
            for x in sample_points(CHAIN_RULE_DOMAIN, DEFAULT_SAMPLES):
                v = d.apply(float(x))
                yield (f"({a.key}.{b.key})@{x:.4g}", abs(v - oracle.apply(float(x))) / (1.0 + abs(v)))

    def sum_rule():
        closed = [e for e in scalar if e.object.has_closed_form_derivative]
        for a, b in itertools.product(closed, repeat=2):
            f, g = a.object, b.object
            left = add(f, g).derivative()
            right = add(f.derivative(), g.derivative())
            for x in _points(b, 20, check=True):
                yield (f"({a.key}+{b.key})@{x:.4g}", _agree(left, right, x))

    def memoization():
        for e in scalar:
            if e.object.differentiable:
                yield (e.key, 0.0 if e.object.derivative() is e.object.derivative() else 1.0)

    def laziness():
        by_key = {e.key: e.object for e in scalar}
        before = lazy.maker_calls()
        fg = compose(by_key["exp"], by_key["sqr_real"])
        built = lazy.maker_calls() - before
        fg.derivative()
        demanded = lazy.maker_calls() - before
        yield ("construction", float(built))
        yield ("first demand", abs(demanded - 1.0))

    def tower():
        exp2x = {e.key: e.object for e in scalar}["exp2x"]
        yield ("d3 exp2x @0", abs(nth_derivative(exp2x, 3).apply(0.0) - 8.0))

    def fdf():
        for e in scalar:
            f = e.object
            if not f.differentiable:
                continue
            for x in _points(e, 20, check=True):
                try:
                    v, dv = f.value_and_derivative(x)
                    v0, dv0 = f.apply(x), f.derivative().apply(x)
                except DomainError:
                    continue
                yield (f"{e.key}@{x:.4g}", max(_rel(v, v0), _rel(dv, dv0)))

    results += [
        _law(s, "chain-rule", chain_rule(), 1e-4),
        _law(s, "sum-rule", sum_rule(), 1e-10),
        _law(s, "memoization", memoization(), 0.0),
        _law(s, "laziness", laziness(), 0.0),
        _law(s, "tower-depth-3", tower(), 1e-2),
        _law(s, "value-and-derivative", fdf(), 1e-8),
    ]
    return results


# -- integral ------------------------------------------------------------------

def integral_suite(entries):
    s = "integral"
    scalar = _scalar(entries)
    by_key = {e.key: e for e in scalar}

    def sine():
        yield ("[0,pi]", abs(definite_integral(by_key["sin"].object, 0.0, math.pi, closed_form=False) - 2.0))

    def cubic():
        for coeffs in ((1.0, -2.0, 0.5, 3.0), (0.0, 0.0, 0.0, 1.0), (2.0, 1.0, 0.0, 0.0)):
            a0, a1, a2, a3 = coeffs
            p = Function(lambda x: a0 + a1 * x + a2 * x * x + a3 * x ** 3)
            for lo, hi in ((0.0, 1.0), (-2.0, 3.0)):
                exact = sum(c * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1) for k, c in enumerate(coeffs))
                yield (f"{coeffs}[{lo},{hi}]", abs(simpson(p, lo, hi, 2) - exact))

    def ftc_derivative():
        # differentiate the antiderivative numerically so the check does not
        # just read back the registered derivative
        for key in ("sin", "cos", "exp", "sqr_real", "succ"):
            e = by_key[key]
            lo, _ = e.check_domain
            F = antiderivative(e.object, lo)
            yield (f"{key}: d(int) is f", 0.0 if F.derivative() is e.object else 1.0)
            oracle = fd_derivative(F)
            for x in _points(e, 50, check=True):
                yield (f"{key}@{x:.4g}", _rel(oracle.apply(x), e.object.apply(x)))

    def ftc_integral():
        for key in ("sin", "cos", "exp", "sqr_real", "succ"):
            g = by_key[key].object
            lo, hi = by_key[key].check_domain
            a, b = lo / 2.0, hi / 2.0
            got = definite_integral(g.derivative(), a, b, closed_form=False)
            yield (f"{key}[{a:g},{b:g}]", abs(got - (g.apply(b) - g.apply(a))))

    def additivity():
        cfg = QuadratureConfig.current()
        for key in ("sin", "exp", "sqr_real", "cos"):
            f = by_key[key].object
            whole = definite_integral(f, -1.0, 2.5, cfg, closed_form=False)
            parts = (definite_integral(f, -1.0, 0.7, cfg, closed_form=False)
                     + definite_integral(f, 0.7, 2.5, cfg, closed_form=False))
            yield (key, abs(whole - parts))

    def laziness():
        calls = []
        f = Function(lambda x: calls.append(x) or x)
        antiderivative(f, 0.0)
        yield ("construction", float(len(calls)))

    tol = QuadratureConfig.current().abs_tol
    return [
        _law(s, "sin-0-pi", sine(), 1e-9),
        _law(s, "simpson-cubic-exact", cubic(), 1e-12),
        _law(s, "fundamental-theorem-derivative", ftc_derivative(), 1e-6),
        _law(s, "fundamental-theorem-integral", ftc_integral(), 1e-5),
        _law(s, "additivity", additivity(), 2 * tol),
        _law(s, "antiderivative-laziness", laziness(), 0.0),
    ]


# -- multivariate --------------------------------------------------------------

def multivariate_suite(entries):
    s = "multivariate"
    from .multivariate import VectorFunction, sample_points as vsample

    vectors = [e for e in entries if isinstance(e.object, VectorFunction)]

    def jacobians():
        for e in vectors:
            f = e.object
            if not f.has_closed_form_jacobian:
                continue
            for x in vsample(e.domain, 50, seed=1):
                J, F = f.jacobian(x), fd_jacobian(f, x)
                yield (f"{e.key}@{_fmt(tuple(float(v) for v in x))}", float(np.max(np.abs(J - F) / (1.0 + np.abs(J)))))

    def polar_roundtrip():
        for p in vsample([(1e-3, 10.0), (-math.pi + 1e-9, math.pi - 1e-9)], DEFAULT_SAMPLES, seed=2):
            back = cartesian2polar.apply(polar2cartesian.apply(p))
            yield (tuple(p), float(np.max(np.abs(back - p))))

    def polar_det():
        for r in np.linspace(0.5, 5.0, 20):
            for theta in np.linspace(-math.pi, math.pi, 22)[1:-1]:
                yield ((float(r), float(theta)), abs(jacobian_determinant(polar2cartesian, [r, theta]) - r))

    def reciprocity():
        for q in vsample([(-5.0, 5.0), (-5.0, 5.0)], 50, seed=3):
            p = cartesian2polar.apply(q)
            prod = jacobian_determinant(cartesian2polar, q) * jacobian_determinant(polar2cartesian, p)
            yield (tuple(q), abs(prod - 1.0))

    def multiplicativity():
        shear = LinearMap([[1.0, 0.2], [0.0, 0.5]])
        fg = vcompose(polar2cartesian, shear)
        for x in vsample([(1.0, 5.0), (-1.0, 1.0)], 50, seed=4):
            expected = jacobian_determinant(polar2cartesian, shear.apply(x)) * jacobian_determinant(shear, x)
            yield (tuple(x), abs(jacobian_determinant(fg, x) - expected))

    return [
        _law(s, "jacobian-closed-form-vs-fd", jacobians(), 1e-4),
        _law(s, "polar-roundtrip", polar_roundtrip(), 1e-10),
        _law(s, "polar-determinant", polar_det(), 1e-5),
        _law(s, "determinant-reciprocity", reciprocity(), 1e-4),
        _law(s, "determinant-multiplicativity", multiplicativity(), 1e-4),
    ]


# -- permutations --------------------------------------------------------------

def all_perms(n):
    return [PermutationFunction(p) for p in itertools.permutations(range(n))]


def perm_suite(entries, seed=None):
    s = "perm"
    perms = [e for e in entries if isinstance(e.object, PermutationFunction)]
    rng = np.random.default_rng(config.settings.seed if seed is None else seed)

    def catalog_valid():
        for e in perms:
            yield (e.key, 0.0 if e.object.is_valid() else 1.0)

    def catalog_inverse():
        for e in perms:
            p = e.object
            ident = identity_perm(p.n)
            ok = perm_compose(p, perm_inverse(p)) == ident and perm_compose(perm_inverse(p), p) == ident
            yield (e.key, 0.0 if ok else 1.0)

    def oracle():
        for n in range(1, 5):
            for p, q in itertools.product(all_perms(n), repeat=2):
                r = perm_compose(p, q)
                brute = tuple(p.mapping[q.mapping[i]] for i in range(n))
                yield ((str(p), str(q)), 0.0 if r.mapping == brute else 1.0)
        for _ in range(200):
            p = PermutationFunction(rng.permutation(8))
            q = PermutationFunction(rng.permutation(8))
            r = perm_compose(p, q)
            yield ((str(p), str(q)), 0.0 if all(r(i) == p(q(i)) for i in range(8)) else 1.0)

    def generic():
        for n in range(1, 7):
            for _ in range(20):
                p = PermutationFunction(rng.permutation(n))
                q = PermutationFunction(rng.permutation(n))
                fast = perm_compose(p, q)
                slow = compose(p.as_function(), q.as_function())
                yield ((str(p), str(q)), 0.0 if all(fast(i) == slow(float(i)) for i in range(n)) else 1.0)

    def group_laws():
        for n in range(1, 5):
            group = all_perms(n)
            ident = identity_perm(n)
            for p in group:
                ok = (perm_compose(ident, p) == p == perm_compose(p, ident)
                      and perm_compose(p, perm_inverse(p)) == ident
                      and perm_inverse(perm_inverse(p)) == p)
                yield (str(p), 0.0 if ok else 1.0)
            triples = itertools.product(group, repeat=3) if n <= 3 else (
                tuple(group[i] for i in rng.integers(0, len(group), 3)) for _ in range(2000)
            )
            for p, q, r in triples:
                same = perm_compose(perm_compose(p, q), r) == perm_compose(p, perm_compose(q, r))
                yield ((str(p), str(q), str(r)), 0.0 if same else 1.0)

    return [
        _law(s, "catalog-valid", catalog_valid(), 0.0),
        _law(s, "catalog-inverse", catalog_inverse(), 0.0),
        _law(s, "brute-force-oracle", oracle(), 0.0),
        _law(s, "generic-compose-oracle", generic(), 0.0),
        _law(s, "group-laws", group_laws(), 0.0),
    ]


# -- models --------------------------------------------------------------------

def lognormal_pdf(y, mu, sigma):
    z = (math.log(y) - mu) / sigma
    return math.exp(-0.5 * z * z) / (y * sigma * math.sqrt(2.0 * math.pi))


def chi_square_per_dof(model, samples, bins=20):
    """χ²/dof of a histogram of ``samples`` against the model's binned mass.

    Bins span the central 99% of the samples; expected counts integrate the
    density over each bin and are scaled by the total sample count.
    """
    samples = np.asarray(samples)
    lo, hi = np.quantile(samples, [0.005, 0.995])
    edges = np.linspace(lo, hi, bins + 1)
    observed, _ = np.histogram(samples, edges)
    density = Function(model.density)
    cfg = QuadratureConfig(panels=32, abs_tol=1e-10)
    expected = np.array([
        len(samples) * definite_integral(density, a, b, cfg) for a, b in zip(edges[:-1], edges[1:])
    ])
    return float(np.sum((observed - expected) ** 2 / expected) / (bins - 1))


def polar_normalization():
    model = transform_model_multivariate(MultivariateNormal.standard(2), polar2cartesian)
    inner_cfg = QuadratureConfig(panels=16, abs_tol=1e-7)
    outer_cfg = QuadratureConfig(panels=64, abs_tol=1e-7)

    def over_theta(r):
        ring = Function(lambda t: model.density([r, t]))
        return definite_integral(ring, -math.pi, math.pi, inner_cfg)

    return definite_integral(Function(over_theta), 1e-12, 6.0, outer_cfg)


def model_suite(entries, seed=None):
    s = "model"
    by_key = {e.key: e.object for e in _scalar(entries)}
    log, exp, succ = by_key["log"], by_key["exp"], by_key["succ"]
    seed = config.settings.seed if seed is None else seed
    lognormal = transform_model(Normal(1.0, 0.5), log)

    def density():
        for y in np.linspace(0.05, 20.0, 200):
            y = float(y)
            yield (y, abs(lognormal.density(y) - lognormal_pdf(y, 1.0, 0.5)))

    def normalized():
        models = {
            "lognormal(1,0.5)": lognormal,
            "N01.id": transform_model(N01, identity()),
            "Normal(0.2,0.3).succ": transform_model(Normal(0.2, 0.3), succ),
            "Normal(5,0.5).exp": transform_model(Normal(5.0, 0.5), exp),
        }
        for name, m in models.items():
            yield (name, abs(normalization(m) - 1.0))
        yield ("polar N(0,I2)", abs(polar_normalization() - 1.0))

    def aom():
        yield ("log@2", abs(transformed_aom(log, Datum(2.0, 0.1)) - 0.05))
        yield ("exp@0", abs(transformed_aom(exp, Datum(0.0, 0.01)) - 0.01))

    def aom_chain():
        sin = by_key["sin"]
        for f, g in ((log, exp), (exp, succ), (sin, exp), (log, succ)):
            for v in (0.1, 0.5, 1.3):
                d = Datum(v, 0.01)
                whole = transformed_aom(compose(f, g), d)
                stepwise = transformed_aom(f, Datum(g.apply(v), transformed_aom(g, d)))
                yield (f"({f.name}.{g.name})@{v}", abs(whole - stepwise) / abs(stepwise))

    def sampling():
        rng = np.random.default_rng(seed)
        yield ("lognormal", chi_square_per_dof(lognormal, lognormal.sample(rng, 100_000)))

    def identity_noop():
        m = transform_model(N01, identity())
        for y in np.linspace(-5, 5, 41):
            yield (float(y), abs(m.density(float(y)) - N01.density(float(y))))
        a = m.sample(np.random.default_rng(seed), 1000)
        b = N01.sample(np.random.default_rng(seed), 1000)
        yield ("stream", 0.0 if np.array_equal(a, b) else 1.0)

    return [
        _law(s, "lognormal-density", density(), 1e-10),
        _law(s, "normalization", normalized(), 1e-3),
        _law(s, "transformed-aom", aom(), 1e-6),
        _law(s, "aom-chain-rule", aom_chain(), 1e-8),
        _law(s, "sampling-chi2-per-dof", sampling(), 2.0),
        _law(s, "identity-transform", identity_noop(), 1e-12),
    ]


_RUNNERS = {
    "algebra": algebra_suite,
    "inverse": inverse_suite,
    "derivative": derivative_suite,
    "integral": integral_suite,
    "multivariate": multivariate_suite,
    "perm": perm_suite,
    "model": model_suite,
}


def run_suite(name, entries):
    """Run one suite (or ``"all"``); a crashing law is reported as a failure."""
    names = SUITES if name == "all" else (name,)
    results = []
    for suite in names:
        if suite not in _RUNNERS:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
        try:
            results.extend(_RUNNERS[suite](entries))
        except FnAlgError as exc:
            results.append(LawResult(suite, f"crashed:{type(exc).__name__}", False, math.inf, 0.0, str(exc)))
    return results
