"""The ten acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (visible without ``-s``)
before asserting, so ``pytest tests/test_acceptance.py`` doubles as a report.
"""

import itertools
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from fnalg import lazy
from fnalg.catalog import FAULTS, catalog, lookup
from fnalg.core import Function, add, compose, identity
from fnalg.differentiable import fd_derivative, nth_derivative
from fnalg.errors import DomainError
from fnalg.integration import antiderivative, definite_integral, simpson
from fnalg.invertible import sample_points
from fnalg.laws import lognormal_pdf, polar_normalization
from fnalg.models import Datum, Normal, fit_normal, normalization, transform_model, transformed_aom
from fnalg.multivariate import jacobian_determinant, polar2cartesian
from fnalg.specialized import PermutationFunction, identity_perm, perm_compose, perm_inverse


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}")
        assert ok, detail

    return emit


def _scalars():
    return [e for e in catalog() if isinstance(e.object, Function) and e.key != "leng"]


def _value(f, x):
    try:
        return f(x)
    except DomainError:
        return None


def test_1_chain_rule(report):
    keys = ("sin", "cos", "exp", "sqr_real", "exp2x")
    xs = [float(x) for x in sample_points((-0.5, 0.5), 100)]
    start = time.perf_counter()
    worst = 0.0
    pairs = list(itertools.product(keys, repeat=2))
    for a, b in pairs:
        fg = compose(lookup(a).object, lookup(b).object)
        d, oracle = fg.derivative(), fd_derivative(fg)
        for x in xs:
            v = d(x)
            worst = max(worst, abs(v - oracle(x)) / (1 + abs(v)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-4 and elapsed < 1.0 and len(pairs) == 25
    report(1, "chain rule", ok, f"{len(pairs)} pairs x 100 points, worst scaled gap {worst:.2e} <= 1e-4, {elapsed:.3f}s < 1s")


def test_2_inverse_composition(report):
    inv = [e for e in _scalars() if e.object.invertible]
    worst, pairs, compared = 0.0, 0, 0
    for a, b in itertools.product(inv, repeat=2):
        fg = compose(a.object, b.object)
        if not fg.invertible:
            continue
        pairs += 1
        expected = compose(b.object.inverse(), a.object.inverse())
        for x in sample_points(b.domain, 100):
            y = _value(fg, float(x))
            if y is None:
                continue
            got, want = _value(fg.inverse(), y), _value(expected, y)
            if got is None and want is None:
                continue
            gap = math.inf if got is None or want is None else abs(got - want) / (1 + abs(want))
            worst = max(worst, gap)
            compared += 1
    report(2, "inverse of composite", worst <= 1e-8,
           f"{pairs} invertible pairs, {compared} points, worst relative gap {worst:.2e} <= 1e-8")


def test_3_lazy_tower(report):
    exp2x = lookup("exp2x").object
    before = lazy.maker_calls()
    built = [compose(f, g) for f, g in itertools.product([exp2x, lookup("sin").object, lookup("exp").object], repeat=2)]
    built.append(compose(exp2x, compose(exp2x, exp2x)))
    construction_calls = lazy.maker_calls() - before
    third = nth_derivative(Function(lambda x: math.exp(2 * x), "e2x", differentiable=True), 3)(0.0)
    third_catalog = nth_derivative(exp2x, 3)(0.0)
    ok = construction_calls == 0 and abs(third - 8.0) <= 1e-2 and abs(third_catalog - 8.0) <= 1e-2
    report(3, "lazy tower", ok,
           f"d3/dx3 e^(2x) at 0 = {third:.6f} (8 +- 1e-2); maker calls while composing {len(built)} objects = {construction_calls}")


def test_4_sum_rule(report):
    closed = [e for e in _scalars() if e.object.has_closed_form_derivative]
    worst, pairs = 0.0, 0
    for a, b in itertools.product(closed, repeat=2):
        lo = max(a.check_domain[0], b.check_domain[0])
        hi = min(a.check_domain[1], b.check_domain[1])
        left = add(a.object, b.object).derivative()
        right = add(a.object.derivative(), b.object.derivative())
        pairs += 1
        for x in sample_points((lo, hi), 100):
            worst = max(worst, abs(left(float(x)) - right(float(x))))
    report(4, "sum rule", worst <= 1e-10, f"{pairs} closed-form pairs x 100 points, worst gap {worst:.2e} <= 1e-10")


def test_5_permutations(report):
    start = time.perf_counter()
    mismatches, checked = 0, 0
    for n in range(1, 5):
        group = [PermutationFunction(m) for m in itertools.permutations(range(n))]
        for p, q in itertools.product(group, repeat=2):
            checked += 1
            mismatches += perm_compose(p, q).mapping != tuple(p(q(i)) for i in range(n))
    rng = np.random.default_rng(0)
    for _ in range(200):
        p, q = PermutationFunction(rng.permutation(8)), PermutationFunction(rng.permutation(8))
        checked += 1
        mismatches += perm_compose(p, q).mapping != tuple(p(q(i)) for i in range(8))
    law_failures = 0
    for n in range(1, 5):
        group = [PermutationFunction(m) for m in itertools.permutations(range(n))]
        e = identity_perm(n)
        for p in group:
            law_failures += not (perm_compose(e, p) == p == perm_compose(p, e))
            law_failures += not (perm_compose(p, perm_inverse(p)) == e == perm_compose(perm_inverse(p), p))
        for p, q, r in itertools.product(group, repeat=3):
            law_failures += perm_compose(perm_compose(p, q), r) != perm_compose(p, perm_compose(q, r))
    elapsed = time.perf_counter() - start
    ok = mismatches == 0 and law_failures == 0 and elapsed < 1.0
    report(5, "permutation oracle", ok,
           f"{checked} pairs, {mismatches} mismatches, {law_failures} group-law failures, {elapsed:.3f}s < 1s")


def test_6_polar_determinant(report):
    worst = 0.0
    for r in np.linspace(0.5, 5.0, 20):
        for theta in np.linspace(-math.pi, math.pi, 22)[1:-1]:
            worst = max(worst, abs(jacobian_determinant(polar2cartesian, [r, theta]) - r))
    report(6, "polar Jacobian determinant", worst <= 1e-5, f"20x20 grid, worst |det J - r| = {worst:.2e} <= 1e-5")


def test_7_simpson(report):
    sin = lookup("sin").object
    sine = abs(definite_integral(sin, 0.0, math.pi, closed_form=False) - 2.0)
    cubic = 0.0
    for coeffs in ((1.0, -2.0, 0.5, 3.0), (0.0, 0.0, 0.0, 1.0), (-1.5, 0.0, 2.0, -0.25)):
        p = Function(lambda x, c=coeffs: c[0] + c[1] * x + c[2] * x * x + c[3] * x ** 3)
        for lo, hi in ((0.0, 1.0), (-2.0, 1.5)):
            exact = sum(c * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1) for k, c in enumerate(coeffs))
            cubic = max(cubic, abs(simpson(p, lo, hi, 2) - exact))
    F = antiderivative(sin, 0.0)
    oracle = fd_derivative(F)
    ftc1 = max(abs(oracle(float(x)) - sin(float(x))) for x in np.linspace(0.0, math.pi, 41))
    ftc2 = 0.0
    for key in ("sin", "cos", "exp", "sqr_real"):
        g = lookup(key).object
        ftc2 = max(ftc2, abs(definite_integral(g.derivative(), -1.0, 2.0, closed_form=False) - (g(2.0) - g(-1.0))))
    ok = sine <= 1e-9 and cubic <= 1e-12 and ftc1 <= 1e-6 and ftc2 <= 1e-5 and F.derivative() is sin
    report(7, "Simpson integration", ok,
           f"|int sin - 2| = {sine:.1e}, cubic error {cubic:.1e}, d(int f) vs f {ftc1:.1e}, int f' vs delta f {ftc2:.1e}")


def test_8_lognormal_demo(report):
    start = time.perf_counter()
    log = lookup("log").object
    data = np.exp(np.random.default_rng(12345).normal(1.0, 0.5, 10_000))
    fit = fit_normal([log(float(y)) for y in data])
    model = transform_model(fit, log)
    reference = transform_model(Normal(1.0, 0.5), log)
    density_gap = max(abs(reference.density(y) - lognormal_pdf(y, 1.0, 0.5)) for y in np.linspace(0.02, 30, 400))
    aom = transformed_aom(log, Datum(2.0, 0.1))
    model.sample(np.random.default_rng(1), 10_000)
    elapsed = time.perf_counter() - start
    ok = (abs(fit.mu - 1.0) <= 0.02 and abs(fit.sigma - 0.5) <= 0.02 and density_gap <= 1e-10
          and abs(aom - 0.05) <= 1e-6 and elapsed < 5.0)
    report(8, "log-Normal demo", ok,
           f"mu={fit.mu:.4f} sigma={fit.sigma:.4f} (+-0.02), density gap {density_gap:.1e}, AoM {aom:.8f}, {elapsed:.2f}s < 5s")


def test_9_normalization(report):
    log, exp, succ = (lookup(k).object for k in ("log", "exp", "succ"))
    models = {
        "Normal(1,0.5).log": transform_model(Normal(1.0, 0.5), log),
        "Normal(0,2).log": transform_model(Normal(0.0, 2.0), log),
        "Normal(5,0.5).exp": transform_model(Normal(5.0, 0.5), exp),
        "N(0,1).id": transform_model(Normal(), identity()),
        "Normal(3,1.5).succ": transform_model(Normal(3.0, 1.5), succ),
    }
    totals = {name: normalization(m) for name, m in models.items()}
    totals["N(0,I2).polar2cartesian"] = polar_normalization()
    worst = max(abs(t - 1.0) for t in totals.values())
    detail = ", ".join(f"{k}={v:.6f}" for k, v in totals.items())
    report(9, "normalization", worst <= 1e-3, f"worst |integral - 1| = {worst:.1e}; {detail}")


def _check_all(*extra):
    return subprocess.run([sys.executable, "-m", "fnalg", "check", "all", *extra], capture_output=True, text=True)


def test_10_check_all(report):
    clean = _check_all().returncode
    faulted = {fault: _check_all("--inject-fault", fault).returncode for fault in FAULTS}
    ok = clean == 0 and all(code == 1 for code in faulted.values())
    report(10, "check all", ok, f"clean exit {clean}; " + ", ".join(f"{k} exit {v}" for k, v in faulted.items()))
