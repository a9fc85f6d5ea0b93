import math
import threading

import pytest
from hypothesis import given, strategies as st

from fnalg import lazy
from fnalg.catalog import catalog, lookup
from fnalg.core import (
    Capabilities,
    Function,
    InverseKind,
    add,
    combine_kinds,
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
from fnalg.errors import CapabilityError, DomainError, NotAFunctionError

reals = st.floats(-10, 10, allow_nan=False)


def test_compose_applies_right_to_left(fn):
    h = compose(fn("sqr_real"), fn("succ"))
    assert h(2.0) == 9.0
    assert compose(fn("succ"), fn("sqr_real"))(2.0) == 5.0


def test_compose_name_follows_dot_notation(fn):
    assert compose(fn("sin"), fn("sqr_real")).name == "(sin.sqr_real)"


def test_unnamed_function_gets_serial_name():
    f = Function(lambda x: x)
    assert f.name == f"f{f.serial}"
    assert describe(f) == f.name


def test_serials_are_unique():
    made = [Function(abs) for _ in range(500)]
    assert len({f.serial for f in made}) == 500


def test_functions_are_immutable(fn):
    with pytest.raises(AttributeError):
        fn("sin").domain = (0, 1)
    with pytest.raises(AttributeError):
        fn("sin")._body = math.cos


def test_non_function_arguments_are_rejected(fn):
    with pytest.raises(NotAFunctionError):
        compose(fn("sin"), 3)
    with pytest.raises(NotAFunctionError):
        compose(math.sin, fn("sin"))


def test_domain_errors_surface_as_domain_error(fn):
    with pytest.raises(DomainError) as info:
        fn("log")(-1.0)
    assert info.value.x == -1.0
    with pytest.raises(DomainError):
        fn("oneOver")(0.0)
    with pytest.raises(DomainError):
        fn("sin")(float("nan"))
    with pytest.raises(DomainError):
        fn("exp")(1000.0)


def test_division_by_zero_is_a_domain_error(fn):
    with pytest.raises(DomainError):
        div(fn("sin"), fn("sin"))(0.0)


def test_capability_tiers_of_catalog(fn):
    assert fn("identity").capabilities.tier == "invertible+differentiable"
    assert fn("exp").capabilities.tier == "invertible+differentiable"
    assert fn("sin").capabilities.tier == "differentiable"
    assert fn("floor").capabilities.tier == "applicable"
    assert fn("succ").capabilities == Capabilities(True, True)


def test_capabilities_and_is_componentwise():
    a, b = Capabilities(True, False), Capabilities(True, True)
    assert a & b == Capabilities(True, False)
    assert (a & b).tier == "invertible"


def test_capability_propagation_over_catalog_pairs():
    scalar = [e.object for e in catalog() if isinstance(e.object, Function) and e.key != "leng"]
    mixed = {InverseKind.LEFT_ONLY, InverseKind.RIGHT_ONLY}
    for f in scalar:
        for g in scalar:
            got = compose(f, g).capabilities
            expected = f.capabilities & g.capabilities
            if expected.invertible and {f.inverse_kind, g.inverse_kind} == mixed:
                expected = expected._replace(invertible=False)
            assert got == expected, (f.name, g.name)


def test_applicable_only_refuses_inverse_and_derivative(fn):
    with pytest.raises(CapabilityError) as info:
        fn("floor").derivative()
    assert info.value.tier == "differentiable"
    with pytest.raises(CapabilityError) as info:
        fn("sin").inverse()
    assert info.value.tier == "invertible"


def test_combine_kinds_table():
    two, left, right = InverseKind.TWO_SIDED, InverseKind.LEFT_ONLY, InverseKind.RIGHT_ONLY
    assert combine_kinds(two, two) is two
    assert combine_kinds(two, left) is left
    assert combine_kinds(right, two) is right
    assert combine_kinds(left, left) is left
    assert combine_kinds(left, right) is None
    assert left.mirrored is right and two.mirrored is two


def test_mixed_one_sided_composite_is_not_invertible(fn):
    sr, arcsin = fn("sin_restricted"), fn("arcsin")
    assert sr.inverse_kind is InverseKind.RIGHT_ONLY
    assert arcsin.inverse_kind is InverseKind.LEFT_ONLY
    h = compose(arcsin, sr)
    assert not h.invertible
    with pytest.raises(CapabilityError, match="right_only"):
        h.inverse()


def test_identity_is_unit_and_singleton(fn):
    one = identity()
    assert one is identity()
    assert one.inverse() is one
    for f in (fn("sin"), fn("exp"), fn("floor")):
        for x in (-2.5, 0.0, 1.75):
            assert compose(one, f)(x) == f(x) == compose(f, one)(x)


@given(reals)
def test_associativity_is_exact(x):
    f, g, h = lookup("sin").object, lookup("sqr_real").object, lookup("succ").object
    assert compose(compose(f, g), h)(x) == compose(f, compose(g, h))(x)


@given(reals, reals)
def test_pointwise_arithmetic(x, c):
    sin, cos = lookup("sin").object, lookup("cos").object
    assert add(sin, cos)(x) == math.sin(x) + math.cos(x)
    assert sub(sin, cos)(x) == math.sin(x) - math.cos(x)
    assert mul(sin, cos)(x) == math.sin(x) * math.cos(x)
    assert neg(sin)(x) == -math.sin(x)
    assert (sin + c)(x) == math.sin(x) + c
    assert (c * sin)(x) == c * math.sin(x)


def test_operators_match_functions(fn):
    sin, succ = fn("sin"), fn("succ")
    assert (sin @ succ)(1.0) == compose(sin, succ)(1.0)
    assert (succ ** 3)(1.0) == 4.0
    assert (-sin)(1.0) == -math.sin(1.0)
    assert (sin / 2)(1.0) == math.sin(1.0) / 2


def test_iterate(fn):
    assert iterate(fn("succ"), 5)(0.0) == 5.0
    assert iterate(fn("succ"), 0) is identity()
    assert iterate(fn("succ"), 3).inverse()(3.0) == 0.0
    with pytest.raises(ValueError):
        iterate(fn("succ"), -1)


def test_constant_function():
    c = constant(2.5)
    assert c(100.0) == 2.5
    assert c.derivative()(3.0) == 0.0
    assert c.name == "2.5"


def test_leng_is_not_numeric(fn):
    leng = fn("leng")
    assert leng("hello") == 5
    assert compose(leng, Function(lambda s: s + s))("abc") == 6
    assert leng.capabilities.tier == "applicable"


def test_apply_is_deterministic(fn):
    for key in ("sin", "exp", "exp2x", "floor"):
        f = fn(key)
        assert f(0.3) == f(0.3)


def test_concurrent_derivative_demand_builds_once():
    f = Function(math.sin, "s", derivative=lambda: Function(math.cos, "c"))
    before = lazy.maker_calls()
    seen = []
    barrier = threading.Barrier(8)

    def worker():
        barrier.wait()
        seen.append(f.derivative())

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert lazy.maker_calls() - before == 1
    assert all(d is seen[0] for d in seen)


def test_module_doctest():
    import doctest

    import fnalg.core

    assert doctest.testmod(fnalg.core).failed == 0
