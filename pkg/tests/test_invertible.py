import itertools
import math

import pytest
from hypothesis import given, strategies as st

from fnalg.catalog import catalog
from fnalg.core import Function, InverseKind, compose
from fnalg.errors import InverseValidationError, NotAFunctionError
from fnalg.invertible import inverse, make_invertible, pair, roundtrip_report


def test_succ_inverse_is_pred(fn):
    assert fn("succ").inverse() is fn("pred")
    assert inverse(fn("succ"))(10.0) == 9.0


def test_registration_is_mutual(fn):
    for key in ("succ", "exp", "log", "oneOver", "sin_restricted", "identity"):
        f = fn(key)
        assert f.inverse().inverse() is f


def test_one_sided_kinds_mirror(fn):
    assert fn("arcsin").inverse_kind is InverseKind.LEFT_ONLY
    assert fn("sin_restricted").inverse_kind is InverseKind.RIGHT_ONLY


def test_make_invertible_validates_and_names_worst_point():
    cube = Function(lambda x: x ** 3, "cube")
    bad = Function(lambda y: y / 3.0, "third")
    with pytest.raises(InverseValidationError) as info:
        make_invertible(cube, bad)
    assert info.value.law == "left-inverse"
    assert abs(info.value.worst_x) > 9  # the sample with the biggest gap


def test_make_invertible_unchecked_flag():
    f = make_invertible(Function(lambda x: x + 1), Function(lambda x: x - 2), check=False)
    assert f.inverse()(3.0) == 1.0


def test_make_invertible_does_not_mutate_its_arguments():
    f, g = Function(lambda x: 2 * x), Function(lambda x: x / 2)
    h = make_invertible(f, g)
    assert not f.invertible and not g.invertible
    assert h.inverse().inverse() is h


def test_make_invertible_rejects_non_functions():
    with pytest.raises(NotAFunctionError):
        make_invertible(Function(abs), abs)


def test_self_inverse_must_be_two_sided():
    neg = Function(lambda x: -x)
    assert make_invertible(neg, neg).inverse() is not None
    with pytest.raises(ValueError):
        make_invertible(neg, neg, InverseKind.LEFT_ONLY)


def test_pair(fn):
    p = pair(fn("exp"))
    assert p.backward is fn("log") and p.kind is InverseKind.TWO_SIDED


def test_roundtrip_report_on_catalog():
    for entry in catalog():
        f = entry.object
        if isinstance(f, Function) and f.invertible:
            for law, x, err in roundtrip_report(f, entry.domain, 100):
                assert err <= 1e-8, (entry.key, law, x)


def _invertible_scalars():
    return [e for e in catalog() if isinstance(e.object, Function) and e.object.invertible]


def test_inverse_of_composite_matches_reversed_inverses():
    for a, b in itertools.product(_invertible_scalars(), repeat=2):
        fg = compose(a.object, b.object)
        if not fg.invertible:
            continue
        expected = compose(b.object.inverse(), a.object.inverse())
        lo, hi = b.domain
        for i in range(20):
            x = lo + (i + 0.5) * (hi - lo) / 20
            try:
                y = fg(x)
                want = expected(y)
            except ArithmeticError:
                continue
            assert fg.inverse()(y) == want


@given(st.floats(-4, 4))
def test_composite_roundtrip(x):
    from fnalg.catalog import lookup

    h = compose(lookup("exp").object, lookup("succ").object)
    assert math.isclose(h.inverse()(h(x)), x, rel_tol=1e-12, abs_tol=1e-12)
