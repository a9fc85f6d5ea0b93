import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fnalg.core import compose
from fnalg.errors import DimensionError, SingularMatrixError
from fnalg.multivariate import jacobian_determinant
from fnalg.specialized import (
    LinearMap,
    PermutationFunction,
    format_permutation,
    identity_matrix,
    identity_perm,
    linear_compose,
    linear_inverse,
    parse_matrix,
    parse_permutation,
    perm_apply,
    perm_compose,
    perm_inverse,
    rotation,
)

perms = st.integers(1, 9).flatmap(lambda n: st.permutations(list(range(n))))


def test_compose_reads_right_to_left():
    p, q = PermutationFunction([1, 2, 0]), PermutationFunction([0, 2, 1])
    r = perm_compose(p, q)
    assert r.mapping == (1, 0, 2)
    assert all(r(i) == p(q(i)) for i in range(3))


def test_exhaustive_small_groups_against_brute_force():
    for n in range(1, 5):
        group = [PermutationFunction(m) for m in itertools.permutations(range(n))]
        for p, q in itertools.product(group, repeat=2):
            assert perm_compose(p, q).mapping == tuple(p.mapping[q.mapping[i]] for i in range(n))


def test_matches_generic_composition():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p, q = (PermutationFunction(rng.permutation(6)) for _ in range(2))
        slow = compose(p.as_function(), q.as_function())
        assert all(perm_compose(p, q)(i) == slow(float(i)) for i in range(6))


@given(perms)
def test_group_laws(m):
    p = PermutationFunction(m)
    e = identity_perm(p.n)
    assert perm_compose(p, perm_inverse(p)) == e == perm_compose(perm_inverse(p), p)
    assert perm_compose(e, p) == p == perm_compose(p, e)
    assert perm_inverse(perm_inverse(p)) is p


@given(perms, st.randoms())
def test_associativity(m, rnd):
    n = len(m)
    q = PermutationFunction(rnd.sample(range(n), n))
    r = PermutationFunction(rnd.sample(range(n), n))
    p = PermutationFunction(m)
    assert perm_compose(perm_compose(p, q), r) == perm_compose(p, perm_compose(q, r))


def test_representation_closure():
    p = PermutationFunction([1, 0])
    assert (p @ p).rep == "permutation"
    a = LinearMap([[1.0, 2.0], [0.0, 1.0]])
    assert linear_compose(a, a).rep == "matrix"
    assert (a @ a).rep == "matrix"


def test_validation_and_errors():
    with pytest.raises(ValueError):
        PermutationFunction([0, 0, 1])
    with pytest.raises(IndexError):
        perm_apply(PermutationFunction([0, 1]), 2)
    with pytest.raises(DimensionError):
        perm_compose(identity_perm(2), identity_perm(3))
    with pytest.raises(AttributeError):
        PermutationFunction([0]).mapping = (0,)


def test_parse_and_format():
    p = parse_permutation("[2,0,1]")
    assert p.mapping == (2, 0, 1)
    assert format_permutation(p) == "[2,0,1]" == str(p)
    with pytest.raises(ValueError):
        parse_permutation("2,0,1")


def test_linear_inverse_residual():
    rng = np.random.default_rng(11)
    for n in (2, 3, 5):
        a = LinearMap(rng.normal(size=(n, n)) + n * np.eye(n))
        prod = linear_compose(a, linear_inverse(a))
        assert np.allclose(prod.matrix, np.eye(n), atol=1e-10)
        assert a.inverse().inverse() is a


def test_singular_matrix_is_rejected():
    with pytest.raises(SingularMatrixError):
        linear_inverse(LinearMap([[1.0, 2.0], [2.0, 4.0]]))
    assert not LinearMap([[1.0, 2.0], [2.0, 4.0]]).invertible
    with pytest.raises(DimensionError):
        linear_inverse(LinearMap([[1.0, 2.0, 3.0]]))


def test_rotation_is_orthogonal():
    r = rotation(0.4)
    assert np.allclose(r.inverse().matrix, r.matrix.T)
    assert jacobian_determinant(r, [1.0, 2.0]) == pytest.approx(1.0)
    assert np.allclose(r([1.0, 0.0]), [math.cos(0.4), math.sin(0.4)])


def test_matrix_is_read_only_and_parseable():
    m = parse_matrix("[[1,2],[3,4]]")
    assert m.to_list() == [[1.0, 2.0], [3.0, 4.0]]
    with pytest.raises(ValueError):
        m.matrix[0, 0] = 5.0
    assert identity_matrix(3).invertible
