import itertools

import numpy as np
import pytest

from polar.errors import InvalidParameter, LengthMismatch, SingularMatrix
from polar.kernel import (
    CNOT, G3, G4, GF2, KERNELS, apply_kernel, is_polarizing, kernel_by_name, kernel_tensor, make_kernel,
    pattern_bits, pattern_index,
)


def test_cnot_maps_pair_to_sum_and_second_bit():
    assert apply_kernel(CNOT, (1, 1)) == (0, 1)
    assert apply_kernel(CNOT, (1, 0)) == (1, 0)
    assert apply_kernel(CNOT, (0, 1)) == (1, 1)


@pytest.mark.parametrize('kernel', [CNOT, G3, G4])
def test_zero_word_is_fixed(kernel):
    assert apply_kernel(kernel, (0,) * kernel.breadth) == (0,) * kernel.breadth


def test_g3_rows_are_images_of_unit_words():
    assert apply_kernel(G3, (1, 0, 0)) == (1, 0, 0)
    assert apply_kernel(G3, (0, 1, 0)) == (1, 1, 0)
    assert apply_kernel(G3, (0, 0, 1)) == (0, 1, 1)


def test_make_kernel_rejects_singular_matrix():
    with pytest.raises(SingularMatrix):
        make_kernel([[1, 1], [1, 1]])


@pytest.mark.parametrize('matrix', [[[1, 0, 0], [0, 1, 0]], [[1, 2], [0, 1]], [[1]], 'abc'])
def test_make_kernel_rejects_malformed_matrix(matrix):
    with pytest.raises(InvalidParameter):
        make_kernel(matrix)


def test_apply_kernel_checks_length():
    with pytest.raises(LengthMismatch):
        apply_kernel(CNOT, (1, 0, 1))


def test_builtin_kernels_polarize():
    assert all(is_polarizing(kernel) for kernel in (CNOT, G3, G4))


@pytest.mark.parametrize('matrix', [[[1, 0], [0, 1]], [[0, 1], [1, 0]], [[0, 0, 1], [1, 0, 0], [0, 1, 0]]])
def test_permutations_do_not_polarize(matrix):
    assert not is_polarizing(make_kernel(matrix))


def test_cnot_tensor_swaps_patterns_10_and_11():
    expected = np.array([
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ])
    np.testing.assert_array_equal(kernel_tensor(CNOT), expected)


def test_identity_tensor_is_identity():
    np.testing.assert_array_equal(kernel_tensor(make_kernel([[1, 0], [0, 1]])), np.eye(4))


def test_g3_tensor_sends_100_to_110():
    tensor = kernel_tensor(G3)
    assert tensor[0b110, 0b100] == 1
    assert tensor[:, 0b100].sum() == 1


@pytest.mark.parametrize('kernel', [CNOT, G3, G4])
def test_tensor_is_a_permutation_matrix(kernel):
    tensor = kernel_tensor(kernel)
    assert set(np.unique(tensor)) <= {0, 1}
    assert (tensor.sum(axis=0) == 1).all()
    assert (tensor.sum(axis=1) == 1).all()


@pytest.mark.parametrize('kernel', [CNOT, G3, G4])
def test_kernel_is_linear(kernel):
    words = list(itertools.product((0, 1), repeat=kernel.breadth))
    for u, v in itertools.product(words, repeat=2):
        total = tuple(a ^ b for a, b in zip(u, v))
        expected = tuple(a ^ b for a, b in zip(apply_kernel(kernel, u), apply_kernel(kernel, v)))
        assert apply_kernel(kernel, total) == expected


@pytest.mark.parametrize('kernel', [CNOT, G3, G4])
def test_inverse_undoes_kernel(kernel):
    inverse = make_kernel(np.asarray(np.linalg.inv(GF2(kernel.array)), dtype=np.uint8), 'inverse')
    for word in itertools.product((0, 1), repeat=kernel.breadth):
        assert apply_kernel(inverse, apply_kernel(kernel, word)) == word


def test_tables_in_both_bit_orders():
    np.testing.assert_array_equal(CNOT.table, [0, 1, 3, 2])
    np.testing.assert_array_equal(CNOT.wire_table, [0, 3, 2, 1])


def test_pattern_index_inverts_pattern_bits():
    for lsb_first in (True, False):
        bits = pattern_bits(4, lsb_first)
        np.testing.assert_array_equal(pattern_index(bits, lsb_first), np.arange(16))
    assert pattern_index((1, 0, 0)) == 1
    assert pattern_index((1, 0, 0), lsb_first=False) == 4


def test_registry_lookup():
    assert set(KERNELS) == {'cnot', 'g3', 'g4'}
    assert kernel_by_name('G3') is G3
    with pytest.raises(InvalidParameter):
        kernel_by_name('g5')


def test_dict_form_rebuilds_kernel():
    assert type(G4).from_dict(G4.to_dict()) == G4
