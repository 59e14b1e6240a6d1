from __future__ import annotations

import pytest

from stskein.matrix import (BlockMatrix, NotTriangular, build_block, check_triangular, diagonal_exponent,
                            independence_certificate, invert_block, is_identity, multiply_blocks)
from stskein.rings import CoeffPoly

Q = CoeffPoly.q()
one = CoeffPoly.one()


def test_trivial_block():
    B = build_block(1, 0, 1)
    assert B.rows == B.cols == [((0, 1),)]
    assert B.entry(((0, 1),), ((0, 1),)) == one
    assert check_triangular(B).ok
    assert is_identity(invert_block(B))


def test_diagonal_entry():
    B = build_block(1, 1, 2)
    c = ((0, 2), (1, -1))
    assert c in B.cols
    assert B.entry(c, c) == Q ** diagonal_exponent(c) == Q


@pytest.mark.parametrize("k", range(-2, 3))
def test_blocks(k):
    B = build_block(k, 2, 2)
    rep = check_triangular(B)
    assert rep.ok, rep.violations
    assert is_identity(multiply_blocks(B, invert_block(B)))
    assert independence_certificate(B)
    assert all(sum(e for _, e in r) == k for r in B.rows)


def test_two_by_two_inverse():
    a, b = ((0, 1),), ((0, 2), (1, -1))
    c = CoeffPoly.z() + 3
    B = BlockMatrix(1, [a, b], [a, b], {(a, a): one, (b, b): Q ** -2, (a, b): c})
    # diagonal q^-2 is off the expected exponent for b, so the check reports it
    assert not check_triangular(B).ok
    B = BlockMatrix(1, [a, b], [a, b], {(a, a): one, (b, b): Q, (a, b): c})
    inv = invert_block(B)
    assert inv.entry(b, b) == Q ** -1
    assert inv.entry(a, b) == -c * Q ** -1
    assert is_identity(multiply_blocks(B, inv))


def test_corrupted_block():
    B = build_block(0, 1, 2)
    r, c = B.rows[0], B.cols[-1]
    B.entries[(c, r)] = one  # above the diagonal
    rep = check_triangular(B)
    assert not rep.ok and rep.violations
    assert not independence_certificate(B)
    with pytest.raises(NotTriangular):
        invert_block(B)


def test_non_unit_diagonal():
    a = ((0, 1),)
    B = BlockMatrix(1, [a], [a], {(a, a): Q - 1})
    assert not check_triangular(B).ok


def test_empty_block():
    assert independence_certificate(BlockMatrix(0, [], [], {}))


def test_json_and_csv():
    B = build_block(0, 1, 2)
    data = B.to_json()
    assert set(data) == {"level", "rows", "cols", "entries"}
    assert BlockMatrix.from_json(data).entries == B.entries
    lines = B.to_csv().splitlines()
    assert len(lines) == len(B.rows) + 1


@pytest.mark.parametrize("k", range(-2, 3))
def test_literal_mode_blocks(k):
    B = build_block(k, 2, 2, canonical=False)
    assert B.rows == B.cols
    assert check_triangular(B).ok
    assert is_identity(multiply_blocks(B, invert_block(B)))
