import pytest

from symdiag.sequences import control_codes, gray_code, half_gray_code, rai, to_index

# (CC_m, RAI_m) rows of the F-block parameter table for a 6-qubit register
TABLE = {
    1: [(0, "110000")],
    2: [(1, "101000"), (1, "011000")],
    3: [(1, "100100"), (2, "010100"), (1, "111100"), (2, "001100")],
    4: [(1, "100010"), (2, "010010"), (1, "111010"), (3, "001010"),
        (1, "101110"), (2, "011110"), (1, "110110"), (3, "000110")],
    5: [(1, "100001"), (2, "010001"), (1, "111001"), (3, "001001"),
        (1, "101101"), (2, "011101"), (1, "110101"), (4, "000101"),
        (1, "100111"), (2, "010111"), (1, "111111"), (3, "001111"),
        (1, "101011"), (2, "011011"), (1, "110011"), (4, "000011")],
}


@pytest.mark.parametrize("m", sorted(TABLE))
def test_parameter_table(m):
    assert list(control_codes(m)) == [c for c, _ in TABLE[m]]
    assert list(rai(m, 6)) == [r for _, r in TABLE[m]]


def test_gray_code_small():
    assert gray_code(1) == ("0", "1")
    assert gray_code(2) == ("00", "10", "11", "01")


@pytest.mark.parametrize("m", range(1, 10))
def test_gray_code_properties(m):
    gc = gray_code(m)
    assert len(gc) == 2**m and len(set(gc)) == 2**m
    for a, b in zip(gc, gc[1:] + gc[:1]):
        assert sum(x != y for x, y in zip(a, b)) == 1


@pytest.mark.parametrize("m", range(1, 10))
def test_half_gray_code_keeps_odd_weight(m):
    hgc = half_gray_code(m)
    assert len(hgc) == 2 ** (m - 1)
    assert hgc == gray_code(m)[1::2]
    assert all(s.count("1") % 2 == 1 for s in hgc)


@pytest.mark.parametrize("m", range(1, 10))
def test_control_codes_shape(m):
    cc = control_codes(m)
    assert len(cc) == 2 ** (m - 1)
    assert cc[-1] == m - 1 if m > 1 else cc == (0,)
    assert all(0 <= c < max(m, 1) for c in cc)


def test_rai_entries_have_even_weight():
    for width in range(2, 9):
        for m in range(1, width):
            assert all(s.count("1") % 2 == 0 for s in rai(m, width))
            assert all(len(s) == width for s in rai(m, width))


def test_rai_indices_partition_even_nonzero_angles():
    # every even-weight nonzero index appears exactly once across m = 1..width-1
    for width in range(2, 9):
        seen = [to_index(s) for m in range(1, width) for s in rai(m, width)]
        expected = [j for j in range(1, 2**width) if bin(j).count("1") % 2 == 0]
        assert sorted(seen) == expected


def test_bad_arguments():
    with pytest.raises(ValueError):
        gray_code(0)
    with pytest.raises(ValueError):
        rai(4, 4)
    assert to_index("1001") == 9
