import pytest

from pisgenus.topology.formulas import kmn_genus, kn_genus, named_genus

# ceil((n-3)(n-4)/12) for n >= 3, written out by hand
KN = {1: 0, 2: 0, 3: 0, 4: 0, 5: 1, 6: 1, 7: 1, 8: 2, 9: 3, 10: 4, 11: 5, 12: 6}


@pytest.mark.parametrize("n", range(1, 13))
def test_kn_table(n):
    assert kn_genus(n) == KN[n]


@pytest.mark.parametrize("m", range(1, 9))
@pytest.mark.parametrize("n", range(1, 9))
def test_kmn_table(m, n):
    expected = 0 if min(m, n) < 2 else -(-(m - 2) * (n - 2) // 4)
    assert kmn_genus(m, n) == expected == kmn_genus(n, m)


def test_named_examples():
    assert named_genus("K5") == 1
    assert named_genus("K3,3") == 1
    assert named_genus("K5,4") == 2
    assert named_genus("K5,5") == 3
    assert named_genus("K7") == 1 and named_genus("K8") == 2


def test_bad_inputs():
    with pytest.raises(ValueError):
        kn_genus(0)
    with pytest.raises(ValueError):
        kmn_genus(0, 3)
    with pytest.raises(ValueError):
        named_genus("Petersen")
