import pytest

from mimodet.core import CountingConvention
from mimodet.complexity import (
    Algorithm,
    comparisonTable,
    formulaRm,
    measureRm,
    tableTwoReference,
)
from mimodet.exceptions import InvalidParameter

# (algorithm, U, t, real multiplications)
formula_cases = [
    (Algorithm.CHOLESKY, 8, 3, 392),
    (Algorithm.CHOLESKY, 16, 3, 2960),
    (Algorithm.CHOLESKY, 32, 3, 22816),
    (Algorithm.LDL, 8, 3, 560),
    (Algorithm.LDL, 16, 3, 3680),
    (Algorithm.LDL, 32, 3, 25792),
    (Algorithm.QR, 32, 3, 133120),
    (Algorithm.QR, 16, 3, 16896),
    (Algorithm.NSA, 16, 3, 17344),
    (Algorithm.NSA, 16, 1, 0),
    (Algorithm.GS, 16, 3, 4608),
    (Algorithm.CG, 16, 3, 5376),
]


@pytest.mark.parametrize("algorithm,U,t,expected", formula_cases)
def test_formula(algorithm, U, t, expected):
    assert formulaRm(algorithm, U, t) == expected


@pytest.mark.parametrize("algorithm", Algorithm.decompositions())
@pytest.mark.parametrize("U", [2, 3, 4, 8, 16, 32])
def test_measured_matches_formula(algorithm, U):
    assert measureRm(algorithm, U).realMul == formulaRm(algorithm, U)


@pytest.mark.parametrize("algorithm", Algorithm.decompositions())
def test_counts_do_not_depend_on_values(algorithm):
    assert measureRm(algorithm, 16, seed=0) == measureRm(algorithm, 16, seed=7)


def test_published_counts():
    for U, rows in tableTwoReference.items():
        sqrt, reciprocal, mul, _, _ = rows[Algorithm.CHOLESKY]
        measured = measureRm(Algorithm.CHOLESKY, U)
        assert (measured.sqrt, measured.reciprocal, measured.realMul) == (sqrt, reciprocal, mul)

        assert measureRm(Algorithm.LDL, U).realMul == rows[Algorithm.LDL][2]
        assert measureRm(Algorithm.LDL, U).sqrt == 0

        # published gram-schmidt rows carry 4U^2 more than the closed form
        assert rows[Algorithm.QR][2] == formulaRm(Algorithm.QR, U) + 4 * U * U


def test_corrupted_convention_changes_counts():
    corrupted = CountingConvention(complexMul=3)
    assert measureRm(Algorithm.CHOLESKY, 8, convention=corrupted).realMul != 392


def test_ordering_at_sixteen_users():
    order = sorted(Algorithm, key=lambda a: formulaRm(a, 16, 3))
    assert order == [
        Algorithm.CHOLESKY,
        Algorithm.LDL,
        Algorithm.GS,
        Algorithm.CG,
        Algorithm.QR,
        Algorithm.NSA,
    ]


def test_ordering_at_sixty_four_users():
    order = sorted(Algorithm, key=lambda a: formulaRm(a, 64, 3))
    assert order == [
        Algorithm.CG,
        Algorithm.GS,
        Algorithm.CHOLESKY,
        Algorithm.LDL,
        Algorithm.QR,
        Algorithm.NSA,
    ]


# (algorithm, lower, upper) bounds on formula(128) / formula(64)
scaling_cases = [
    (Algorithm.QR, 7.5, 8.5),
    (Algorithm.CHOLESKY, 7.5, 8.5),
    (Algorithm.LDL, 7.5, 8.5),
    (Algorithm.NSA, 7.5, 8.5),
    (Algorithm.GS, 3.5, 4.5),
    (Algorithm.CG, 3.5, 4.5),
]


@pytest.mark.parametrize("algorithm,lower,upper", scaling_cases)
def test_scaling(algorithm, lower, upper):
    ratio = formulaRm(algorithm, 128) / formulaRm(algorithm, 64)
    assert lower <= ratio <= upper


def test_bad_arguments():
    with pytest.raises(InvalidParameter):
        formulaRm(Algorithm.QR, 0)
    with pytest.raises(InvalidParameter):
        formulaRm(Algorithm.GS, 8, t=0)
    with pytest.raises(InvalidParameter):
        measureRm(Algorithm.NSA, 8)


def test_comparison_table():
    rows = comparisonTable([4, 8], t=3)
    assert len(rows) == 2 * len(Algorithm)
    assert [row["u"] for row in rows] == [4] * 6 + [8] * 6

    for row in rows:
        algorithm = Algorithm(row["algorithm"])
        assert row["t"] == 3
        assert row["formulaRm"] == formulaRm(algorithm, row["u"], 3)
        if algorithm in Algorithm.decompositions():
            assert row["measuredRm"] == row["formulaRm"]
        else:
            assert row["measuredRm"] is None


def test_single_iteration_table_notes_nsa():
    rows = comparisonTable([8], t=1)
    (nsa,) = [row for row in rows if row["algorithm"] == "NSA"]
    assert nsa["formulaRm"] == 0
    assert nsa["note"]
    assert all(not row["note"] for row in rows if row["algorithm"] != "NSA")


def test_gauss_seidel_below_half_of_cholesky():
    assert formulaRm(Algorithm.GS, 64, 3) < formulaRm(Algorithm.CHOLESKY, 64) / 2
    assert formulaRm(Algorithm.GS, 64, 3) < formulaRm(Algorithm.LDL, 64) / 2
