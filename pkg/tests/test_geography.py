import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legch.exceptions import ParameterError
from legch.services.geography import (
    GAP_MESSAGE,
    LibraryGap,
    Realization,
    admissible_by_search,
    admissible_splits,
    build_lambda_r,
    is_admissible,
    realize,
    split_is_witness,
)
from legch.services.gf2_algebra import LaurentPoly

polynomials = st.dictionaries(st.integers(-2, 3), st.integers(0, 3), max_size=4).map(LaurentPoly)


def poly(text):
    return LaurentPoly.parse(text)


# ============================================================================
# Тесты для допустимости
# ============================================================================


@pytest.mark.parametrize(
    ("text", "admissible"),
    [
        ("1+t", True),
        ("1", True),
        ("3", True),
        ("2+t", True),
        ("1+2t^-1", True),
        ("t", False),
        ("t^-1", False),
        ("1+t^-1", False),
        ("1+t^2", False),
    ],
)
def test_admissibility_examples(text, admissible):
    """Допустимость при n = 1 на известных многочленах."""
    assert is_admissible(poly(text), 1).admissible is admissible


def test_first_split_of_one_plus_t():
    """Единственное разложение 1 + t при n = 1: q = 1 + t, p = 0."""
    witness = is_admissible(poly("1+t"), 1)
    assert witness.q == poly("1+t")
    assert witness.p == LaurentPoly()
    assert list(admissible_splits(poly("1+t"), 1)) == [(poly("1+t"), LaurentPoly())]
    verdict = witness.to_verdict()
    assert verdict.admissible and verdict.q == "1 + t"


def test_even_dimension_needs_zero_remainder():
    """При чётном n значение p(-1) обязано быть нулём."""
    assert is_admissible(poly("1+t"), 2).admissible
    assert not is_admissible(poly("1+t^3"), 2).admissible
    assert is_admissible(poly("1+t+t^2"), 2).admissible


def test_split_is_witness():
    """Проверка данного разложения по определению."""
    assert split_is_witness(poly("1+t"), LaurentPoly(), 1)
    assert not split_is_witness(poly("t"), poly("1"), 1), "q_0 >= 1"
    assert not split_is_witness(poly("1"), poly("t^-1"), 1), "p(-1) нечётно"


def test_dimension_must_be_positive():
    """n < 1 - ошибка параметров."""
    with pytest.raises(ParameterError):
        is_admissible(poly("1"), 0)


@settings(max_examples=200)
@given(polynomials, st.integers(1, 3))
def test_admissibility_matches_search(polynomial, n):
    """Перебор разложений в порядке совпадает с полным перебором."""
    assert is_admissible(polynomial, n).admissible == admissible_by_search(polynomial, n)


@settings(max_examples=100)
@given(polynomials, st.integers(1, 3))
def test_every_split_is_witness(polynomial, n):
    """Каждое найденное разложение удовлетворяет определению."""
    for q, p in admissible_splits(polynomial, n):
        assert q + p == polynomial
        assert split_is_witness(q, p, n)


# ============================================================================
# Тесты для Lambda_r
# ============================================================================


@pytest.mark.parametrize("m", [0, 1, 2])
def test_lambda_r_image_dimension(m):
    """Три копии единичного блока дают dim im tau_(+,n) = m."""
    result = build_lambda_r(3, m)
    assert result.im_tau_plus_n == m
    assert sum(result.per_copy) == m
    assert len(result.assembly.front.components) == 6
    assert result.assembly.parts == ("hopf_surgery",) * 3


@pytest.mark.parametrize(("r", "m"), [(0, 0), (2, 2), (3, -1)])
def test_lambda_r_rejects_parameters(r, m):
    """Нужно r >= 1 и 0 <= m < r."""
    with pytest.raises(ParameterError):
        build_lambda_r(r, m)


# ============================================================================
# Тесты для реализации
# ============================================================================


def test_realize_direct_block():
    """1 + t реализуется блоком Хопфа напрямую."""
    result = realize(poly("1+t"))
    assert isinstance(result, Realization)
    assert result.assembly.parts == ("hopf",)
    assert result.polynomial == poly("1+t")


def test_realize_from_split():
    """2 + t: блок Psi, один единичный блок и один блок Уитни."""
    result = realize(poly("2+t"))
    assert isinstance(result, Realization)
    assert result.assembly.parts == ("hopf_surgery", "hopf_surgery", "unknot")
    assert result.q == poly("2+t")
    assert result.p == LaurentPoly()
    assert result.polynomial == poly("2+t")


def test_realize_constant():
    """3: блок Psi и два единичных блока."""
    result = realize(poly("3"))
    assert isinstance(result, Realization)
    assert result.assembly.parts == ("hopf_surgery",) * 3
    assert len(result.front.components) == 6


def test_realize_library_gap():
    """Допустимый 1 + 2t^-1 без подходящего блока Psi."""
    result = realize(poly("1+2t^-1"))
    assert isinstance(result, LibraryGap)
    assert result.message == GAP_MESSAGE
    assert result.tried == ("1",)


@pytest.mark.parametrize(("text", "n"), [("t^-1", 1), ("1+t^-1", 1), ("1+t", 2)])
def test_realize_rejects(text, n):
    """Недопустимые многочлены и n != 1 отклоняются."""
    with pytest.raises(ParameterError):
        realize(poly(text), n)
