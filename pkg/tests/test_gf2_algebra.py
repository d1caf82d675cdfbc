import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legch.exceptions import PolynomialSyntaxError
from legch.services.augment import Augmentation
from legch.services.gf2_algebra import (
    AlgebraElement,
    GF2Matrix,
    LaurentPoly,
    Word,
    column_basis,
    evaluate_gap,
    evaluate_word,
    extend_modulo,
    in_span,
    nullspace,
    rank,
    solve,
)

matrices = st.integers(min_value=1, max_value=5).flatmap(
    lambda rows: st.integers(min_value=1, max_value=5).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(0, 1), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        ),
    ),
)


# ============================================================================
# Тесты для матриц над Z2
# ============================================================================


def test_rank_examples():
    """Ранг на известных матрицах."""
    assert rank(GF2Matrix([[1, 1], [1, 1]])) == 1, "строки совпадают"
    assert rank(GF2Matrix.identity(3)) == 3, "единичная матрица невырождена"
    assert rank(GF2Matrix.zeros(2, 4)) == 0, "нулевая матрица"
    assert rank(GF2Matrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]])) == 2, "сумма строк равна нулю над Z2"


def test_solve_and_nullspace():
    """Решение системы и базис ядра."""
    m = GF2Matrix([[1, 1, 0], [0, 1, 1]])
    x = solve(m, [1, 0])
    assert x is not None
    assert np.array_equal(m.apply(x), np.array([1, 0], dtype=np.uint8)), "решение должно подходить"
    kernel = nullspace(m)
    assert len(kernel) == 1, "ядро одномерно"
    assert not m.apply(kernel[0]).any(), "вектор ядра переходит в ноль"
    assert solve(GF2Matrix([[1, 1], [1, 1]]), [1, 0]) is None, "несовместная система"


def test_column_basis_and_extension():
    """Базис образа и дополнение по модулю подпространства."""
    m = GF2Matrix([[1, 1, 0], [0, 0, 1]])
    basis = column_basis(m)
    assert len(basis) == 2
    e1 = np.array([1, 0], dtype=np.uint8)
    e2 = np.array([0, 1], dtype=np.uint8)
    assert in_span(e1 ^ e2, basis)
    chosen = extend_modulo([e1, e1 ^ e2, e2], [e1])
    assert len(chosen) == 1, "по модулю e1 остаётся одно направление"
    assert np.array_equal(chosen[0], e1 ^ e2), "порядок кандидатов сохраняется"


def test_matmul_shape_mismatch():
    """Несовместимые размеры при умножении."""
    with pytest.raises(ValueError):
        GF2Matrix.identity(2) @ GF2Matrix.identity(3)


@given(matrices)
def test_rank_of_transpose(entries):
    """Ранг не меняется при транспонировании."""
    m = GF2Matrix(entries)
    assert rank(m) == rank(m.transpose())


@settings(max_examples=60)
@given(matrices, st.data())
def test_solve_against_exhaustive_search(entries, data):
    """solve находит решение ровно тогда, когда оно есть при полном переборе."""
    m = GF2Matrix(entries)
    b = np.array(data.draw(st.lists(st.integers(0, 1), min_size=m.rows, max_size=m.rows)), dtype=np.uint8)
    exists = any(
        np.array_equal(m.apply(np.array(bits, dtype=np.uint8)), b)
        for bits in itertools.product((0, 1), repeat=m.cols)
    )
    x = solve(m, b)
    assert (x is not None) == exists
    if x is not None:
        assert np.array_equal(m.apply(x), b)


@given(matrices)
def test_rank_nullity(entries):
    """rank + dim ker = число столбцов."""
    m = GF2Matrix(entries)
    assert rank(m) + len(nullspace(m)) == m.cols


# ============================================================================
# Тесты для слов и элементов алгебры
# ============================================================================

letters = st.lists(st.sampled_from(["a", "b", "c"]), max_size=4).map(lambda xs: Word(tuple(xs)))


@given(st.lists(letters, max_size=6))
def test_element_plus_itself_is_zero(words):
    """a + a = 0 над Z2."""
    element = AlgebraElement.from_words(words)
    assert (element + element).is_zero()


def test_element_product_and_render():
    """Произведение и каноническая запись."""
    a, b = AlgebraElement.generator("a"), AlgebraElement.generator("b")
    product = (a + AlgebraElement.one()) * b
    assert product.render() == "b + a b", "слова сортируются по длине"
    assert AlgebraElement.zero().render() == "0"
    assert AlgebraElement.from_words([Word(("a",)), Word(("a",))]).is_zero(), "повтор сокращается"


@given(letters, st.sampled_from(["", "a", "b", "a b", "a b c"]))
def test_evaluate_word_same_augmentation(w, ones):
    """При e1 = e2 значение - произведение по всем буквам, кроме разделяющей."""
    e = Augmentation(frozenset(ones.split()))
    for k in range(1, len(w) + 1):
        rest = Word(w.letters[: k - 1] + w.letters[k:])
        assert evaluate_word(w, e, e, k) == e.word_value(rest)


def test_evaluate_word_and_gap():
    """Левая аугментация до разделителя, правая - после."""
    w = Word(("a", "b", "c"))
    left = Augmentation(frozenset({"a"}))
    right = Augmentation(frozenset({"c"}))
    assert evaluate_word(w, left, right, 2) == 1
    assert evaluate_word(w, right, left, 2) == 0
    assert evaluate_gap(w, left, right, 2) == 0, "b оценивается правой аугментацией"
    assert evaluate_gap(Word(("a", "c")), left, right, 2) == 1
    with pytest.raises(ValueError):
        evaluate_word(w, left, right, 4)


# ============================================================================
# Тесты для многочленов Лорана
# ============================================================================


def test_laurent_parse_examples():
    """Разбор записей многочленов."""
    assert LaurentPoly.parse("1+t") == LaurentPoly({0: 1, 1: 1})
    assert LaurentPoly.parse("t^-1 + 3*t") == LaurentPoly({-1: 1, 1: 3})
    assert LaurentPoly.parse("2 + 2t") == LaurentPoly({0: 2, 1: 2})
    assert str(LaurentPoly({-1: 1, 1: 3})) == "t^-1 + 3*t"
    assert str(LaurentPoly()) == "0"


@pytest.mark.parametrize("text", ["", "t^", "1++t", "x", "2*"])
def test_laurent_parse_errors(text):
    """Некорректные записи отклоняются."""
    with pytest.raises(PolynomialSyntaxError):
        LaurentPoly.parse(text)


def test_laurent_arithmetic():
    """Сложение, вычитание, сравнение и значения в точках."""
    p = LaurentPoly.parse("2 + t")
    q = LaurentPoly.parse("1 + t")
    assert p - q == LaurentPoly({0: 1})
    assert q <= p and not p <= q
    assert p.evaluate(-1) == 1
    assert LaurentPoly.parse("t^-1").evaluate(-1) == -1
    with pytest.raises(ValueError):
        q - p


@given(st.dictionaries(st.integers(-3, 3), st.integers(0, 4), max_size=4))
def test_laurent_print_parse_agreement(coefficients):
    """Запись многочлена разбирается обратно в тот же многочлен."""
    p = LaurentPoly(coefficients)
    assert LaurentPoly.parse(str(p)) == p
