"""Точная линейная алгебра над Z2 и свободная некоммутативная алгебра слов.

Матрицы хранятся плотно (``numpy.uint8``), исключение Гаусса построено на
XOR строк. Элементы алгебры - множества слов: сложение есть симметрическая
разность, поэтому ``a + a = 0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Protocol, Sequence

import numpy as np

from legch.exceptions import PolynomialSyntaxError

# ============================================================================
# Matrices over GF(2)
# ============================================================================


class GF2Matrix:
    """Неизменяемая матрица над Z2."""

    __slots__ = ("_data",)

    def __init__(self, entries: np.ndarray | Sequence[Sequence[int]]) -> None:
        data = np.array(entries, dtype=np.int64) & 1
        if data.ndim != 2:
            raise ValueError(f"ожидалась двумерная матрица, получено {data.ndim} измерений")
        data = data.astype(np.uint8)
        data.setflags(write=False)
        self._data = data

    @classmethod
    def zeros(cls, rows: int, cols: int) -> GF2Matrix:
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, size: int) -> GF2Matrix:
        return cls(np.eye(size, dtype=np.uint8))

    @classmethod
    def from_columns(cls, columns: Sequence[np.ndarray], rows: int) -> GF2Matrix:
        """Собрать матрицу из векторов-столбцов заданной длины."""
        if not columns:
            return cls.zeros(rows, 0)
        return cls(np.stack([np.asarray(c, dtype=np.uint8) for c in columns], axis=1))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return int(self._data.shape[0])

    @property
    def cols(self) -> int:
        return int(self._data.shape[1])

    def transpose(self) -> GF2Matrix:
        return GF2Matrix(self._data.T)

    def is_zero(self) -> bool:
        return not self._data.any()

    def column(self, index: int) -> np.ndarray:
        return self._data[:, index].copy()

    def __matmul__(self, other: GF2Matrix) -> GF2Matrix:
        if self.cols != other.rows:
            raise ValueError(f"несовместимые размеры {self.shape} и {other.shape}")
        product = self._data.astype(np.int64) @ other.data.astype(np.int64)
        return GF2Matrix(product & 1)

    def apply(self, vector: np.ndarray) -> np.ndarray:
        """Умножить матрицу на вектор-столбец."""
        vector = np.asarray(vector, dtype=np.int64)
        if vector.shape != (self.cols,):
            raise ValueError(f"вектор длины {vector.shape} не подходит к матрице {self.shape}")
        return ((self._data.astype(np.int64) @ vector) & 1).astype(np.uint8)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other.data))

    def __hash__(self) -> int:
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"GF2Matrix({self._data.tolist()})"


def _rref(entries: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Приведённый ступенчатый вид и список ведущих столбцов."""
    reduced = (np.asarray(entries) & 1).astype(np.uint8, copy=True)
    rows, cols = reduced.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        candidates = np.where(reduced[r:, c] == 1)[0]
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            reduced[[r, p], :] = reduced[[p, r], :]
        ones = np.where(reduced[:, c] == 1)[0]
        ones = ones[ones != r]
        if ones.size:
            reduced[ones, :] ^= reduced[r, :]
        pivots.append(c)
        r += 1
    return reduced, pivots


def rank(m: GF2Matrix) -> int:
    """Размерность пространства строк над Z2."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_rref(m.data)[1])


def solve(m: GF2Matrix, b: np.ndarray | Sequence[int]) -> np.ndarray | None:
    """Найти какое-нибудь решение ``m x = b`` или вернуть None.

    Raises:
        ValueError: Если длина ``b`` не равна числу строк ``m``.
    """
    rhs = (np.asarray(b, dtype=np.int64) & 1).astype(np.uint8)
    if rhs.shape != (m.rows,):
        raise ValueError(f"правая часть длины {rhs.shape} не подходит к матрице {m.shape}")
    augmented = np.concatenate([m.data, rhs[:, None]], axis=1)
    reduced, pivots = _rref(augmented)
    if m.cols in pivots:
        return None
    x = np.zeros(m.cols, dtype=np.uint8)
    for row, col in enumerate(pivots):
        x[col] = reduced[row, m.cols]
    return x


def nullspace(m: GF2Matrix) -> list[np.ndarray]:
    """Базис ядра ``m`` (векторы длины ``m.cols``)."""
    if m.cols == 0:
        return []
    reduced, pivots = _rref(m.data) if m.rows else (np.zeros((0, m.cols), np.uint8), [])
    free = [c for c in range(m.cols) if c not in pivots]
    basis: list[np.ndarray] = []
    for f in free:
        v = np.zeros(m.cols, dtype=np.uint8)
        v[f] = 1
        for row, col in enumerate(pivots):
            v[col] = reduced[row, f]
        basis.append(v)
    return basis


def column_basis(m: GF2Matrix) -> list[np.ndarray]:
    """Базис образа ``m``: ведущие столбцы исходной матрицы."""
    if m.rows == 0 or m.cols == 0:
        return []
    _, pivots = _rref(m.data)
    return [m.column(c) for c in pivots]


def in_span(vector: np.ndarray, basis: Sequence[np.ndarray]) -> bool:
    """Лежит ли вектор в линейной оболочке ``basis``."""
    vector = (np.asarray(vector) & 1).astype(np.uint8)
    if not vector.any():
        return True
    if not basis:
        return False
    return solve(GF2Matrix.from_columns(list(basis), len(vector)), vector) is not None


def extend_modulo(
    candidates: Sequence[np.ndarray],
    subspace: Sequence[np.ndarray],
) -> list[np.ndarray]:
    """Выбрать из ``candidates`` векторы, линейно независимые по модулю ``subspace``.

    Порядок кандидатов сохраняется, поэтому выбор детерминирован.
    """
    chosen: list[np.ndarray] = []
    span = list(subspace)
    for v in candidates:
        if not in_span(v, span):
            chosen.append(np.asarray(v, dtype=np.uint8))
            span.append(np.asarray(v, dtype=np.uint8))
    return chosen


# ============================================================================
# Words and algebra elements
# ============================================================================


@dataclass(frozen=True, order=True)
class Word:
    """Моном свободной алгебры: упорядоченный список имён хорд (пустой = единица)."""

    letters: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def degree(self, degrees: Mapping[str, int]) -> int:
        return sum(degrees[letter] for letter in self.letters)

    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (len(self.letters), self.letters)

    def render(self) -> str:
        return " ".join(self.letters) if self.letters else "1"


@dataclass(frozen=True)
class AlgebraElement:
    """Элемент алгебры над Z2: конечное множество слов."""

    terms: frozenset[Word] = field(default_factory=frozenset)

    @classmethod
    def zero(cls) -> AlgebraElement:
        return cls()

    @classmethod
    def one(cls) -> AlgebraElement:
        return cls(frozenset({Word()}))

    @classmethod
    def generator(cls, name: str) -> AlgebraElement:
        return cls(frozenset({Word((name,))}))

    @classmethod
    def from_words(cls, words: Iterable[Word]) -> AlgebraElement:
        """Сумма слов с сокращением по модулю 2."""
        acc: set[Word] = set()
        for w in words:
            acc ^= {w}
        return cls(frozenset(acc))

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.terms ^ other.terms)

    def __mul__(self, other: AlgebraElement) -> AlgebraElement:
        return AlgebraElement.from_words(a * b for a in self.terms for b in other.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> list[Word]:
        return sorted(self.terms, key=Word.sort_key)

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(w.render() for w in self.sorted_terms())


class Valuation(Protocol):
    """Всё, что умеет вернуть значение в Z2 на хорде (аугментации)."""

    def value(self, chord: str) -> int: ...


def evaluate_word(w: Word, left: Valuation, right: Valuation, split_index: int) -> int:
    """Произведение значений ``left`` до разделяющей буквы и ``right`` после неё.

    Args:
        w: Слово b_1...b_m.
        left: Аугментация для букв левее разделяющей.
        right: Аугментация для букв правее разделяющей.
        split_index: Номер разделяющей буквы, 1 <= split_index <= m.

    Returns:
        0 или 1.
    """
    if not 1 <= split_index <= len(w):
        raise ValueError(f"позиция {split_index} вне слова длины {len(w)}")
    value = 1
    for position, letter in enumerate(w.letters, start=1):
        if position < split_index:
            value &= left.value(letter)
        elif position > split_index:
            value &= right.value(letter)
        if not value:
            return 0
    return value


def evaluate_gap(w: Word, left: Valuation, right: Valuation, gap: int) -> int:
    """Произведение ``left`` на буквах до промежутка ``gap`` и ``right`` начиная с него.

    Промежуток l in 1..m+1 стоит перед буквой b_l (l = m+1 - после последней).
    """
    if not 1 <= gap <= len(w) + 1:
        raise ValueError(f"промежуток {gap} вне слова длины {len(w)}")
    value = 1
    for position, letter in enumerate(w.letters, start=1):
        value &= left.value(letter) if position < gap else right.value(letter)
        if not value:
            return 0
    return value


# ============================================================================
# Laurent polynomials with nonnegative coefficients
# ============================================================================

_TERM = re.compile(r"^(?:(\d+)\*?)?(?:t(?:\^\(?(-?\d+)\)?)?)?$")


class LaurentPoly:
    """Многочлен Лорана с неотрицательными целыми коэффициентами."""

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Mapping[int, int] | None = None) -> None:
        clean: dict[int, int] = {}
        for exponent, coefficient in (coefficients or {}).items():
            if coefficient < 0:
                raise ValueError(f"отрицательный коэффициент {coefficient} при t^{exponent}")
            if coefficient:
                clean[int(exponent)] = int(coefficient)
        self._coefficients = dict(sorted(clean.items()))

    @classmethod
    def from_ranks(cls, ranks: Mapping[int, int]) -> LaurentPoly:
        return cls(ranks)

    @classmethod
    def parse(cls, text: str) -> LaurentPoly:
        """Разобрать запись вида ``a*t^k + ...``.

        Raises:
            PolynomialSyntaxError: Если терм не соответствует грамматике.
        """
        compact = "".join(text.split())
        if not compact:
            raise PolynomialSyntaxError("пустой многочлен")
        coefficients: dict[int, int] = {}
        for term in compact.split("+"):
            match = _TERM.match(term)
            if not term or match is None or term.endswith("*"):
                raise PolynomialSyntaxError(f"не удалось разобрать терм {term!r} в {text!r}")
            coefficient_text, exponent_text = match.groups()
            coefficient = int(coefficient_text) if coefficient_text is not None else 1
            if "t" not in term:
                exponent = 0
            else:
                exponent = int(exponent_text) if exponent_text is not None else 1
            coefficients[exponent] = coefficients.get(exponent, 0) + coefficient
        return cls(coefficients)

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self._coefficients)

    def coefficient(self, exponent: int) -> int:
        return self._coefficients.get(exponent, 0)

    def exponents(self) -> list[int]:
        return list(self._coefficients)

    def is_zero(self) -> bool:
        return not self._coefficients

    def is_polynomial(self) -> bool:
        """Нет отрицательных степеней."""
        return all(k >= 0 for k in self._coefficients)

    def evaluate(self, t: int) -> int:
        """Значение в точке t in {-1, 0, 1}; в t = 0 определено только для многочленов."""
        if t == 0:
            if not self.is_polynomial():
                raise ValueError("значение в t = 0 не определено для отрицательных степеней")
            return self.coefficient(0)
        if t not in (1, -1):
            raise ValueError(f"вычисление поддерживается только в t = -1, 0, 1, получено {t}")
        return sum(c * t ** abs(k) for k, c in self._coefficients.items())

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        merged = dict(self._coefficients)
        for k, c in other.coefficients.items():
            merged[k] = merged.get(k, 0) + c
        return LaurentPoly(merged)

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        """Разность; результат обязан остаться неотрицательным."""
        merged = dict(self._coefficients)
        for k, c in other.coefficients.items():
            merged[k] = merged.get(k, 0) - c
        return LaurentPoly(merged)

    def __le__(self, other: LaurentPoly) -> bool:
        return all(c <= other.coefficient(k) for k, c in self._coefficients.items())

    def __mul__(self, scalar: int) -> LaurentPoly:
        return LaurentPoly({k: c * scalar for k, c in self._coefficients.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(tuple(self._coefficients.items()))

    def __str__(self) -> str:
        if not self._coefficients:
            return "0"
        parts = []
        for k, c in self._coefficients.items():
            if k == 0:
                parts.append(str(c))
                continue
            power = "t" if k == 1 else f"t^{k}"
            parts.append(power if c == 1 else f"{c}*{power}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r})"
