"""Иерархия ошибок legch.

Две ветви соответствуют кодам выхода CLI: ``InputError`` (код 2) для
некорректного ввода и ``InvariantViolation`` (код 3) для нарушенных
математических тождеств, которые означают ошибку в реализации.
"""

from __future__ import annotations

from typing import Sequence


class LegchError(Exception):
    """Базовая ошибка пакета."""


# ============================================================================
# Ошибки ввода (код выхода 2)
# ============================================================================


class InputError(LegchError, ValueError):
    """Некорректные входные данные."""

    exit_code = 2


class DiagramSyntaxError(InputError):
    """Синтаксическая ошибка в исходнике ``legendrian v1``."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"строка {line}, позиция {column}: {message}")
        self.line = line
        self.column = column


class DiagramTopologyError(InputError):
    """Топологически некорректная диаграмма (незамкнутая нить, выход за границы)."""


class GradingError(InputError):
    """Нецелочисленная градуировка: потенциал Маслова не согласован на компоненте."""

    def __init__(self, component: str, message: str) -> None:
        super().__init__(f"компонента {component}: {message}")
        self.component = component


class PolynomialSyntaxError(InputError):
    """Ошибка разбора многочлена Лорана."""


class AugmentationError(InputError):
    """Некорректная аугментация или несуществующий индекс."""


class ParameterError(InputError):
    """Недопустимые параметры операции (r, m, n, список склеек)."""


class LibraryError(InputError):
    """Ошибка манифеста библиотеки блоков."""


# ============================================================================
# Нарушения инвариантов (код выхода 3)
# ============================================================================


class InvariantViolation(LegchError, RuntimeError):
    """Нарушено тождество, которое обязано выполняться."""

    exit_code = 3


class DSquaredError(InvariantViolation):
    """Дифференциал не обращается в ноль в квадрате."""

    def __init__(self, generator: str, word: Sequence[str]) -> None:
        rendered = " ".join(word) if word else "1"
        super().__init__(f"d^2({generator}) содержит слагаемое {rendered}")
        self.generator = generator
        self.word = tuple(word)


class ChainMapError(InvariantViolation):
    """Отображение не является цепным."""


class ExactnessError(InvariantViolation):
    """Нарушена точность последовательности двойственности."""

    def __init__(self, degree: int, message: str) -> None:
        super().__init__(f"степень {degree}: {message}")
        self.degree = degree


class AdjointnessError(InvariantViolation):
    """Нарушено тождество сопряжённости для sigma."""


class TheoremDisagreement(InvariantViolation):
    """Два независимых вердикта о гомотопности не совпали."""

    def __init__(self, message: str, verdicts: tuple[bool, bool]) -> None:
        super().__init__(f"{message}: {verdicts[0]} против {verdicts[1]}")
        self.verdicts = verdicts


class TransitivityError(InvariantViolation):
    """Отношение гомотопности оказалось нетранзитивным."""


class InducedAugmentationError(InvariantViolation):
    """Индуцированная аугментация не согласована с дифференциалом после перестройки."""


class RealizationError(InvariantViolation):
    """Пересчитанный многочлен Пуанкаре не совпал с запрошенным."""
