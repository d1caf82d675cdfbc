"""Аугментации, их DGA-гомотопность и классы гомотопности.

Аугментация в (Z2, 0) задаётся значениями на хордах степени 0. Гомотопность
двух аугментаций сводится к линейной системе над Z2: неизвестные - значения
антидифференцирования K на хордах степени -1, по одному уравнению на каждую
хорду степени 0.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd

from legch.config import LEGCH_THREADS
from legch.exceptions import (
    AugmentationError,
    InducedAugmentationError,
    InvariantViolation,
    TransitivityError,
)
from legch.services.dga import DGA, SurgeryDGA
from legch.services.gf2_algebra import AlgebraElement, GF2Matrix, Word, evaluate_word, solve

logger = logging.getLogger(__name__)


# ============================================================================
# Augmentation values
# ============================================================================


@dataclass(frozen=True)
class Augmentation:
    """Аугментация: множество хорд, на которых она равна 1."""

    ones: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def parse(cls, text: str) -> Augmentation:
        """Разобрать запись ``CHORD=BIT`` через пробел или запятую."""
        ones: set[str] = set()
        for token in text.replace(",", " ").split():
            name, sep, bit = token.partition("=")
            if not sep or bit not in {"0", "1"}:
                raise AugmentationError(f"ожидалось CHORD=0 или CHORD=1, получено {token!r}")
            if bit == "1":
                ones.add(name)
        return cls(frozenset(ones))

    def value(self, chord: str) -> int:
        return 1 if chord in self.ones else 0

    def word_value(self, w: Word) -> int:
        return int(all(letter in self.ones for letter in w.letters))

    def evaluate(self, element: AlgebraElement) -> int:
        return sum(self.word_value(w) for w in element.terms) % 2

    def render(self) -> str:
        """Отсортированные пары ``CHORD=1``; нули опускаются."""
        return " ".join(f"{name}=1" for name in sorted(self.ones))

    def restrict(self, names: Iterable[str]) -> Augmentation:
        return Augmentation(self.ones & frozenset(names))


def augmentation_problems(g: DGA, e: Augmentation) -> list[str]:
    """Причины, по которым ``e`` не является аугментацией ``g`` (пусто, если является)."""
    problems: list[str] = []
    degrees = g.degrees
    for name in sorted(e.ones):
        if name not in degrees:
            problems.append(f"неизвестная хорда {name}")
        elif degrees[name] != 0:
            problems.append(f"хорда {name} имеет степень {degrees[name]}")
    for c in g.generators:
        if e.evaluate(g.d(c.name)):
            problems.append(f"e(d {c.name}) = 1")
    return problems


def is_augmentation(g: DGA, e: Augmentation) -> bool:
    return not augmentation_problems(g, e)


def _require_augmentation(g: DGA, e: Augmentation) -> None:
    problems = augmentation_problems(g, e)
    if problems:
        raise AugmentationError(f"{e.render() or '0'} не аугментация: {'; '.join(problems)}")


def enumerate_augmentations(g: DGA, vanish_on: Sequence[str] = ()) -> list[Augmentation]:
    """Все градуированные аугментации перебором по хордам степени 0.

    Порядок: двоичный счёт по хордам степени 0 в порядке образующих,
    последняя хорда - младший разряд.

    Args:
        g: DGA.
        vanish_on: Хорды, на которых аугментация обязана быть нулём.
    """
    free = [name for name in g.of_degree(0) if name not in set(vanish_on)]
    constraints = [g.d(name) for name in g.of_degree(1)]
    found: list[Augmentation] = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        candidate = Augmentation(frozenset(name for name, bit in zip(free, bits) if bit))
        if all(not candidate.evaluate(element) for element in constraints):
            found.append(candidate)
    for e in found:
        if not is_augmentation(g, e):
            raise AugmentationError(f"перебор вернул не аугментацию {e.render()}")
    logger.debug("Найдено аугментаций: %s из %s кандидатов", len(found), 2 ** len(free))
    return found


# ============================================================================
# DGA homotopy
# ============================================================================


@dataclass(frozen=True)
class HomotopyWitness:
    """Решение K на хордах степени -1 или признак неразрешимости."""

    homotopic: bool
    unknowns: tuple[str, ...]
    values: Mapping[str, int] | None = None

    def antiderivation(self, w: Word, e1: Augmentation, e2: Augmentation) -> int:
        """K(w) для (e1, e2)-антидифференцирования, продолженного с образующих."""
        if self.values is None:
            raise ValueError("нет решения K")
        total = 0
        for position, letter in enumerate(w.letters, start=1):
            if self.values.get(letter, 0):
                total ^= evaluate_word(w, e1, e2, position)
        return total


def homotopy_system(g: DGA, e1: Augmentation, e2: Augmentation) -> tuple[GF2Matrix, np.ndarray]:
    """Матрица и правая часть системы e1 - e2 = K o d.

    Строки - хорды степени 0, столбцы - хорды степени -1.
    """
    rows, cols = g.of_degree(0), g.of_degree(-1)
    index = {name: k for k, name in enumerate(cols)}
    matrix = np.zeros((len(rows), len(cols)), dtype=np.uint8)
    rhs = np.zeros(len(rows), dtype=np.uint8)
    for r, name in enumerate(rows):
        rhs[r] = e1.value(name) ^ e2.value(name)
        for w in g.d(name).terms:
            for position, letter in enumerate(w.letters, start=1):
                if letter in index:
                    matrix[r, index[letter]] ^= evaluate_word(w, e1, e2, position)
    return GF2Matrix(matrix), rhs


def is_homotopic(g: DGA, e1: Augmentation, e2: Augmentation) -> HomotopyWitness:
    """Решить систему для K; при успехе проверить тождество на всех образующих.

    Raises:
        AugmentationError: Если e1 или e2 не аугментация ``g``.
    """
    _require_augmentation(g, e1)
    _require_augmentation(g, e2)
    unknowns = tuple(g.of_degree(-1))
    matrix, rhs = homotopy_system(g, e1, e2)
    solution = solve(matrix, rhs)
    if solution is None:
        return HomotopyWitness(homotopic=False, unknowns=unknowns)
    witness = HomotopyWitness(
        homotopic=True,
        unknowns=unknowns,
        values={name: int(bit) for name, bit in zip(unknowns, solution)},
    )
    for c in g.generators:
        lhs = e1.value(c.name) ^ e2.value(c.name)
        rhs_value = sum(witness.antiderivation(w, e1, e2) for w in g.d(c.name).terms) % 2
        if lhs != rhs_value:
            raise InvariantViolation(f"найденное K не удовлетворяет тождеству на {c.name}")
    return witness


def homotopic_by_search(g: DGA, e1: Augmentation, e2: Augmentation) -> bool:
    """Перебор всех K на хордах степени -1 (контрольный вариант)."""
    unknowns = g.of_degree(-1)
    zero = {c.name: e1.value(c.name) ^ e2.value(c.name) for c in g.generators}
    for bits in itertools.product((0, 1), repeat=len(unknowns)):
        candidate = HomotopyWitness(True, tuple(unknowns), dict(zip(unknowns, bits)))
        if all(
            sum(candidate.antiderivation(w, e1, e2) for w in g.d(c.name).terms) % 2 == zero[c.name]
            for c in g.generators
        ):
            return True
    return False


# ============================================================================
# Homotopy classes
# ============================================================================


@dataclass(frozen=True)
class ClassSet:
    """Разбиение аугментаций на классы гомотопности (по индексам)."""

    augmentations: tuple[Augmentation, ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def representatives(self) -> list[int]:
        return [members[0] for members in self.classes]

    def class_of(self, index: int) -> int:
        for number, members in enumerate(self.classes):
            if index in members:
                return number
        raise AugmentationError(f"нет аугментации с индексом {index}")

    def to_frame(self) -> pd.DataFrame:
        """Таблица: индекс, запись аугментации, номер класса."""
        return pd.DataFrame(
            [
                {"index": k, "augmentation": e.render(), "class": self.class_of(k)}
                for k, e in enumerate(self.augmentations)
            ],
            columns=["index", "augmentation", "class"],
        )


def homotopy_relation(g: DGA, augs: Sequence[Augmentation]) -> np.ndarray:
    """Матрица попарной гомотопности (параллельно по парам)."""
    pairs = [(i, j) for i in range(len(augs)) for j in range(len(augs))]
    with ThreadPoolExecutor(max_workers=LEGCH_THREADS) as pool:
        verdicts = list(pool.map(lambda p: is_homotopic(g, augs[p[0]], augs[p[1]]).homotopic, pairs))
    relation = np.zeros((len(augs), len(augs)), dtype=bool)
    for (i, j), verdict in zip(pairs, verdicts):
        relation[i, j] = verdict
    return relation


def homotopy_classes(g: DGA, augs: Sequence[Augmentation] | None = None) -> ClassSet:
    """Классы гомотопности; отношение проверяется на рефлексивность,
    симметричность и транзитивность.

    Raises:
        TransitivityError: Если отношение не является эквивалентностью.
    """
    found = list(augs) if augs is not None else enumerate_augmentations(g)
    relation = homotopy_relation(g, found)
    size = len(found)
    if size and not relation.diagonal().all():
        raise TransitivityError("отношение гомотопности не рефлексивно")
    if not np.array_equal(relation, relation.T):
        raise TransitivityError("отношение гомотопности не симметрично")
    for i, j, k in itertools.product(range(size), repeat=3):
        if relation[i, j] and relation[j, k] and not relation[i, k]:
            raise TransitivityError(f"нарушена транзитивность: {i} ~ {j} ~ {k}, но {i} !~ {k}")
    classes: list[tuple[int, ...]] = []
    seen: set[int] = set()
    for i in range(size):
        if i in seen:
            continue
        members = tuple(j for j in range(size) if relation[i, j])
        seen.update(members)
        classes.append(members)
    logger.info("Аугментаций: %s, классов: %s", size, len(classes))
    return ClassSet(augmentations=tuple(found), classes=tuple(classes))


# ============================================================================
# Surgery
# ============================================================================


def induce_surgery_augmentation(sg: SurgeryDGA, e: Augmentation) -> Augmentation:
    """Продолжить аугментацию нулём на образующие перестройки и проверить её.

    Raises:
        AugmentationError: Если ``e`` не аугментация исходной алгебры.
        InducedAugmentationError: Если продолжение не аннулирует d_S.
    """
    _require_augmentation(sg.base, e)
    induced = Augmentation(e.ones - frozenset(sg.surgery_generators))
    problems = augmentation_problems(sg.dga, induced)
    if problems:
        raise InducedAugmentationError(
            f"индуцированная аугментация {induced.render() or '0'} не согласована: "
            f"{'; '.join(problems)}",
        )
    return induced


def split_surgery_augmentations(
    sg: SurgeryDGA,
) -> tuple[list[Augmentation], list[Augmentation]]:
    """Аугментации A(L, S): с нулём на образующих перестройки и остальные."""
    letters = frozenset(sg.surgery_generators)
    everything = enumerate_augmentations(sg.dga)
    vanishing = [e for e in everything if not e.ones & letters]
    flagged = [e for e in everything if e.ones & letters]
    if flagged:
        logger.warning(
            "Аугментации с ненулевым значением на образующих перестройки: %s",
            [e.render() for e in flagged],
        )
    return vanishing, flagged
