"""Билинеаризованные комплексы, их (ко)гомологии и многочлены Пуанкаре."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from legch.exceptions import ChainMapError, InvariantViolation, ParameterError
from legch.services.augment import Augmentation
from legch.services.dga import DGA
from legch.services.gf2_algebra import (
    GF2Matrix,
    LaurentPoly,
    column_basis,
    evaluate_word,
    extend_modulo,
    nullspace,
    rank,
)

logger = logging.getLogger(__name__)


# ============================================================================
# Bilinearized complex
# ============================================================================


@dataclass(frozen=True)
class BilinearizedComplex:
    """Комплекс хорд с дифференциалом d^{e1,e2}.

    ``boundary[c]`` - множество хорд в d^{e1,e2}(c). Столбцы матрицы степени k
    нумеруют хорды степени k, строки - хорды степени k - 1.
    """

    e1: Augmentation
    e2: Augmentation
    names: tuple[str, ...]
    degrees: Mapping[str, int]
    boundary: Mapping[str, frozenset[str]]

    def basis(self, degree: int) -> list[str]:
        return [name for name in self.names if self.degrees[name] == degree]

    @property
    def degree_range(self) -> list[int]:
        return sorted(set(self.degrees.values()))

    def matrix(self, degree: int) -> GF2Matrix:
        """Матрица d: C_degree -> C_{degree-1}."""
        cols, rows = self.basis(degree), self.basis(degree - 1)
        index = {name: k for k, name in enumerate(rows)}
        data = np.zeros((len(rows), len(cols)), dtype=np.uint8)
        for c, name in enumerate(cols):
            for target in self.boundary[name]:
                data[index[target], c] = 1
        return GF2Matrix(data)

    def vector(self, degree: int, names: Sequence[str]) -> np.ndarray:
        """Цепь степени ``degree`` как вектор по базису хорд."""
        basis = self.basis(degree)
        v = np.zeros(len(basis), dtype=np.uint8)
        for name in names:
            v[basis.index(name)] ^= 1
        return v


def bilinearize(g: DGA, e1: Augmentation, e2: Augmentation) -> BilinearizedComplex:
    """Билинеаризовать дифференциал: буквы слева от выбранной заменяются
    значениями e1, справа - значениями e2.

    Raises:
        ChainMapError: Если квадрат дифференциала не равен нулю.
    """
    boundary: dict[str, frozenset[str]] = {}
    for c in g.generators:
        acc: set[str] = set()
        for w in g.d(c.name).terms:
            for position, letter in enumerate(w.letters, start=1):
                if evaluate_word(w, e1, e2, position):
                    acc ^= {letter}
        boundary[c.name] = frozenset(acc)
    complex_ = BilinearizedComplex(
        e1=e1,
        e2=e2,
        names=tuple(g.names),
        degrees=g.degrees,
        boundary=boundary,
    )
    for degree in complex_.degree_range:
        square = complex_.matrix(degree - 1) @ complex_.matrix(degree)
        if not square.is_zero():
            raise ChainMapError(f"(d^{{e1,e2}})^2 != 0 на хордах степени {degree}")
    return complex_


# ============================================================================
# Homology
# ============================================================================


@dataclass(frozen=True)
class HomologyProfile:
    """Ранги гомологий и когомологий с явными базисами по степеням.

    ``classes[k]`` - циклы, дающие базис H_k; ``coclasses[k]`` - коциклы,
    дающие базис H^k двойственного комплекса.
    """

    ranks: Mapping[int, int]
    cycles: Mapping[int, list[np.ndarray]]
    boundaries: Mapping[int, list[np.ndarray]]
    classes: Mapping[int, list[np.ndarray]]
    cocycles: Mapping[int, list[np.ndarray]]
    coboundaries: Mapping[int, list[np.ndarray]]
    coclasses: Mapping[int, list[np.ndarray]]

    def rank(self, degree: int) -> int:
        return self.ranks.get(degree, 0)


def homology(b: BilinearizedComplex) -> HomologyProfile:
    """Гомологии и когомологии по степеням.

    Raises:
        InvariantViolation: Если ранги гомологий и когомологий различаются.
    """
    ranks: dict[int, int] = {}
    cycles: dict[int, list[np.ndarray]] = {}
    boundaries: dict[int, list[np.ndarray]] = {}
    classes: dict[int, list[np.ndarray]] = {}
    cocycles: dict[int, list[np.ndarray]] = {}
    coboundaries: dict[int, list[np.ndarray]] = {}
    coclasses: dict[int, list[np.ndarray]] = {}
    for k in b.degree_range:
        size = len(b.basis(k))
        outgoing, incoming = b.matrix(k), b.matrix(k + 1)
        cycles[k] = nullspace(outgoing) if outgoing.rows else _standard(size)
        boundaries[k] = column_basis(incoming)
        classes[k] = extend_modulo(cycles[k], boundaries[k])
        dual_out, dual_in = incoming.transpose(), outgoing.transpose()
        cocycles[k] = nullspace(dual_out) if dual_out.rows else _standard(size)
        coboundaries[k] = column_basis(dual_in)
        coclasses[k] = extend_modulo(cocycles[k], coboundaries[k])
        ranks[k] = len(classes[k])
        if len(coclasses[k]) != ranks[k]:
            raise InvariantViolation(
                f"степень {k}: ранг гомологий {ranks[k]} != ранг когомологий {len(coclasses[k])}",
            )
        if ranks[k] != size - rank(outgoing) - rank(incoming):
            raise InvariantViolation(f"степень {k}: нарушена формула ранга")
    return HomologyProfile(
        ranks={k: v for k, v in ranks.items() if v},
        cycles=cycles,
        boundaries=boundaries,
        classes=classes,
        cocycles=cocycles,
        coboundaries=coboundaries,
        coclasses=coclasses,
    )


def _standard(size: int) -> list[np.ndarray]:
    return [np.eye(size, dtype=np.uint8)[k] for k in range(size)]


def poincare(b: BilinearizedComplex) -> LaurentPoly:
    """Многочлен Пуанкаре: сумма dim LCH_k t^k."""
    return LaurentPoly.from_ranks(homology(b).ranks)


# ============================================================================
# Pairings
# ============================================================================


def pairing(b: BilinearizedComplex, degree: int, cocycle: np.ndarray, cycle: np.ndarray) -> int:
    """Значение коцикла на цикле одной степени.

    Raises:
        ParameterError: Если длины не совпадают с размерностью C_degree или
            аргументы не являются (ко)циклами.
    """
    size = len(b.basis(degree))
    cocycle = np.asarray(cocycle, dtype=np.uint8)
    cycle = np.asarray(cycle, dtype=np.uint8)
    if cocycle.shape != (size,) or cycle.shape != (size,):
        raise ParameterError(f"ожидались векторы длины {size} в степени {degree}")
    outgoing = b.matrix(degree)
    if outgoing.rows and outgoing.apply(cycle).any():
        raise ParameterError(f"цепь степени {degree} не является циклом")
    dual = b.matrix(degree + 1).transpose()
    if dual.rows and dual.apply(cocycle).any():
        raise ParameterError(f"коцепь степени {degree} не является коциклом")
    return int(np.dot(cocycle.astype(np.int64), cycle.astype(np.int64)) % 2)


def pairing_matrix(b: BilinearizedComplex, profile: HomologyProfile, degree: int) -> GF2Matrix:
    """Матрица значений базисных когомологических классов на гомологических."""
    coclasses, classes = profile.coclasses.get(degree, []), profile.classes.get(degree, [])
    data = np.zeros((len(coclasses), len(classes)), dtype=np.uint8)
    for i, phi in enumerate(coclasses):
        for j, z in enumerate(classes):
            data[i, j] = pairing(b, degree, phi, z)
    return GF2Matrix(data)


def is_nondegenerate(b: BilinearizedComplex, profile: HomologyProfile) -> bool:
    """Каждый ненулевой класс когомологий ненулевой на некотором цикле из хорд."""
    for degree in b.degree_range:
        dim = profile.rank(degree)
        if dim and rank(pairing_matrix(b, profile, degree)) != dim:
            logger.warning("Спаривание вырождено в степени %s", degree)
            return False
    return True
