"""География билинеаризованных многочленов Пуанкаре.

Многочлен P допустим в размерности n, если P = q + p с неотрицательными
коэффициентами, q сосредоточен в степенях 0..n и q_0 >= 1, а p(-1)
чётно при нечётном n и равно нулю при чётном n. Для n = 1 допустимые
многочлены реализуются сборкой из сертифицированных блоков библиотеки.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from legch.exceptions import ParameterError, RealizationError
from legch.models import FrontDiagram, GeographyVerdict
from legch.services.augment import Augmentation, augmentation_problems, is_homotopic
from legch.services.block_library import BlockLibrary, CertifiedBlock
from legch.services.diagram import merge_fronts
from legch.services.duality import TOP_DEGREE, compute_duality
from legch.services.gf2_algebra import LaurentPoly
from legch.services.lch import bilinearize, poincare
from legch.services.surgery import link_algebra

logger = logging.getLogger(__name__)

GAP_MESSAGE = "unreachable with current library"


# ============================================================================
# Admissibility
# ============================================================================


@dataclass(frozen=True)
class AdmissibilityWitness:
    """Вердикт допустимости и первое найденное разложение P = q + p."""

    polynomial: LaurentPoly
    n: int
    admissible: bool
    q: LaurentPoly | None = None
    p: LaurentPoly | None = None

    def to_verdict(self) -> GeographyVerdict:
        return GeographyVerdict(
            polynomial=str(self.polynomial),
            n=self.n,
            admissible=self.admissible,
            q=None if self.q is None else str(self.q),
            p=None if self.p is None else str(self.p),
        )


def _require_dimension(n: int) -> None:
    if n < 1:
        raise ParameterError(f"размерность n должна быть >= 1, получено {n}")


def _parity_ok(remainder_at_minus_one: int, n: int) -> bool:
    if n % 2:
        return remainder_at_minus_one % 2 == 0
    return remainder_at_minus_one == 0


def admissible_splits(polynomial: LaurentPoly, n: int) -> Iterator[tuple[LaurentPoly, LaurentPoly]]:
    """Все допустимые разложения (q, p) в фиксированном порядке.

    Порядок: по убыванию q_0, затем q_n, затем остальных коэффициентов
    q_1, ..., q_{n-1}. Условие на p(-1) проверяется через P(-1) - q(-1).
    """
    _require_dimension(n)
    total_at_minus_one = polynomial.evaluate(-1)
    degrees = [0, n, *range(1, n)]
    bounds = [polynomial.coefficient(k) for k in degrees]
    if bounds[0] < 1:
        return
    ranges = [range(bounds[0], 0, -1)] + [range(b, -1, -1) for b in bounds[1:]]
    for values in itertools.product(*ranges):
        q = LaurentPoly(dict(zip(degrees, values)))
        if _parity_ok(total_at_minus_one - q.evaluate(-1), n):
            yield q, polynomial - q


def split_is_witness(q: LaurentPoly, p: LaurentPoly, n: int) -> bool:
    """Проверить, что данное разложение P = q + p удовлетворяет определению допустимости."""
    _require_dimension(n)
    if any(k < 0 or k > n for k in q.exponents()) or q.coefficient(0) < 1:
        return False
    return _parity_ok(p.evaluate(-1), n)


def is_admissible(polynomial: LaurentPoly, n: int) -> AdmissibilityWitness:
    """Проверить допустимость и вернуть первое разложение в порядке :func:`admissible_splits`.

    Raises:
        ParameterError: Если n < 1.
    """
    for q, p in admissible_splits(polynomial, n):
        logger.debug("P = %s допустим при n = %s: q = %s, p = %s", polynomial, n, q, p)
        return AdmissibilityWitness(polynomial, n, True, q, p)
    return AdmissibilityWitness(polynomial, n, False)


def admissible_by_search(polynomial: LaurentPoly, n: int) -> bool:
    """Полный перебор всех q <= P (контрольный вариант без отсечений)."""
    _require_dimension(n)
    exponents = sorted(polynomial.exponents())
    for values in itertools.product(*(range(polynomial.coefficient(k) + 1) for k in exponents)):
        q = LaurentPoly(dict(zip(exponents, values)))
        if any(k < 0 or k > n for k in q.exponents()):
            continue
        if q.coefficient(0) < 1:
            continue
        p = polynomial - q
        if _parity_ok(p.evaluate(-1), n):
            return True
    return False


# ============================================================================
# Assembling blocks
# ============================================================================


@dataclass(frozen=True)
class Assembly:
    """Горизонтальное объединение блоков с перенесёнными аугментациями."""

    front: FrontDiagram
    e1: Augmentation
    e2: Augmentation
    parts: tuple[str, ...]


def _carry(augmentation: Augmentation, rename: dict[str, str]) -> frozenset[str]:
    return frozenset(rename[name] for name in augmentation.ones)


def assemble(parts: Sequence[tuple[CertifiedBlock, Augmentation, Augmentation]]) -> Assembly:
    """Объединить фронты блоков и перенести пары аугментаций на новые имена хорд."""
    front, renames = merge_fronts([block.front for block, _, _ in parts])
    ones1: set[str] = set()
    ones2: set[str] = set()
    for (_, e1, e2), rename in zip(parts, renames):
        ones1 |= _carry(e1, rename)
        ones2 |= _carry(e2, rename)
    return Assembly(
        front=front,
        e1=Augmentation(frozenset(ones1)),
        e2=Augmentation(frozenset(ones2)),
        parts=tuple(block.name for block, _, _ in parts),
    )


def _load_library(library: BlockLibrary | None) -> BlockLibrary:
    return library if library is not None else BlockLibrary()


# ============================================================================
# Lambda_r
# ============================================================================


@dataclass(frozen=True)
class LambdaR:
    """Объединение r копий единичного блока и сертифицированная пара."""

    assembly: Assembly
    r: int
    m: int
    im_tau_plus_n: int
    per_copy: tuple[int, ...]


def build_lambda_r(r: int, m: int, library: BlockLibrary | None = None) -> LambdaR:
    """Диаграмма из r копий единичного блока с dim im tau_{+,n} = m.

    e1 - первая аугментация блока на всех копиях, e2 - первая на первых
    m копиях и вторая на остальных. Результат сертифицируется пересчётом.

    Raises:
        ParameterError: Если не выполнено r >= 1 и 0 <= m < r.
        RealizationError: Если пересчитанная размерность не равна m или пара гомотопна.
    """
    if r < 1 or not 0 <= m < r:
        raise ParameterError(f"ожидалось r >= 1 и 0 <= m < r, получено r = {r}, m = {m}")
    unit = _load_library(library).require("unit")
    parts = [(unit, unit.e1, unit.e1 if k < m else unit.e2) for k in range(r)]
    assembly = assemble(parts)

    unit_algebra = link_algebra(unit.front)
    per_copy = tuple(
        compute_duality(unit_algebra.dga, unit_algebra.diagram, e1, e2).image_dim("+", TOP_DEGREE)
        for _, e1, e2 in parts
    )
    algebra = link_algebra(assembly.front)
    g = algebra.dga
    maps = compute_duality(g, algebra.diagram, assembly.e1, assembly.e2)
    dim = maps.image_dim("+", TOP_DEGREE)
    if dim != m or sum(per_copy) != m:
        raise RealizationError(
            f"Lambda_{r}: dim im tau_(+,n) = {dim}, по копиям {list(per_copy)}, ожидалось {m}",
        )
    if is_homotopic(g, assembly.e1, assembly.e2).homotopic:
        raise RealizationError(f"Lambda_{r}: пара аугментаций гомотопна")
    logger.info("Lambda_%s построена: dim im tau_(+,n) = %s", r, dim)
    return LambdaR(assembly=assembly, r=r, m=m, im_tau_plus_n=dim, per_copy=per_copy)


# ============================================================================
# Realization
# ============================================================================


@dataclass(frozen=True)
class Realization:
    """Собранная диаграмма, пара аугментаций и пересчитанный многочлен."""

    assembly: Assembly
    polynomial: LaurentPoly
    q: LaurentPoly | None = None
    p: LaurentPoly | None = None

    @property
    def front(self) -> FrontDiagram:
        return self.assembly.front


@dataclass(frozen=True)
class LibraryGap:
    """Допустимый многочлен, для которого в библиотеке не нашлось блока Psi."""

    polynomial: LaurentPoly
    n: int
    tried: tuple[str, ...] = field(default_factory=tuple)
    message: str = GAP_MESSAGE


def _certify(assembly: Assembly, polynomial: LaurentPoly) -> LaurentPoly:
    g = link_algebra(assembly.front).dga
    for label, e in (("e1", assembly.e1), ("e2", assembly.e2)):
        problems = augmentation_problems(g, e)
        if problems:
            raise RealizationError(f"{label} собранной диаграммы не аугментация: {'; '.join(problems)}")
    recomputed = poincare(bilinearize(g, assembly.e1, assembly.e2))
    if recomputed != polynomial:
        raise RealizationError(f"пересчитанный P = {recomputed} не равен заказанному {polynomial}")
    if is_homotopic(g, assembly.e1, assembly.e2).homotopic:
        raise RealizationError("пара аугментаций собранной диаграммы гомотопна")
    return recomputed


def realize(
    polynomial: LaurentPoly,
    n: int = 1,
    library: BlockLibrary | None = None,
) -> Realization | LibraryGap:
    """Собрать диаграмму с парой негомотопных аугментаций и заданным P.

    Сначала ищется блок с прямой реализацией. Иначе для каждого допустимого
    разложения P = q + p берутся q_0 - 1 единичных блоков, q_n блоков Уитни
    и блок Psi с многочленом 1 + p.

    Raises:
        ParameterError: n != 1 или P недопустим.
        RealizationError: Пересчитанный многочлен не совпал с заказанным.
    """
    if n != TOP_DEGREE:
        raise ParameterError(f"сборка диаграмм поддерживается только при n = {TOP_DEGREE}")
    witness = is_admissible(polynomial, n)
    if not witness.admissible:
        raise ParameterError(f"P = {polynomial} недопустим при n = {n}")
    blocks = _load_library(library)

    direct = blocks.find("direct", polynomial)
    if direct is not None:
        assembly = assemble([(direct, direct.e1, direct.e2)])
        return Realization(assembly=assembly, polynomial=_certify(assembly, polynomial))

    tried: list[str] = []
    for q, p in admissible_splits(polynomial, n):
        tried.append(str(q))
        psi = blocks.find("psi", LaurentPoly({0: 1}) + p)
        if psi is None:
            logger.debug("Нет блока Psi с P = 1 + %s", p)
            continue
        parts = [(psi, psi.e1, psi.e2)]
        if q.coefficient(0) > 1:
            unit = blocks.require("unit")
            parts += [(unit, unit.e1, unit.e2)] * (q.coefficient(0) - 1)
        if q.coefficient(n):
            whitney = blocks.require("whitney")
            parts += [(whitney, whitney.e1, whitney.e2)] * q.coefficient(n)
        assembly = assemble(parts)
        recomputed = _certify(assembly, polynomial)
        logger.info("P = %s собран из блоков %s", polynomial, list(assembly.parts))
        return Realization(assembly=assembly, polynomial=recomputed, q=q, p=p)

    logger.warning("P = %s: %s", polynomial, GAP_MESSAGE)
    return LibraryGap(polynomial=polynomial, n=n, tried=tuple(tried))
