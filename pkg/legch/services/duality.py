"""Отображения последовательности двойственности и критерии гомотопности.

Морсовские гомологии каждой компоненты-окружности берутся в совершенной
модели: класс точки ``[*_j]`` в степени 0 и фундаментальный класс ``[L_j]``
в степени n = 1. tau строится по хордам и дискам с отмеченными точками,
sigma определяется сопряжённостью относительно спаривания пересечений.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from legch.exceptions import (
    AdjointnessError,
    ChainMapError,
    ExactnessError,
    ParameterError,
    TheoremDisagreement,
)
from legch.services.augment import Augmentation, is_homotopic
from legch.services.dga import DGA, SurgeryDGA
from legch.services.diagram import ResolvedDiagram
from legch.services.disks import enumerate_disks
from legch.services.gf2_algebra import (
    GF2Matrix,
    LaurentPoly,
    column_basis,
    evaluate_gap,
    in_span,
    nullspace,
    solve,
)
from legch.services.lch import (
    BilinearizedComplex,
    HomologyProfile,
    bilinearize,
    homology,
    is_nondegenerate,
)

logger = logging.getLogger(__name__)

Sign = Literal["+", "-"]
TOP_DEGREE = 1


# ============================================================================
# Morse homology of the link
# ============================================================================


@dataclass(frozen=True)
class MorseHomology:
    """H_0 и H_n несвязного объединения окружностей, по r классов в каждой.

    Спаривание пересечений c . d = сумма c_j d_j совершенно, его матрица единична.
    """

    components: int

    @property
    def fundamental(self) -> np.ndarray:
        return np.ones(self.components, dtype=np.uint8)

    def point(self, j: int) -> np.ndarray:
        v = np.zeros(self.components, dtype=np.uint8)
        v[j - 1] = 1
        return v

    def intersect(self, c: np.ndarray, d: np.ndarray) -> int:
        return int(np.dot(np.asarray(c, np.int64), np.asarray(d, np.int64)) % 2)

    def perp(self, vectors: list[np.ndarray]) -> list[np.ndarray]:
        """Ортогональное дополнение относительно спаривания пересечений."""
        if not vectors:
            return [self.point(j) for j in range(1, self.components + 1)]
        return nullspace(GF2Matrix(np.stack(vectors)))


def _active_basepoints(g: DGA) -> dict[int, int]:
    """Исходная компонента -> компонента после перестроек, для тех, чья точка остаётся.

    После склеек компонента сохраняет отмеченную точку составляющей с
    наименьшим номером.
    """
    active: dict[int, int] = {}
    for original, merged in enumerate(g.component_map, start=1):
        if merged not in active.values():
            active[original] = merged
    return active


# ============================================================================
# tau maps
# ============================================================================


def tau0(g: DGA, b: BilinearizedComplex) -> GF2Matrix:
    """tau_0: C_0 -> H_0, q из L_i в L_j -> e1(q)[*_j] + e2(q)[*_i].

    Аугментации берутся из комплекса ``b``; для (-)-варианта передаётся
    комплекс с переставленной парой.
    """
    morse = MorseHomology(g.n_components)
    columns = []
    for name in b.basis(0):
        chord = g.chord(name)
        v = np.zeros(morse.components, dtype=np.uint8)
        if b.e1.value(name):
            v ^= morse.point(chord.target)
        if b.e2.value(name):
            v ^= morse.point(chord.source)
        columns.append(v)
    return GF2Matrix.from_columns(columns, morse.components)


def tau_n(g: DGA, d: ResolvedDiagram, b: BilinearizedComplex) -> GF2Matrix:
    """tau_n: C_n -> H_n по дискам степени n, пересекающим отмеченные точки.

    Пересечение точки компоненты j в промежутке l даёт
    e1(b_1)...e1(b_{l-1}) e2(b_l)...e2(b_m) [L_j].
    """
    morse = MorseHomology(g.n_components)
    active = _active_basepoints(g)
    columns = []
    for name in b.basis(TOP_DEGREE):
        v = np.zeros(morse.components, dtype=np.uint8)
        for disk in enumerate_disks(d, name):
            for mark in disk.marks:
                if mark.kind != "basepoint" or mark.component not in active:
                    continue
                if evaluate_gap(disk.word, b.e1, b.e2, mark.split):
                    v ^= morse.point(active[mark.component])
        columns.append(v)
    return GF2Matrix.from_columns(columns, morse.components)


def _check_chain_map(tau: GF2Matrix, b: BilinearizedComplex, degree: int, label: str) -> None:
    incoming = b.matrix(degree + 1)
    if tau.cols and incoming.cols and not (tau @ incoming).is_zero():
        raise ChainMapError(f"{label} не обращается в ноль на границах степени {degree}")


# ============================================================================
# Duality maps for an ordered pair
# ============================================================================


@dataclass(frozen=True)
class DualityMaps:
    """tau_{+,k} на C^{e1,e2} и tau_{-,k} на C^{e2,e1} для k = 0, n."""

    morse: MorseHomology
    plus: BilinearizedComplex
    minus: BilinearizedComplex
    plus_profile: HomologyProfile
    minus_profile: HomologyProfile
    tau_plus: dict[int, GF2Matrix]
    tau_minus: dict[int, GF2Matrix]

    def complex(self, sign: Sign) -> BilinearizedComplex:
        return self.plus if sign == "+" else self.minus

    def profile(self, sign: Sign) -> HomologyProfile:
        return self.plus_profile if sign == "+" else self.minus_profile

    def tau(self, sign: Sign, degree: int) -> GF2Matrix:
        return (self.tau_plus if sign == "+" else self.tau_minus)[degree]

    def image(self, sign: Sign, degree: int) -> list[np.ndarray]:
        """Базис образа tau на гомологиях (на циклах степени ``degree``)."""
        tau = self.tau(sign, degree)
        cycles = self.profile(sign).cycles.get(degree, [])
        if not cycles or not tau.cols:
            return []
        images = [tau.apply(z) for z in cycles]
        return column_basis(GF2Matrix.from_columns(images, self.morse.components))

    def image_dim(self, sign: Sign, degree: int) -> int:
        return len(self.image(sign, degree))

    def contains_fundamental(self, sign: Sign) -> bool:
        return in_span(self.morse.fundamental, self.image(sign, TOP_DEGREE))


def compute_duality(g: DGA, d: ResolvedDiagram, e1: Augmentation, e2: Augmentation) -> DualityMaps:
    """Построить tau для обоих порядков пары и проверить, что это цепные отображения."""
    morse = MorseHomology(g.n_components)
    plus, minus = bilinearize(g, e1, e2), bilinearize(g, e2, e1)
    tau_plus = {0: tau0(g, plus), TOP_DEGREE: tau_n(g, d, plus)}
    tau_minus = {0: tau0(g, minus), TOP_DEGREE: tau_n(g, d, minus)}
    for degree in (0, TOP_DEGREE):
        _check_chain_map(tau_plus[degree], plus, degree, f"tau_(+,{degree})")
        _check_chain_map(tau_minus[degree], minus, degree, f"tau_(-,{degree})")
    return DualityMaps(
        morse=morse,
        plus=plus,
        minus=minus,
        plus_profile=homology(plus),
        minus_profile=homology(minus),
        tau_plus=tau_plus,
        tau_minus=tau_minus,
    )


# ============================================================================
# sigma by adjointness
# ============================================================================


@dataclass(frozen=True)
class SigmaMap:
    """sigma на базисе H_{n-k}: коциклы C^k комплекса ``source_sign``.

    ``values[i]`` - представитель sigma(e_i), где e_i - i-й базисный класс Морса.
    """

    sign: Sign
    degree: int
    values: list[np.ndarray]


def sigma(maps: DualityMaps, sign: Sign, degree: int) -> SigmaMap:
    """sigma_{sign,degree}, заданное тождеством <sigma(c), [q]> = c . tau([q]).

    sigma_{-,k} сопряжено к tau_{+,k} (коциклы C^{e1,e2}), sigma_{+,k} -
    к tau_{-,k} (коциклы C^{e2,e1}).

    Raises:
        AdjointnessError: Если найденные коциклы не удовлетворяют тождеству.
    """
    source: Sign = "+" if sign == "-" else "-"
    b = maps.complex(source)
    tau = maps.tau(source, degree)
    cycles = maps.profile(source).cycles.get(degree, [])
    size = len(b.basis(degree))
    values: list[np.ndarray] = []
    for j in range(1, maps.morse.components + 1):
        c = maps.morse.point(j)
        if not cycles:
            values.append(np.zeros(size, dtype=np.uint8))
            continue
        rows = GF2Matrix(np.stack(cycles))
        rhs = np.array([maps.morse.intersect(c, tau.apply(z)) for z in cycles], dtype=np.uint8)
        phi = solve(rows, rhs)
        if phi is None:
            raise AdjointnessError(f"sigma_({sign},{degree}) не определяется на классе {j}")
        values.append(phi)
    result = SigmaMap(sign=sign, degree=degree, values=values)
    check_adjointness(maps, result)
    return result


def check_adjointness(maps: DualityMaps, s: SigmaMap) -> None:
    """Поэлементная проверка: коцикличность и <sigma(e_j), z> = e_j . tau(z)."""
    source: Sign = "+" if s.sign == "-" else "-"
    b = maps.complex(source)
    tau = maps.tau(source, s.degree)
    dual = b.matrix(s.degree + 1).transpose()
    for j, phi in enumerate(s.values, start=1):
        if dual.rows and dual.apply(phi).any():
            raise AdjointnessError(f"sigma_({s.sign},{s.degree})(e_{j}) не коцикл")
        for z in maps.profile(source).cycles.get(s.degree, []):
            lhs = int(np.dot(phi.astype(np.int64), z.astype(np.int64)) % 2)
            if lhs != maps.morse.intersect(maps.morse.point(j), tau.apply(z)):
                raise AdjointnessError(
                    f"sigma_({s.sign},{s.degree}): нарушено тождество сопряжённости на e_{j}",
                )


def sigma_kernel(maps: DualityMaps, s: SigmaMap) -> list[np.ndarray]:
    """Ядро sigma на гомологиях: классы Морса, чей образ - кограница."""
    source: Sign = "+" if s.sign == "-" else "-"
    classes = maps.profile(source).classes.get(s.degree, [])
    if not classes:
        return [maps.morse.point(j) for j in range(1, maps.morse.components + 1)]
    values = np.array(
        [[int(np.dot(phi.astype(np.int64), z.astype(np.int64)) % 2) for z in classes] for phi in s.values],
        dtype=np.uint8,
    )
    return nullspace(GF2Matrix(values.T))


# ============================================================================
# Exactness
# ============================================================================


def _same_subspace(a: list[np.ndarray], b: list[np.ndarray]) -> bool:
    return len(a) == len(b) and all(in_span(v, b) for v in a)


@dataclass(frozen=True)
class ExactnessReport:
    degrees: tuple[int, ...]
    im_tau_plus: dict[int, int]
    im_tau_minus: dict[int, int]
    failures: tuple[ExactnessError, ...] = ()
    adjointness_failures: tuple[AdjointnessError, ...] = ()

    @property
    def exact(self) -> bool:
        return not self.failures

    @property
    def adjoint(self) -> bool:
        return not self.adjointness_failures


def _exactness_at(maps: DualityMaps, sign: Sign, k: int) -> ExactnessError | None:
    other: Sign = "-" if sign == "+" else "+"
    image = maps.image(sign, k)
    orthogonal = maps.morse.perp(maps.image(other, TOP_DEGREE - k))
    if not _same_subspace(image, orthogonal):
        return ExactnessError(
            k,
            f"im tau_({sign},{k}) размерности {len(image)} не совпадает с "
            f"ортогональным дополнением im tau_({other},{TOP_DEGREE - k}) "
            f"размерности {len(orthogonal)}",
        )
    if len(image) + maps.image_dim(other, TOP_DEGREE - k) != maps.morse.components:
        return ExactnessError(k, "нарушен баланс рангов вокруг H_k")
    return None


def audit_exactness(maps: DualityMaps) -> ExactnessReport:
    """Проверить точность и сопряжённость во всех узлах, собирая нарушения.

    В H_k должно быть im tau_{+,k} = ker sigma_{+,n-k} = (im tau_{-,n-k})^perp
    и симметрично для знака минус.
    """
    failures: list[ExactnessError] = []
    adjointness: list[AdjointnessError] = []
    signs: tuple[Sign, ...] = ("+", "-")
    for sign in signs:
        for k in (0, TOP_DEGREE):
            problem = _exactness_at(maps, sign, k)
            if problem is not None:
                failures.append(problem)
            try:
                s = sigma(maps, sign, TOP_DEGREE - k)
            except AdjointnessError as exc:
                adjointness.append(exc)
                continue
            if not _same_subspace(maps.image(sign, k), sigma_kernel(maps, s)):
                failures.append(
                    ExactnessError(k, f"im tau_({sign},{k}) != ker sigma_({sign},{TOP_DEGREE - k})"),
                )
    if failures or adjointness:
        logger.warning(
            "Нарушений точности: %s, сопряжённости: %s",
            len(failures),
            len(adjointness),
        )
    return ExactnessReport(
        degrees=(0, TOP_DEGREE),
        im_tau_plus={k: maps.image_dim("+", k) for k in (0, TOP_DEGREE)},
        im_tau_minus={k: maps.image_dim("-", k) for k in (0, TOP_DEGREE)},
        failures=tuple(failures),
        adjointness_failures=tuple(adjointness),
    )


def check_exactness(maps: DualityMaps) -> ExactnessReport:
    """То же, что ``audit_exactness``, но первое нарушение поднимается.

    Raises:
        AdjointnessError: sigma не сопряжено с tau.
        ExactnessError: С указанием степени нарушения.
    """
    report = audit_exactness(maps)
    if report.adjointness_failures:
        raise report.adjointness_failures[0]
    if report.failures:
        raise report.failures[0]
    return report


def nondegenerate(maps: DualityMaps) -> bool:
    return is_nondegenerate(maps.plus, maps.plus_profile) and is_nondegenerate(
        maps.minus,
        maps.minus_profile,
    )


# ============================================================================
# Homotopy criteria
# ============================================================================


@dataclass(frozen=True)
class FundamentalClassVerdict:
    homotopic: bool
    in_minus: bool
    in_plus: bool


def thm1_criterion(
    g: DGA,
    d: ResolvedDiagram,
    e1: Augmentation,
    e2: Augmentation,
    maps: DualityMaps | None = None,
) -> FundamentalClassVerdict:
    """Гомотопность против [L] в im tau_{-,n} и im tau_{+,n}.

    Raises:
        TheoremDisagreement: Если вердикты расходятся.
    """
    maps = maps or compute_duality(g, d, e1, e2)
    homotopic = is_homotopic(g, e1, e2).homotopic
    verdict = FundamentalClassVerdict(
        homotopic=homotopic,
        in_minus=maps.contains_fundamental("-"),
        in_plus=maps.contains_fundamental("+"),
    )
    if verdict.in_minus != homotopic:
        raise TheoremDisagreement("гомотопность против [L] in im tau_(-,n)", (homotopic, verdict.in_minus))
    if verdict.in_plus != homotopic:
        raise TheoremDisagreement("гомотопность против [L] in im tau_(+,n)", (homotopic, verdict.in_plus))
    return verdict


@dataclass(frozen=True)
class ConnectedVerdict:
    difference: int
    tau0_vanishes: bool
    homotopic: bool


def tau0_vanishes(maps: DualityMaps) -> bool:
    """tau_{+,0} равно нулю на гомологиях."""
    return maps.image_dim("+", 0) == 0


def criter_bg(
    g: DGA,
    e1: Augmentation,
    e2: Augmentation,
    maps: DualityMaps,
) -> ConnectedVerdict:
    """Критерий для связных диаграмм: dim LCH^{e2,e1}_n - dim LCH^{e1,e2}_{-1} и tau_0 = 0.

    Raises:
        ParameterError: Диаграмма несвязна.
        TheoremDisagreement: Критерий расходится с прямым вычислением гомотопности.
    """
    if g.n_components != 1:
        raise ParameterError(
            f"критерий применим только к связным диаграммам, компонент: {g.n_components}",
        )
    homotopic = is_homotopic(g, e1, e2).homotopic
    difference = maps.minus_profile.rank(TOP_DEGREE) - maps.plus_profile.rank(-1)
    vanishes = tau0_vanishes(maps)
    if difference != int(homotopic):
        raise TheoremDisagreement("разность рангов против гомотопности", (bool(difference), homotopic))
    if vanishes != homotopic:
        raise TheoremDisagreement("tau_0 = 0 против гомотопности", (vanishes, homotopic))
    return ConnectedVerdict(difference=difference, tau0_vanishes=vanishes, homotopic=homotopic)


def duality_split(maps: DualityMaps, sign: Sign = "+") -> tuple[LaurentPoly, LaurentPoly]:
    """Разложение P = q + p: q_k = dim im tau_{sign,k}, p_k = dim ker tau_{sign,k}."""
    q = LaurentPoly({k: maps.image_dim(sign, k) for k in (0, TOP_DEGREE)})
    total = LaurentPoly.from_ranks(maps.profile(sign).ranks)
    return q, total - q


def check_alpha(sg: SurgeryDGA, e1: Augmentation, e2: Augmentation) -> bool:
    """alpha o tau_{+,0} = gamma o tau^S_{+,0} на хордах степени 0 (связный результат).

    alpha(c) = c . [L] складывает коэффициенты класса точки, gamma отождествляет
    H_0 связного результата с Z2.
    """
    if sg.dga.n_components != 1:
        raise ParameterError("проверка alpha требует связного результата перестройки")
    base_complex = bilinearize(sg.base, e1, e2)
    base = tau0(sg.base, base_complex)
    surgered_complex = bilinearize(sg.dga, e1, e2)
    surgered = tau0(sg.dga, surgered_complex)
    morse = MorseHomology(sg.base.n_components)
    old = base_complex.basis(0)
    new = surgered_complex.basis(0)
    for k, name in enumerate(old):
        alpha = morse.intersect(base.column(k), morse.fundamental)
        gamma = int(surgered.column(new.index(name))[0])
        if alpha != gamma:
            logger.warning("alpha o tau_0 != gamma o tau^S_0 на хорде %s", name)
            return False
    return True
