"""Сводные проверки по всем упорядоченным парам аугментаций диаграммы."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import pandas as pd

from legch.config import LEGCH_THREADS
from legch.exceptions import AugmentationError
from legch.models import AugmentationRecord, DiagramReport, FrontDiagram, PairReport
from legch.services.augment import (
    Augmentation,
    ClassSet,
    enumerate_augmentations,
    homotopy_classes,
    split_surgery_augmentations,
)
from legch.services.duality import (
    TOP_DEGREE,
    DualityMaps,
    audit_exactness,
    compute_duality,
    criter_bg,
    duality_split,
    nondegenerate,
    tau0_vanishes,
    thm1_criterion,
)
from legch.services.front_loader import front_hash
from legch.services.geography import is_admissible, split_is_witness
from legch.services.gf2_algebra import LaurentPoly
from legch.services.surgery import LinkAlgebra, link_algebra, surgery_sequence, verify_s_epsilon

logger = logging.getLogger(__name__)


# ============================================================================
# Augmentation space
# ============================================================================


@dataclass(frozen=True)
class AugmentationSpace:
    """Алгебра диаграммы и её аугментации в порядке перечисления.

    Для диаграмм с метками перестройки перечисляются аугментации алгебры
    после перестроек с нулём на образующих перестройки; остальные
    учитываются только счётчиком ``flagged``.
    """

    algebra: LinkAlgebra
    augmentations: tuple[Augmentation, ...]
    flagged: int | None = None

    def pick(self, index: int) -> Augmentation:
        if not 0 <= index < len(self.augmentations):
            raise AugmentationError(
                f"нет аугментации с индексом {index}, всего {len(self.augmentations)}",
            )
        return self.augmentations[index]


def augmentation_space(front: FrontDiagram) -> AugmentationSpace:
    algebra = link_algebra(front)
    if algebra.surgery is None:
        return AugmentationSpace(algebra, tuple(enumerate_augmentations(algebra.base)))
    vanishing, flagged = split_surgery_augmentations(algebra.surgery)
    return AugmentationSpace(algebra, tuple(vanishing), flagged=len(flagged))


# ============================================================================
# Pair checks
# ============================================================================


def pair_polynomials(maps: DualityMaps) -> tuple[LaurentPoly, LaurentPoly]:
    """P(e1, e2) и P(e2, e1) из уже посчитанных гомологий."""
    return (
        LaurentPoly.from_ranks(maps.plus_profile.ranks),
        LaurentPoly.from_ranks(maps.minus_profile.ranks),
    )


def _split_ok(maps: DualityMaps, components: int) -> bool:
    for sign in ("+", "-"):
        q, p = duality_split(maps, sign)
        if not split_is_witness(q, p, TOP_DEGREE) or q.coefficient(TOP_DEGREE) >= components:
            logger.warning("Разложение по tau_%s не является свидетелем: q = %s, p = %s", sign, q, p)
            return False
    return True


def check_pair(space: AugmentationSpace, i: int, j: int) -> PairReport:
    """Все проверки для упорядоченной пары (e_i, e_j).

    Raises:
        InvariantViolation: Любое расхождение с теоремами (код выхода 3).
    """
    algebra = space.algebra
    g, d = algebra.dga, algebra.diagram
    e1, e2 = space.pick(i), space.pick(j)
    maps = compute_duality(g, d, e1, e2)
    verdict = thm1_criterion(g, d, e1, e2, maps)
    # sigma для обоих знаков и степеней строится и проверяется на сопряжённость внутри
    exactness = audit_exactness(maps)
    forward, backward = pair_polynomials(maps)

    connected = g.n_components == 1
    geography = reverse = split_ok = None
    if not verdict.homotopic:
        geography = is_admissible(forward, TOP_DEGREE).to_verdict()
        reverse = is_admissible(backward, TOP_DEGREE).to_verdict()
        split_ok = _split_ok(maps, g.n_components)

    s_epsilon = ledger = None
    if algebra.surgery is not None:
        base1, base2 = e1.restrict(algebra.base.names), e2.restrict(algebra.base.names)
        s_epsilon = verify_s_epsilon(algebra.surgery, base1, base2) == verdict.homotopic
        ledger = surgery_sequence(algebra.surgery, base1, base2).ledger_ok()

    return PairReport(
        e1=i,
        e2=j,
        polynomial=str(forward),
        homotopic=verdict.homotopic,
        fundamental_in_im_tau_minus=verdict.in_minus,
        fundamental_in_im_tau_plus=verdict.in_plus,
        im_tau_plus=[exactness.im_tau_plus[k] for k in exactness.degrees],
        im_tau_minus=[exactness.im_tau_minus[k] for k in exactness.degrees],
        exact=exactness.exact,
        adjoint=exactness.adjoint,
        nondegenerate=nondegenerate(maps),
        tau0_vanishes=tau0_vanishes(maps),
        criter_bg=criter_bg(g, e1, e2, maps).difference if connected else None,
        geography=geography,
        geography_reverse=reverse,
        duality_split_admissible=split_ok,
        s_epsilon_agrees=s_epsilon,
        surgery_ledger_ok=ledger,
    )


def check_all_pairs(space: AugmentationSpace) -> list[PairReport]:
    """Проверки по всем упорядоченным парам; порядок (i, j) лексикографический."""
    size = len(space.augmentations)
    pairs = [(i, j) for i in range(size) for j in range(size)]
    with ThreadPoolExecutor(max_workers=LEGCH_THREADS) as pool:
        return list(pool.map(lambda p: check_pair(space, *p), pairs))


# ============================================================================
# Report
# ============================================================================


def _records(classes: ClassSet) -> list[AugmentationRecord]:
    return [
        AugmentationRecord(index=k, values=e.render(), homotopy_class=classes.class_of(k))
        for k, e in enumerate(classes.augmentations)
    ]


def build_report(front: FrontDiagram, timing: bool = True) -> DiagramReport:
    """Полный детерминированный отчёт; время работы - единственное недетерминированное поле."""
    started = time.perf_counter()
    space = augmentation_space(front)
    g = space.algebra.dga
    classes = homotopy_classes(g, space.augmentations)
    pairs = check_all_pairs(space)
    values = sorted({p.im_tau_plus[-1] for p in pairs})
    elapsed = time.perf_counter() - started
    logger.info("Отчёт построен за %.3f с: пар %s", elapsed, len(pairs))
    return DiagramReport(
        diagram_hash=front_hash(front),
        components=g.n_components,
        chords=list(g.generators),
        augmentations=_records(classes),
        flagged_surgery_augmentations=space.flagged,
        classes=[list(members) for members in classes.classes],
        pairs=pairs,
        im_tau_plus_n_values=values,
        consistent=all(p.consistent for p in pairs),
        wall_time=round(elapsed, 6) if timing else None,
    )


def sweep_frame(report: DiagramReport) -> pd.DataFrame:
    """Таблица сводки по парам для вывода ``legch sweep``."""
    rows = []
    for p in report.pairs:
        rows.append(
            {
                "e1": p.e1,
                "e2": p.e2,
                "P": p.polynomial,
                "homotopic": p.homotopic,
                "[L] in im tau-": p.fundamental_in_im_tau_minus,
                "[L] in im tau+": p.fundamental_in_im_tau_plus,
                "im tau+": ",".join(map(str, p.im_tau_plus)),
                "admissible": None if p.geography is None else p.geography.admissible,
                "consistent": p.consistent,
            },
        )
    return pd.DataFrame(
        rows,
        columns=[
            "e1",
            "e2",
            "P",
            "homotopic",
            "[L] in im tau-",
            "[L] in im tau+",
            "im tau+",
            "admissible",
            "consistent",
        ],
    )
