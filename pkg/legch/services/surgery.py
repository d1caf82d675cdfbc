"""Точная последовательность 0-перестройки и итерированные перестройки."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from legch.exceptions import ChainMapError, ParameterError, TheoremDisagreement
from legch.models import FrontDiagram, FrontEvent
from legch.services.augment import (
    Augmentation,
    induce_surgery_augmentation,
    is_homotopic,
)
from legch.services.dga import DGA, SurgeryDGA, attach_surgery_pairs, build_dga, surgery_names
from legch.services.diagram import ResolvedDiagram, normalize_front, resolve, trace_events
from legch.services.gf2_algebra import GF2Matrix, rank
from legch.services.lch import BilinearizedComplex, bilinearize, homology

logger = logging.getLogger(__name__)

TOP_DEGREE = 1


# ============================================================================
# Link algebra
# ============================================================================


@dataclass(frozen=True)
class LinkAlgebra:
    """Алгебра диаграммы: исходная DGA и, если есть метки, алгебра после перестроек."""

    diagram: ResolvedDiagram
    base: DGA
    surgery: SurgeryDGA | None = None

    @property
    def dga(self) -> DGA:
        return self.surgery.dga if self.surgery is not None else self.base


def link_algebra(front: FrontDiagram) -> LinkAlgebra:
    """Разрешить фронт, построить DGA и присоединить все пары меток перестройки."""
    d = resolve(front)
    g = build_dga(d)
    if not d.surgery_pairs:
        return LinkAlgebra(diagram=d, base=g)
    labels = [p.label for p in d.surgery_pairs]
    return LinkAlgebra(diagram=d, base=g, surgery=_attach_stepwise(g, d, labels))


def _attach_stepwise(g: DGA, d: ResolvedDiagram, labels: list[str]) -> SurgeryDGA:
    """Присоединять пары по одной, проверяя d_S^2 = 0 после каждого шага."""
    names = surgery_names(g, len(labels))
    for step in range(1, len(labels)):
        attach_surgery_pairs(g, d, labels[:step], names=names[:step])
        logger.debug("Шаг перестройки %s: образующая %s", step, names[step - 1])
    return attach_surgery_pairs(g, d, labels, names=names)


# ============================================================================
# Surgery exact sequence
# ============================================================================


@dataclass(frozen=True)
class SurgerySequence:
    """0 -> Z2<s> -> C(L, S) -> C(L) -> 0 для пары индуцированных аугментаций.

    ``rho`` - матрица коэффициентов при образующих перестройки в d_S^{e1,e2}
    на хордах степени n (строки - образующие s, столбцы - хорды степени n).
    """

    surgered: BilinearizedComplex
    base: BilinearizedComplex
    rho: np.ndarray
    rho_rank: int
    surgered_ranks: dict[int, int]
    base_ranks: dict[int, int]
    generators: int

    def ledger_ok(self) -> bool:
        """Ранги согласованы с длинной точной последовательностью.

        dim H_n(S) = dim H_n - rank rho, dim H_{n-1}(S) = dim H_{n-1} + k - rank rho,
        в остальных степенях ранги равны.
        """
        degrees = set(self.surgered_ranks) | set(self.base_ranks) | {TOP_DEGREE, TOP_DEGREE - 1}
        for k in degrees:
            expected = self.base_ranks.get(k, 0)
            if k == TOP_DEGREE:
                expected -= self.rho_rank
            elif k == TOP_DEGREE - 1:
                expected += self.generators - self.rho_rank
            if self.surgered_ranks.get(k, 0) != expected:
                return False
        return True


def surgery_sequence(sg: SurgeryDGA, e1: Augmentation, e2: Augmentation) -> SurgerySequence:
    """Комплексы до и после перестройки, проекция pi и rho.

    Raises:
        ChainMapError: Если pi (отбрасывание s) не является цепным отображением.
    """
    i1, i2 = induce_surgery_augmentation(sg, e1), induce_surgery_augmentation(sg, e2)
    surgered = bilinearize(sg.dga, i1, i2)
    base = bilinearize(sg.base, i1, i2)
    letters = set(sg.surgery_generators)
    for name in base.names:
        projected = surgered.boundary[name] - letters
        if projected != base.boundary[name]:
            raise ChainMapError(f"проекция pi не коммутирует с дифференциалом на {name}")

    top = base.basis(TOP_DEGREE)
    rho = np.zeros((len(sg.surgery_generators), len(top)), dtype=np.uint8)
    for c, name in enumerate(top):
        for r, letter in enumerate(sg.surgery_generators):
            rho[r, c] = int(letter in surgered.boundary[name])

    base_profile = homology(base)
    cycles = base_profile.cycles.get(TOP_DEGREE, [])
    if cycles and rho.size:
        on_cycles = (rho.astype(np.int64) @ np.stack(cycles).T.astype(np.int64)) & 1
        rho_rank = rank(GF2Matrix(on_cycles))
    else:
        rho_rank = 0
    return SurgerySequence(
        surgered=surgered,
        base=base,
        rho=rho,
        rho_rank=rho_rank,
        surgered_ranks=dict(homology(surgered).ranks),
        base_ranks=dict(base_profile.ranks),
        generators=len(sg.surgery_generators),
    )


def verify_s_epsilon(sg: SurgeryDGA, e1: Augmentation, e2: Augmentation) -> bool:
    """e1 ~ e2 на исходной алгебре тогда и только тогда, когда e1^S ~ e2^S.

    Returns:
        Общий вердикт гомотопности.

    Raises:
        TheoremDisagreement: Если вердикты различаются.
    """
    before = is_homotopic(sg.base, e1, e2).homotopic
    i1, i2 = induce_surgery_augmentation(sg, e1), induce_surgery_augmentation(sg, e2)
    after = is_homotopic(sg.dga, i1, i2).homotopic
    if before != after:
        raise TheoremDisagreement("гомотопность до и после перестройки", (before, after))
    return before


# ============================================================================
# Iterated surgery
# ============================================================================


def place_surgery_mark(front: FrontDiagram, first: int, second: int, label: str) -> FrontDiagram:
    """Поставить пару половинных меток ``label`` в первый промежуток,
    где нити компонент ``first`` и ``second`` соседствуют.

    Raises:
        ParameterError: Если компоненты нигде не соседствуют.
    """
    trace = trace_events(front.events)
    wanted = {first, second}
    for index, layout in enumerate(trace.layouts):
        for p in range(len(layout) - 1):
            pair = {trace.strand_component[layout[p]], trace.strand_component[layout[p + 1]]}
            if pair != wanted:
                continue
            feet = [
                FrontEvent(kind="S", position=p + 1, label=label),
                FrontEvent(kind="S", position=p + 2, label=label),
            ]
            events = list(front.events[:index]) + feet + list(front.events[index:])
            return normalize_front(front.components, events)
    raise ParameterError(f"нити компонент {first} и {second} нигде не соседствуют")


def _fresh_join_label(d: ResolvedDiagram) -> str:
    taken = {p.label for p in d.surgery_pairs}
    k = 1
    while f"join{k}" in taken:
        k += 1
    return f"join{k}"


def iterate_surgery(front: FrontDiagram, joins: list[tuple[int, int]]) -> SurgeryDGA:
    """Последовательные перестройки по списку склеек компонент.

    Для склейки берётся размеченная пара фронта, соединяющая те же
    компоненты; если такой нет, метки ставятся автоматически. Новые
    образующие называются ``s1, s2, ...`` (``s`` при одной склейке).

    Raises:
        ParameterError: Склейки не образуют лес или компоненты вне диапазона.
    """
    count = len(front.components)
    for i, j in joins:
        if not (1 <= i <= count and 1 <= j <= count) or i == j:
            raise ParameterError(f"недопустимая склейка {i}-{j} при {count} компонентах")
    if not joins:
        g = build_dga(resolve(front))
        return SurgeryDGA(base=g, dga=g, surgery_generators=(), joins=())

    labels: list[str] = []
    current = front
    for i, j in joins:
        d = resolve(current)
        label = next(
            (p.label for p in d.surgery_pairs if set(p.components) == {i, j} and p.label not in labels),
            None,
        )
        if label is None:
            label = _fresh_join_label(d)
            current = place_surgery_mark(current, i, j, label)
        labels.append(label)
    d = resolve(current)
    return _attach_stepwise(build_dga(d), d, labels)
