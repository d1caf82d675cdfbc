"""Фронтальные диаграммы: трассировка нитей, разрешение и градуировка.

Фронт читается слева направо как последовательность событий. Левые каспы
рождают пару нитей у верхнего или нижнего края, правые каспы закрывают пару
у края. При разрешении каждое пересечение фронта становится хордой, а правый
касп превращается в пересечение-петлю и поворот.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Literal, Sequence

from legch.exceptions import (
    DiagramSyntaxError,
    DiagramTopologyError,
    GradingError,
    ParameterError,
)
from legch.models import Chord, ComponentDecl, FrontDiagram, FrontEvent

logger = logging.getLogger(__name__)

ColumnKind = Literal["turn_left", "crossing", "turn_right", "mark"]
MarkKind = Literal["basepoint", "surgery"]


# ============================================================================
# Resolved diagram types
# ============================================================================


@dataclass(frozen=True)
class MarkRef:
    """Отмеченная точка или нога перестройки на нити."""

    kind: MarkKind
    position: int
    component: int
    label: str


@dataclass(frozen=True)
class Column:
    """Столбец разрешённой диаграммы между двумя вертикальными срезами."""

    kind: ColumnKind
    position: int = 0
    chord: str | None = None
    marks: tuple[MarkRef, ...] = ()


@dataclass(frozen=True)
class CuspRecord:
    side: Literal["left", "right"]
    upper: int
    lower: int
    event: int


@dataclass(frozen=True)
class CrossingRecord:
    """Геометрия хорды: нити, приходящие в пересечение сверху и снизу слева."""

    name: str
    kind: Literal["crossing", "cusp"]
    column: int
    upper: int
    lower: int


@dataclass(frozen=True)
class SurgeryPair:
    label: str
    components: tuple[int, int]


@dataclass(frozen=True)
class StrandTrace:
    """Раскладка нитей по позициям перед каждым событием и после последнего."""

    layouts: tuple[tuple[int, ...], ...]
    strand_component: tuple[int, ...]
    cusps: tuple[CuspRecord, ...]
    component_count: int

    def component_at(self, event_index: int, position: int) -> int:
        return self.strand_component[self.layouts[event_index][position - 1]]


@dataclass(frozen=True)
class ResolvedDiagram:
    """Разрешённая диаграмма: столбцы, ширины срезов и градуированные хорды."""

    front: FrontDiagram
    columns: tuple[Column, ...]
    widths: tuple[int, ...]
    strand_component: tuple[int, ...]
    cusps: tuple[CuspRecord, ...]
    crossings: tuple[CrossingRecord, ...]
    chords: tuple[Chord, ...]
    surgery_pairs: tuple[SurgeryPair, ...]

    @property
    def n_components(self) -> int:
        return len(self.front.components)

    @property
    def chord_map(self) -> dict[str, Chord]:
        return {c.name: c for c in self.chords}

    @property
    def degrees(self) -> dict[str, int]:
        return {c.name: c.degree for c in self.chords}

    def euler_characteristic(self) -> int:
        """Сумма (-1)^|c| по хордам."""
        return sum(-1 if c.degree % 2 else 1 for c in self.chords)


# ============================================================================
# Strand tracing
# ============================================================================


def _find(parent: list[int], s: int) -> int:
    while parent[s] != s:
        parent[s] = parent[parent[s]]
        s = parent[s]
    return s


def trace_events(events: Sequence[FrontEvent]) -> StrandTrace:
    """Проследить нити через события и разбить их на компоненты.

    Raises:
        DiagramTopologyError: Касп не у края, пересечение вне диапазона,
            метка вне диапазона или незамкнутые нити в конце.
    """
    layout: list[int] = []
    layouts: list[tuple[int, ...]] = [()]
    parent: list[int] = []
    cusps: list[CuspRecord] = []
    for idx, ev in enumerate(events):
        n = len(layout)
        where = f"строка {ev.line}, событие {ev.kind} {ev.position}"
        if ev.kind == "L":
            if ev.position not in {1, n + 1}:
                raise DiagramTopologyError(
                    f"{where}: левый касп должен рождаться у края диаграммы (1 или {n + 1})",
                )
            upper, lower = len(parent), len(parent) + 1
            parent.extend([upper, upper])
            layout[ev.position - 1:ev.position - 1] = [upper, lower]
            cusps.append(CuspRecord("left", upper, lower, idx))
        elif ev.kind == "R":
            if n < 2 or ev.position not in {1, n - 1}:
                raise DiagramTopologyError(
                    f"{where}: правый касп должен закрывать пару нитей у края (ширина {n})",
                )
            upper, lower = layout[ev.position - 1], layout[ev.position]
            parent[_find(parent, lower)] = _find(parent, upper)
            del layout[ev.position - 1:ev.position + 1]
            cusps.append(CuspRecord("right", upper, lower, idx))
        elif ev.kind == "X":
            if not 1 <= ev.position <= n - 1:
                raise DiagramTopologyError(f"{where}: пересечение вне диапазона (ширина {n})")
            i = ev.position - 1
            layout[i], layout[i + 1] = layout[i + 1], layout[i]
        else:
            for p in (ev.position, ev.other):
                if p is not None and not 1 <= p <= n:
                    raise DiagramTopologyError(f"{where}: метка на позиции {p} при ширине {n}")
        layouts.append(tuple(layout))
    if layout:
        raise DiagramTopologyError(f"незамкнутые нити в конце диаграммы: {len(layout)}")
    roots: list[int] = []
    for cusp in cusps:
        root = _find(parent, cusp.upper)
        if cusp.side == "left" and root not in roots:
            roots.append(root)
    index = {root: k + 1 for k, root in enumerate(roots)}
    return StrandTrace(
        layouts=tuple(layouts),
        strand_component=tuple(index[_find(parent, s)] for s in range(len(parent))),
        cusps=tuple(cusps),
        component_count=len(roots),
    )


# ============================================================================
# Normalization (component declarations, basepoints, surgery marks)
# ============================================================================


def _fill_components(
    declared: Sequence[ComponentDecl],
    count: int,
) -> tuple[ComponentDecl, ...]:
    if len(declared) > count:
        raise DiagramTopologyError(
            f"объявлено компонент: {len(declared)}, найдено при трассировке: {count}",
        )
    taken = {c.name for c in declared}
    filled = list(declared)
    k = len(filled)
    while len(filled) < count:
        k += 1
        name = f"K{k}"
        while name in taken:
            name += "_"
        taken.add(name)
        filled.append(ComponentDecl(name=name, shift=0))
    return tuple(filled)


def _check_labels(events: Sequence[FrontEvent]) -> None:
    seen: dict[str, int] = {}
    for ev in events:
        if ev.kind in {"X", "R"} and ev.label is not None:
            if ev.label in seen:
                raise DiagramSyntaxError(
                    f"метка хорды {ev.label!r} уже использована в строке {seen[ev.label]}",
                    line=ev.line,
                )
            seen[ev.label] = ev.line


def _check_surgery(events: Sequence[FrontEvent], trace: StrandTrace) -> None:
    halves: dict[str, list[int]] = {}
    for idx, ev in enumerate(events):
        if ev.kind != "S":
            continue
        if ev.other is not None:
            first = trace.component_at(idx, ev.position)
            second = trace.component_at(idx, ev.other)
            if first == second:
                raise DiagramTopologyError(
                    f"строка {ev.line}: метка перестройки соединяет компоненту {first} саму с собой",
                )
        else:
            halves.setdefault(str(ev.label), []).append(trace.component_at(idx, ev.position))
    for label, feet in halves.items():
        if len(feet) != 2:
            raise DiagramTopologyError(
                f"пара перестройки {label!r} должна иметь ровно две ноги, найдено {len(feet)}",
            )
        if feet[0] == feet[1]:
            raise DiagramTopologyError(
                f"пара перестройки {label!r} соединяет компоненту {feet[0]} саму с собой",
            )


def normalize_front(
    components: Sequence[ComponentDecl],
    events: Sequence[FrontEvent],
) -> FrontDiagram:
    """Проверить события и расставить недостающие отмеченные точки.

    Каждая компонента без явного ``B`` получает отмеченную точку на верхней
    нити своего самого левого правого каспа, непосредственно перед ним.
    """
    _check_labels(events)
    trace = trace_events(events)
    if trace.component_count == 0:
        raise DiagramTopologyError("в диаграмме нет ни одной компоненты")
    decls = _fill_components(components, trace.component_count)
    _check_surgery(events, trace)

    with_basepoint: dict[int, int] = {}
    for idx, ev in enumerate(events):
        if ev.kind == "B":
            comp = trace.component_at(idx, ev.position)
            if comp in with_basepoint:
                raise DiagramTopologyError(
                    f"строка {ev.line}: у компоненты {decls[comp - 1].name} "
                    f"несколько отмеченных точек",
                )
            with_basepoint[comp] = idx

    insertions: list[tuple[int, FrontEvent]] = []
    for comp in range(1, trace.component_count + 1):
        if comp in with_basepoint:
            continue
        for idx, ev in enumerate(events):
            if ev.kind == "R" and trace.component_at(idx, ev.position) == comp:
                insertions.append((idx, FrontEvent(kind="B", position=ev.position)))
                break
    normalized = list(events)
    for idx, ev in sorted(insertions, key=lambda item: item[0], reverse=True):
        normalized.insert(idx, ev)
    logger.debug(
        "Нормализован фронт: %s компонент, %s событий, добавлено отмеченных точек: %s",
        trace.component_count,
        len(normalized),
        len(insertions),
    )
    return FrontDiagram(components=decls, events=tuple(normalized))


# ============================================================================
# Resolution and grading
# ============================================================================


def chord_names(front: FrontDiagram) -> list[str]:
    """Имена хорд в порядке событий: явные метки или ``c1, c2, ...``."""
    explicit = {ev.label for ev in front.events if ev.kind in {"X", "R"} and ev.label}
    names: list[str] = []
    k = 0
    for ev in front.events:
        if ev.kind not in {"X", "R"}:
            continue
        k += 1
        if ev.label is not None:
            names.append(ev.label)
            continue
        name = f"c{k}"
        suffix = 1
        while name in explicit:
            suffix += 1
            name = f"c{k}_{suffix}"
        names.append(name)
    return names


def resolve(f: FrontDiagram) -> ResolvedDiagram:
    """Разрешить фронт в диаграмму с хордами, метками и градуировкой.

    Raises:
        GradingError: Если потенциал Маслова не согласован на компоненте.
    """
    trace = trace_events(f.events)
    names = iter(chord_names(f))
    columns: list[Column] = []
    widths: list[int] = [0]
    crossings: list[CrossingRecord] = []
    pairs: dict[str, list[int]] = {}
    two_foot = 0

    for idx, ev in enumerate(f.events):
        before = trace.layouts[idx]
        width = len(before)
        if ev.kind == "L":
            columns.append(Column("turn_left", ev.position))
            widths.append(width + 2)
        elif ev.kind in {"X", "R"}:
            name = next(names)
            crossings.append(
                CrossingRecord(
                    name=name,
                    kind="crossing" if ev.kind == "X" else "cusp",
                    column=len(columns),
                    upper=before[ev.position - 1],
                    lower=before[ev.position],
                ),
            )
            columns.append(Column("crossing", ev.position, chord=name))
            widths.append(width)
            if ev.kind == "R":
                columns.append(Column("turn_right", ev.position))
                widths.append(width - 2)
        elif ev.kind == "B":
            comp = trace.component_at(idx, ev.position)
            mark = MarkRef("basepoint", ev.position, comp, f.components[comp - 1].name)
            columns.append(Column("mark", marks=(mark,)))
            widths.append(width)
        else:
            if ev.other is not None:
                two_foot += 1
                label = f"#{two_foot}"
                feet = (ev.position, ev.other)
            else:
                label = str(ev.label)
                feet = (ev.position,)
            marks = tuple(
                MarkRef("surgery", p, trace.component_at(idx, p), label) for p in feet
            )
            for mark in marks:
                pairs.setdefault(label, []).append(mark.component)
            columns.append(Column("mark", marks=marks))
            widths.append(width)

    resolved = ResolvedDiagram(
        front=f,
        columns=tuple(columns),
        widths=tuple(widths),
        strand_component=trace.strand_component,
        cusps=trace.cusps,
        crossings=tuple(crossings),
        chords=(),
        surgery_pairs=tuple(
            SurgeryPair(label, (comps[0], comps[1])) for label, comps in pairs.items()
        ),
    )
    graded = grade(resolved)
    return ResolvedDiagram(
        front=resolved.front,
        columns=resolved.columns,
        widths=resolved.widths,
        strand_component=resolved.strand_component,
        cusps=resolved.cusps,
        crossings=resolved.crossings,
        chords=tuple(graded[c.name] for c in crossings),
        surgery_pairs=resolved.surgery_pairs,
    )


def maslov_potentials(d: ResolvedDiagram) -> dict[int, int]:
    """Потенциал Маслова каждой нити с учётом сдвигов компонент.

    На каждом каспе верхняя ветвь на единицу больше нижней. Отсчёт ведётся
    от нижней нити первого левого каспа компоненты.
    """
    adjacency: dict[int, list[tuple[int, int]]] = {}
    for cusp in d.cusps:
        adjacency.setdefault(cusp.lower, []).append((cusp.upper, 1))
        adjacency.setdefault(cusp.upper, []).append((cusp.lower, -1))
    mu: dict[int, int] = {}
    for cusp in d.cusps:
        if cusp.side != "left":
            continue
        comp = d.strand_component[cusp.lower]
        if cusp.lower in mu:
            continue
        decl = d.front.components[comp - 1]
        mu[cusp.lower] = decl.shift
        queue = deque([cusp.lower])
        while queue:
            strand = queue.popleft()
            for other, delta in adjacency.get(strand, []):
                expected = mu[strand] + delta
                if other not in mu:
                    mu[other] = expected
                    queue.append(other)
                elif mu[other] != expected:
                    raise GradingError(
                        decl.name,
                        f"потенциал Маслова не согласован на нити {other}: "
                        f"{mu[other]} и {expected} (ненулевое число вращения)",
                    )
    return mu


def grade(d: ResolvedDiagram) -> dict[str, Chord]:
    """Таблица хорд со степенями и компонентами концов.

    Степень пересечения равна разности потенциалов верхней и нижней нитей
    слева от него; для хорд правых каспов это всегда 1.
    """
    mu = maslov_potentials(d)
    table: dict[str, Chord] = {}
    for crossing in d.crossings:
        table[crossing.name] = Chord(
            name=crossing.name,
            degree=mu[crossing.upper] - mu[crossing.lower],
            source=d.strand_component[crossing.upper],
            target=d.strand_component[crossing.lower],
            kind=crossing.kind,
        )
    return table


# ============================================================================
# Disjoint unions
# ============================================================================


def _fresh(name: str, taken: set[str], part: int) -> str:
    if name not in taken:
        return name
    candidate = f"{name}_{part}"
    while candidate in taken:
        candidate += "_"
    return candidate


def merge_fronts(parts: Sequence[FrontDiagram]) -> tuple[FrontDiagram, list[dict[str, str]]]:
    """Горизонтально разнесённое объединение фронтов.

    Все хорды получают явные метки; совпадающие имена хорд, компонент и пар
    перестройки в последующих частях получают суффикс номера части.

    Returns:
        Объединённый фронт и для каждой части отображение старых имён хорд в новые.
    """
    components: list[ComponentDecl] = []
    events: list[FrontEvent] = []
    renames: list[dict[str, str]] = []
    taken_chords: set[str] = set()
    taken_components: set[str] = set()
    taken_pairs: set[str] = set()
    for number, part in enumerate(parts, start=1):
        names = iter(chord_names(part))
        rename: dict[str, str] = {}
        for decl in part.components:
            new_name = _fresh(decl.name, taken_components, number)
            taken_components.add(new_name)
            components.append(ComponentDecl(name=new_name, shift=decl.shift))
        pair_rename: dict[str, str] = {}
        for ev in part.events:
            if ev.kind in {"X", "R"}:
                old = next(names)
                new = _fresh(old, taken_chords, number)
                taken_chords.add(new)
                rename[old] = new
                events.append(ev.model_copy(update={"label": new}))
            elif ev.kind == "S" and ev.label is not None:
                if ev.label not in pair_rename:
                    pair_rename[ev.label] = _fresh(ev.label, taken_pairs, number)
                    taken_pairs.add(pair_rename[ev.label])
                events.append(ev.model_copy(update={"label": pair_rename[ev.label]}))
            else:
                events.append(ev)
        renames.append(rename)
    return normalize_front(components, events), renames


def disjoint_union(a: FrontDiagram, b: FrontDiagram) -> FrontDiagram:
    """Объединение двух фронтов, разнесённых по горизонтали (смешанных хорд нет)."""
    return merge_fronts([a, b])[0]


# ============================================================================
# Legendrian rewrites
# ============================================================================


def _fresh_labels(front: FrontDiagram, count: int, prefix: str = "k") -> list[str]:
    taken = set(chord_names(front))
    labels: list[str] = []
    j = 0
    while len(labels) < count:
        j += 1
        candidate = f"{prefix}{j}"
        if candidate not in taken:
            labels.append(candidate)
    return labels


def add_kink(front: FrontDiagram, index: int) -> FrontDiagram:
    """Первое лежандрово движение Райдемейстера на верхней нити перед событием ``index``.

    Вставляет ``L 1``, ``X 2``, ``R 1``: верхняя нить получает петлю с
    двумя каспами и одним пересечением и продолжается на позиции 1.
    """
    if not 0 <= index <= len(front.events):
        raise ParameterError(f"позиция вставки {index} вне диапазона 0..{len(front.events)}")
    width = len(trace_events(front.events).layouts[index])
    if width == 0:
        raise ParameterError(f"перед событием {index} нет нитей для петли")
    crossing_label, cusp_label = _fresh_labels(front, 2)
    kink = [
        FrontEvent(kind="L", position=1),
        FrontEvent(kind="X", position=2, label=crossing_label),
        FrontEvent(kind="R", position=1, label=cusp_label),
    ]
    events = list(front.events[:index]) + kink + list(front.events[index:])
    return normalize_front(front.components, events)


def _touched(ev: FrontEvent) -> set[int]:
    if ev.kind == "X":
        return {ev.position, ev.position + 1}
    if ev.kind == "S" and ev.other is not None:
        return {ev.position, ev.other}
    return {ev.position}


def commute_events(front: FrontDiagram, index: int) -> FrontDiagram:
    """Поменять местами события ``index`` и ``index + 1`` (плоская изотопия).

    Допустимы только пересечения и метки, затрагивающие непересекающиеся позиции.
    """
    if not 0 <= index < len(front.events) - 1:
        raise ParameterError(f"нет пары событий в позиции {index}")
    first, second = front.events[index], front.events[index + 1]
    if first.kind in {"L", "R"} or second.kind in {"L", "R"}:
        raise ParameterError("каспы меняют нумерацию нитей и не переставляются")
    if first.kind == "X" or second.kind == "X":
        if _touched(first) & _touched(second):
            raise ParameterError(
                f"события {first.kind} {first.position} и {second.kind} {second.position} "
                f"затрагивают общие нити",
            )
    events = list(front.events)
    events[index], events[index + 1] = second, first
    return normalize_front(front.components, events)


def _across(mark: FrontEvent, crossing: FrontEvent) -> FrontEvent:
    i = crossing.position
    if mark.position == i:
        return mark.model_copy(update={"position": i + 1})
    if mark.position == i + 1:
        return mark.model_copy(update={"position": i})
    return mark


def move_basepoint(front: FrontDiagram, index: int, forward: bool = True) -> FrontDiagram:
    """Перенести отмеченную точку ``B`` через соседнее пересечение.

    Args:
        front: Нормализованный фронт.
        index: Индекс события ``B``.
        forward: Переносить через следующее событие (иначе через предыдущее).

    Raises:
        ParameterError: Если по индексу не ``B`` или соседнее событие не пересечение.
    """
    if not 0 <= index < len(front.events) or front.events[index].kind != "B":
        raise ParameterError(f"событие {index} не является отмеченной точкой")
    neighbour = index + 1 if forward else index - 1
    if not 0 <= neighbour < len(front.events) or front.events[neighbour].kind != "X":
        raise ParameterError(f"рядом с событием {index} нет пересечения")
    events = list(front.events)
    moved = _across(events[index], events[neighbour])
    events[index], events[neighbour] = events[neighbour], moved
    return normalize_front(front.components, events)
