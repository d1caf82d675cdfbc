"""Перечисление жёстких дисков разрешённой диаграммы.

Диск задаётся последовательностью вертикальных срезов ``(t, b)``, ``t < b``,
по одному в каждом промежутке между столбцами. Диск начинается у левого
поворота или положительным углом у пересечения и заканчивается у правого
поворота или положительным углом; допускается ровно один положительный угол.
Отрицательные углы возникают, когда нижняя граница поворачивает у пересечения
под ней или верхняя у пересечения над ней.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Literal

from legch.services.diagram import Column, MarkKind, MarkRef, ResolvedDiagram
from legch.services.gf2_algebra import Word

logger = logging.getLogger(__name__)

Slice = tuple[int, int]
Side = Literal["top", "bottom"]


@dataclass(frozen=True)
class BoundaryMark:
    """Пересечение границы диска с отмеченной точкой или ногой перестройки.

    ``split`` равен числу отрицательных углов перед меткой плюс один.
    """

    kind: MarkKind
    component: int
    label: str
    split: int


@dataclass(frozen=True)
class DecoratedDisk:
    positive: str
    negatives: tuple[str, ...]
    marks: tuple[BoundaryMark, ...]
    start: int
    end: int
    path: tuple[Slice, ...]

    @property
    def word(self) -> Word:
        return Word(self.negatives)

    def boundary_marks(self, kind: MarkKind | None = None) -> list[tuple[int, int]]:
        return boundary_marks(self, kind)

    def sort_key(self) -> tuple:
        return (self.positive, self.word.sort_key(), self.start, self.end, self.path)

    def render(self) -> str:
        """Строка отладочного дампа ``a <- b1 b2 | marks: (comp,l) ...``."""
        word = " ".join(self.negatives)
        marks = " ".join(f"({m.component},{m.split})" for m in self.marks)
        return f"{self.positive} <- {word} | marks: {marks}".replace("  ", " ")


@dataclass(frozen=True)
class _BoundaryEvent:
    column: int
    side: Side
    chord: str | None = None
    mark: MarkRef | None = None


# ============================================================================
# Slice transitions
# ============================================================================


def _swap(p: int, i: int) -> int:
    if p == i:
        return i + 1
    if p == i + 1:
        return i
    return p


def _opening(s: Slice, i: int) -> tuple[Slice, ...]:
    """Срез проходит мимо рождающейся пары нитей: позиции от i сдвигаются на 2."""
    t, b = s
    return ((t + 2 if t >= i else t, b + 2 if b >= i else b),)


def _closing(s: Slice, i: int) -> tuple[Slice, ...]:
    """Срез проходит мимо закрывающейся пары нитей, если не касается её."""
    t, b = s
    if {t, b} & {i, i + 1}:
        return ()
    return ((t - 2 if t > i + 1 else t, b - 2 if b > i + 1 else b),)


def _step(
    column: Column,
    index: int,
    s: Slice,
    forward: bool,
) -> list[tuple[Slice, tuple[_BoundaryEvent, ...]]]:
    t, b = s
    i = column.position
    if column.kind == "mark":
        events = []
        for mark in column.marks:
            if mark.position == t:
                events.append(_BoundaryEvent(index, "top", mark=mark))
            if mark.position == b:
                events.append(_BoundaryEvent(index, "bottom", mark=mark))
        return [(s, tuple(events))]
    if column.kind in {"turn_left", "turn_right"}:
        opens = (column.kind == "turn_left") == forward
        moved = _opening(s, i) if opens else _closing(s, i)
        return [(m, ()) for m in moved]
    result: list[tuple[Slice, tuple[_BoundaryEvent, ...]]] = []
    if s != (i, i + 1):
        result.append(((_swap(t, i), _swap(b, i)), ()))
    if b == i and t < i:
        result.append((s, (_BoundaryEvent(index, "bottom", chord=column.chord),)))
    if t == i + 1 and b > i + 1:
        result.append((s, (_BoundaryEvent(index, "top", chord=column.chord),)))
    return result


# ============================================================================
# Boundary walks
# ============================================================================


def _walk(
    d: ResolvedDiagram,
    start_gap: int,
    start_slice: Slice,
    forward: bool,
    target: int | None,
) -> Iterator[tuple[tuple[Slice, ...], tuple[_BoundaryEvent, ...], int]]:
    """Обход в глубину от начального среза.

    Если ``target`` задан, диск обязан закончиться положительным углом в этом
    столбце; иначе он заканчивается поворотом (правым при обходе слева
    направо, левым при обратном обходе).
    """
    cusp_end = "turn_right" if forward else "turn_left"
    stack = [(start_gap, start_slice, (start_slice,), ())]
    while stack:
        gap, s, path, events = stack.pop()
        index = gap if forward else gap - 1
        if not 0 <= index < len(d.columns):
            continue
        column = d.columns[index]
        closes = s == (column.position, column.position + 1)
        if target is not None and index == target:
            if closes:
                yield path, events, index
            continue
        if target is None and closes and column.kind == cusp_end:
            yield path, events, index
            continue
        next_gap = gap + 1 if forward else gap - 1
        for new_slice, new_events in _step(column, index, s, forward):
            stack.append((next_gap, new_slice, path + (new_slice,), events + new_events))


def _ccw_order(events: tuple[_BoundaryEvent, ...], positive_left: bool) -> list[_BoundaryEvent]:
    """Порядок событий на границе против часовой стрелки от положительного угла."""
    top = sorted((e for e in events if e.side == "top"), key=lambda e: -e.column)
    bottom = sorted((e for e in events if e.side == "bottom"), key=lambda e: e.column)
    return bottom + top if positive_left else top + bottom


def _decorate(
    positive: str,
    positive_left: bool,
    start: int,
    end: int,
    path: tuple[Slice, ...],
    events: tuple[_BoundaryEvent, ...],
) -> DecoratedDisk:
    negatives: list[str] = []
    marks: list[BoundaryMark] = []
    for event in _ccw_order(events, positive_left):
        if event.chord is not None:
            negatives.append(event.chord)
        elif event.mark is not None:
            marks.append(
                BoundaryMark(
                    kind=event.mark.kind,
                    component=event.mark.component,
                    label=event.mark.label,
                    split=len(negatives) + 1,
                ),
            )
    return DecoratedDisk(
        positive=positive,
        negatives=tuple(negatives),
        marks=tuple(marks),
        start=start,
        end=end,
        path=path,
    )


def _chord_column(d: ResolvedDiagram, name: str) -> int:
    for crossing in d.crossings:
        if crossing.name == name:
            return crossing.column
    raise KeyError(f"хорда {name!r} отсутствует в диаграмме")


def _forward(d: ResolvedDiagram, name: str, k: int) -> Iterator[DecoratedDisk]:
    i = d.columns[k].position
    for path, events, end in _walk(d, k + 1, (i, i + 1), True, None):
        yield _decorate(name, True, k, end, path, events)
    for j in range(k):
        column = d.columns[j]
        if column.kind != "turn_left":
            continue
        s = (column.position, column.position + 1)
        for path, events, end in _walk(d, j + 1, s, True, k):
            yield _decorate(name, False, j, end, path, events)


def _backward(d: ResolvedDiagram, name: str, k: int) -> Iterator[DecoratedDisk]:
    i = d.columns[k].position
    for path, events, start in _walk(d, k, (i, i + 1), False, None):
        yield _decorate(name, False, start, k, path[::-1], events)
    for j in range(k + 1, len(d.columns)):
        column = d.columns[j]
        if column.kind != "turn_right":
            continue
        s = (column.position, column.position + 1)
        for path, events, start in _walk(d, j, s, False, k):
            yield _decorate(name, True, start, j, path[::-1], events)


# ============================================================================
# Public API
# ============================================================================


def enumerate_disks(
    d: ResolvedDiagram,
    chord: str,
    backward: bool = False,
    rigid_only: bool = True,
) -> list[DecoratedDisk]:
    """Все диски с положительным углом в хорде ``chord`` в каноническом порядке.

    Args:
        d: Разрешённая градуированная диаграмма.
        chord: Имя хорды.
        backward: Обходить столбцы справа налево (для сверки двух обходов).
        rigid_only: Оставить только диски с ``|a| - sum |b_i| = 1``.

    Returns:
        Список дисков, отсортированный по слову, столбцам и срезам.
    """
    k = _chord_column(d, chord)
    walker = _backward if backward else _forward
    disks = sorted(walker(d, chord, k), key=DecoratedDisk.sort_key)
    if not rigid_only:
        return disks
    degrees = d.degrees
    rigid: list[DecoratedDisk] = []
    for disk in disks:
        if degrees[chord] - disk.word.degree(degrees) == 1:
            rigid.append(disk)
        else:
            logger.warning(
                "Отброшен нежёсткий диск %s (степень %s)",
                disk.render(),
                degrees[chord] - disk.word.degree(degrees),
            )
    logger.debug("Хорда %s: дисков %s", chord, len(rigid))
    return rigid


def boundary_marks(disk: DecoratedDisk, kind: MarkKind | None = None) -> list[tuple[int, int]]:
    """Пары (компонента, позиция разбиения) для меток на границе диска."""
    return [(m.component, m.split) for m in disk.marks if kind is None or m.kind == kind]


def dump_disks(d: ResolvedDiagram) -> str:
    """Отладочный дамп всех жёстких дисков, по одному на строку."""
    lines: list[str] = []
    for chord in d.chords:
        lines.extend(disk.render() for disk in enumerate_disks(d, chord.name))
    return "\n".join(lines)
