"""Чтение и запись исходников ``legendrian v1``."""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path

from pydantic import ValidationError

from legch.config import MAX_FILE_SIZE
from legch.exceptions import DiagramSyntaxError, InputError
from legch.models import ComponentDecl, FrontDiagram, FrontEvent
from legch.services.diagram import normalize_front

logger = logging.getLogger(__name__)

# Настройка логирования безопасности
security_logger = logging.getLogger("security")

HEADER = "legendrian v1"

# Число позиционных аргументов каждого события (без необязательной метки)
ARITY = {"L": 1, "R": 1, "X": 1, "B": 1, "S": 2}
LABELLED = frozenset({"R", "X"})


def _strip(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def _int(token: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise DiagramSyntaxError(f"ожидалось целое число, получено {token!r}", line, column) from None


def _columns(text: str) -> list[tuple[int, str]]:
    """Токены строки вместе с позициями (считая с 1)."""
    found: list[tuple[int, str]] = []
    offset = 0
    for token in text.split():
        offset = text.index(token, offset)
        found.append((offset + 1, token))
        offset += len(token)
    return found


def _parse_component(tokens: list[tuple[int, str]], line: int) -> ComponentDecl:
    words = [t for _, t in tokens]
    if len(words) != 4 or words[2] != "shift":
        raise DiagramSyntaxError("ожидалось 'component NAME shift INT'", line)
    shift = _int(words[3], line, tokens[3][0])
    try:
        return ComponentDecl(name=words[1], shift=shift)
    except ValidationError as exc:
        raise DiagramSyntaxError(f"некорректное объявление компоненты: {exc}", line, tokens[1][0]) from exc


def _parse_event(tokens: list[tuple[int, str]], line: int) -> FrontEvent:
    column, kind = tokens[0]
    if kind not in ARITY:
        raise DiagramSyntaxError(f"неизвестное событие {kind!r}", line, column)
    args = tokens[1:]
    if not args:
        raise DiagramSyntaxError(f"событию {kind} нужна позиция нити", line, column)
    position = _int(args[0][1], line, args[0][0])
    other: int | None = None
    label: str | None = None
    rest = args[1:]
    if kind == "S":
        if len(rest) != 1:
            raise DiagramSyntaxError("ожидалось 'S i j' или 'S i LABEL'", line, column)
        token = rest[0][1]
        if token.lstrip("-").isdigit():
            other = _int(token, line, rest[0][0])
        else:
            label = token
    elif kind in LABELLED and len(rest) == 1:
        label = rest[0][1]
    elif rest:
        raise DiagramSyntaxError(f"лишние аргументы события {kind}", line, rest[0][0])
    try:
        return FrontEvent(kind=kind, position=position, other=other, label=label, line=line)
    except ValidationError as exc:
        raise DiagramSyntaxError(f"некорректное событие {kind}: {exc}", line, column) from exc


def parse_front(text: str) -> FrontDiagram:
    """Разобрать исходник ``legendrian v1`` и нормализовать диаграмму.

    Пустые строки и комментарии ``#`` пропускаются. Компоненты без явной
    отмеченной точки получают её автоматически.

    Raises:
        DiagramSyntaxError: Нарушение грамматики (со строкой и позицией).
        DiagramTopologyError: Незамкнутые нити, касп не у края, пересечение вне диапазона.
    """
    components: list[ComponentDecl] = []
    events: list[FrontEvent] = []
    state = "header"
    for number, raw in enumerate(text.splitlines(), start=1):
        content = _strip(raw)
        if not content.strip():
            continue
        tokens = _columns(content)
        if state == "header":
            if content.strip() != HEADER:
                raise DiagramSyntaxError(f"ожидался заголовок {HEADER!r}", number, tokens[0][0])
            state = "declarations"
        elif state == "declarations":
            if tokens[0][1] == "component":
                components.append(_parse_component(tokens, number))
            elif content.strip() == "events:":
                state = "events"
            else:
                raise DiagramSyntaxError(
                    "ожидалось 'component ...' или 'events:'",
                    number,
                    tokens[0][0],
                )
        else:
            events.append(_parse_event(tokens, number))
    if state != "events":
        raise DiagramSyntaxError("нет секции 'events:'", max(1, len(text.splitlines())))
    front = normalize_front(components, events)
    logger.debug(
        "Разобран фронт: %s компонент, %s событий",
        len(front.components),
        len(front.events),
    )
    return front


def dump_front(front: FrontDiagram) -> str:
    """Записать фронт в каноническом виде ``legendrian v1``."""
    lines = [HEADER]
    lines.extend(f"component {c.name} shift {c.shift}" for c in front.components)
    lines.append("events:")
    for ev in front.events:
        parts = [ev.kind, str(ev.position)]
        if ev.other is not None:
            parts.append(str(ev.other))
        if ev.label is not None:
            parts.append(ev.label)
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def front_hash(front: FrontDiagram) -> str:
    """sha256 канонической записи нормализованного фронта."""
    return hashlib.sha256(dump_front(front).encode("utf-8")).hexdigest()


class FrontLoader:
    """Загрузчик файлов диаграмм с проверкой размера и расположения."""

    @staticmethod  # noqa: WPS602
    def check_path(path: Path, base_dir: Path | None = None) -> None:
        """Проверить размер файла диаграммы и его расположение внутри ``base_dir``.

        Raises:
            InputError: Диаграмма вне каталога корпуса, отсутствует или больше ``MAX_FILE_SIZE``.
        """
        if base_dir is not None:
            resolved_path = path.resolve()
            resolved_base = base_dir.resolve()
            try:
                resolved_path.relative_to(resolved_base)
            except ValueError:
                security_logger.warning(
                    "Диаграмма %s запрошена вне каталога %s, чтение отклонено",
                    resolved_path,
                    resolved_base,
                )
                raise InputError(
                    f"Диаграмма {resolved_path} не лежит в каталоге {resolved_base}",
                ) from None

        if not path.is_file():
            raise InputError(f"Нет файла диаграммы {path}")

        file_size = path.stat().st_size
        if file_size > MAX_FILE_SIZE:
            security_logger.warning(
                "Диаграмма %s занимает %s байт при пределе %s, чтение отклонено",
                path,
                file_size,
                MAX_FILE_SIZE,
            )
            raise InputError(
                f"Диаграмма {path} занимает {file_size} байт, допускается не больше {MAX_FILE_SIZE}",
            )

    @staticmethod  # noqa: WPS602
    def load(path: Path, base_dir: Path | None = None) -> FrontDiagram:
        """Загрузить и разобрать ``.leg`` файл.

        Args:
            path: Путь к файлу диаграммы.
            base_dir: Если указана, путь обязан находиться внутри неё.

        Returns:
            Нормализованная диаграмма.

        Raises:
            DiagramSyntaxError: Файл не в кодировке UTF-8 или нарушает грамматику.
        """
        FrontLoader.check_path(path, base_dir)
        raw = path.read_bytes()
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            line = raw.count(b"\n", 0, exc.start) + 1
            column = exc.start - (raw.rfind(b"\n", 0, exc.start) + 1) + 1
            logger.info("Диаграмма %s не в UTF-8: байт %s", path, exc.start)
            raise DiagramSyntaxError(
                f"файл {path.name} не в кодировке UTF-8 (байт {exc.start})",
                line,
                column,
            ) from exc
        try:
            return parse_front(text)
        except InputError as exc:
            logger.info("Ошибка разбора %s: %s", path, exc)
            raise
