from __future__ import annotations

import re
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_.']*$")


# ============================================================================
# Front diagram models
# ============================================================================


class ComponentDecl(BaseModel):
    """Строка ``component NAME shift INT`` исходника ``legendrian v1``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(..., min_length=1, description="Имя компоненты")
    shift: int = Field(0, description="Сдвиг потенциала Маслова компоненты")

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if not IDENTIFIER.match(v):
            raise ValueError(f"недопустимое имя компоненты: {v!r}")
        return v


class FrontEvent(BaseModel):
    """Событие фронта: касп, пересечение, отмеченная точка или нога перестройки.

    ``position`` нумерует нити сверху, начиная с 1. Для ``S`` с двумя ногами
    вторая позиция лежит в ``other``; для половинной метки ``S i LABEL``
    ``other`` пуст, а пара определяется меткой.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["L", "R", "X", "B", "S"]
    position: int = Field(..., ge=1, description="Позиция нити (1 = верхняя)")
    other: Optional[int] = Field(None, ge=1, description="Вторая нога метки перестройки")
    label: Optional[str] = Field(None, description="Имя хорды или метка пары перестройки")
    line: int = Field(0, ge=0, description="Строка исходника (0 для синтетических событий)")

    @model_validator(mode="after")
    def validate_shape(self) -> "FrontEvent":
        """Проверка согласованности полей с типом события."""
        if self.kind in {"L", "B"} and self.label is not None:
            raise ValueError(f"событие {self.kind} не принимает метку")
        if self.kind != "S" and self.other is not None:
            raise ValueError(f"событие {self.kind} принимает одну позицию")
        if self.kind == "S":
            if self.other is None and self.label is None:
                raise ValueError("метке S нужна вторая позиция или метка пары")
            if self.other is not None and self.other == self.position:
                raise ValueError("ноги перестройки совпадают")
        if self.label is not None and not IDENTIFIER.match(self.label):
            raise ValueError(f"недопустимая метка: {self.label!r}")
        return self


class FrontDiagram(BaseModel):
    """Нормализованная диаграмма фронта.

    После ``parse_front`` каждая компонента имеет ровно одну отмеченную точку,
    а список ``components`` перечисляет компоненты в порядке их первого
    левого каспа.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    components: tuple[ComponentDecl, ...]
    events: tuple[FrontEvent, ...]

    @model_validator(mode="after")
    def validate_unique_names(self) -> "FrontDiagram":
        names = [c.name for c in self.components]
        if len(set(names)) != len(names):
            raise ValueError(f"повторяющиеся имена компонент: {names}")
        return self


# ============================================================================
# Chord and augmentation records
# ============================================================================


class Chord(BaseModel):
    """Хорда Риба: образующая алгебры Чеканова-Элиашберга."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    degree: int
    source: int = Field(..., ge=1, description="Компонента начала хорды")
    target: int = Field(..., ge=1, description="Компонента конца хорды")
    kind: Literal["crossing", "cusp", "surgery"] = "crossing"

    @property
    def is_mixed(self) -> bool:
        return self.source != self.target


class AugmentationRecord(BaseModel):
    """Строка таблицы аугментаций."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    index: int = Field(..., ge=0)
    values: str = Field(..., description="Пары CHORD=BIT без нулей")
    homotopy_class: int = Field(..., ge=0)


# ============================================================================
# Block library manifest
# ============================================================================


class BlockEntry(BaseModel):
    """Блок библиотеки: диаграмма и пара аугментаций в формате ``CHORD=1``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(..., min_length=1)
    file: str = Field(..., description="Путь к .leg файлу относительно каталога библиотеки")
    e1: str = Field("", description="Первая аугментация")
    e2: str = Field("", description="Вторая аугментация")
    roles: List[Literal["direct", "psi", "unit", "whitney"]] = Field(..., min_length=1)
    polynomial: Optional[str] = Field(
        None,
        description="Заявленный многочлен; сверяется с пересчитанным при загрузке",
    )

    @field_validator("file")
    @classmethod
    def validate_file(cls, v: str) -> str:
        if not v.endswith(".leg"):
            raise ValueError(f"ожидался .leg файл, получено {v!r}")
        return v


class BlockManifest(BaseModel):
    """Манифест библиотеки блоков."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    blocks: List[BlockEntry]

    @model_validator(mode="after")
    def validate_unique(self) -> "BlockManifest":
        names = [b.name for b in self.blocks]
        if len(set(names)) != len(names):
            raise ValueError(f"повторяющиеся имена блоков: {names}")
        return self


# ============================================================================
# Report models
# ============================================================================


class GeographyVerdict(BaseModel):
    """Вердикт допустимости многочлена и найденное разложение P = q + p."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    polynomial: str
    n: int = Field(..., ge=1)
    admissible: bool
    q: Optional[str] = None
    p: Optional[str] = None


class PairReport(BaseModel):
    """Результаты по упорядоченной паре аугментаций (e1, e2)."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    e1: int = Field(..., ge=0)
    e2: int = Field(..., ge=0)
    polynomial: str
    homotopic: bool
    fundamental_in_im_tau_minus: bool
    fundamental_in_im_tau_plus: bool
    im_tau_plus: List[int]
    im_tau_minus: List[int]
    exact: bool
    adjoint: bool
    nondegenerate: bool
    tau0_vanishes: bool
    criter_bg: Optional[int] = None
    geography: Optional[GeographyVerdict] = None
    geography_reverse: Optional[GeographyVerdict] = None
    duality_split_admissible: Optional[bool] = None
    s_epsilon_agrees: Optional[bool] = None
    surgery_ledger_ok: Optional[bool] = None

    @property
    def consistent(self) -> bool:
        """Все проверки пары согласованы с теоремами."""
        checks = [
            self.homotopic == self.fundamental_in_im_tau_minus,
            self.homotopic == self.fundamental_in_im_tau_plus,
            self.exact,
            self.adjoint,
            self.nondegenerate,
        ]
        if self.criter_bg is not None:
            checks.append(self.criter_bg == int(self.homotopic))
            checks.append(self.tau0_vanishes == self.homotopic)
        for verdict in (self.geography, self.geography_reverse):
            if verdict is not None:
                checks.append(verdict.admissible)
        for optional in (
            self.duality_split_admissible,
            self.s_epsilon_agrees,
            self.surgery_ledger_ok,
        ):
            if optional is not None:
                checks.append(optional)
        return all(checks)


class DiagramReport(BaseModel):
    """Полный отчёт по диаграмме (схема ``legch-report/1``)."""

    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    report_schema: str = Field("legch-report/1", alias="schema")
    diagram_hash: str
    components: int = Field(..., ge=1)
    chords: List[Chord]
    augmentations: List[AugmentationRecord]
    flagged_surgery_augmentations: Optional[int] = None
    classes: List[List[int]]
    pairs: List[PairReport]
    im_tau_plus_n_values: List[int]
    consistent: bool
    wall_time: Optional[float] = None
