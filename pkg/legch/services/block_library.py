"""Библиотека блоков для реализации многочленов: загрузка манифеста и сертификация."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from legch.config import BLOCKS_MANIFEST, blocks_path
from legch.exceptions import InputError, LibraryError
from legch.models import BlockEntry, BlockManifest, FrontDiagram
from legch.services.augment import Augmentation, augmentation_problems, is_homotopic
from legch.services.front_loader import FrontLoader
from legch.services.gf2_algebra import LaurentPoly
from legch.services.lch import bilinearize, poincare
from legch.services.surgery import link_algebra

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CertifiedBlock:
    """Блок с пересчитанным многочленом Пуанкаре своей пары аугментаций."""

    entry: BlockEntry
    front: FrontDiagram
    e1: Augmentation
    e2: Augmentation
    polynomial: LaurentPoly
    homotopic: bool
    components: int

    @property
    def name(self) -> str:
        return self.entry.name


def _check_roles(block: CertifiedBlock) -> None:
    roles = set(block.entry.roles)
    if roles & {"direct", "psi", "unit"} and block.homotopic:
        raise LibraryError(f"блок {block.name}: пара аугментаций гомотопна")
    if roles & {"psi", "unit", "whitney"} and block.components != 1:
        raise LibraryError(f"блок {block.name}: ожидалась связная диаграмма")
    if "unit" in roles and block.polynomial != LaurentPoly({0: 1}):
        raise LibraryError(f"блок {block.name}: единичный блок должен иметь P = 1")
    if "whitney" in roles and block.polynomial != LaurentPoly({1: 1}):
        raise LibraryError(f"блок {block.name}: блок Уитни должен иметь P = t")


def certify_block(entry: BlockEntry, front: FrontDiagram) -> CertifiedBlock:
    """Пересчитать многочлен блока и проверить заявленные роли.

    Raises:
        LibraryError: Аугментации некорректны, многочлен не совпал с заявленным
            или блок не подходит под роль.
    """
    algebra = link_algebra(front)
    g = algebra.dga
    e1, e2 = Augmentation.parse(entry.e1), Augmentation.parse(entry.e2)
    for label, e in (("e1", e1), ("e2", e2)):
        problems = augmentation_problems(g, e)
        if problems:
            raise LibraryError(f"блок {entry.name}: {label} не аугментация: {'; '.join(problems)}")
    polynomial = poincare(bilinearize(g, e1, e2))
    if entry.polynomial is not None and LaurentPoly.parse(entry.polynomial) != polynomial:
        raise LibraryError(
            f"блок {entry.name}: заявлен P = {entry.polynomial}, пересчитано P = {polynomial}",
        )
    block = CertifiedBlock(
        entry=entry,
        front=front,
        e1=e1,
        e2=e2,
        polynomial=polynomial,
        homotopic=is_homotopic(g, e1, e2).homotopic,
        components=g.n_components,
    )
    _check_roles(block)
    logger.info("Блок %s сертифицирован: P = %s", entry.name, polynomial)
    return block


class BlockLibrary:
    """Библиотека сертифицированных блоков из каталога с манифестом.

    При инициализации читает манифест, загружает диаграммы (только внутри
    каталога библиотеки) и пересчитывает многочлен каждого блока.
    """

    def __init__(self, blocks_dir: Path | None = None, manifest: str | None = None) -> None:
        """Инициализация библиотеки.

        Args:
            blocks_dir: Каталог библиотеки. Если не указан, используется путь из конфигурации.
            manifest: Имя файла манифеста внутри каталога.
        """
        self.blocks_dir = blocks_dir or blocks_path
        self.manifest_path = self.blocks_dir / (manifest or BLOCKS_MANIFEST)
        self.manifest: BlockManifest = self._load_manifest()
        self.blocks: dict[str, CertifiedBlock] = self._certify_all()

    def _load_manifest(self) -> BlockManifest:
        try:
            FrontLoader.check_path(self.manifest_path, self.blocks_dir)
            raw = json.loads(self.manifest_path.read_text(encoding="utf-8"))
        except (InputError, json.JSONDecodeError) as exc:
            raise LibraryError(f"Не удалось прочитать манифест {self.manifest_path}: {exc}") from exc
        try:
            return BlockManifest.model_validate(raw)
        except ValidationError as exc:
            raise LibraryError(
                f"Ошибка валидации манифеста {self.manifest_path}: {exc}",
            ) from exc

    def _certify_all(self) -> dict[str, CertifiedBlock]:
        blocks: dict[str, CertifiedBlock] = {}
        for entry in self.manifest.blocks:
            try:
                front = FrontLoader.load(self.blocks_dir / entry.file, base_dir=self.blocks_dir)
            except LibraryError:
                raise
            except InputError as exc:
                raise LibraryError(f"блок {entry.name}: {exc}") from exc
            blocks[entry.name] = certify_block(entry, front)
        return blocks

    def with_role(self, role: str) -> list[CertifiedBlock]:
        """Блоки с ролью в порядке манифеста."""
        return [b for b in self.blocks.values() if role in b.entry.roles]

    def find(self, role: str, polynomial: LaurentPoly) -> CertifiedBlock | None:
        return next((b for b in self.with_role(role) if b.polynomial == polynomial), None)

    def require(self, role: str) -> CertifiedBlock:
        found = self.with_role(role)
        if not found:
            raise LibraryError(f"в библиотеке нет блока с ролью {role!r}")
        return found[0]

    def to_frame(self) -> pd.DataFrame:
        """Таблица блоков: имя, файл, роли, пересчитанный многочлен."""
        return pd.DataFrame(
            [
                {
                    "name": b.name,
                    "file": b.entry.file,
                    "roles": ",".join(b.entry.roles),
                    "polynomial": str(b.polynomial),
                    "components": b.components,
                }
                for b in self.blocks.values()
            ],
            columns=["name", "file", "roles", "polynomial", "components"],
        )
