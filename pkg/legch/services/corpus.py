from pathlib import Path

import pandas as pd

from legch.config import corpus_path
from legch.models import FrontDiagram
from legch.services.block_library import BlockLibrary
from legch.services.front_loader import FrontLoader


class Corpus:
    """Загрузчик поставляемого корпуса диаграмм и библиотеки блоков.

    При инициализации загружает данные и сохраняет их как атрибуты:
    - fronts: словарь имя файла без расширения -> FrontDiagram
    - library: сертифицированная библиотека блоков из того же каталога
    """

    def __init__(self, corpus_dir: Path | None = None) -> None:
        """Инициализация корпуса.

        Args:
            corpus_dir: Каталог с .leg файлами и blocks.json.
                Если не указан, используется путь из конфигурации.
        """
        self.corpus_dir = corpus_dir or corpus_path
        self.fronts: dict[str, FrontDiagram] = self._load_fronts()
        self.library: BlockLibrary = self._load_library()

    def _load_fronts(self) -> dict[str, FrontDiagram]:
        """Загрузить все .leg файлы каталога в алфавитном порядке."""
        return {
            path.stem: FrontLoader.load(path, base_dir=self.corpus_dir)
            for path in sorted(self.corpus_dir.glob("*.leg"))
        }

    def _load_library(self) -> BlockLibrary:
        return BlockLibrary(blocks_dir=self.corpus_dir)

    def __getitem__(self, name: str) -> FrontDiagram:
        return self.fronts[name]

    @property
    def names(self) -> list[str]:
        return list(self.fronts)

    def summary(self) -> pd.DataFrame:
        """Таблица корпуса: имя, число компонент, событий и меток перестройки."""
        return pd.DataFrame(
            [
                {
                    "name": name,
                    "components": len(front.components),
                    "events": len(front.events),
                    "surgery_marks": sum(1 for ev in front.events if ev.kind == "S"),
                }
                for name, front in self.fronts.items()
            ],
            columns=["name", "components", "events", "surgery_marks"],
        )
