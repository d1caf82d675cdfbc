import json
import shutil

import pandas as pd
import pytest

from legch.config import corpus_path
from legch.exceptions import LibraryError
from legch.services.block_library import BlockLibrary
from legch.services.corpus import Corpus
from legch.services.gf2_algebra import LaurentPoly


def write_manifest(directory, blocks):
    (directory / "blocks.json").write_text(json.dumps({"blocks": blocks}), encoding="utf-8")


def copy_fronts(directory, *names):
    for name in names:
        shutil.copy(corpus_path / f"{name}.leg", directory / f"{name}.leg")


# ============================================================================
# Тесты для Corpus
# ============================================================================


def test_corpus_attributes():
    """Проверка наличия атрибутов с загруженными данными."""
    corpus = Corpus(corpus_dir=corpus_path)

    assert hasattr(corpus, "fronts"), "Атрибут fronts должен быть доступен"
    assert hasattr(corpus, "library"), "Атрибут library должен быть доступен"
    assert isinstance(corpus.library, BlockLibrary), "library должен быть BlockLibrary"

    for name in ("unknot", "hopf", "hopf_surgery", "trefoil", "lambda_r2", "lambda_r3"):
        assert name in corpus.names, f"{name} должен входить в корпус"
    assert corpus.names == sorted(corpus.names), "файлы загружаются в алфавитном порядке"


def test_corpus_getitem():
    """Доступ к диаграмме по имени файла."""
    corpus = Corpus()
    assert [c.name for c in corpus["hopf"].components] == ["A", "B"]
    with pytest.raises(KeyError):
        corpus["missing"]


def test_corpus_summary():
    """Сводная таблица корпуса."""
    summary = Corpus().summary()
    assert isinstance(summary, pd.DataFrame), "summary должен быть DataFrame"
    assert list(summary.columns) == ["name", "components", "events", "surgery_marks"]
    row = summary.set_index("name").loc["lambda_r3"]
    assert row["components"] == 6
    assert row["surgery_marks"] == 3


# ============================================================================
# Тесты для BlockLibrary
# ============================================================================


def test_library_certifies_shipped_blocks():
    """Все поставляемые блоки сертифицируются с заявленными многочленами."""
    library = BlockLibrary()
    assert list(library.blocks) == ["hopf", "hopf_surgery", "trefoil", "unknot"]
    assert library.blocks["hopf"].polynomial == LaurentPoly.parse("1+t")
    assert library.blocks["unknot"].polynomial == LaurentPoly.parse("t")
    assert [b.name for b in library.with_role("psi")] == ["hopf_surgery", "trefoil"]
    assert library.find("psi", LaurentPoly.parse("1")).name == "hopf_surgery"
    assert library.find("psi", LaurentPoly.parse("2")) is None
    assert library.require("whitney").name == "unknot"


def test_library_frame():
    """Таблица блоков."""
    frame = BlockLibrary().to_frame()
    assert list(frame.columns) == ["name", "file", "roles", "polynomial", "components"]
    assert frame.set_index("name").loc["hopf_surgery", "roles"] == "unit,psi"


def test_library_rejects_wrong_polynomial(tmp_path):
    """Заявленный многочлен сверяется с пересчитанным."""
    copy_fronts(tmp_path, "hopf")
    write_manifest(
        tmp_path,
        [{"name": "hopf", "file": "hopf.leg", "e1": "m12=1", "roles": ["direct"], "polynomial": "2"}],
    )
    with pytest.raises(LibraryError):
        BlockLibrary(blocks_dir=tmp_path)


def test_library_rejects_wrong_role(tmp_path):
    """Блок Хопфа не может быть единичным: две компоненты и P != 1."""
    copy_fronts(tmp_path, "hopf")
    write_manifest(tmp_path, [{"name": "hopf", "file": "hopf.leg", "e1": "m12=1", "roles": ["unit"]}])
    with pytest.raises(LibraryError):
        BlockLibrary(blocks_dir=tmp_path)


def test_library_rejects_bad_augmentation(tmp_path):
    """Пара, не являющаяся аугментациями, отклоняется."""
    copy_fronts(tmp_path, "hopf")
    write_manifest(
        tmp_path,
        [{"name": "hopf", "file": "hopf.leg", "e1": "m12=1 m21=1", "roles": ["direct"]}],
    )
    with pytest.raises(LibraryError):
        BlockLibrary(blocks_dir=tmp_path)


def test_library_rejects_path_outside(tmp_path):
    """Файл блока вне каталога библиотеки отклоняется."""
    inner = tmp_path / "blocks"
    inner.mkdir()
    copy_fronts(tmp_path, "unknot")
    write_manifest(inner, [{"name": "u", "file": "../unknot.leg", "roles": ["whitney"]}])
    with pytest.raises(LibraryError):
        BlockLibrary(blocks_dir=inner)


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        json.dumps({"blocks": [{"name": "u", "file": "unknot.txt", "roles": ["whitney"]}]}),
        json.dumps({"blocks": [{"name": "u", "file": "unknot.leg", "roles": ["other"]}]}),
        json.dumps({"items": []}),
    ],
)
def test_library_rejects_malformed_manifest(tmp_path, content):
    """Некорректный JSON или схема манифеста - ошибка библиотеки."""
    copy_fronts(tmp_path, "unknot")
    (tmp_path / "blocks.json").write_text(content, encoding="utf-8")
    with pytest.raises(LibraryError):
        BlockLibrary(blocks_dir=tmp_path)


def test_library_missing_manifest(tmp_path):
    """Нет манифеста - ошибка библиотеки."""
    with pytest.raises(LibraryError):
        BlockLibrary(blocks_dir=tmp_path)
