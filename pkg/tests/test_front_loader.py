import pytest

from legch.config import MAX_FILE_SIZE, corpus_path
from legch.exceptions import DiagramSyntaxError, DiagramTopologyError, InputError
from legch.services.front_loader import FrontLoader, dump_front, front_hash, parse_front

UNKNOT = """legendrian v1
component U shift 0
events:
L 1
R 1
"""


# ============================================================================
# Тесты для разбора legendrian v1
# ============================================================================


def test_parse_unknot_inserts_basepoint():
    """Отмеченная точка ставится перед самым левым правым каспом."""
    front = parse_front(UNKNOT)
    kinds = [(ev.kind, ev.position) for ev in front.events]
    assert kinds == [("L", 1), ("B", 1), ("R", 1)], "B 1 должна стоять перед R 1"
    assert [c.name for c in front.components] == ["U"]


def test_parse_comments_and_default_component_names():
    """Комментарии пропускаются, необъявленные компоненты получают имена K{k}."""
    text = "# заголовок ниже\nlegendrian v1\nevents:\nL 1  # касп\nR 1\nL 1\nR 1\n"
    front = parse_front(text)
    assert [c.name for c in front.components] == ["K1", "K2"]
    assert all(c.shift == 0 for c in front.components)


def test_parse_missing_header():
    """Без заголовка - синтаксическая ошибка в первой строке."""
    with pytest.raises(DiagramSyntaxError) as info:
        parse_front("events:\nL 1\nR 1\n")
    assert info.value.line == 1


def test_parse_unknown_event_reports_position():
    """Неизвестное событие: номер строки и позиция токена."""
    with pytest.raises(DiagramSyntaxError) as info:
        parse_front("legendrian v1\nevents:\nL 1\n  Q 1\nR 1\n")
    assert info.value.line == 4
    assert info.value.column == 3


def test_parse_duplicate_chord_label():
    """Повтор явной метки хорды запрещён."""
    with pytest.raises(DiagramSyntaxError):
        parse_front("legendrian v1\nevents:\nL 1\nL 1\nX 2 a\nX 2 a\nR 3\nR 1\n")


@pytest.mark.parametrize(
    "events",
    [
        "L 1\n",
        "L 1\nL 2\nR 1\nR 1\n",
        "L 1\nX 2\nR 1\n",
        "L 1\nR 2\n",
        "L 1\nB 1\nB 2\nR 1\n",
        "L 1\nL 1\nS 1 2\nR 1\nR 1\n",
        "",
    ],
)
def test_parse_topology_errors(events):
    """Незамкнутые нити, касп не у края, выход за границы, лишние метки, пустая диаграмма."""
    with pytest.raises(DiagramTopologyError):
        parse_front("legendrian v1\nevents:\n" + events)


def test_dump_is_canonical():
    """Каноническая запись устойчива к повторному разбору."""
    front = FrontLoader.load(corpus_path / "hopf_surgery.leg")
    text = dump_front(front)
    again = parse_front(text)
    assert dump_front(again) == text
    assert front_hash(again) == front_hash(front)


# ============================================================================
# Тесты для FrontLoader
# ============================================================================


def test_load_corpus_file():
    """Файл корпуса загружается внутри каталога корпуса."""
    front = FrontLoader.load(corpus_path / "hopf.leg", base_dir=corpus_path)
    assert [c.name for c in front.components] == ["A", "B"]
    assert [c.shift for c in front.components] == [0, 1]


def test_load_rejects_path_outside_base(tmp_path):
    """Путь вне базового каталога отклоняется."""
    outside = tmp_path / "unknot.leg"
    outside.write_text(UNKNOT, encoding="utf-8")
    with pytest.raises(InputError):
        FrontLoader.load(outside, base_dir=corpus_path)


def test_load_rejects_oversize_file(tmp_path):
    """Файл больше допустимого размера отклоняется."""
    big = tmp_path / "big.leg"
    big.write_text(UNKNOT + "#" * (MAX_FILE_SIZE + 1), encoding="utf-8")
    with pytest.raises(InputError):
        FrontLoader.load(big)


def test_load_missing_file(tmp_path):
    """Отсутствующий файл - ошибка ввода."""
    with pytest.raises(InputError):
        FrontLoader.load(tmp_path / "missing.leg")


def test_load_non_utf8_file(tmp_path):
    """Байт вне UTF-8 - синтаксическая ошибка с положением байта."""
    broken = tmp_path / "latin.leg"
    broken.write_bytes(b"legendrian v1\nevents:\nL 0 \xff\n")
    with pytest.raises(DiagramSyntaxError) as info:
        FrontLoader.load(broken)
    assert info.value.line == 3
    assert info.value.column == 5
