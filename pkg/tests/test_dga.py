import pytest

from legch.config import corpus_path
from legch.exceptions import ParameterError
from legch.models import Chord
from legch.services.dga import DGA, attach_surgery, build_dga, check_d_squared, surgery_names
from legch.services.diagram import resolve
from legch.services.front_loader import FrontLoader
from legch.services.gf2_algebra import AlgebraElement, Word

CORPUS = sorted(path.stem for path in corpus_path.glob("*.leg"))


def resolved(name):
    return resolve(FrontLoader.load(corpus_path / f"{name}.leg", base_dir=corpus_path))


def _toy(differential_of_w):
    """Алгебра x(0), y(1), z(1), w(2) с dy = dz = x и заданным dw."""
    generators = (
        Chord(name="x", degree=0, source=1, target=1),
        Chord(name="y", degree=1, source=1, target=1),
        Chord(name="z", degree=1, source=1, target=1),
        Chord(name="w", degree=2, source=1, target=1),
    )
    x = AlgebraElement.generator("x")
    differential = {"y": x, "z": x, "w": differential_of_w}
    return DGA(generators=generators, differential=differential, n_components=1)


# ============================================================================
# Тесты для дифференциала
# ============================================================================


def test_unknot_differential_vanishes():
    """У стандартного тривиального узла одна хорда и d c1 = 0."""
    g = build_dga(resolved("unknot"))
    assert g.names == ["c1"]
    assert g.d("c1").is_zero()
    assert g.dump() == "gen c1 deg 1 comp 1 1\nd c1 = 0\n"


def test_hopf_differential():
    """Дифференциал Хопфа: хорды каспов переходят в произведения смешанных хорд."""
    g = build_dga(resolved("hopf"))
    assert g.d("c3").render() == "m12 m21"
    assert g.d("c4").render() == "m21 m12"
    dump = g.dump()
    assert "d m12 = 0" in dump
    assert "gen m21 deg 0 comp 2 1" in dump


@pytest.mark.parametrize("name", CORPUS)
def test_corpus_d_squared(name):
    """d^2 = 0 на всех диаграммах корпуса."""
    certificate = check_d_squared(build_dga(resolved(name)))
    assert certificate.ok, f"{name}: {certificate.generator} -> {certificate.word}"


def test_d_squared_detects_broken_differential():
    """Удаление слагаемого из dw ломает d^2 = 0, и проверка указывает на w."""
    y, z = AlgebraElement.generator("y"), AlgebraElement.generator("z")
    assert check_d_squared(_toy(y + z)).ok
    broken = check_d_squared(_toy(y))
    assert not broken.ok
    assert broken.generator == "w"
    assert broken.word == Word(("x",))


def test_leibniz_rule():
    """d(yz) = xz + yx."""
    g = _toy(AlgebraElement.zero())
    result = g.apply_word(Word(("y", "z")))
    assert result == AlgebraElement.from_words([Word(("x", "z")), Word(("y", "x"))])


# ============================================================================
# Тесты для алгебры с образующей перестройки
# ============================================================================


def test_attach_surgery_on_hopf():
    """Перестройка соединяет компоненты Хопфа и добавляет образующую степени 0."""
    d = resolved("hopf_surgery")
    g = build_dga(d)
    sg = attach_surgery(g, d)
    assert sg.surgery_generators == ("s",)
    assert sg.dga.n_components == 1
    assert sg.dga.chord("s").degree == 0
    assert sg.dga.chord("s").kind == "surgery"
    assert check_d_squared(sg.dga).ok
    assert "surgery s joins" in sg.dump()
    for name in g.names:
        assert sg.plain_part(name) == g.d(name), "без букв s остаётся исходный дифференциал"


def test_attach_surgery_rejects_bad_input():
    """Нет пары меток или размерность не 1 - ошибка параметров."""
    plain = resolved("hopf")
    with pytest.raises(ParameterError):
        attach_surgery(build_dga(plain), plain)
    d = resolved("hopf_surgery")
    with pytest.raises(ParameterError):
        attach_surgery(build_dga(d), d, n=2)


def test_surgery_names_avoid_chords():
    """Имена образующих перестройки не совпадают с именами хорд."""
    g = _toy(AlgebraElement.zero())
    assert surgery_names(g, 1) == ["s"]
    assert surgery_names(g, 2) == ["s1", "s2"]
    clash = DGA(generators=(Chord(name="s", degree=1, source=1, target=1),), differential={}, n_components=1)
    assert surgery_names(clash, 1) == ["s_"]
