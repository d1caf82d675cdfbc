import pytest

from legch.config import corpus_path
from legch.services.diagram import resolve
from legch.services.disks import dump_disks, enumerate_disks
from legch.services.front_loader import FrontLoader

CORPUS = sorted(path.stem for path in corpus_path.glob("*.leg"))


def resolved(name):
    return resolve(FrontLoader.load(corpus_path / f"{name}.leg", base_dir=corpus_path))


def _words(disks):
    return sorted((disk.positive, disk.negatives) for disk in disks)


@pytest.mark.parametrize("name", CORPUS)
def test_forward_and_backward_walks_agree(name):
    """Обход слева направо и справа налево находит одни и те же диски."""
    d = resolved(name)
    for chord in d.chords:
        forward = enumerate_disks(d, chord.name)
        backward = enumerate_disks(d, chord.name, backward=True)
        assert _words(forward) == _words(backward), f"расхождение на хорде {chord.name}"


def test_hopf_cusp_disks():
    """Хорды каспов Хопфа ограничивают диски с двумя смешанными отрицательными углами."""
    d = resolved("hopf")
    assert ("c3", ("m12", "m21")) in _words(enumerate_disks(d, "c3"))
    assert ("c4", ("m21", "m12")) in _words(enumerate_disks(d, "c4"))
    assert enumerate_disks(d, "m12") == []


def test_disks_respect_degree():
    """Жёсткие диски понижают степень ровно на единицу."""
    for name in CORPUS:
        d = resolved(name)
        degrees = d.degrees
        for chord in d.chords:
            for disk in enumerate_disks(d, chord.name):
                assert degrees[chord.name] - disk.word.degree(degrees) == 1


def test_dump_disks_lists_every_disk():
    """Отладочный дамп содержит строку на каждый диск."""
    d = resolved("hopf")
    lines = dump_disks(d).splitlines()
    assert any(line.startswith("c3 <- m12 m21") for line in lines)
    assert len(lines) == sum(len(enumerate_disks(d, c.name)) for c in d.chords)
