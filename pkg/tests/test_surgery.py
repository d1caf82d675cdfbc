import itertools

import pytest

from legch.config import corpus_path
from legch.exceptions import ParameterError
from legch.services.augment import Augmentation, enumerate_augmentations, split_surgery_augmentations
from legch.services.dga import check_d_squared
from legch.services.front_loader import FrontLoader
from legch.services.gf2_algebra import LaurentPoly
from legch.services.lch import bilinearize, poincare
from legch.services.surgery import iterate_surgery, link_algebra, surgery_sequence, verify_s_epsilon

EPS_L = Augmentation.parse("m12=1")
EPS_R = Augmentation()


def load(name):
    return FrontLoader.load(corpus_path / f"{name}.leg", base_dir=corpus_path)


# ============================================================================
# Тесты для алгебры после перестройки
# ============================================================================


def test_link_algebra_without_marks():
    """Без меток алгебра зацепления совпадает с исходной."""
    algebra = link_algebra(load("hopf"))
    assert algebra.surgery is None
    assert algebra.dga is algebra.base


def test_hopf_surgery_polynomial():
    """После перестройки Хопфа P(eps_L, eps_R) = 1."""
    algebra = link_algebra(load("hopf_surgery"))
    assert algebra.dga.n_components == 1
    assert poincare(bilinearize(algebra.dga, EPS_L, EPS_R)) == LaurentPoly.parse("1")


def test_surgery_ledger_and_homotopy():
    """Ранги до и после перестройки согласованы, гомотопность сохраняется."""
    sg = link_algebra(load("hopf_surgery")).surgery
    assert sg is not None
    augs = enumerate_augmentations(sg.base)
    for e1, e2 in itertools.product(augs, repeat=2):
        sequence = surgery_sequence(sg, e1, e2)
        assert sequence.ledger_ok(), (e1, e2)
        assert sequence.generators == 1
        assert verify_s_epsilon(sg, e1, e2) == (e1 == e2)


def test_lambda_r3_has_three_surgery_generators():
    """Три копии с перестройками: три образующие и три компоненты."""
    sg = link_algebra(load("lambda_r3")).surgery
    assert sg is not None
    assert sg.surgery_generators == ("s1", "s2", "s3")
    assert sg.dga.n_components == 3
    assert check_d_squared(sg.dga).ok
    assert split_surgery_augmentations(sg)[1] == []


# ============================================================================
# Тесты для последовательных перестроек
# ============================================================================


def test_iterate_surgery_places_marks():
    """Автоматическая пара меток на Хопфе даёт ту же алгебру, что и размеченный файл."""
    placed = iterate_surgery(load("hopf"), [(1, 2)])
    marked = link_algebra(load("hopf_surgery")).surgery
    assert marked is not None
    assert placed.dump() == marked.dump()


def test_iterate_surgery_reuses_existing_pair():
    """Существующая пара меток используется вместо новой."""
    reused = iterate_surgery(load("hopf_surgery"), [(1, 2)])
    assert reused.surgery_generators == ("s",)
    assert reused.dga.n_components == 1


def test_iterate_surgery_without_joins():
    """Пустой список склеек оставляет алгебру без изменений."""
    same = iterate_surgery(load("hopf"), [])
    assert same.surgery_generators == ()
    assert same.dga is same.base


@pytest.mark.parametrize(
    ("name", "joins"),
    [
        ("hopf", [(1, 2), (2, 1)]),
        ("hopf", [(1, 1)]),
        ("hopf", [(1, 3)]),
        ("two_unknots", [(1, 2)]),
    ],
)
def test_iterate_surgery_rejects_bad_joins(name, joins):
    """Цикл склеек, петля, компонента вне диапазона и разнесённые компоненты."""
    with pytest.raises(ParameterError):
        iterate_surgery(load(name), joins)
