import itertools

import numpy as np
import pytest

from legch.config import corpus_path
from legch.exceptions import ExactnessError, ParameterError
from legch.services.augment import Augmentation, enumerate_augmentations, is_homotopic
from legch.services.dga import SurgeryDGA, attach_surgery, build_dga
from legch.services.diagram import move_basepoint, resolve
from legch.services.duality import (
    audit_exactness,
    check_alpha,
    check_exactness,
    compute_duality,
    criter_bg,
    duality_split,
    nondegenerate,
    tau0_vanishes,
    thm1_criterion,
)
from legch.services.front_loader import FrontLoader
from legch.services.gf2_algebra import LaurentPoly

EPS_L = Augmentation.parse("m12=1")
EPS_R = Augmentation()
PLAIN = ["unknot", "unknot_kink", "two_unknots", "hopf", "hopf_shift0", "hopf_kink", "trefoil"]


def load(name):
    return FrontLoader.load(corpus_path / f"{name}.leg", base_dir=corpus_path)


def pairs(name):
    d = resolve(load(name))
    g = build_dga(d)
    augs = enumerate_augmentations(g)
    return g, d, list(itertools.product(augs, repeat=2))


# ============================================================================
# Тесты для критерия фундаментального класса
# ============================================================================


@pytest.mark.parametrize("name", PLAIN)
def test_fundamental_class_matches_homotopy(name):
    """[L] лежит в образе tau_n ровно для гомотопных пар."""
    g, d, found = pairs(name)
    for e1, e2 in found:
        verdict = thm1_criterion(g, d, e1, e2)
        assert verdict.in_minus == verdict.homotopic
        assert verdict.in_plus == verdict.homotopic


def test_hopf_distinct_pair():
    """Для Хопфа пара (eps_L, eps_R) не гомотопна, и [L] вне образа."""
    g, d, _ = pairs("hopf")
    verdict = thm1_criterion(g, d, EPS_L, EPS_R)
    assert not verdict.homotopic
    assert not verdict.in_minus


def test_tau0_does_not_detect_homotopy_on_links():
    """На несвязном Хопфе tau_0 не равно нулю даже для гомотопной пары (eps_L, eps_L)."""
    g, d, _ = pairs("hopf")
    maps = compute_duality(g, d, EPS_L, EPS_L)
    assert is_homotopic(g, EPS_L, EPS_L).homotopic
    assert not tau0_vanishes(maps)
    image = maps.image("+", 0)
    assert len(image) == 1
    assert np.array_equal(image[0], np.ones(2, dtype=np.uint8)), "образ - диагональный класс"


# ============================================================================
# Тесты для точной последовательности
# ============================================================================


@pytest.mark.parametrize("name", PLAIN)
def test_exactness_and_rank_balance(name):
    """Образы tau_+ и tau_- дополняют друг друга в гомологиях зацепления."""
    g, d, found = pairs(name)
    for e1, e2 in found:
        maps = compute_duality(g, d, e1, e2)
        report = check_exactness(maps)
        for k in report.degrees:
            assert report.im_tau_plus[k] + report.im_tau_minus[1 - k] == g.n_components
        assert nondegenerate(maps)


def test_exactness_failures_are_collected(monkeypatch):
    """audit_exactness собирает нарушения, check_exactness поднимает первое."""
    g, d, _ = pairs("hopf")
    maps = compute_duality(g, d, EPS_L, EPS_R)
    assert audit_exactness(maps).exact
    monkeypatch.setattr("legch.services.duality._same_subspace", lambda a, b: False)
    report = audit_exactness(maps)
    assert not report.exact and report.adjoint
    assert len(report.failures) == 8, "по две проверки в каждом из четырёх узлов"
    with pytest.raises(ExactnessError):
        check_exactness(maps)


def test_duality_split_of_hopf():
    """Для (eps_L, eps_R) весь многочлен 1 + t приходит из образа tau."""
    g, d, _ = pairs("hopf")
    q, p = duality_split(compute_duality(g, d, EPS_L, EPS_R))
    assert q + p == LaurentPoly.parse("1+t")
    assert q.coefficient(0) + q.coefficient(1) <= 2


def test_basepoint_move_keeps_images():
    """Перенос отмеченной точки через пересечение не меняет размерности образов tau."""
    front = load("hopf")
    index = next(k for k, ev in enumerate(front.events) if ev.kind == "B")
    moved = resolve(move_basepoint(front, index, forward=False))
    g, d, found = pairs("hopf")
    for e1, e2 in found:
        before = compute_duality(g, d, e1, e2)
        after = compute_duality(g, moved, e1, e2)
        for sign in ("+", "-"):
            assert before.image_dim(sign, 1) == after.image_dim(sign, 1)


# ============================================================================
# Тесты для связного критерия
# ============================================================================


def test_connected_criterion_on_trefoil():
    """На трилистнике разность рангов и tau_0 = 0 совпадают с гомотопностью."""
    g, d, found = pairs("trefoil")
    for e1, e2 in found:
        verdict = criter_bg(g, e1, e2, compute_duality(g, d, e1, e2))
        assert verdict.difference == int(e1 == e2)
        assert verdict.tau0_vanishes == (e1 == e2)


def test_connected_criterion_rejects_links():
    """Для двухкомпонентного зацепления критерий не применяется."""
    g, d, _ = pairs("hopf")
    with pytest.raises(ParameterError):
        criter_bg(g, EPS_L, EPS_R, compute_duality(g, d, EPS_L, EPS_R))


def test_alpha_identity_after_surgery():
    """После перестройки alpha o tau_0 = gamma o tau^S_0 для всех пар."""
    d = resolve(load("hopf_surgery"))
    g = build_dga(d)
    sg = attach_surgery(g, d)
    for e1, e2 in itertools.product(enumerate_augmentations(g), repeat=2):
        assert check_alpha(sg, e1, e2)
    disconnected = SurgeryDGA(base=g, dga=g, surgery_generators=(), joins=())
    with pytest.raises(ParameterError):
        check_alpha(disconnected, EPS_L, EPS_R)
