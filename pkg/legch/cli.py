"""Командная строка ``legch``.

Коды выхода: 0 - все вердикты согласованы, 2 - ошибка ввода,
3 - нарушено математическое тождество (ошибка реализации).
"""

from __future__ import annotations

import functools
import logging
from pathlib import Path
from typing import Any, Callable, TypeVar

import click

from legch.config import AMBIENT_DIMENSION, LEGCH_LOG_LEVEL
from legch.exceptions import LegchError, ParameterError, RealizationError
from legch.models import FrontDiagram
from legch.services.augment import homotopy_classes
from legch.services.block_library import BlockLibrary
from legch.services.corpus import Corpus
from legch.services.dga import build_dga
from legch.services.diagram import resolve
from legch.services.duality import TOP_DEGREE, check_exactness, compute_duality, criter_bg, thm1_criterion
from legch.services.front_loader import FrontLoader, dump_front, parse_front
from legch.services.geography import LibraryGap, is_admissible, realize
from legch.services.gf2_algebra import LaurentPoly
from legch.services.lch import bilinearize, poincare
from legch.services.report import augmentation_space, build_report, sweep_frame
from legch.services.surgery import link_algebra

logger = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

# Глобальный кэш библиотеки блоков - сертификация выполняется один раз за процесс
_library_cache: BlockLibrary | None = None


def get_library() -> BlockLibrary:
    """Получить сертифицированную библиотеку. Загружает её при первом вызове."""
    global _library_cache
    if _library_cache is None:
        _library_cache = BlockLibrary()
    return _library_cache


def handle_errors(func: F) -> F:
    """Перевести ошибки legch в сообщение на stderr и код выхода."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except LegchError as exc:
            code = getattr(exc, "exit_code", 1)
            logger.debug("Команда завершилась ошибкой", exc_info=True)
            click.echo(f"Ошибка: {exc}", err=True)
            raise SystemExit(code) from exc

    return wrapper  # type: ignore[return-value]


def _load(file: str) -> FrontDiagram:
    return FrontLoader.load(Path(file))


def _poly(text: str) -> LaurentPoly:
    return LaurentPoly.parse(text)


# ============================================================================
# Group
# ============================================================================


@click.group()
@click.option("--verbose", is_flag=True, help="Подробный лог (уровень DEBUG).")
def legch(verbose: bool) -> None:
    """Инварианты лежандровых зацеплений в J^1(R) над Z2."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else LEGCH_LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@legch.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--surgery", is_flag=True, help="Присоединить пары меток перестройки.")
@handle_errors
def dga(file: str, surgery: bool) -> None:
    """Образующие и дифференциал алгебры диаграммы."""
    front = _load(file)
    if not surgery:
        click.echo(build_dga(resolve(front)).dump(), nl=False)
        return
    algebra = link_algebra(front)
    if algebra.surgery is None:
        raise ParameterError("в диаграмме нет меток перестройки")
    click.echo(algebra.surgery.dump(), nl=False)


@legch.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@handle_errors
def augs(file: str) -> None:
    """Пронумерованный список аугментаций."""
    space = augmentation_space(_load(file))
    for k, e in enumerate(space.augmentations):
        click.echo(f"{k}: {e.render() or '0'}")
    if space.flagged:
        click.echo(f"# аугментаций с ненулевым значением на образующих перестройки: {space.flagged}")


@legch.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@handle_errors
def classes(file: str) -> None:
    """Таблица классов гомотопности."""
    space = augmentation_space(_load(file))
    found = homotopy_classes(space.algebra.dga, space.augmentations)
    click.echo(found.to_frame().to_string(index=False))
    click.echo(f"классов: {len(found.classes)}")


@legch.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--e1", "first", type=int, required=True, help="Индекс первой аугментации.")
@click.option("--e2", "second", type=int, required=True, help="Индекс второй аугментации.")
@handle_errors
def blch(file: str, first: int, second: int) -> None:
    """Многочлен Пуанкаре билинеаризованных гомологий пары."""
    space = augmentation_space(_load(file))
    e1, e2 = space.pick(first), space.pick(second)
    polynomial = poincare(bilinearize(space.algebra.dga, e1, e2))
    click.echo(f"e1={first} e2={second} P={polynomial}")


@legch.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--e1", "first", type=int, required=True, help="Индекс первой аугментации.")
@click.option("--e2", "second", type=int, required=True, help="Индекс второй аугментации.")
@handle_errors
def duality(file: str, first: int, second: int) -> None:
    """Отображения двойственности и критерии гомотопности для пары."""
    space = augmentation_space(_load(file))
    g, d = space.algebra.dga, space.algebra.diagram
    e1, e2 = space.pick(first), space.pick(second)
    maps = compute_duality(g, d, e1, e2)
    verdict = thm1_criterion(g, d, e1, e2, maps)
    exactness = check_exactness(maps)
    click.echo(f"homotopic: {verdict.homotopic}")
    click.echo(f"[L] in im tau_(-,{TOP_DEGREE}): {verdict.in_minus}")
    click.echo(f"[L] in im tau_(+,{TOP_DEGREE}): {verdict.in_plus}")
    for k in exactness.degrees:
        click.echo(f"dim im tau_(+,{k}) = {exactness.im_tau_plus[k]}, dim im tau_(-,{k}) = {exactness.im_tau_minus[k]}")
    click.echo(f"exact: {exactness.exact}, adjoint: {exactness.adjoint}")
    if g.n_components == 1:
        connected = criter_bg(g, e1, e2, maps)
        click.echo(f"criterBG: {connected.difference}, tau_0 = 0: {connected.tau0_vanishes}")


@legch.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@handle_errors
def sweep(file: str) -> None:
    """Проверки по всем упорядоченным парам аугментаций."""
    report = build_report(_load(file), timing=False)
    click.echo(sweep_frame(report).to_string(index=False))
    click.echo(f"im tau_(+,n): {report.im_tau_plus_n_values}")
    click.echo(f"consistent: {report.consistent}")
    if not report.consistent:
        raise SystemExit(3)


@legch.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Вывести отчёт в JSON.")
@click.option("--no-timing", is_flag=True, help="Не включать время работы в отчёт.")
@handle_errors
def report(file: str, as_json: bool, no_timing: bool) -> None:
    """Полный отчёт по диаграмме."""
    result = build_report(_load(file), timing=not no_timing)
    if as_json:
        click.echo(result.model_dump_json(by_alias=True, indent=2))
    else:
        click.echo(f"hash: {result.diagram_hash}")
        click.echo(f"augmentations: {len(result.augmentations)}, classes: {len(result.classes)}")
        click.echo(f"consistent: {result.consistent}")
    if not result.consistent:
        raise SystemExit(3)


@legch.command()
@handle_errors
def corpus() -> None:
    """Поставляемые диаграммы и сертифицированные блоки."""
    shipped = Corpus()
    click.echo(shipped.summary().to_string(index=False))
    click.echo()
    click.echo(shipped.library.to_frame().to_string(index=False))


# ============================================================================
# Geography
# ============================================================================


@legch.group()
def geo() -> None:
    """Допустимость и реализация многочленов Пуанкаре."""


@geo.command()
@click.argument("poly")
@click.option("--n", "n", type=int, default=AMBIENT_DIMENSION, show_default=True)
@handle_errors
def check(poly: str, n: int) -> None:
    """Проверить допустимость многочлена."""
    witness = is_admissible(_poly(poly), n)
    if witness.admissible:
        click.echo(f"admissible: q = {witness.q}, p = {witness.p}")
    else:
        click.echo(f"inadmissible: P = {witness.polynomial} при n = {n}")


@geo.command(name="realize")
@click.argument("poly")
@click.option("--n", "n", type=int, default=AMBIENT_DIMENSION, show_default=True)
@click.option("--out", "out", type=click.Path(dir_okay=False, writable=True), required=True)
@handle_errors
def realize_command(poly: str, n: int, out: str) -> None:
    """Собрать диаграмму с заданным многочленом и записать её в файл."""
    polynomial = _poly(poly)
    result = realize(polynomial, n, get_library())
    if isinstance(result, LibraryGap):
        click.echo(f"{result.message}: P = {result.polynomial}")
        return
    assembly = result.assembly
    header = (
        f"# P = {result.polynomial}\n"
        f"# e1: {assembly.e1.render() or '0'}\n"
        f"# e2: {assembly.e2.render() or '0'}\n"
        f"# blocks: {' '.join(assembly.parts)}\n"
    )
    target = Path(out)
    target.write_text(header + dump_front(assembly.front), encoding="utf-8")

    reloaded = parse_front(target.read_text(encoding="utf-8"))
    g = link_algebra(reloaded).dga
    recomputed = poincare(bilinearize(g, assembly.e1, assembly.e2))
    if recomputed != polynomial:
        raise RealizationError(f"записанная диаграмма даёт P = {recomputed}, ожидалось {polynomial}")
    click.echo(f"P = {recomputed}; e1: {assembly.e1.render() or '0'}; e2: {assembly.e2.render() or '0'}")
    click.echo(f"записано: {target}")


def main() -> None:
    legch()


if __name__ == "__main__":
    main()
