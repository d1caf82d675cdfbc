"""Алгебра Чеканова-Элиашберга и алгебра после 0-перестройки."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from legch.config import LEGCH_THREADS
from legch.exceptions import DSquaredError, ParameterError
from legch.models import Chord
from legch.services.diagram import ResolvedDiagram
from legch.services.disks import DecoratedDisk, enumerate_disks
from legch.services.gf2_algebra import AlgebraElement, Word

logger = logging.getLogger(__name__)


# ============================================================================
# DGA
# ============================================================================


@dataclass(frozen=True)
class DGA:
    """Градуированная свободная алгебра над Z2 с дифференциалом на образующих.

    ``component_map[i - 1]`` - номер компоненты, в которую после перестроек
    попала исходная компонента ``i``.
    """

    generators: tuple[Chord, ...]
    differential: Mapping[str, AlgebraElement]
    n_components: int
    component_map: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not self.component_map:
            object.__setattr__(self, "component_map", tuple(range(1, self.n_components + 1)))

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.generators]

    @property
    def degrees(self) -> dict[str, int]:
        return {c.name: c.degree for c in self.generators}

    def chord(self, name: str) -> Chord:
        for c in self.generators:
            if c.name == name:
                return c
        raise KeyError(f"нет образующей {name!r}")

    def of_degree(self, degree: int) -> list[str]:
        return [c.name for c in self.generators if c.degree == degree]

    def d(self, name: str) -> AlgebraElement:
        return self.differential.get(name, AlgebraElement.zero())

    def apply_word(self, w: Word) -> AlgebraElement:
        """Дифференциал слова по правилу Лейбница (над Z2 знаки не нужны)."""
        words: list[Word] = []
        for i, letter in enumerate(w.letters):
            prefix, suffix = Word(w.letters[:i]), Word(w.letters[i + 1:])
            words.extend(prefix * term * suffix for term in self.d(letter).terms)
        return AlgebraElement.from_words(words)

    def apply(self, element: AlgebraElement) -> AlgebraElement:
        result = AlgebraElement.zero()
        for w in element.terms:
            result = result + self.apply_word(w)
        return result

    def dump(self, surgery: Sequence[tuple[str, int, int]] = ()) -> str:
        """Текстовый дамп: образующие, склейки перестроек, дифференциал."""
        lines = [
            f"gen {c.name} deg {c.degree} comp {c.source} {c.target}" for c in self.generators
        ]
        lines.extend(f"surgery {name} joins {i} {j}" for name, i, j in surgery)
        lines.extend(f"d {c.name} = {self.d(c.name).render()}" for c in self.generators)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DSquaredCertificate:
    """Результат проверки d^2 = 0: первый ненулевой член или успех."""

    ok: bool
    generator: str | None = None
    word: Word | None = None
    checked: int = 0


def check_d_squared(g: DGA) -> DSquaredCertificate:
    """Развернуть d(d(a)) для каждой образующей и найти первый ненулевой член."""
    for count, c in enumerate(g.generators, start=1):
        square = g.apply(g.d(c.name))
        if square:
            return DSquaredCertificate(
                ok=False,
                generator=c.name,
                word=square.sorted_terms()[0],
                checked=count,
            )
    return DSquaredCertificate(ok=True, checked=len(g.generators))


def _ensure_d_squared(g: DGA) -> None:
    certificate = check_d_squared(g)
    if not certificate.ok:
        word = certificate.word.letters if certificate.word is not None else ()
        raise DSquaredError(str(certificate.generator), word)


def _disks_by_chord(d: ResolvedDiagram) -> dict[str, list[DecoratedDisk]]:
    names = [c.name for c in d.chords]
    with ThreadPoolExecutor(max_workers=LEGCH_THREADS) as pool:
        found = list(pool.map(lambda name: enumerate_disks(d, name), names))
    return dict(zip(names, found))


def build_dga(d: ResolvedDiagram) -> DGA:
    """Собрать DGA по жёстким дискам и проверить d^2 = 0.

    Raises:
        DSquaredError: Если d^2 != 0 (ошибка перечисления дисков).
    """
    disks = _disks_by_chord(d)
    differential = {
        name: AlgebraElement.from_words(disk.word for disk in found)
        for name, found in disks.items()
    }
    g = DGA(generators=d.chords, differential=differential, n_components=d.n_components)
    _ensure_d_squared(g)
    logger.info(
        "Построена DGA: %s образующих, %s дисков",
        len(g.generators),
        sum(len(found) for found in disks.values()),
    )
    return g


# ============================================================================
# Surgery algebra
# ============================================================================


@dataclass(frozen=True)
class SurgeryDGA:
    """DGA после перестроек: ``dga`` несёт d_S = d + h, ``base`` - исходную алгебру."""

    base: DGA
    dga: DGA
    surgery_generators: tuple[str, ...]
    joins: tuple[tuple[int, int], ...]
    h: Mapping[str, AlgebraElement] = field(default_factory=dict)

    def plain_part(self, name: str) -> AlgebraElement:
        """Слагаемые d_S(name) без букв перестройки."""
        letters = set(self.surgery_generators)
        return AlgebraElement(
            frozenset(w for w in self.dga.d(name).terms if not letters & set(w.letters)),
        )

    def dump(self) -> str:
        joins = [(s, i, j) for s, (i, j) in zip(self.surgery_generators, self.joins)]
        return self.dga.dump(joins)


def _surgery_word(disk: DecoratedDisk, inserted: Mapping[str, str]) -> Word:
    """Слово диска со вставленными буквами для выбранных пар перестройки."""
    letters: list[str] = []
    for position in range(1, len(disk.negatives) + 2):
        letters.extend(
            inserted[m.label]
            for m in disk.marks
            if m.kind == "surgery" and m.split == position and m.label in inserted
        )
        if position <= len(disk.negatives):
            letters.append(disk.negatives[position - 1])
    return Word(tuple(letters))


def _disk_variants(disk: DecoratedDisk, chosen: Sequence[tuple[str, str]]) -> list[Word]:
    """Все слова диска: без вставок и со вставками для каждого подмножества пар."""
    crossed = {m.label for m in disk.marks if m.kind == "surgery"}
    variants: list[dict[str, str]] = [{}]
    for label, letter in chosen:
        if label in crossed:
            variants = variants + [{**v, label: letter} for v in variants]
    return [_surgery_word(disk, v) for v in variants]


def _merge_components(n: int, joins: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Номера компонент после склеек; склейки обязаны образовывать лес."""
    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in joins:
        ri, rj = find(i), find(j)
        if ri == rj:
            raise ParameterError(
                f"склейка {i}-{j} замыкает цикл: компоненты уже соединены перестройкой",
            )
        parent[max(ri, rj)] = min(ri, rj)
    roots = sorted({find(i) for i in range(1, n + 1)})
    index = {root: k + 1 for k, root in enumerate(roots)}
    return tuple(index[find(i)] for i in range(1, n + 1))


def surgery_names(g: DGA, count: int) -> list[str]:
    """Имена новых образующих: ``s`` для одной пары, иначе ``s1, s2, ...``."""
    taken = set(g.names)
    base = ["s"] if count == 1 else [f"s{k}" for k in range(1, count + 1)]
    names: list[str] = []
    for name in base:
        while name in taken:
            name += "_"
        taken.add(name)
        names.append(name)
    return names


def attach_surgery_pairs(
    g: DGA,
    d: ResolvedDiagram,
    labels: Sequence[str],
    n: int = 1,
    names: Sequence[str] | None = None,
) -> SurgeryDGA:
    """Присоединить образующие перестройки для пар ``labels`` (в этом порядке).

    Args:
        g: DGA диаграммы ``d`` (метки не меняют диски).
        d: Разрешённая диаграмма с метками перестройки.
        labels: Метки пар перестройки.
        n: Размерность объемлющего пространства.
        names: Имена новых образующих; по умолчанию ``surgery_names``.

    Raises:
        ParameterError: Неизвестная пара, n != 1 или склейки образуют цикл.
        DSquaredError: Если d_S^2 != 0.
    """
    if n != 1:
        raise ParameterError(f"диаграммы фронтов существуют только при n = 1, получено n = {n}")
    pairs = {p.label: p for p in d.surgery_pairs}
    unknown = [label for label in labels if label not in pairs]
    if unknown or not labels:
        raise ParameterError(f"неизвестные пары перестройки: {unknown or 'пустой список'}")
    joins = tuple(pairs[label].components for label in labels)
    component_map = _merge_components(g.n_components, joins)
    letters = list(names) if names is not None else surgery_names(g, len(labels))
    chosen = list(zip(labels, letters))

    disks = _disks_by_chord(d)
    differential: dict[str, AlgebraElement] = {}
    h: dict[str, AlgebraElement] = {}
    for name, found in disks.items():
        words: list[Word] = []
        for disk in found:
            words.extend(_disk_variants(disk, chosen))
        differential[name] = AlgebraElement.from_words(words)
        h[name] = differential[name] + g.d(name)

    generators = [
        c.model_copy(
            update={
                "source": component_map[c.source - 1],
                "target": component_map[c.target - 1],
            },
        )
        for c in g.generators
    ]
    for letter, (i, _) in zip(letters, joins):
        merged = component_map[i - 1]
        generators.append(
            Chord(name=letter, degree=n - 1, source=merged, target=merged, kind="surgery"),
        )
        differential[letter] = AlgebraElement.zero()

    surgered = DGA(
        generators=tuple(generators),
        differential=differential,
        n_components=max(component_map),
        component_map=component_map,
    )
    _ensure_d_squared(surgered)
    logger.info(
        "Присоединены образующие перестройки %s (склейки %s), компонент: %s",
        letters,
        joins,
        surgered.n_components,
    )
    return SurgeryDGA(
        base=g,
        dga=surgered,
        surgery_generators=tuple(letters),
        joins=joins,
        h=h,
    )


def attach_surgery(g: DGA, d: ResolvedDiagram, n: int = 1) -> SurgeryDGA:
    """Алгебра A(L, S) для диаграммы ровно с одной парой меток перестройки.

    Raises:
        ParameterError: Если пар перестройки не одна.
    """
    if len(d.surgery_pairs) != 1:
        raise ParameterError(
            f"ожидалась ровно одна пара меток перестройки, найдено {len(d.surgery_pairs)}",
        )
    return attach_surgery_pairs(g, d, [d.surgery_pairs[0].label], n)
