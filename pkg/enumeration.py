"""
4가 방향 리본 그래프 열거와 부피 오라클

주어진 방향 유형 (g, n⁺, n⁻)의 경계 라벨이 붙은 4가 방향 리본 그래프를
전수 열거하고, Hurwitz 수(자기동형 가중 개수)와 셀 부피
(곱 공식 / Ehrhart 격자점 세기)로 부피 Z_{g,n⁺,n⁻}의 독립 검증값을 계산합니다.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from pathlib import Path
from typing import Sequence

import sympy as sp
from tqdm import tqdm

from errors import EmptyCell, NonIntegralInput, ProfileMismatch, RibbonError, UnstableType
from ribbon_core import (
    OrientedRibbonGraph,
    RibbonGraph,
    automorphism_order,
    canonical_key,
    graph_from_dict,
    graph_to_dict,
    inverse,
    validate_graph,
)
from volumes import RationalPoly, is_stable, length_names

logger = logging.getLogger(__name__)


# ============================================
# 카탈로그
# ============================================
@dataclass(frozen=True)
class CatalogEntry:
    graph: OrientedRibbonGraph
    aut_order: int

    @property
    def positive_profile(self) -> tuple[int, ...]:
        """라벨 순서의 양의 경계별 에지 수 α"""
        return tuple(len(self.graph.graph.faces[f]) for f in self.graph.positive_faces)

    @property
    def negative_profile(self) -> tuple[int, ...]:
        return tuple(len(self.graph.graph.faces[f]) for f in self.graph.negative_faces)

    @property
    def weight(self) -> Fraction:
        return Fraction(1, self.aut_order)


@dataclass
class GraphCatalog:
    type: tuple[int, int, int]
    entries: list[CatalogEntry] = field(default_factory=list)

    @property
    def vertex_count(self) -> int:
        g, n_plus, n_minus = self.type
        return 2 * g - 2 + n_plus + n_minus

    @property
    def edge_count(self) -> int:
        return 2 * self.vertex_count

    def weight_sum(self) -> Fraction:
        """Σ 1/|Aut|"""
        return sum((e.weight for e in self.entries), Fraction(0))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def to_dict(self) -> dict:
        return {
            "type": list(self.type),
            "entries": [{"graph": graph_to_dict(e.graph), "aut": e.aut_order} for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GraphCatalog":
        entries = []
        for item in data.get("entries", []):
            og, _ = graph_from_dict(item["graph"])
            entries.append(CatalogEntry(og, int(item["aut"])))
        return cls(tuple(data["type"]), entries)

    def save(self, path: str | Path):
        Path(path).write_text(json.dumps(self.to_dict(), ensure_ascii=False, indent=2), encoding="utf-8")


# ============================================
# 열거
# ============================================
def _vertex_rotation(vertex_count: int) -> tuple[int, ...]:
    """s0 = (0 1 2 3)(4 5 6 7)..."""
    s0 = []
    for v in range(vertex_count):
        base = 4 * v
        s0.extend([base + 1, base + 2, base + 3, base])
    return tuple(s0)


def _search_branch(args: tuple) -> list[tuple[int, ...]]:
    """s1(0) = first 로 고정한 가지에서 조건을 만족하는 s1 전부

    짝수 dart를 양, 홀수 dart를 음으로 두고 가장 작은 미짝 짝수 dart를
    홀수 dart와 짝지으며 백트래킹합니다. 닫힌 면의 부호별 개수와 dart 수,
    꼭짓점 연결 성분(union-find)으로 가지를 잘라냅니다.
    """
    vertex_count, first, n_plus, n_minus = args
    n = 4 * vertex_count
    half = n // 2
    s0 = _vertex_rotation(vertex_count)
    s0_inv = inverse(s0)
    budget = (n_plus, n_minus)

    s1 = [-1] * n
    closed = [0, 0]
    closed_darts = [0, 0]
    free = [4] * vertex_count
    parent = list(range(vertex_count))
    found = []

    def find(v: int) -> int:
        while parent[v] != v:
            v = parent[v]
        return v

    def closed_length(start: int) -> int:
        """start에서 s2 = s1∘s0⁻¹을 따라 닫히면 면 길이, 아니면 0"""
        d, length = start, 0
        while True:
            d = s1[s0_inv[d]]
            if d < 0:
                return 0
            length += 1
            if d == start:
                return length

    def feasible(root: int) -> bool:
        for p in (0, 1):
            if closed[p] > budget[p]:
                return False
            if half - closed_darts[p] < budget[p] - closed[p]:
                return False
            if closed[p] == budget[p] and closed_darts[p] < half:
                return False
        return free[root] > 0 or sum(1 for v in range(vertex_count) if find(v) == root) == vertex_count

    def extend(e: int):
        while e < n and s1[e] >= 0:
            e += 2
        if e >= n:
            if closed == list(budget) and not validate_graph(RibbonGraph(s0, tuple(s1))):
                found.append(tuple(s1))
            return
        for o in ([first] if e == 0 else range(1, n, 2)):
            if s1[o] >= 0:
                continue
            s1[e], s1[o] = o, e
            gained = [(start % 2, closed_length(start)) for start in (s0[e], s0[o])]
            gained = [(p, length) for p, length in gained if length]
            for p, length in gained:
                closed[p] += 1
                closed_darts[p] += length

            ve, vo = find(e // 4), find(o // 4)
            merged = ve != vo
            if merged:
                parent[vo] = ve
                free[ve] += free[vo]
            free[ve] -= 2

            if feasible(ve):
                extend(e + 2)

            free[ve] += 2
            if merged:
                free[ve] -= free[vo]
                parent[vo] = vo
            for p, length in gained:
                closed[p] -= 1
                closed_darts[p] -= length
            s1[e] = s1[o] = -1

    extend(0)
    return found


def _labelings(g: RibbonGraph, eps: tuple[int, ...]):
    """부호별 면 라벨 부여 전부"""
    pos = [i for i, f in enumerate(g.faces) if eps[f[0]] > 0]
    neg = [i for i, f in enumerate(g.faces) if eps[f[0]] < 0]
    for p_labels in permutations(range(1, len(pos) + 1)):
        for m_labels in permutations(range(1, len(neg) + 1)):
            labels = [0] * len(g.faces)
            for i, label in zip(pos, p_labels):
                labels[i] = label
            for i, label in zip(neg, m_labels):
                labels[i] = label
            yield tuple(labels)


def enumerate_graphs(
    g: int,
    n_plus: int,
    n_minus: int,
    threads: int = 1,
    progress: bool = False,
) -> GraphCatalog:
    """유형 (g, n⁺, n⁻)의 경계 라벨 4가 방향 리본 그래프 전수 열거

    Args:
        g: 종수
        n_plus: 양의 경계 수
        n_minus: 음의 경계 수
        threads: 최상위 가지를 나눠 처리할 프로세스 수
        progress: tqdm 진행 표시 여부

    Raises:
        UnstableType: 안정 유형이 아님
    """
    if not is_stable(g, n_plus, n_minus):
        raise UnstableType(f"(g={g}, n⁺={n_plus}, n⁻={n_minus})는 열거할 수 없는 유형입니다")

    vertex_count = 2 * g - 2 + n_plus + n_minus
    n = 4 * vertex_count
    branches = [(vertex_count, first, n_plus, n_minus) for first in range(1, n, 2)]
    logger.debug(f"열거 시작: 유형 {(g, n_plus, n_minus)}, dart {n}개, 가지 {len(branches)}개")

    candidates = []
    with tqdm(total=len(branches), desc=f"열거 {(g, n_plus, n_minus)}", disable=not progress) as bar:
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                for found in pool.map(_search_branch, branches):
                    candidates.extend(found)
                    bar.update(1)
        else:
            for branch in branches:
                candidates.extend(_search_branch(branch))
                bar.update(1)

    eps = tuple(1 if d % 2 == 0 else -1 for d in range(n))
    shapes = {}
    for s1 in candidates:
        rg = RibbonGraph(_vertex_rotation(vertex_count), s1)
        # 라벨 없이 먼저 동형류를 줄인 뒤 라벨을 붙임
        shape = canonical_key(OrientedRibbonGraph(rg, eps, (0,) * len(rg.faces)))
        shapes.setdefault(shape, rg)

    unique = {}
    for rg in shapes.values():
        for labels in _labelings(rg, eps):
            og = OrientedRibbonGraph(rg, eps, labels)
            unique.setdefault(canonical_key(og), og)

    entries = [CatalogEntry(unique[k], automorphism_order(unique[k])) for k in sorted(unique)]
    catalog = GraphCatalog((g, n_plus, n_minus), entries)
    logger.debug(f"열거 완료: 후보 {len(candidates)}개 → 비동형 {len(entries)}개, Σ1/Aut = {catalog.weight_sum()}")
    return catalog


# ============================================
# Hurwitz 수
# ============================================
@dataclass
class HurwitzTable:
    """(g, α) → 자기동형 가중 개수 h̃"""

    entries: dict = field(default_factory=dict)

    def get(self, g: int, alpha: Sequence[int]) -> Fraction:
        return self.entries.get((g, tuple(alpha)), Fraction(0))

    def reconstruct(self, g: int, n: int) -> RationalPoly:
        """F_{g,n}(x) = Σ_α h̃(α) Π x_i^{α_i-1}/(α_i-1)!"""
        terms = {}
        for (gg, alpha), count in self.entries.items():
            if gg != g or len(alpha) != n:
                continue
            exponent = tuple(a - 1 for a in alpha)
            denominator = 1
            for a in alpha:
                denominator *= factorial(a - 1)
            terms[exponent] = terms.get(exponent, Fraction(0)) + count / denominator
        return RationalPoly.from_terms(length_names(n), terms)

    def to_dict(self) -> dict:
        return {
            "entries": [
                {"g": g, "alpha": list(a), "count": f"{c.numerator}/{c.denominator}"}
                for (g, a), c in sorted(self.entries.items())
            ]
        }


def _one_negative_catalog(g: int, n: int, catalog: GraphCatalog | None) -> GraphCatalog:
    if catalog is None:
        return enumerate_graphs(g, n, 1)
    if tuple(catalog.type) != (g, n, 1):
        raise ProfileMismatch(f"카탈로그 유형 {catalog.type}이 (g={g}, n={n}, 1)과 다릅니다")
    return catalog


def hurwitz_count(g: int, alpha: Sequence[int], catalog: GraphCatalog | None = None) -> Fraction:
    """양의 경계 i에 에지 α_i개가 있는 (음의 경계 하나) 그래프의 Σ 1/|Aut|

    Raises:
        ProfileMismatch: Σα ≠ 4g-2+2n 또는 α_i < 1
    """
    alpha = tuple(int(a) for a in alpha)
    n = len(alpha)
    if n < 1 or any(a < 1 for a in alpha) or sum(alpha) != 4 * g - 2 + 2 * n:
        raise ProfileMismatch(f"α={alpha}는 g={g}에서 Σα = {4 * g - 2 + 2 * n} 조건을 만족하지 않습니다")
    catalog = _one_negative_catalog(g, n, catalog)
    return sum((e.weight for e in catalog if e.positive_profile == alpha), Fraction(0))


def hurwitz_table(g: int, n: int, catalog: GraphCatalog | None = None) -> HurwitzTable:
    catalog = _one_negative_catalog(g, n, catalog)
    table = HurwitzTable()
    for entry in catalog:
        key = (g, entry.positive_profile)
        table.entries[key] = table.entries.get(key, Fraction(0)) + entry.weight
    return table


# ============================================
# 셀 부피
# ============================================
def cell_volume_one_negative(entry: CatalogEntry, x: Sequence) -> Fraction:
    """Π x_i^{α_i-1}/(α_i-1)! (양의 경계 라벨 순서)"""
    if entry.graph.n_minus != 1:
        raise RibbonError("곱 공식은 음의 경계가 하나인 그래프에만 적용됩니다")
    alpha = entry.positive_profile
    if len(x) != len(alpha):
        raise RibbonError(f"양의 경계 {len(alpha)}개에 길이 {len(x)}개가 주어졌습니다")
    value = Fraction(1)
    for xi, a in zip(x, alpha):
        value *= Fraction(xi) ** (a - 1) / factorial(a - 1)
    return value


def cell_volume_one_negative_symbolic(entry: CatalogEntry) -> RationalPoly:
    alpha = entry.positive_profile
    denominator = 1
    for a in alpha:
        denominator *= factorial(a - 1)
    return RationalPoly.from_terms(
        length_names(len(alpha)), {tuple(a - 1 for a in alpha): Fraction(1, denominator)}
    )


def _integral_lengths(values: Sequence) -> tuple[int, ...]:
    result = []
    for v in values:
        v = Fraction(v)
        if v.denominator != 1 or v <= 0:
            raise NonIntegralInput(f"경계 길이 {v}는 양의 정수가 아닙니다")
        result.append(int(v))
    return tuple(result)


def count_integer_metrics(og: OrientedRibbonGraph, targets: Sequence[int]) -> int:
    """면 β의 길이가 targets[β]인 양의 정수 메트릭 개수"""
    g = og.graph
    # 방향 그래프에서 에지의 두 dart는 부호가 다른 두 면에 하나씩 놓임
    edge_faces = [tuple(g.face_of[d] for d in edge) for edge in g.edges]
    last_edge = {}
    for e, faces in enumerate(edge_faces):
        for f in faces:
            last_edge[f] = e

    @lru_cache(maxsize=None)
    def count(e: int, remaining: tuple[int, ...]) -> int:
        if e == len(g.edges):
            return 1 if all(r == 0 for r in remaining) else 0
        upper = min(remaining[f] for f in edge_faces[e])
        total = 0
        for v in range(1, upper + 1):
            nxt = list(remaining)
            for f in edge_faces[e]:
                nxt[f] -= v
            if any(last_edge[f] == e and nxt[f] != 0 for f in edge_faces[e]):
                continue
            total += count(e + 1, tuple(nxt))
        return total

    return count(0, tuple(targets))


def cell_dimension(og: OrientedRibbonGraph) -> int:
    """d = E - (n-1)"""
    return len(og.graph.edges) - (len(og.graph.faces) - 1)


def cell_volume_ehrhart(entry: CatalogEntry, L_plus: Sequence, L_minus: Sequence) -> Fraction:
    """경계 합이 t·L 인 양의 정수 메트릭 수의 다항식 맞춤으로 얻은 격자 정규화 셀 부피

    t = 1..d+1 로 d차 다항식을 맞추고 t = d+2, d+3 에서 검증합니다.

    Raises:
        NonIntegralInput: 정수가 아니거나 잔여 조건 위반
        EmptyCell: 모든 t에서 해가 없음
    """
    og = entry.graph
    lp, lm = _integral_lengths(L_plus), _integral_lengths(L_minus)
    if len(lp) != og.n_plus or len(lm) != og.n_minus:
        raise NonIntegralInput("경계 길이 개수가 그래프의 경계 수와 다릅니다")
    if sum(lp) != sum(lm):
        raise NonIntegralInput(f"Σ L⁺ = {sum(lp)} 와 Σ L⁻ = {sum(lm)} 가 다릅니다")

    base = [0] * len(og.graph.faces)
    for i, f in enumerate(og.positive_faces):
        base[f] = lp[i]
    for i, f in enumerate(og.negative_faces):
        base[f] = lm[i]

    d = cell_dimension(og)
    counts = [count_integer_metrics(og, [t * b for b in base]) for t in range(1, d + 4)]
    if not any(counts):
        raise EmptyCell(f"L⁺={lp}, L⁻={lm} 에서 양의 정수 메트릭이 없습니다")

    T = sp.Symbol("t")
    points = [(t, counts[t - 1]) for t in range(1, d + 2)]
    poly = sp.Poly(sp.interpolate(points, T) if len(points) > 1 else sp.Integer(points[0][1]), T)
    for t in (d + 2, d + 3):
        if poly.eval(t) != counts[t - 1]:
            logger.warning(f"Ehrhart 맞춤 불일치: t={t}, 다항식 {poly.eval(t)} ≠ 개수 {counts[t - 1]}")
            raise RuntimeError(f"격자점 개수가 {d}차 다항식이 아닙니다: {counts}")
    lead = sp.Rational(poly.coeff_monomial(T**d))
    return Fraction(int(lead.p), int(lead.q))


def volume_oracle(
    g: int,
    n_plus: int,
    n_minus: int,
    L_plus: Sequence,
    L_minus: Sequence,
    catalog: GraphCatalog | None = None,
) -> Fraction:
    """Σ_entries 셀 부피 / |Aut| (n⁻=1이면 곱 공식, 아니면 Ehrhart)"""
    if catalog is None:
        catalog = enumerate_graphs(g, n_plus, n_minus)
    if tuple(catalog.type) != (g, n_plus, n_minus):
        raise ProfileMismatch(f"카탈로그 유형 {catalog.type}이 {(g, n_plus, n_minus)}와 다릅니다")
    _integral_lengths(list(L_plus) + list(L_minus))
    if sum(Fraction(v) for v in L_plus) != sum(Fraction(v) for v in L_minus):
        raise NonIntegralInput("Σ L⁺ ≠ Σ L⁻")

    total = Fraction(0)
    for entry in catalog:
        if n_minus == 1:
            volume = cell_volume_one_negative(entry, L_plus)
        else:
            try:
                volume = cell_volume_ehrhart(entry, L_plus, L_minus)
            except EmptyCell:
                volume = Fraction(0)
        total += volume * entry.weight
    return total
