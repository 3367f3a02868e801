"""
허용 곡선과 절단

방향 리본 그래프 위의 허용(admissible) 다중 곡선을 s⁺/s⁻ 스텝 단어로 표현하고,
좌표 벡터 x(비틀림), y(통과 횟수), 곡선을 따라 자르기, 꼭짓점 벡터 ξ_v⁺,
Γ_v⁺ 구성, 비순환 분해, 유계 바지 분류, K_R/Ĥ_R/W_R 선형 대수와
쌍대 형식 Ω_R, 해밀토니안 항등식 검사를 제공합니다.

스텝 규약 (양의 dart 위에서):
    s⁺(e) = s2(e)          양의 면을 따라 진행
    s⁻(e) = s1(s0(e))      음의 면을 따라 진행 (= s1 ∘ s2⁻¹ ∘ s1)
"""

import json
import logging
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from typing import Callable, NamedTuple, Sequence

import sympy as sp

from errors import (
    InvalidStep,
    NotAdmissible,
    NotFourValent,
    NotSimple,
    OddDegree,
    RibbonError,
    SingleVertex,
)
from ribbon_core import (
    Metric,
    OrientedRibbonGraph,
    RibbonGraph,
    boundary_lengths,
    default_face_labels,
    is_four_valent,
    make_metric,
    orient,
    topology,
    unit_metric,
)
from stable_graphs import (
    EDGE,
    LEG,
    Component,
    DirectedStableGraph,
    Slot,
    SlotRef,
    is_acyclic,
)

logger = logging.getLogger(__name__)

PLUS = "+"
MINUS = "-"


# ============================================
# 곡선 단어
# ============================================
@dataclass(frozen=True)
class CurveWord:
    """닫힌 곡선 하나: 양의 dart 순환열과 각 위치에서 나가는 스텝 태그

    tags[i]는 darts[i] → darts[i+1] (순환) 스텝의 종류입니다.
    """

    darts: tuple[int, ...]
    tags: tuple[str, ...]
    weight: Fraction = Fraction(1)

    def __len__(self) -> int:
        return len(self.darts)

    def cyclic_key(self) -> tuple:
        """회전에 불변인 키 (평행한 중복 성분 탐지용)"""
        pairs = list(zip(self.darts, self.tags))
        return min(tuple(pairs[i:] + pairs[:i]) for i in range(len(pairs)))

    def is_primitive(self) -> bool:
        k = len(self.darts)
        pairs = list(zip(self.darts, self.tags))
        for period in range(1, k):
            if k % period == 0 and pairs == pairs[period:] + pairs[:period]:
                return False
        return True

    def is_peripheral(self) -> bool:
        """한 종류의 스텝만 쓰면 면 경계와 평행"""
        return len(set(self.tags)) == 1


def step(og: OrientedRibbonGraph, dart: int, tag: str) -> int:
    """양의 dart에서 s⁺ 또는 s⁻ 한 스텝"""
    g = og.graph
    if tag == PLUS:
        return g.s2[dart]
    if tag == MINUS:
        return g.s1[g.s0[dart]]
    raise InvalidStep(f"알 수 없는 스텝 태그: {tag!r}")


def make_word(
    og: OrientedRibbonGraph,
    darts: Sequence[int],
    tags: Sequence[str],
    weight=1,
) -> CurveWord:
    """스텝 관계를 검증하여 CurveWord 생성

    Raises:
        InvalidStep: 음의 dart가 있거나 e_{i+1} ≠ s±(e_i)
    """
    darts = tuple(int(d) for d in darts)
    tags = tuple(tags)
    if not darts or len(darts) != len(tags):
        raise InvalidStep("dart 수와 태그 수가 같아야 하며 비어 있지 않아야 합니다")
    for i, d in enumerate(darts):
        if not 0 <= d < og.n_darts or og.eps[d] < 0:
            raise InvalidStep(f"위치 {i}의 dart {d}는 양의 dart가 아닙니다")
        nxt = darts[(i + 1) % len(darts)]
        if step(og, d, tags[i]) != nxt:
            raise InvalidStep(f"위치 {i}: s{tags[i]}({d}) ≠ {nxt}")
    weight = Fraction(weight)
    if weight <= 0:
        raise InvalidStep("곡선 가중치는 양수여야 합니다")
    return CurveWord(darts, tags, weight)


def word_from_tags(og: OrientedRibbonGraph, start: int, tags: Sequence[str], weight=1) -> CurveWord:
    """시작 dart와 태그열로 단어 생성 (마지막 스텝이 시작점으로 돌아와야 함)"""
    darts = [start]
    for tag in tags[:-1]:
        darts.append(step(og, darts[-1], tag))
    return make_word(og, darts, tags, weight)


# ============================================
# 가닥 배치 (단순성 판정)
# ============================================
class StrandLayout(NamedTuple):
    """양의 dart p마다 α 쪽부터 정렬된 가닥 (성분, 위치) 목록"""

    order: dict
    exit_minus: dict
    arrive_minus: dict
    crossing: bool


def _strand_layout(words: Sequence[CurveWord]) -> StrandLayout:
    """각 에지 직사각형 안의 가닥 순서와 교차 여부

    출구 순서는 앞으로의 태그열, 입구 순서는 지나온 태그열의
    사전식 비교(s⁻ 가 α 쪽)로 정합니다. 두 순서가 뒤집히면 교차입니다.
    """
    total = sum(len(w) for w in words)
    limit = 2 * total + 2

    def forward(strand, k):
        c, i = strand
        tags = words[c].tags
        return tags[(i + k) % len(tags)]

    def backward(strand, k):
        c, i = strand
        tags = words[c].tags
        return tags[(i - 1 - k) % len(tags)]

    def compare(s, t, seq) -> int:
        for k in range(limit):
            a, b = seq(s, k), seq(t, k)
            if a != b:
                return -1 if a == MINUS else 1
        return 0

    by_dart = defaultdict(list)
    for c, word in enumerate(words):
        for i, d in enumerate(word.darts):
            by_dart[d].append((c, i))

    crossing = False
    order = {}
    exit_minus = {}
    arrive_minus = {}
    for p, strands in by_dart.items():
        for s, t in combinations(strands, 2):
            f, b = compare(s, t, forward), compare(s, t, backward)
            if f and b and f != b:
                crossing = True
        order[p] = sorted(
            strands,
            key=cmp_to_key(lambda s, t: compare(s, t, forward) or compare(s, t, backward)),
        )
        exit_minus[p] = sum(1 for c, i in strands if words[c].tags[i] == MINUS)
        arrive_minus[p] = sum(1 for c, i in strands if words[c].tags[i - 1] == MINUS)
    return StrandLayout(order, exit_minus, arrive_minus, crossing)


# ============================================
# 곡선 좌표 벡터
# ============================================
@dataclass(frozen=True)
class MultiCurveData:
    """가중 다중 곡선과 파생 벡터

    x: 에지별 비틀림 벡터, y: 에지별 (가중) 통과 횟수
    """

    components: tuple[CurveWord, ...]
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    simple: bool

    @property
    def is_empty(self) -> bool:
        return not self.components


def boundary_matrix(og: OrientedRibbonGraph) -> list[list[int]]:
    """면 β × 에지 e 행렬: β에 포함된 e의 dart 수 (dl_β의 계수)"""
    g = og.graph
    rows = []
    for face in g.faces:
        row = [0] * len(g.edges)
        for d in face:
            row[g.edge_of[d]] += 1
        rows.append(row)
    return rows


def in_kernel(og: OrientedRibbonGraph, vector: Sequence) -> bool:
    """모든 경계 미분 dl_β가 vector에서 0인지"""
    return all(
        sum(Fraction(c) * Fraction(v) for c, v in zip(row, vector)) == 0
        for row in boundary_matrix(og)
    )


def curve_vectors(og: OrientedRibbonGraph, words: Sequence[CurveWord]) -> MultiCurveData:
    """다중 곡선의 x, y 벡터와 단순성 판정

    위치 i가 s⁺로 도착해 s⁻로 떠나면 에지 [e_i]에 +w,
    s⁻로 도착해 s⁺로 떠나면 -w 를 더합니다.

    Raises:
        InvalidStep: 단어가 스텝 관계를 위반
    """
    g = og.graph
    words = tuple(make_word(og, w.darts, w.tags, w.weight) for w in words)
    x = [Fraction(0)] * len(g.edges)
    y = [Fraction(0)] * len(g.edges)
    for word in words:
        for i, d in enumerate(word.darts):
            e = g.edge_of[d]
            y[e] += word.weight
            arrive, leave = word.tags[i - 1], word.tags[i]
            if arrive == PLUS and leave == MINUS:
                x[e] += word.weight
            elif arrive == MINUS and leave == PLUS:
                x[e] -= word.weight

    simple = True
    if words:
        layout = _strand_layout(words)
        simple = not layout.crossing and all(w.is_primitive() for w in words)
        if simple and not in_kernel(og, x):
            logger.warning("교차 없는 곡선의 x가 K_R에 속하지 않습니다")
            simple = False
    return MultiCurveData(words, tuple(x), tuple(y), simple)


def require_simple(c: MultiCurveData) -> MultiCurveData:
    if not c.simple:
        raise NotSimple("곡선이 단순하지 않습니다 (가닥 교차, 비원시 단어 또는 x ∉ K_R)")
    return c


def curve_length(og: OrientedRibbonGraph, m: Metric, c: MultiCurveData) -> Fraction:
    """l_Γ = Σ_e m_e y_e (가중치 포함)"""
    return sum((m[e] * c.y[e] for e in range(len(og.graph.edges))), Fraction(0))


def word_length(og: OrientedRibbonGraph, m: Metric, word: CurveWord) -> Fraction:
    """가중치를 제외한 성분 하나의 길이"""
    return sum((m[og.graph.edge_of[d]] for d in word.darts), Fraction(0))


# ============================================
# 절단
# ============================================
@dataclass(frozen=True)
class CutPiece:
    """절단으로 생긴 성분

    darts[k]는 성분의 지역 dart k에 대응하는 원래 그래프의 dart,
    slots[f]는 성분의 면 f가 안정 그래프에서 갖는 슬롯입니다.
    steps[(p, tag)]는 지역 스텝을 원래 그래프의 스텝열로 올린 것입니다.
    """

    graph: OrientedRibbonGraph
    metric: Metric
    darts: tuple[int, ...]
    slots: tuple[Slot, ...]
    steps: dict = field(default_factory=dict, compare=False)

    def local_dart(self, original: int) -> int | None:
        try:
            return self.darts.index(original)
        except ValueError:
            return None


@dataclass(frozen=True)
class CutResult:
    pieces: tuple[CutPiece, ...]
    stable: DirectedStableGraph


def _base_steps(og: OrientedRibbonGraph) -> Callable[[int, str], tuple]:
    def lift(p: int, tag: str) -> tuple:
        return ((tag, step(og, p, tag)),)

    return lift


def cut_along(
    og: OrientedRibbonGraph,
    m: Metric,
    c: MultiCurveData,
    lift: Callable[[int, str], tuple] | None = None,
) -> CutResult:
    """다중 곡선을 따라 잘라 성분 그래프와 안정 그래프 생성

    각 에지를 y_e+1개의 평행한 띠로 나누고 모서리 순서대로 이어 붙인 뒤,
    가닥 사이의 2가 연결을 지워 새 에지 짝짓기 s1'을 얻습니다.
    꼭짓점과 s0는 그대로이며 새 에지 길이는 지나간 띠 길이의 합입니다.

    Args:
        og: 방향 그래프
        m: 메트릭
        c: 단순 허용 다중 곡선
        lift: og의 스텝을 상위 그래프의 스텝열로 올리는 함수 (분해 재귀용)

    Raises:
        NotSimple: 곡선이 단순하지 않음
        NotAdmissible: 평행한 중복 성분, 면 경계와 평행한 성분 등
    """
    g = og.graph
    lift = lift or _base_steps(og)
    if c.is_empty:
        piece = CutPiece(
            og,
            m,
            tuple(range(g.n_darts)),
            tuple(Slot(og.face_sign(f), LEG, og.face_labels[f]) for f in range(len(g.faces))),
            _piece_steps(og, tuple(range(g.n_darts)), lift),
        )
        return CutResult((piece,), _stable_of_pieces([piece]))

    require_simple(c)
    words = c.components
    if len({w.cyclic_key() for w in words}) != len(words):
        raise NotAdmissible("평행한 중복 성분은 가중치로 합쳐야 합니다")

    layout = _strand_layout(words)
    strands = {p: len(s) for p, s in layout.order.items()}
    a = {p: layout.exit_minus.get(p, 0) for p in og.positive_darts}
    b = {p: layout.arrive_minus.get(p, 0) for p in og.positive_darts}
    y = {p: strands.get(p, 0) for p in og.positive_darts}
    budget = sum(y.values()) + len(g.edges) + 1

    def walk(d: int):
        """dart d의 중앙 띠에서 출발해 다른 중앙 띠에 도달할 때까지 추적"""
        if og.eps[d] > 0:
            p, k, toward_positive = d, a[d], False
        else:
            p = g.s1[d]
            k, toward_positive = b[p], True
        length = m[g.edge_of[p]]
        path = []
        for _ in range(budget):
            if toward_positive:
                if k == a[p]:
                    return p, length, path
                if k < a[p]:
                    nxt, tag = g.s1[g.s0[p]], MINUS
                else:
                    nxt, tag = g.s1[g.s0_inv[p]], PLUS
                    k = y[nxt] - (y[p] - k)
                path.append((tag, nxt))
            else:
                q = g.s1[p]
                if k == b[p]:
                    return q, length, path
                if k < b[p]:
                    nxt = g.s0_inv[q]
                else:
                    nxt = g.s0[q]
                    k = y[nxt] - (y[p] - k)
            p = nxt
            length += m[g.edge_of[p]]
        raise RuntimeError(f"dart {d}에서 시작한 띠 추적이 끝나지 않습니다")

    new_s1 = [-1] * g.n_darts
    new_length = {}
    chains = {}
    for d in range(g.n_darts):
        end, length, path = walk(d)
        new_s1[d] = end
        new_length[d] = length
        if og.eps[d] < 0:
            chains[d] = path
    for d in range(g.n_darts):
        if new_s1[new_s1[d]] != d or og.eps[new_s1[d]] == og.eps[d]:
            raise NotAdmissible("절단 후 에지 짝짓기가 일관되지 않습니다")
        if new_length[d] != new_length[new_s1[d]]:
            raise RuntimeError("띠 사슬의 양 끝 길이가 다릅니다")

    # 새 면의 정체: 옛 면 또는 곡선 사본
    cut = RibbonGraph(g.s0, tuple(new_s1))
    face_kind = []
    for face in cut.faces:
        kinds = set()
        for d in face:
            if og.eps[d] > 0:
                count = y[d] - a[d]
                widest = layout.order[d][a[d]] if count else None
            else:
                p = g.s0_inv[d]
                count = a[p]
                widest = layout.order[p][a[p] - 1] if count else None
            kinds.add(("curve", widest[0]) if widest else ("face", g.face_of[d]))
        if len(kinds) != 1:
            raise NotAdmissible(f"새 면 {face}가 옛 면과 곡선 사본에 동시에 걸쳐 있습니다")
        face_kind.append(kinds.pop())

    old_faces = sorted(k[1] for k in face_kind if k[0] == "face")
    if old_faces != list(range(len(g.faces))):
        raise NotAdmissible("절단 후 원래 경계가 모두 보존되지 않았습니다")
    for ci in range(len(words)):
        signs = sorted(
            og.eps[cut.faces[f][0]] for f, k in enumerate(face_kind) if k == ("curve", ci)
        )
        if signs != [-1, 1]:
            raise NotAdmissible(f"곡선 {ci + 1}의 두 사본이 반대 부호로 나타나지 않습니다")

    # 성분별 그래프
    pieces = []
    seen = set()
    for start in range(g.n_darts):
        if start in seen:
            continue
        orbit = sorted(_orbit_darts(g.s0, new_s1, start))
        seen.update(orbit)
        pieces.append(
            _build_piece(og, m, cut, orbit, new_length, face_kind, words, chains, lift)
        )

    for piece in pieces:
        genus = topology(piece.graph.graph).genus
        if 2 * genus - 2 + len(piece.slots) <= 0:
            raise NotAdmissible("절단 결과에 불안정한 성분(원판/원기둥)이 있습니다")

    # 불변량 검사: 오일러 지표, 길이 보존
    chi = sum(len(p.graph.graph.vertices) - len(p.graph.graph.edges) for p in pieces)
    if chi != len(g.vertices) - len(g.edges):
        raise RuntimeError("절단 전후 오일러 지표가 다릅니다")
    profile = boundary_lengths(og, m)
    for piece in pieces:
        piece_profile = boundary_lengths(piece.graph, piece.metric)
        for slot, length in zip(piece.slots, piece_profile.lengths):
            if slot.kind == LEG:
                expected = profile.length_of(slot.sign, slot.label)
            else:
                expected = word_length(og, m, words[slot.label - 1])
            if length != expected:
                raise RuntimeError(f"절단 후 경계 길이 불일치: {slot} {length} ≠ {expected}")

    logger.debug(f"절단 완료: 성분 {len(pieces)}개, 곡선 {len(words)}개")
    return CutResult(tuple(pieces), _stable_of_pieces(pieces))


def _orbit_darts(s0: Sequence[int], s1: Sequence[int], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        d = stack.pop()
        for nxt in (s0[d], s1[d]):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def _piece_steps(og: OrientedRibbonGraph, darts: Sequence[int], lift) -> dict:
    return {
        (k, tag): lift(d, tag)
        for k, d in enumerate(darts)
        if og.eps[d] > 0
        for tag in (PLUS, MINUS)
    }


def _build_piece(og, m, cut, orbit, new_length, face_kind, words, chains, lift) -> CutPiece:
    """궤도 dart들로 성분 그래프, 메트릭, 슬롯, 상승 스텝 구성"""
    g = og.graph
    local = {d: k for k, d in enumerate(orbit)}
    s0 = tuple(local[g.s0[d]] for d in orbit)
    s1 = tuple(local[cut.s1[d]] for d in orbit)
    eps = tuple(og.eps[d] for d in orbit)
    h = RibbonGraph(s0, s1)

    slots = []
    for face in h.faces:
        kind, index = face_kind[cut.face_of[orbit[face[0]]]]
        sign = eps[face[0]]
        if kind == "face":
            slots.append(Slot(sign, LEG, og.face_labels[index]))
        else:
            slots.append(Slot(sign, EDGE, index + 1))

    piece_graph = orient(h, eps, default_face_labels(h, eps))
    metric = tuple(new_length[orbit[edge[0]]] for edge in h.edges)

    steps = {}
    for k, d in enumerate(orbit):
        if eps[k] < 0:
            continue
        for tag in (PLUS, MINUS):
            q = g.s0[d] if tag == MINUS else g.s0_inv[d]
            lifted = list(lift(d, tag))
            prev = g.s1[q]
            for t, nxt in chains[q]:
                lifted.extend(lift(prev, t))
                prev = nxt
            steps[(k, tag)] = tuple(lifted)
    return CutPiece(piece_graph, metric, tuple(orbit), tuple(slots), steps)


def _stable_of_pieces(pieces: Sequence[CutPiece]) -> DirectedStableGraph:
    components = []
    ends = defaultdict(dict)
    for ci, piece in enumerate(pieces):
        components.append(Component(topology(piece.graph.graph).genus, piece.slots))
        for si, slot in enumerate(piece.slots):
            if slot.kind == EDGE:
                ends[slot.label][slot.sign] = SlotRef(ci, si)
    edges = tuple((ends[label][-1], ends[label][1]) for label in sorted(ends))
    return DirectedStableGraph(tuple(components), edges)


def lift_word(piece: CutPiece, word: CurveWord) -> tuple[tuple[int, ...], tuple[str, ...]]:
    """성분 위의 곡선 단어를 원래 그래프의 (dart열, 태그열)로 올림"""
    darts = [piece.darts[word.darts[0]]]
    tags = []
    for d, tag in zip(word.darts, word.tags):
        for t, nxt in piece.steps[(d, tag)]:
            tags.append(t)
            darts.append(nxt)
    if darts[-1] != darts[0]:
        raise RuntimeError("올린 곡선이 닫히지 않습니다")
    return tuple(darts[:-1]), tuple(tags)


# ============================================
# 꼭짓점 벡터와 Γ_v⁺
# ============================================
def xi_plus(og: OrientedRibbonGraph, v: int) -> tuple[int, ...]:
    """ξ_v⁺ = Σ_i (-1)^i ∂_[s0^i e], e는 v의 첫 양의 dart

    Raises:
        OddDegree: v의 차수가 홀수
    """
    g = og.graph
    cycle = g.vertices[v]
    if len(cycle) % 2:
        raise OddDegree(f"꼭짓점 {og.vertex_name(v)}의 차수 {len(cycle)}가 홀수입니다")
    start = next(d for d in cycle if og.eps[d] > 0)
    vector = [0] * len(g.edges)
    d = start
    for i in range(len(cycle)):
        vector[g.edge_of[d]] += -1 if i % 2 else 1
        d = g.s0[d]
    return tuple(vector)


def gamma_plus(og: OrientedRibbonGraph, v: int) -> MultiCurveData:
    """v를 둘러싼 경계 추적 보행으로 Γ_v⁺ 구성

    양의 dart에서 v의 dart이면 s⁻, 아니면 s⁺로 진행합니다.
    s⁻ 스텝만으로 된 성분(v에만 닿는 음의 면과 평행)은 제거합니다.

    Raises:
        SingleVertex: 꼭짓점이 하나뿐인 그래프
    """
    g = og.graph
    if len(g.vertices) < 2:
        raise SingleVertex("최소 그래프에는 Γ_v⁺가 없습니다")
    at_v = set(g.vertices[v])
    starts = [d for d in g.vertices[v] if og.eps[d] > 0]

    words = []
    covered = set()
    for start in starts:
        if start in covered:
            continue
        darts, tags = [], []
        d = start
        for _ in range(g.n_darts ** 2):
            tag = MINUS if d in at_v else PLUS
            darts.append(d)
            tags.append(tag)
            covered.add(d)
            d = step(og, d, tag)
            if d == start:
                break
        else:
            raise RuntimeError(f"Γ⁺ 보행이 dart {start}에서 끝나지 않습니다")
        if PLUS in tags:
            words.append(CurveWord(tuple(darts), tuple(tags)))
    return curve_vectors(og, words)


# ============================================
# 비순환 분해와 유계 바지
# ============================================
@dataclass(frozen=True)
class Decomposition:
    curves: MultiCurveData
    stable: DirectedStableGraph
    pieces: tuple[CutPiece, ...]


def acyclic_decompose(
    og: OrientedRibbonGraph,
    order: Sequence[int] | None = None,
    m: Metric | None = None,
) -> Decomposition:
    """꼭짓점 순서에 맞는 정준 비순환 분해

    주어진 순서의 앞 꼭짓점부터 Γ_v⁺로 떼어 내고 나머지 조각에서 반복합니다.
    결과 안정 그래프의 성분 i는 order[i]를 포함하며 모든 에지는 앞 성분에서
    뒤 성분으로 흐릅니다.
    """
    g = og.graph
    order = list(range(len(g.vertices))) if order is None else list(order)
    if sorted(order) != list(range(len(g.vertices))):
        raise RibbonError(f"꼭짓점 순서가 0..{len(g.vertices) - 1}의 순열이 아닙니다: {order}")
    m = m or unit_metric(g)

    if len(g.vertices) == 1:
        cut = cut_along(og, m, curve_vectors(og, []))
        return Decomposition(curve_vectors(og, []), cut.stable, cut.pieces)

    lifted_words = []
    base = cut_along(og, m, curve_vectors(og, []))
    work = list(base.pieces)
    for v in order[:-1]:
        dart = g.vertices[v][0]
        index = next(i for i, p in enumerate(work) if dart in p.darts)
        piece = work[index]
        if len(piece.graph.graph.vertices) < 2:
            continue
        local_v = piece.graph.graph.vertex_of[piece.local_dart(dart)]
        gamma = gamma_plus(piece.graph, local_v)
        for word in gamma.components:
            darts, tags = lift_word(piece, word)
            lifted_words.append(CurveWord(darts, tags))
        sub = cut_along(
            piece.graph,
            piece.metric,
            gamma,
            lift=lambda p, tag, piece=piece: piece.steps[(p, tag)],
        )
        remapped = [
            CutPiece(
                s.graph,
                s.metric,
                tuple(piece.darts[d] for d in s.darts),
                s.slots,
                s.steps,
            )
            for s in sub.pieces
        ]
        work[index:index + 1] = remapped

    curves = curve_vectors(og, lifted_words)
    if not curves.simple:
        raise RuntimeError("분해 곡선의 합집합이 단순하지 않습니다")
    cut = cut_along(og, m, curves)

    position = {}
    for pi, piece in enumerate(cut.pieces):
        if len(piece.graph.graph.vertices) != 1:
            raise RuntimeError("분해 결과에 꼭짓점이 둘 이상인 성분이 있습니다")
        position[g.vertex_of[piece.darts[0]]] = pi
    pieces = tuple(cut.pieces[position[v]] for v in order)
    stable = _stable_of_pieces(pieces)

    acyclic, _ = is_acyclic(stable)
    if not acyclic or any(
        tail >= head for tail, head in map(stable.edge_direction, range(len(stable.edges)))
    ):
        raise RuntimeError("분해 안정 그래프가 꼭짓점 순서와 맞지 않습니다")
    return Decomposition(curves, stable, pieces)


class PantType(NamedTuple):
    """유계 바지의 접합 유형과 바지에 놓인 원래 경계 라벨"""

    kind: int
    positive_labels: tuple[int, ...]
    negative_labels: tuple[int, ...]
    curves: int


def bounded_pants_classify(og: OrientedRibbonGraph, v: int) -> PantType:
    """Γ_v⁺로 떼어 낸 유계 바지를 재귀식의 네 가지 접합 유형으로 분류

    1: 양의 경계 둘 + 곡선 하나
    2: 양의 경계 하나 + 음의 경계 하나 + 곡선 하나
    3: 양의 경계 하나 + 곡선 둘 (비분리, 종수 감소)
    4: 양의 경계 하나 + 곡선 둘 (분리)

    Raises:
        NotFourValent: 4가가 아닌 그래프
    """
    if not is_four_valent(og.graph):
        raise NotFourValent("유계 바지 분류는 4가 그래프에서만 정의됩니다")
    gamma = gamma_plus(og, v)
    cut = cut_along(og, unit_metric(og.graph), gamma)
    dart = og.graph.vertices[v][0]
    pant = next(p for p in cut.pieces if dart in p.darts)

    pos = tuple(sorted(s.label for s in pant.slots if s.kind == LEG and s.sign > 0))
    neg = tuple(sorted(s.label for s in pant.slots if s.kind == LEG and s.sign < 0))
    curves = sum(1 for s in pant.slots if s.kind == EDGE)

    if len(pos) == 2 and curves == 1:
        kind = 1
    elif len(pos) == 1 and len(neg) == 1 and curves == 1:
        kind = 2
    elif len(pos) == 1 and curves == 2:
        kind = 3 if len(cut.pieces) == 2 else 4
    else:
        raise RuntimeError(f"예상하지 못한 바지 구성: +{pos}, -{neg}, 곡선 {curves}개")
    return PantType(kind, pos, neg, curves)


# ============================================
# 선형 대수: T_R, K_R, Ĥ_R, W_R
# ============================================
def _integral(vector) -> tuple[int, ...]:
    """유리 벡터를 원시 정수 벡터로"""
    values = [sp.Rational(v) for v in vector]
    denom = 1
    for v in values:
        denom = sp.ilcm(denom, v.q)
    ints = [int(v * denom) for v in values]
    common = 0
    for v in ints:
        common = sp.igcd(common, v)
    if common:
        ints = [v // common for v in ints]
    return tuple(ints)


@dataclass(frozen=True)
class LinearData:
    """T_R 위의 경계 미분, K_R, Ĥ_R 와 모서리 공간 W_R"""

    edge_count: int
    boundary_forms: tuple[tuple[int, ...], ...]
    rank_dl: int
    kernel_basis: tuple[tuple[int, ...], ...]
    h_rank: int
    hat_basis: tuple[tuple[int, ...], ...]
    w_basis: tuple[tuple[int, ...], ...]

    @property
    def dims(self) -> dict:
        return {
            "T": self.edge_count,
            "dl": self.rank_dl,
            "K": len(self.kernel_basis),
            "H_hat": len(self.hat_basis),
            "W": len(self.w_basis),
        }


def w_constraints(og: OrientedRibbonGraph) -> sp.Matrix:
    """z_{s2 s1 e} + z_e = z_{s2 e} + z_{s1 e} (dart마다 한 행)"""
    g = og.graph
    n = g.n_darts
    rows = []
    for e in range(n):
        row = [0] * n
        row[g.s2[g.s1[e]]] += 1
        row[e] += 1
        row[g.s2[e]] -= 1
        row[g.s1[e]] -= 1
        rows.append(row)
    return sp.Matrix(rows)


def linear_data(og: OrientedRibbonGraph) -> LinearData:
    """경계 미분의 계수, K_R/Ĥ_R/W_R 정수 기저 계산"""
    g = og.graph
    forms = boundary_matrix(og)
    dl = sp.Matrix(forms)
    kernel = tuple(_integral(v) for v in dl.nullspace())

    xis = [xi_plus(og, v) for v in range(len(g.vertices))]
    hat = []
    if xis:
        columns = sp.Matrix(xis).T
        _, pivots = columns.rref()
        hat = [xis[i] for i in pivots]

    w = tuple(_integral(v) for v in w_constraints(og).nullspace())
    return LinearData(
        len(g.edges),
        tuple(tuple(r) for r in forms),
        dl.rank(),
        kernel,
        len(hat),
        tuple(hat),
        w,
    )


def is_irreducible(og: OrientedRibbonGraph) -> bool:
    """K_R = 0 (정수 허용 곡선이 없음)"""
    return not linear_data(og).kernel_basis


def is_minimal(og: OrientedRibbonGraph) -> bool:
    return len(og.graph.vertices) == 1


def x_of_z(og: OrientedRibbonGraph, z: Sequence) -> tuple:
    """x_e = z_p - z_{s2 p} (p는 에지의 양의 dart)"""
    g = og.graph
    result = []
    for e in range(len(g.edges)):
        p = og.edge_positive_dart(e)
        result.append(sp.Rational(z[p]) - sp.Rational(z[g.s2[p]]))
    return tuple(result)


def y_of_z(og: OrientedRibbonGraph, z: Sequence) -> tuple:
    """y_e = z_{s0⁻¹ p} + z_p (p는 에지의 양의 dart)"""
    g = og.graph
    result = []
    for e in range(len(g.edges)):
        p = og.edge_positive_dart(e)
        result.append(sp.Rational(z[g.s0_inv[p]]) + sp.Rational(z[p]))
    return tuple(result)


# ============================================
# 쌍대 형식 Ω_R
# ============================================
def omega_matrix(og: OrientedRibbonGraph) -> sp.Matrix:
    """T_R 위의 Ω = -½ Σ_β ω_β, ω_β(u, w) = Σ_{i<j} (u_i w_j - u_j w_i)"""
    g = og.graph
    size = len(g.edges)
    omega = sp.zeros(size, size)
    for face in g.faces:
        edges = [g.edge_of[d] for d in face]
        for i in range(len(edges)):
            for j in range(i + 1, len(edges)):
                omega[edges[i], edges[j]] += sp.Rational(-1, 2)
                omega[edges[j], edges[i]] -= sp.Rational(-1, 2)
    return omega


def _bilinear(matrix: sp.Matrix, u, w):
    return (sp.Matrix([list(u)]) * matrix * sp.Matrix(list(w)))[0, 0]


def pairing_variants(og: OrientedRibbonGraph, u, w) -> dict:
    """W_R의 두 벡터에 대한 네 가지 좌표 공식 값"""
    g = og.graph
    n = g.n_darts
    u = [sp.Rational(v) for v in u]
    w = [sp.Rational(v) for v in w]
    face_form = -sp.Rational(1, 2) * sum(u[d] * w[g.s2[d]] - u[g.s2[d]] * w[d] for d in range(n))
    vertex_form = sp.Rational(1, 2) * sum(u[d] * w[g.s0[d]] - u[g.s0[d]] * w[d] for d in range(n))
    xu, xw = x_of_z(og, u), x_of_z(og, w)
    yu, yw = y_of_z(og, u), y_of_z(og, w)
    xy_form = -sp.Rational(1, 2) * sum(a * d - b * c for a, b, c, d in zip(xu, yu, xw, yw))
    kontsevich = _bilinear(omega_matrix(og), xu, xw)
    return {
        "face_z": face_form,
        "vertex_z": vertex_form,
        "boundary_omega": kontsevich,
        "x_wedge_y": xy_form,
    }


@dataclass(frozen=True)
class PairingData:
    omega_t: sp.Matrix
    omega_k: sp.Matrix
    kernel: tuple[tuple[int, ...], ...]
    kernel_is_hat: bool
    nondegenerate: bool
    variants_agree: bool


def pairing(og: OrientedRibbonGraph, lin: LinearData | None = None) -> PairingData:
    """Ω를 K_R로 제한하고 핵, 비퇴화성, 공식 일치를 검사"""
    lin = lin or linear_data(og)
    omega_t = omega_matrix(og)
    if lin.kernel_basis:
        basis = sp.Matrix(lin.kernel_basis).T
        omega_k = basis.T * omega_t * basis
        kernel = tuple(_integral(basis * v) for v in omega_k.nullspace())
    else:
        omega_k = sp.zeros(0, 0)
        kernel = ()

    if omega_k != -omega_k.T:
        raise RuntimeError("Ω|K가 반대칭이 아닙니다")

    hat = list(lin.hat_basis)
    if hat or kernel:
        combined = sp.Matrix(list(kernel) + hat)
        kernel_is_hat = len(kernel) == len(hat) == combined.rank()
    else:
        kernel_is_hat = True

    agree = True
    for i, u in enumerate(lin.w_basis):
        for w in lin.w_basis[i + 1:]:
            values = set(pairing_variants(og, u, w).values())
            if len(values) != 1:
                agree = False
                logger.warning(f"Ω 좌표 공식 불일치: {u}, {w} → {values}")
    return PairingData(omega_t, omega_k, kernel, kernel_is_hat, not kernel, agree)


def hamiltonian_check(
    og: OrientedRibbonGraph,
    c: MultiCurveData,
    lin: LinearData | None = None,
    m: Metric | None = None,
) -> bool:
    """K_R 위에서 Ω(x(c), ·) = dl_c 인지 정확히 검사

    m이 없으면 dl_c = Σ_e y_e(c) dm_e 를 그대로 씁니다. m이 주어지면 각 K_R 방향 k에 대해
    메트릭 m에서의 길이 차 l_c(m + k) - l_c(m)을 dl_c(k)로 사용합니다.
    l_c가 m에 대해 선형이므로 두 방식의 결과는 같습니다.

    Raises:
        NotSimple: c가 단순하지 않음
        RibbonError: m의 길이 개수가 맞지 않거나 0 이하
    """
    require_simple(c)
    lin = lin or linear_data(og)
    if m is not None:
        m = make_metric(og.graph, m)
        base = curve_length(og, m, c)
    omega = omega_matrix(og)
    x = [sp.Rational(v) for v in c.x]
    y = [sp.Rational(v) for v in c.y]
    for k in lin.kernel_basis:
        lhs = _bilinear(omega, x, k)
        if m is None:
            rhs = sum(a * b for a, b in zip(y, k))
        else:
            shifted = tuple(a + b for a, b in zip(m, k))
            rhs = sp.Rational(curve_length(og, shifted, c) - base)
        if lhs != rhs:
            logger.debug(f"해밀토니안 불일치: k={k}, Ω={lhs}, dl={rhs}")
            return False
    return True


def random_admissible_curves(
    og: OrientedRibbonGraph,
    count: int,
    rng: random.Random,
    max_length: int | None = None,
    attempts: int = 2000,
) -> list[MultiCurveData]:
    """무작위 s⁺/s⁻ 보행으로 얻은 단순하고 경계와 평행하지 않은 곡선"""
    g = og.graph
    max_length = max_length or 3 * len(g.edges)
    found = {}
    positives = og.positive_darts
    for _ in range(attempts):
        if len(found) >= count:
            break
        start = rng.choice(positives)
        darts, tags = [], []
        d = start
        for _ in range(max_length):
            tag = rng.choice((PLUS, MINUS))
            darts.append(d)
            tags.append(tag)
            d = step(og, d, tag)
            if d == start and rng.random() < 0.5:
                break
        if d != start:
            continue
        word = CurveWord(tuple(darts), tuple(tags))
        if word.is_peripheral() or word.cyclic_key() in found:
            continue
        data = curve_vectors(og, [word])
        if data.simple:
            found[word.cyclic_key()] = data
    return list(found.values())


# ============================================
# 직렬화
# ============================================
def curves_to_dict(c: MultiCurveData) -> dict:
    return {
        "components": [
            {
                "word": [[d, t] for d, t in zip(w.darts, w.tags)],
                "weight": f"{w.weight.numerator}/{w.weight.denominator}",
            }
            for w in c.components
        ]
    }


def curves_from_dict(og: OrientedRibbonGraph, data: dict) -> MultiCurveData:
    words = []
    for comp in data.get("components", []):
        darts = [int(d) for d, _ in comp["word"]]
        tags = [t for _, t in comp["word"]]
        words.append(make_word(og, darts, tags, Fraction(comp.get("weight", "1/1"))))
    return curve_vectors(og, words)


def curves_to_json(c: MultiCurveData) -> str:
    return json.dumps(curves_to_dict(c), ensure_ascii=False, indent=2)
