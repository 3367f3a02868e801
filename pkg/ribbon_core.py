"""
리본 그래프 핵심 모듈

하프 에지(dart) 순열 (s0, s1)로 표현한 조합적 리본 그래프와
방향(부호 함수 ε), 메트릭, 경계 길이, 자기동형군 크기, 정규 키를 다룹니다.
순열은 오른쪽에서 왼쪽으로 합성하며 면 순열은 s2 = s1 ∘ s0⁻¹ 입니다.
"""

import json
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import NamedTuple, Sequence

from errors import (
    Disconnected,
    FixedPoint,
    LabelViolation,
    NotInvolution,
    NotOrientable,
    NotPermutation,
    OddEuler,
    ResidueViolation,
    RibbonError,
)

logger = logging.getLogger(__name__)

Perm = tuple[int, ...]


# ============================================
# 순열 유틸리티
# ============================================
def compose(p: Sequence[int], q: Sequence[int]) -> Perm:
    """합성 p ∘ q (q를 먼저 적용)"""
    return tuple(p[i] for i in q)


def inverse(p: Sequence[int]) -> Perm:
    """역순열"""
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def cycles(p: Sequence[int]) -> list[tuple[int, ...]]:
    """순열의 사이클 목록

    각 사이클은 가장 작은 원소에서 시작하며,
    목록은 대표 원소(최솟값) 순으로 정렬됩니다.
    """
    seen = [False] * len(p)
    result = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cycle = []
        d = start
        while not seen[d]:
            seen[d] = True
            cycle.append(d)
            d = p[d]
        result.append(tuple(cycle))
    return result


def _is_permutation(p: Sequence[int], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


# ============================================
# 리본 그래프
# ============================================
@dataclass(frozen=True)
class RibbonGraph:
    """조합적 리본 그래프 (XR, s0, s1)

    s0: 꼭짓점 사이클, s1: 에지 짝짓기.
    꼭짓점/에지/면 번호는 대표 dart(최솟값) 순서를 따릅니다.
    """

    s0: Perm
    s1: Perm

    def __post_init__(self):
        object.__setattr__(self, "s0", tuple(int(x) for x in self.s0))
        object.__setattr__(self, "s1", tuple(int(x) for x in self.s1))

    @property
    def n_darts(self) -> int:
        return len(self.s0)

    @cached_property
    def s0_inv(self) -> Perm:
        return inverse(self.s0)

    @cached_property
    def s2(self) -> Perm:
        return compose(self.s1, self.s0_inv)

    @cached_property
    def s2_inv(self) -> Perm:
        return inverse(self.s2)

    @cached_property
    def vertices(self) -> list[tuple[int, ...]]:
        return cycles(self.s0)

    @cached_property
    def edges(self) -> list[tuple[int, ...]]:
        return cycles(self.s1)

    @cached_property
    def faces(self) -> list[tuple[int, ...]]:
        return cycles(self.s2)

    @cached_property
    def vertex_of(self) -> tuple[int, ...]:
        return _index_map(self.vertices, self.n_darts)

    @cached_property
    def edge_of(self) -> tuple[int, ...]:
        return _index_map(self.edges, self.n_darts)

    @cached_property
    def face_of(self) -> tuple[int, ...]:
        return _index_map(self.faces, self.n_darts)


def _index_map(orbits: list[tuple[int, ...]], n: int) -> tuple[int, ...]:
    index = [0] * n
    for i, orbit in enumerate(orbits):
        for d in orbit:
            index[d] = i
    return tuple(index)


def _orbit(gens: Sequence[Sequence[int]], start: int) -> set[int]:
    """생성자들로 도달 가능한 dart 집합 (BFS)"""
    seen = {start}
    queue = deque([start])
    while queue:
        d = queue.popleft()
        for p in gens:
            nxt = p[d]
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def validate_graph(g: RibbonGraph) -> list[RibbonError]:
    """리본 그래프 공리 검증

    Args:
        g: 검증할 그래프

    Returns:
        위반 목록 (빈 리스트면 Ok)
    """
    n = len(g.s0)
    if n == 0 or not _is_permutation(g.s0, n) or not _is_permutation(g.s1, n):
        return [NotPermutation(f"s0, s1은 길이 {n}의 순열이어야 합니다")]

    violations: list[RibbonError] = []
    fixed = [d for d in range(n) if g.s1[d] == d]
    if fixed:
        violations.append(FixedPoint(f"s1의 고정점: {fixed}"))
    if any(g.s1[g.s1[d]] != d for d in range(n)):
        violations.append(NotInvolution("s1 ∘ s1 ≠ id"))
    if violations:
        return violations

    product = compose(g.s0, compose(g.s1, g.s2))
    if product != tuple(range(n)):
        raise RuntimeError("s0 ∘ s1 ∘ s2 ≠ id: 합성 규약 오류")

    if len(_orbit((g.s0, g.s1), 0)) != n:
        violations.append(Disconnected("<s0, s1>이 dart 집합에 추이적으로 작용하지 않습니다"))
    return violations


def require_valid(g: RibbonGraph) -> RibbonGraph:
    """검증 후 첫 번째 위반을 예외로 던짐"""
    violations = validate_graph(g)
    if violations:
        raise violations[0]
    return g


class Topology(NamedTuple):
    V: int
    E: int
    F: int
    genus: int
    n: int


def topology(g: RibbonGraph) -> Topology:
    """꼭짓점/에지/면 개수와 종수

    Raises:
        OddEuler: 2 - (V - E + F)가 음수이거나 홀수
    """
    V, E, F = len(g.vertices), len(g.edges), len(g.faces)
    twice_genus = 2 - (V - E + F)
    if twice_genus < 0 or twice_genus % 2:
        raise OddEuler(f"V - E + F = {V - E + F} 에서 정수 종수를 얻을 수 없습니다")
    return Topology(V, E, F, twice_genus // 2, F)


def decoration(g: RibbonGraph) -> dict[int, int]:
    """차수별 꼭짓점 개수 μ_R"""
    counts = Counter(len(v) for v in g.vertices)
    return dict(sorted(counts.items()))


def is_four_valent(g: RibbonGraph) -> bool:
    return all(len(v) == 4 for v in g.vertices)


# ============================================
# 방향 (부호 함수)
# ============================================
def detect_orientation(g: RibbonGraph) -> tuple[int, ...] | None:
    """ε∘s2 = ε, ε∘s1 = -ε 를 만족하는 부호 함수 탐색

    dart 0(가장 작은 dart를 가진 면)이 양수가 되도록 정규화합니다.

    Returns:
        dart별 부호 튜플, 방향을 줄 수 없으면 None
    """
    n = g.n_darts
    eps = [0] * n
    eps[0] = 1
    queue = deque([0])
    while queue:
        d = queue.popleft()
        for nxt, sign in ((g.s2[d], eps[d]), (g.s2_inv[d], eps[d]), (g.s1[d], -eps[d])):
            if eps[nxt] == 0:
                eps[nxt] = sign
                queue.append(nxt)
            elif eps[nxt] != sign:
                return None
    if 0 in eps:
        raise Disconnected("연결되지 않은 그래프에는 방향을 정할 수 없습니다")
    return tuple(eps)


def orientations(g: RibbonGraph) -> list[tuple[int, ...]]:
    """가능한 두 방향 (서로 부호 반전), 없으면 빈 리스트"""
    eps = detect_orientation(g)
    if eps is None:
        return []
    return [eps, tuple(-s for s in eps)]


@dataclass(frozen=True)
class OrientedRibbonGraph:
    """방향과 경계 라벨이 주어진 리본 그래프

    face_labels[i]는 면 i의 라벨이며, 양의 면끼리 1..n⁺,
    음의 면끼리 1..n⁻ 가 되어야 합니다.
    """

    graph: RibbonGraph
    eps: tuple[int, ...]
    face_labels: tuple[int, ...]
    vertex_names: tuple[str, ...] = field(default=())

    @property
    def n_darts(self) -> int:
        return self.graph.n_darts

    def face_sign(self, face: int) -> int:
        return self.eps[self.graph.faces[face][0]]

    @cached_property
    def positive_faces(self) -> list[int]:
        """라벨 순으로 정렬된 양의 면 번호"""
        faces = [i for i in range(len(self.graph.faces)) if self.face_sign(i) > 0]
        return sorted(faces, key=lambda i: self.face_labels[i])

    @cached_property
    def negative_faces(self) -> list[int]:
        faces = [i for i in range(len(self.graph.faces)) if self.face_sign(i) < 0]
        return sorted(faces, key=lambda i: self.face_labels[i])

    @property
    def n_plus(self) -> int:
        return len(self.positive_faces)

    @property
    def n_minus(self) -> int:
        return len(self.negative_faces)

    @cached_property
    def signature(self) -> tuple[int, int, int]:
        """(g, n⁺, n⁻)"""
        return (topology(self.graph).genus, self.n_plus, self.n_minus)

    @cached_property
    def positive_darts(self) -> list[int]:
        return [d for d in range(self.n_darts) if self.eps[d] > 0]

    def edge_positive_dart(self, edge: int) -> int:
        a, b = self.graph.edges[edge]
        return a if self.eps[a] > 0 else b

    def face_label_of_dart(self, dart: int) -> int:
        return self.face_labels[self.graph.face_of[dart]]

    def vertex_name(self, vertex: int) -> str:
        if self.vertex_names:
            return self.vertex_names[vertex]
        return str(vertex)

    def reversed(self) -> "OrientedRibbonGraph":
        """부호를 뒤집은 그래프 (양/음 경계의 역할이 바뀜)"""
        return OrientedRibbonGraph(
            self.graph, tuple(-s for s in self.eps), self.face_labels, self.vertex_names
        )


def default_face_labels(g: RibbonGraph, eps: Sequence[int]) -> tuple[int, ...]:
    """부호별로 면 대표 dart 순서대로 1부터 라벨 부여"""
    labels = []
    counters = {1: 0, -1: 0}
    for face in g.faces:
        sign = eps[face[0]]
        counters[sign] += 1
        labels.append(counters[sign])
    return tuple(labels)


def orient(
    g: RibbonGraph,
    eps: Sequence[int] | None = None,
    face_labels: Sequence[int] | None = None,
    vertex_names: Sequence[str] = (),
) -> OrientedRibbonGraph:
    """그래프에 방향과 라벨을 붙여 OrientedRibbonGraph 생성

    Args:
        g: 리본 그래프
        eps: 부호 함수 (None이면 detect_orientation 결과)
        face_labels: 면별 라벨 (None이면 기본 라벨)
        vertex_names: 꼭짓점 이름 (선택)

    Raises:
        NotOrientable: 방향이 없거나 주어진 ε가 공리를 위반
        LabelViolation: 라벨이 부호별로 1..n± 가 아님
    """
    require_valid(g)
    if eps is None:
        eps = detect_orientation(g)
        if eps is None:
            raise NotOrientable("ε∘s2 = ε, ε∘s1 = -ε 를 만족하는 부호가 없습니다")
    eps = tuple(int(s) for s in eps)

    n = g.n_darts
    if len(eps) != n or any(s not in (1, -1) for s in eps):
        raise NotOrientable("ε는 dart마다 ±1 이어야 합니다")
    if any(eps[g.s2[d]] != eps[d] or eps[g.s1[d]] != -eps[d] for d in range(n)):
        raise NotOrientable("ε가 ε∘s2 = ε 또는 ε∘s1 = -ε 를 위반합니다")

    if face_labels is None:
        face_labels = default_face_labels(g, eps)
    face_labels = tuple(int(x) for x in face_labels)
    if len(face_labels) != len(g.faces):
        raise LabelViolation("면 개수와 라벨 개수가 다릅니다")
    for sign in (1, -1):
        labels = sorted(face_labels[i] for i, f in enumerate(g.faces) if eps[f[0]] == sign)
        if labels != list(range(1, len(labels) + 1)):
            raise LabelViolation(f"부호 {sign:+d} 면 라벨이 1..{len(labels)} 이 아닙니다: {labels}")

    if vertex_names and len(vertex_names) != len(g.vertices):
        raise LabelViolation("꼭짓점 이름 개수가 꼭짓점 수와 다릅니다")
    return OrientedRibbonGraph(g, eps, face_labels, tuple(vertex_names))


def relabel(og: OrientedRibbonGraph, perm: Sequence[int]) -> OrientedRibbonGraph:
    """dart 치환 perm(old → new)으로 켤레시킨 동형 그래프

    부호, 면 라벨, 꼭짓점 이름은 함께 옮겨집니다.
    """
    g = og.graph
    n = g.n_darts
    s0 = [0] * n
    s1 = [0] * n
    eps = [0] * n
    for d in range(n):
        s0[perm[d]] = perm[g.s0[d]]
        s1[perm[d]] = perm[g.s1[d]]
        eps[perm[d]] = og.eps[d]
    h = RibbonGraph(tuple(s0), tuple(s1))
    back = inverse(perm)
    labels = tuple(og.face_label_of_dart(back[face[0]]) for face in h.faces)
    names = ()
    if og.vertex_names:
        names = tuple(og.vertex_names[g.vertex_of[back[v[0]]]] for v in h.vertices)
    return OrientedRibbonGraph(h, tuple(eps), labels, names)


# ============================================
# 메트릭과 경계 길이
# ============================================
Metric = tuple[Fraction, ...]


def make_metric(g: RibbonGraph, values: Sequence) -> Metric:
    """에지 번호 순서의 양의 유리수 길이

    Raises:
        RibbonError: 개수가 맞지 않거나 0 이하의 길이
    """
    m = tuple(Fraction(v) for v in values)
    if len(m) != len(g.edges):
        raise RibbonError(f"에지 {len(g.edges)}개에 길이 {len(m)}개가 주어졌습니다")
    if any(v <= 0 for v in m):
        raise RibbonError("모든 에지 길이는 양수여야 합니다")
    return m


def unit_metric(g: RibbonGraph) -> Metric:
    return tuple(Fraction(1) for _ in g.edges)


class Face(NamedTuple):
    darts: tuple[int, ...]
    sign: int
    label: int


@dataclass(frozen=True)
class BoundaryProfile:
    """부호/라벨이 붙은 면과 각 면의 길이"""

    faces: tuple[Face, ...]
    lengths: tuple[Fraction, ...]

    def length_of(self, sign: int, label: int) -> Fraction:
        for face, length in zip(self.faces, self.lengths):
            if face.sign == sign and face.label == label:
                return length
        raise KeyError((sign, label))

    def signed_lengths(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """라벨 순서의 (L⁺, L⁻)"""
        pos = sorted((f.label, l) for f, l in zip(self.faces, self.lengths) if f.sign > 0)
        neg = sorted((f.label, l) for f, l in zip(self.faces, self.lengths) if f.sign < 0)
        return tuple(l for _, l in pos), tuple(l for _, l in neg)


def boundary_lengths(og: OrientedRibbonGraph, m: Metric) -> BoundaryProfile:
    """면 길이 l_β = Σ_{d∈β} m_[d] 계산

    Raises:
        ResidueViolation: Σ ε(β) l_β ≠ 0 (방향 그래프에서는 도달 불가)
    """
    g = og.graph
    faces = []
    lengths = []
    for i, darts in enumerate(g.faces):
        faces.append(Face(darts, og.face_sign(i), og.face_labels[i]))
        lengths.append(sum((m[g.edge_of[d]] for d in darts), Fraction(0)))
    residue = sum(f.sign * l for f, l in zip(faces, lengths))
    if residue != 0:
        raise ResidueViolation(f"부호 있는 경계 길이의 합이 {residue} 입니다")
    return BoundaryProfile(tuple(faces), tuple(lengths))


# ============================================
# 동형 사상, 자기동형군, 정규 키
# ============================================
def _extend_iso(g: RibbonGraph, h: RibbonGraph, a: int, b: int) -> list[int] | None:
    """φ(a) = b 에서 시작해 s0, s1 과 가환인 dart 사상을 확장

    Returns:
        dart 사상 리스트, 모순이 생기면 None
    """
    n = g.n_darts
    if h.n_darts != n:
        return None
    phi = [-1] * n
    used = [False] * n
    phi[a] = b
    used[b] = True
    queue = deque([a])
    while queue:
        d = queue.popleft()
        for p, q in ((g.s0, h.s0), (g.s1, h.s1)):
            src, dst = p[d], q[phi[d]]
            if phi[src] == -1:
                if used[dst]:
                    return None
                phi[src] = dst
                used[dst] = True
                queue.append(src)
            elif phi[src] != dst:
                return None
    return phi


def automorphism_order(og: OrientedRibbonGraph) -> int:
    """각 라벨 경계를 보존하는 자기동형군의 크기

    작용이 자유로우므로 dart 0의 상 후보만 검사하면 됩니다.
    """
    g = og.graph
    count = 0
    for target in range(g.n_darts):
        if og.eps[target] != og.eps[0]:
            continue
        phi = _extend_iso(g, g, 0, target)
        if phi is None:
            continue
        if all(
            og.eps[phi[d]] == og.eps[d] and og.face_label_of_dart(phi[d]) == og.face_label_of_dart(d)
            for d in range(g.n_darts)
        ):
            count += 1
    if g.n_darts % count:
        raise RuntimeError(f"자기동형군 크기 {count}가 dart 수 {g.n_darts}를 나누지 않습니다")
    return count


def _encode_from(og: OrientedRibbonGraph, base: int) -> tuple:
    """base dart에서 BFS로 재번호한 (s0, s1, 부호/라벨) 인코딩"""
    g = og.graph
    new_index = {base: 0}
    order = [base]
    for d in order:
        for nxt in (g.s0[d], g.s1[d]):
            if nxt not in new_index:
                new_index[nxt] = len(order)
                order.append(nxt)
    s0 = tuple(new_index[g.s0[d]] for d in order)
    s1 = tuple(new_index[g.s1[d]] for d in order)
    decor = tuple((og.eps[d], og.face_label_of_dart(d)) for d in order)
    return (g.n_darts, s0, s1, decor)


def canonical_key(og: OrientedRibbonGraph) -> bytes:
    """부호/라벨을 보존하는 동형류의 정규 키"""
    best = min(_encode_from(og, base) for base in range(og.n_darts))
    return repr(best).encode("utf-8")


# ============================================
# JSON 입출력
# ============================================
def graph_to_dict(og: OrientedRibbonGraph, m: Metric | None = None) -> dict:
    """그래프 JSON 형식으로 변환

    {"darts": N, "s0": [...], "s1": [...],
     "labels": {"pos": {face_repr_dart: label}, "neg": {...}},
     "m": {edge_repr_dart: [num, den]}}
    """
    g = og.graph
    labels = {"pos": {}, "neg": {}}
    for i, face in enumerate(g.faces):
        key = "pos" if og.face_sign(i) > 0 else "neg"
        labels[key][str(face[0])] = og.face_labels[i]
    data = {
        "darts": g.n_darts,
        "s0": list(g.s0),
        "s1": list(g.s1),
        "labels": labels,
    }
    if og.vertex_names:
        data["vertex_names"] = list(og.vertex_names)
    if m is not None:
        data["m"] = {
            str(edge[0]): [value.numerator, value.denominator] for edge, value in zip(g.edges, m)
        }
    return data


def graph_from_dict(data: dict) -> tuple[OrientedRibbonGraph, Metric | None]:
    """JSON 딕셔너리에서 그래프(와 메트릭) 복원

    라벨이 있으면 "pos" 면이 양이 되도록 방향을 고릅니다.

    Raises:
        RibbonError 계열: 공리 위반, 라벨 불일치
    """
    try:
        n = int(data["darts"])
        g = RibbonGraph(tuple(data["s0"]), tuple(data["s1"]))
    except (KeyError, TypeError, ValueError) as e:
        raise NotPermutation(f"그래프 JSON 형식 오류: {e}") from e
    if g.n_darts != n:
        raise NotPermutation(f"darts={n} 이지만 s0 길이는 {g.n_darts} 입니다")
    require_valid(g)

    eps = detect_orientation(g)
    if eps is None:
        raise NotOrientable("방향을 줄 수 없는 그래프입니다")

    labels_data = data.get("labels")
    face_labels = None
    if labels_data:
        face_labels = [0] * len(g.faces)
        signs = {}
        for key, sign in (("pos", 1), ("neg", -1)):
            for dart, label in labels_data.get(key, {}).items():
                face = g.face_of[int(dart)]
                face_labels[face] = int(label)
                signs[face] = sign
        if len(signs) != len(g.faces):
            raise LabelViolation("모든 면에 라벨이 있어야 합니다")
        # 라벨의 부호 구분과 일치하도록 방향 선택
        if any(eps[g.faces[f][0]] != s for f, s in signs.items()):
            eps = tuple(-s for s in eps)
            if any(eps[g.faces[f][0]] != s for f, s in signs.items()):
                raise LabelViolation("pos/neg 라벨이 방향과 맞지 않습니다")

    og = orient(g, eps, face_labels, tuple(data.get("vertex_names", ())))

    metric = None
    if "m" in data:
        values = [None] * len(g.edges)
        for dart, (num, den) in data["m"].items():
            values[g.edge_of[int(dart)]] = Fraction(int(num), int(den))
        if any(v is None for v in values):
            raise RibbonError("모든 에지에 길이가 있어야 합니다")
        metric = make_metric(g, values)
    return og, metric


def load_graph(path: str | Path) -> tuple[OrientedRibbonGraph, Metric | None]:
    """그래프 JSON 파일 로드"""
    content = Path(path).read_text(encoding="utf-8")
    return graph_from_dict(json.loads(content))


def save_graph(og: OrientedRibbonGraph, path: str | Path, m: Metric | None = None):
    """그래프 JSON 파일 저장"""
    Path(path).write_text(
        json.dumps(graph_to_dict(og, m), ensure_ascii=False, indent=2),
        encoding="utf-8",
    )
