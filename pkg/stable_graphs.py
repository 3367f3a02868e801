"""
방향 안정 그래프

곡면 분해를 기록하는 방향 안정 그래프(성분의 종수, 부호 있는 슬롯,
슬롯 짝짓기 j, 라벨 다리)와 길이 원뿔 Λ_G 분석을 다룹니다.
흐름 방향은 음(−) 슬롯을 가진 성분에서 양(+) 슬롯을 가진 성분으로 향합니다.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple

import networkx as nx
import sympy as sp

from errors import (
    Disconnected,
    DirectionViolation,
    LabelViolation,
    RibbonError,
    SignViolation,
    StabilityViolation,
)

logger = logging.getLogger(__name__)

EDGE = "edge"
LEG = "leg"

# 에지 분류 (우선순위 순)
DEGENERATE = "degenerate"
CONSTANT = "constant"
BOUNDED = "bounded"
UNBOUNDED = "unbounded-nonconstant"


# ============================================
# 자료구조
# ============================================
class Slot(NamedTuple):
    sign: int
    kind: str
    label: int


class SlotRef(NamedTuple):
    component: int
    slot: int


@dataclass(frozen=True)
class Component:
    genus: int
    slots: tuple[Slot, ...]

    @property
    def euler(self) -> int:
        """2g - 2 + #slots (안정 조건: 양수)"""
        return 2 * self.genus - 2 + len(self.slots)


@dataclass(frozen=True)
class DirectedStableGraph:
    """방향 안정 그래프

    edges의 각 원소는 짝지어진 두 edge 슬롯의 참조입니다.
    """

    components: tuple[Component, ...]
    edges: tuple[tuple[SlotRef, SlotRef], ...] = ()

    def slot(self, ref: SlotRef) -> Slot:
        return self.components[ref.component].slots[ref.slot]

    def j(self, ref: SlotRef) -> SlotRef:
        """슬롯 짝짓기 대합"""
        for a, b in self.edges:
            if a == ref:
                return b
            if b == ref:
                return a
        raise KeyError(ref)

    def legs(self) -> list[tuple[SlotRef, Slot]]:
        result = []
        for ci, comp in enumerate(self.components):
            for si, slot in enumerate(comp.slots):
                if slot.kind == LEG:
                    result.append((SlotRef(ci, si), slot))
        return result

    def edge_direction(self, index: int) -> tuple[int, int]:
        """(tail, head): 음 슬롯 쪽 성분 → 양 슬롯 쪽 성분"""
        a, b = self.edges[index]
        if self.slot(a).sign < 0:
            return a.component, b.component
        return b.component, a.component

    def edge_label(self, index: int) -> int:
        a, _ = self.edges[index]
        return self.slot(a).label


def single_component(genus: int, pos_labels, neg_labels) -> DirectedStableGraph:
    """에지가 없는 단일 성분 안정 그래프"""
    slots = [Slot(1, LEG, l) for l in pos_labels] + [Slot(-1, LEG, l) for l in neg_labels]
    return DirectedStableGraph((Component(genus, tuple(slots)),), ())


# ============================================
# 검증
# ============================================
def validate_stable(sg: DirectedStableGraph) -> list[RibbonError]:
    """안정 그래프 공리 검증

    Returns:
        위반 목록 (빈 리스트면 Ok)
    """
    violations: list[RibbonError] = []
    paired = set()

    for a, b in sg.edges:
        sa, sb = sg.slot(a), sg.slot(b)
        if sa.kind != EDGE or sb.kind != EDGE:
            violations.append(LabelViolation(f"에지 {a}-{b}에 다리 슬롯이 포함되어 있습니다"))
        if sa.sign == sb.sign:
            violations.append(SignViolation(f"짝지어진 슬롯 {a}, {b}의 부호가 같습니다"))
        paired.update((a, b))

    for ci, comp in enumerate(sg.components):
        for si, slot in enumerate(comp.slots):
            if slot.kind == EDGE and SlotRef(ci, si) not in paired:
                violations.append(LabelViolation(f"슬롯 {(ci, si)}의 짝이 없습니다"))
        signs = {slot.sign for slot in comp.slots}
        if signs != {1, -1}:
            violations.append(DirectionViolation(f"성분 {ci}에 양/음 슬롯이 모두 있어야 합니다"))
        if comp.euler <= 0:
            violations.append(StabilityViolation(f"성분 {ci}: 2g-2+#slots = {comp.euler}"))

    for sign in (1, -1):
        labels = sorted(slot.label for _, slot in sg.legs() if slot.sign == sign)
        if labels != list(range(1, len(labels) + 1)):
            violations.append(LabelViolation(f"부호 {sign:+d} 다리 라벨이 1..n 이 아닙니다: {labels}"))

    if sg.components and not nx.is_connected(underlying_graph(sg)):
        violations.append(Disconnected("안정 그래프가 연결되어 있지 않습니다"))
    return violations


def underlying_graph(sg: DirectedStableGraph) -> nx.MultiGraph:
    """성분을 꼭짓점, 에지를 변으로 하는 무향 멀티그래프"""
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(sg.components)))
    for index in range(len(sg.edges)):
        tail, head = sg.edge_direction(index)
        graph.add_edge(tail, head, key=index)
    return graph


# ============================================
# 길이 원뿔 분석
# ============================================
@dataclass(frozen=True)
class ConeReport:
    """길이 원뿔 Λ_G 분석 결과

    coordinates: 좌표 이름 (에지 "e<k>", 다리 "+<label>" / "-<label>")
    extremal_rays: 원시 순환의 0/1 접속 벡터
    edge_classes: 에지별 분류
    constant_forms: 상수 에지 k → {(부호, 라벨): 계수}
    """

    dim: int
    expected_dim: int
    coordinates: tuple[str, ...]
    extremal_rays: tuple[tuple[int, ...], ...]
    edge_classes: tuple[str, ...]
    constant_forms: dict

    @property
    def degenerate(self) -> bool:
        return DEGENERATE in self.edge_classes or self.dim < self.expected_dim


def flow_digraph(sg: DirectedStableGraph) -> nx.DiGraph:
    """흐름 유향 그래프

    각 에지와 다리를 노드로 세분하고, source → 양의 다리 → 성분,
    성분 → 음의 다리 → sink, sink → source 복귀 호를 둡니다.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(("c", i) for i in range(len(sg.components)))
    graph.add_edge("sink", "source")
    for index in range(len(sg.edges)):
        tail, head = sg.edge_direction(index)
        graph.add_edge(("c", tail), ("e", index))
        graph.add_edge(("e", index), ("c", head))
    for ref, slot in sg.legs():
        node = ("leg", slot.sign, slot.label)
        if slot.sign > 0:
            graph.add_edge("source", node)
            graph.add_edge(node, ("c", ref.component))
        else:
            graph.add_edge(("c", ref.component), node)
            graph.add_edge(node, "sink")
    return graph


def _in_nontrivial_scc(graph: nx.DiGraph) -> set:
    nodes = set()
    for scc in nx.strongly_connected_components(graph):
        if len(scc) > 1:
            nodes.update(scc)
    return nodes


def _is_bridge(sg: DirectedStableGraph, index: int) -> bool:
    graph = underlying_graph(sg)
    tail, head = sg.edge_direction(index)
    if tail == head:
        return False
    graph.remove_edge(tail, head, key=index)
    return not nx.has_path(graph, tail, head)


def _constant_form(sg: DirectedStableGraph, index: int) -> dict:
    """다리 (부호, 라벨) → 계수. tail 쪽 다리의 부호 있는 합"""
    graph = underlying_graph(sg)
    tail, head = sg.edge_direction(index)
    graph.remove_edge(tail, head, key=index)
    tail_side = nx.node_connected_component(graph, tail)
    return {
        (slot.sign, slot.label): slot.sign
        for ref, slot in sg.legs()
        if ref.component in tail_side
    }


def cone_analysis(sg: DirectedStableGraph) -> ConeReport:
    """원뿔 차원, 극단 광선, 에지 분류 계산"""
    flow = flow_digraph(sg)
    coords = [("e", k) for k in range(len(sg.edges))]
    coords += [("leg", s.sign, s.label) for _, s in sorted(sg.legs(), key=lambda x: (-x[1].sign, x[1].label))]
    position = {node: i for i, node in enumerate(coords)}

    rays = set()
    for cycle in nx.simple_cycles(flow):
        vector = [0] * len(coords)
        for node in cycle:
            if node in position:
                vector[position[node]] = 1
        rays.add(tuple(vector))
    rays = tuple(sorted(rays, reverse=True))
    dim = sp.Matrix([list(r) for r in rays]).rank() if rays else 0

    on_cycle = _in_nontrivial_scc(flow)
    absolute = flow.subgraph(n for n in flow.nodes if n[0] in ("c", "e"))
    on_absolute = _in_nontrivial_scc(absolute)

    classes = []
    forms = {}
    for k in range(len(sg.edges)):
        node = ("e", k)
        if node not in on_cycle:
            classes.append(DEGENERATE)
        elif _is_bridge(sg, k):
            classes.append(CONSTANT)
            forms[k] = _constant_form(sg, k)
        elif node not in on_absolute:
            classes.append(BOUNDED)
        else:
            classes.append(UNBOUNDED)

    names = []
    for node in coords:
        if node[0] == "e":
            names.append(f"e{node[1]}")
        else:
            names.append(f"{'+' if node[1] > 0 else '-'}{node[2]}")

    expected = len(sg.edges) + len(sg.legs()) - len(sg.components)
    logger.debug(f"원뿔 분석: rays={len(rays)}, dim={dim}, expected={expected}, classes={classes}")
    return ConeReport(dim, expected, tuple(names), rays, tuple(classes), forms)


def is_acyclic(sg: DirectedStableGraph) -> tuple[bool, list[int] | None]:
    """절대 순환(에지만으로 된 유향 순환)이 없는지 판정

    Returns:
        (비순환 여부, 비순환이면 에지 순서를 확장하는 성분 순서)
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(sg.components)))
    for index in range(len(sg.edges)):
        tail, head = sg.edge_direction(index)
        if tail == head:
            return False, None
        graph.add_edge(tail, head)
    if not nx.is_directed_acyclic_graph(graph):
        return False, None
    return True, list(nx.lexicographical_topological_sort(graph))


# ============================================
# 비교 / 직렬화
# ============================================
def structure_key(sg: DirectedStableGraph) -> tuple:
    """에지 슬롯 라벨(곡선 번호)을 무시한 구조 키

    성분 순서는 보존하므로 순서가 정해진 분해 결과끼리 비교할 때 씁니다.
    """
    comps = tuple(
        (
            comp.genus,
            tuple(sorted((s.sign, s.kind, s.label if s.kind == LEG else 0) for s in comp.slots)),
        )
        for comp in sg.components
    )
    edges = tuple(sorted(sg.edge_direction(k) for k in range(len(sg.edges))))
    return comps, edges


def _slot_text(slot: Slot) -> str:
    sign = "+" if slot.sign > 0 else "-"
    prefix = "L" if slot.kind == LEG else "γ"
    return f"{sign}{prefix}{slot.label}"


def to_dot(sg: DirectedStableGraph, name: str = "StableGraph") -> str:
    """DOT 형식 (성분 노드 (g; +슬롯; -슬롯), 에지 − → +)"""
    lines = [f"digraph {name} {{"]
    for ci, comp in enumerate(sg.components):
        pos = ",".join(_slot_text(s) for s in comp.slots if s.sign > 0)
        neg = ",".join(_slot_text(s) for s in comp.slots if s.sign < 0)
        lines.append(f'  c{ci} [label="c{ci} ({comp.genus}; {pos}; {neg})"];')
    for k in range(len(sg.edges)):
        tail, head = sg.edge_direction(k)
        lines.append(f'  c{tail} -> c{head} [label="γ{sg.edge_label(k)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def stable_to_dict(sg: DirectedStableGraph) -> dict:
    return {
        "components": [
            {
                "genus": comp.genus,
                "slots": [{"sign": s.sign, "kind": s.kind, "label": s.label} for s in comp.slots],
            }
            for comp in sg.components
        ],
        "edges": [[list(a), list(b)] for a, b in sg.edges],
    }


def stable_from_dict(data: dict) -> DirectedStableGraph:
    components = tuple(
        Component(
            int(c["genus"]),
            tuple(Slot(int(s["sign"]), s["kind"], int(s["label"])) for s in c["slots"]),
        )
        for c in data["components"]
    )
    edges = tuple((SlotRef(*a), SlotRef(*b)) for a, b in data.get("edges", []))
    return DirectedStableGraph(components, edges)
