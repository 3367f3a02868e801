"""
루트 conftest - 전체 테스트에서 공유하는 픽스처

순열은 이미지 튜플로 적습니다 (s[d] = d의 상).
"""

from fractions import Fraction

import pytest


@pytest.fixture
def q_graph():
    """바지 Q: s0=(0 1 2 3), s1=(0 1)(2 3), 유형 (0, 1, 2)"""
    from ribbon_core import RibbonGraph, orient
    return orient(RibbonGraph((1, 2, 3, 0), (1, 0, 3, 2)))


@pytest.fixture
def q_prime_graph(q_graph):
    """Q′: Q의 부호 반전, 유형 (0, 2, 1)"""
    return q_graph.reversed()


@pytest.fixture
def torus_graph():
    """T: s0=(0 2 1 3), s1=(0 1)(2 3), 면 하나 (방향 없음)"""
    from ribbon_core import RibbonGraph
    return RibbonGraph((2, 3, 1, 0), (1, 0, 3, 2))


@pytest.fixture
def g11_graph():
    """G11: 꼭짓점 u=(0 1 2 3), v=(4 5 6 7), s1=(0 4)(1 5)(2 6)(3 7), 유형 (1, 1, 1)"""
    from ribbon_core import RibbonGraph, orient
    g = RibbonGraph((1, 2, 3, 0, 5, 6, 7, 4), (4, 5, 6, 7, 0, 1, 2, 3))
    return orient(g, vertex_names=("u", "v"))


@pytest.fixture
def h_graph():
    """H: G11과 같은 s0, s1=(0 5)(2 7)(1 4)(3 6), 유형 (0, 2, 2)"""
    from ribbon_core import RibbonGraph, orient
    g = RibbonGraph((1, 2, 3, 0, 5, 6, 7, 4), (5, 4, 7, 6, 1, 0, 3, 2))
    return orient(g, vertex_names=("u", "v"))


@pytest.fixture
def unit_g11_metric(g11_graph):
    return tuple(Fraction(1) for _ in g11_graph.graph.edges)


@pytest.fixture
def tmp_cache(tmp_path, monkeypatch):
    """임시 카탈로그 캐시 디렉토리"""
    cache_dir = tmp_path / "cache"
    monkeypatch.setattr("catalog_cache.CACHE_DIR", cache_dir)
    monkeypatch.setattr("catalog_cache.CACHE_INDEX_FILE", cache_dir / "index.json")
    return cache_dir
