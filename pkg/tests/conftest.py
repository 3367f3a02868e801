"""
tests/ 디렉토리 전용 conftest

공통 픽스처는 루트 conftest.py에 정의되어 있습니다.
이 파일에는 단위 테스트 전용 픽스처만 추가합니다.
"""

import pytest


@pytest.fixture
def g11_json(tmp_path, g11_graph):
    """G11 그래프 JSON 파일 (꼭짓점 이름 u, v)"""
    from ribbon_core import save_graph
    path = tmp_path / "g11.json"
    save_graph(g11_graph, path)
    return path
