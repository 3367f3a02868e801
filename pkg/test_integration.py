"""
통합 테스트

그래프 JSON → 방향/분해/안정 그래프, 열거 → 오라클 → 재귀식,
항등식 → NDJSON, 전체 검증 파이프라인을 이어서 검증합니다.
"""

import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

# ============================================
# 마커 정의
# ============================================
pytestmark = [pytest.mark.integration]


# ============================================
# 1. 환경 테스트
# ============================================

class TestEnvironment:
    """환경 설정 검증"""

    def test_env_template_has_required_vars(self):
        """.env.template에 필수 변수가 포함되어야 합니다"""
        content = Path(".env.template").read_text(encoding="utf-8")
        for var in ["RIBBON_CACHE_DIR", "RIBBON_THREADS", "RIBBON_LOG_DIR", "RIBBON_SEED"]:
            assert var in content, f".env.template에 {var}가 없습니다."

    def test_required_files_exist(self):
        """필수 모듈 파일이 존재해야 합니다"""
        required_files = [
            "errors.py",
            "ribbon_core.py",
            "stable_graphs.py",
            "curve_surgery.py",
            "volumes.py",
            "volume_identities.py",
            "enumeration.py",
            "catalog_cache.py",
            "verify_suite.py",
            "cli.py",
            "check_setup.py",
        ]
        for filename in required_files:
            assert Path(filename).exists(), f"필수 파일 누락: {filename}"

    def test_gitignore_has_generated_entries(self):
        content = Path(".gitignore").read_text(encoding="utf-8")
        for entry in (".env", "venv/", ".ribbon_cache/", "logs/"):
            assert entry in content, f".gitignore에 {entry}가 없습니다."


# ============================================
# 2. 그래프 파일 → 분해
# ============================================

class TestGraphToDecomposition:
    """JSON 그래프에서 안정 그래프까지"""

    def test_g11_file_round(self, tmp_path, g11_graph):
        from curve_surgery import acyclic_decompose
        from ribbon_core import load_graph, save_graph
        from stable_graphs import cone_analysis, is_acyclic, validate_stable

        path = tmp_path / "g11.json"
        save_graph(g11_graph, path)
        og, metric = load_graph(path)
        assert og.signature == (1, 1, 1)
        assert metric is None

        for order in ([0, 1], [1, 0]):
            dec = acyclic_decompose(og, order)
            assert validate_stable(dec.stable) == []
            acyclic, topo = is_acyclic(dec.stable)
            assert acyclic and topo == [0, 1]
            report = cone_analysis(dec.stable)
            assert not report.degenerate

    def test_every_order_on_h(self, h_graph):
        from curve_surgery import acyclic_decompose
        from stable_graphs import is_acyclic
        for order in ([0, 1], [1, 0]):
            dec = acyclic_decompose(h_graph, order)
            assert is_acyclic(dec.stable)[0]
            assert len(dec.pieces) == 2

    def test_random_curves_hamiltonian(self, g11_graph):
        from curve_surgery import hamiltonian_check, linear_data, random_admissible_curves
        lin = linear_data(g11_graph)
        curves = random_admissible_curves(g11_graph, 10, random.Random(20240601))
        assert curves
        assert all(hamiltonian_check(g11_graph, c, lin) for c in curves)


# ============================================
# 3. 열거 → 오라클 → 재귀식
# ============================================

class TestEnumerationAgainstRecursion:
    """독립 계산 경로의 일치"""

    def test_pants_catalogs(self, tmp_cache):
        from catalog_cache import cached_catalog
        for signature in [(0, 1, 2), (0, 2, 1)]:
            catalog = cached_catalog(*signature)
            assert len(catalog) == 1
            assert catalog.entries[0].aut_order == 1

    @pytest.mark.slow
    @pytest.mark.parametrize("signature,L_plus,L_minus", [
        ((0, 3, 1), [1, 2, 3], [6]),
        ((0, 1, 3), [6], [1, 2, 3]),
        ((0, 2, 2), [3, 3], [2, 4]),
        ((1, 1, 1), [4], [4]),
    ])
    def test_oracle_equals_recursion(self, signature, L_plus, L_minus):
        from enumeration import volume_oracle
        from volumes import make_point, z_evaluate
        oracle = volume_oracle(*signature, L_plus, L_minus)
        assert oracle == z_evaluate(*signature, make_point(L_plus, L_minus))

    def test_hurwitz_reconstructs_recursion(self):
        from enumeration import hurwitz_table
        from volumes import f_polynomial
        for g, n in [(0, 2), (0, 3), (1, 1)]:
            assert hurwitz_table(g, n).reconstruct(g, n) == f_polynomial(g, n)

    def test_closed_forms(self):
        from volumes import f_polynomial, make_point, z_evaluate
        L = [Fraction(2), Fraction(7, 3), Fraction(1, 2), Fraction(4)]
        assert f_polynomial(0, 4)(*L) == sum(L) ** 2
        assert z_evaluate(0, 1, 3, make_point([sum(L[:3])], L[:3])) == sum(L[:3])


# ============================================
# 4. 항등식 → NDJSON
# ============================================

class TestIdentityFindings:
    """항등식 검사 결과 파일"""

    def test_findings_written(self, tmp_path):
        from volume_identities import identity_checks
        report = identity_checks(2, samples=1, seed=1)
        path = tmp_path / "findings.ndjson"
        report.write(path)
        records = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
        assert len(records) == len(report.findings)
        assert {r["check"] for r in records} >= {"time_inversion", "homogeneity", "continuity"}
        assert all(r["passed"] for r in records)


# ============================================
# 5. 전체 검증 파이프라인
# ============================================

class TestVerifyPipeline:
    """verify_suite 전체 실행"""

    @pytest.mark.slow
    def test_run_verification_writes_logs(self, tmp_path, monkeypatch):
        import verify_suite
        monkeypatch.setattr(verify_suite, "LOGS_DIR", tmp_path / "logs")

        ok = verify_suite.run_verification(depth=2, seed=7, max_entry=4)
        assert ok

        logs = list((tmp_path / "logs").glob("verify_*.log"))
        findings = list((tmp_path / "logs").glob("findings_*.ndjson"))
        assert len(logs) == 1 and len(findings) == 1
        assert "검증 정상 완료" in logs[0].read_text(encoding="utf-8")
