"""
환경 점검 스크립트 단위 테스트

RIBBON_* 값 검사, 캐시 색인 검사, 계산 점검과 종료 코드를 검증합니다.
"""

import json

import pytest


@pytest.fixture
def fresh_results():
    import check_setup
    check_setup.results.clear()
    yield check_setup.results
    check_setup.results.clear()


class TestSettings:
    """RIBBON_* 설정값 검사"""

    def test_bad_threads_and_seed(self, fresh_results, monkeypatch, tmp_path):
        import check_setup
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("RIBBON_THREADS", "0")
        monkeypatch.setenv("RIBBON_SEED", "abc")
        monkeypatch.delenv("RIBBON_CACHE_DIR", raising=False)
        monkeypatch.delenv("RIBBON_LOG_DIR", raising=False)
        check_setup.check_settings()
        assert fresh_results["fail"] == 2

    def test_valid_values(self, fresh_results, monkeypatch, tmp_path):
        import check_setup
        monkeypatch.chdir(tmp_path)
        (tmp_path / "cache").mkdir()
        (tmp_path / "logs").mkdir()
        monkeypatch.setenv("RIBBON_THREADS", "4")
        monkeypatch.setenv("RIBBON_SEED", "-3")
        monkeypatch.setenv("RIBBON_CACHE_DIR", "cache")
        monkeypatch.setenv("RIBBON_LOG_DIR", "logs")
        check_setup.check_settings()
        assert fresh_results["fail"] == 0
        assert fresh_results["pass"] == 4

    def test_log_dir_is_file(self, fresh_results, monkeypatch, tmp_path):
        import check_setup
        monkeypatch.chdir(tmp_path)
        (tmp_path / "logs").write_text("", encoding="utf-8")
        monkeypatch.setenv("RIBBON_LOG_DIR", "logs")
        check_setup.check_settings()
        assert fresh_results["fail"] == 1


class TestCacheIndexCheck:
    """카탈로그 캐시 색인 검사"""

    def test_missing_index_warns(self, fresh_results, tmp_cache):
        import check_setup
        check_setup.check_cache_index()
        assert fresh_results["warn"] == 1
        assert fresh_results["fail"] == 0

    def test_corrupt_index_warns(self, fresh_results, tmp_cache):
        import check_setup
        tmp_cache.mkdir(parents=True)
        (tmp_cache / "index.json").write_text("[]", encoding="utf-8")
        check_setup.check_cache_index()
        assert fresh_results["warn"] == 1
        assert fresh_results["pass"] == 0

    def test_lost_catalog_and_old_version(self, fresh_results, tmp_cache):
        import check_setup
        tmp_cache.mkdir(parents=True)
        index = {"version": "0", "catalogs": {"catalog_gone.json": {"type": [0, 2, 2]}}, "history": []}
        (tmp_cache / "index.json").write_text(json.dumps(index), encoding="utf-8")
        check_setup.check_cache_index()
        assert fresh_results["warn"] == 2
        assert fresh_results["pass"] == 1

    def test_stored_catalog_passes(self, fresh_results, tmp_cache):
        import check_setup
        from catalog_cache import store_catalog
        from enumeration import enumerate_graphs
        store_catalog(enumerate_graphs(0, 1, 2))
        check_setup.check_cache_index()
        assert fresh_results["pass"] == 1
        assert fresh_results["warn"] == 0


class TestComputationAndExit:
    """계산 점검과 종료 코드"""

    def test_computation_passes(self, fresh_results):
        import check_setup
        check_setup.check_computation()
        assert fresh_results["pass"] == 2
        assert fresh_results["fail"] == 0

    def test_main_exit_code(self, fresh_results, monkeypatch):
        import check_setup
        monkeypatch.setattr(check_setup, "check_runtime", lambda: check_setup.check_fail("가짜 실패", "무시"))
        monkeypatch.setattr(check_setup, "check_settings", lambda: None)
        monkeypatch.setattr(check_setup, "check_cache_index", lambda: None)
        monkeypatch.setattr(check_setup, "check_computation", lambda: None)
        assert check_setup.main() == 1
