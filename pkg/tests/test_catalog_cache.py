"""
카탈로그 캐시 단위 테스트

색인 초기화/복구, 카탈로그 저장/로드, 이력 보관 개수를 검증합니다.
"""

import json


class TestCacheIndex:
    """캐시 색인 테스트"""

    def test_init_creates_index(self, tmp_cache):
        from catalog_cache import CODE_VERSION, init_cache_index
        index = init_cache_index()
        assert index == {"version": CODE_VERSION, "catalogs": {}, "history": []}
        assert (tmp_cache / "index.json").exists()

    def test_corrupt_index_recreated(self, tmp_cache, capsys):
        from catalog_cache import load_cache_index
        tmp_cache.mkdir(parents=True)
        (tmp_cache / "index.json").write_text("{not json", encoding="utf-8")

        index = load_cache_index()
        assert index["catalogs"] == {}
        assert "캐시 색인 로드 실패" in capsys.readouterr().out
        assert json.loads((tmp_cache / "index.json").read_text(encoding="utf-8"))["history"] == []

    def test_key_depends_on_type(self):
        from catalog_cache import cache_key
        assert cache_key(0, 2, 2) == cache_key(0, 2, 2)
        assert cache_key(0, 2, 2) != cache_key(0, 2, 1)


class TestCatalogStore:
    """카탈로그 저장/로드 테스트"""

    def test_missing_returns_none(self, tmp_cache):
        from catalog_cache import load_catalog
        assert load_catalog(0, 1, 2) is None

    def test_store_and_load(self, tmp_cache):
        from catalog_cache import load_cache_index, load_catalog, store_catalog
        from enumeration import enumerate_graphs
        from ribbon_core import canonical_key

        catalog = enumerate_graphs(0, 1, 2)
        path = store_catalog(catalog)
        assert path.parent == tmp_cache

        loaded = load_catalog(0, 1, 2)
        assert loaded is not None
        assert [canonical_key(e.graph) for e in loaded] == [canonical_key(e.graph) for e in catalog]

        index = load_cache_index()
        assert index["catalogs"][path.name]["type"] == [0, 1, 2]
        assert index["history"][-1]["entries"] == 1

    def test_corrupt_catalog_ignored(self, tmp_cache, capsys):
        from catalog_cache import catalog_path, load_catalog
        tmp_cache.mkdir(parents=True)
        catalog_path(0, 1, 2).write_text("{broken", encoding="utf-8")
        assert load_catalog(0, 1, 2) is None
        assert "카탈로그 캐시 로드 실패" in capsys.readouterr().out

    def test_type_mismatch_ignored(self, tmp_cache):
        from catalog_cache import catalog_path, load_catalog
        from enumeration import enumerate_graphs
        tmp_cache.mkdir(parents=True)
        enumerate_graphs(0, 2, 1).save(catalog_path(0, 1, 2))
        assert load_catalog(0, 1, 2) is None

    def test_history_trimmed(self, tmp_cache, monkeypatch):
        import catalog_cache
        from catalog_cache import load_cache_index, store_catalog
        from enumeration import enumerate_graphs
        monkeypatch.setattr(catalog_cache, "MAX_CACHE_HISTORY", 3)
        catalog = enumerate_graphs(0, 2, 1)
        for _ in range(5):
            store_catalog(catalog)
        assert len(load_cache_index()["history"]) == 3

    def test_cached_catalog_enumerates_once(self, tmp_cache, monkeypatch):
        import catalog_cache
        from enumeration import enumerate_graphs

        calls = []

        def counting(*args, **kwargs):
            calls.append(args)
            return enumerate_graphs(*args, **kwargs)

        monkeypatch.setattr(catalog_cache, "enumerate_graphs", counting)
        first = catalog_cache.cached_catalog(0, 1, 2)
        second = catalog_cache.cached_catalog(0, 1, 2)
        assert len(calls) == 1
        assert len(first) == len(second) == 1
