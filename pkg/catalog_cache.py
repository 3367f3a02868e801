"""
카탈로그 캐시 관리 유틸리티

열거 결과(GraphCatalog)를 JSON 파일로 저장해 같은 유형을 다시 열거하지 않도록 합니다.
캐시 파일 이름은 (유형, 코드 버전)의 내용 해시이며,
index.json에 저장 이력을 기록합니다.
"""

import hashlib
import json
import os
from datetime import datetime
from pathlib import Path

from dotenv import load_dotenv

from enumeration import GraphCatalog, enumerate_graphs

load_dotenv()

# 캐시 디렉토리 (RIBBON_CACHE_DIR 로 변경 가능)
CACHE_DIR = Path(os.getenv("RIBBON_CACHE_DIR", ".ribbon_cache"))

# 캐시 색인 파일
CACHE_INDEX_FILE = CACHE_DIR / "index.json"

# 저장 이력 최대 보관 개수
MAX_CACHE_HISTORY = 20

# 열거 규약이 바뀌면 올려서 기존 캐시를 무효화
CODE_VERSION = "1"


def cache_key(g: int, n_plus: int, n_minus: int) -> str:
    """유형과 코드 버전의 sha256 해시"""
    payload = json.dumps({"type": [g, n_plus, n_minus], "version": CODE_VERSION}, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def catalog_path(g: int, n_plus: int, n_minus: int) -> Path:
    return CACHE_DIR / f"catalog_{cache_key(g, n_plus, n_minus)[:16]}.json"


def init_cache_index() -> dict:
    """캐시 색인 초기화

    index.json이 없으면 초기 상태로 생성하고, 있으면 그대로 로드합니다.

    Returns:
        dict: 현재 색인
    """
    if CACHE_INDEX_FILE.exists():
        return load_cache_index()

    initial_index = {
        "version": CODE_VERSION,
        "catalogs": {},
        "history": [],
    }

    _save_cache_index(initial_index)
    return initial_index


def load_cache_index() -> dict:
    """캐시 색인 로드

    파일이 없거나 손상된 경우 초기 상태로 재생성합니다.

    Returns:
        dict: 색인 딕셔너리
    """
    if not CACHE_INDEX_FILE.exists():
        return init_cache_index()

    try:
        content = CACHE_INDEX_FILE.read_text(encoding="utf-8")
        return json.loads(content)

    except (json.JSONDecodeError, IOError) as e:
        print(f"[경고] 캐시 색인 로드 실패: {e}")
        print("[정보] 초기 상태로 재생성합니다.")
        CACHE_INDEX_FILE.unlink(missing_ok=True)
        return init_cache_index()


def load_catalog(g: int, n_plus: int, n_minus: int) -> GraphCatalog | None:
    """캐시된 카탈로그 로드

    Returns:
        GraphCatalog 또는 None (캐시 없음/손상)
    """
    path = catalog_path(g, n_plus, n_minus)
    if not path.exists():
        return None

    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        catalog = GraphCatalog.from_dict(data)
    except (json.JSONDecodeError, IOError, KeyError, ValueError) as e:
        print(f"[경고] 카탈로그 캐시 로드 실패 ({path.name}): {e}")
        return None

    if tuple(catalog.type) != (g, n_plus, n_minus):
        print(f"[경고] 카탈로그 캐시 유형 불일치: {catalog.type}")
        return None
    return catalog


def store_catalog(catalog: GraphCatalog) -> Path:
    """카탈로그를 캐시에 저장하고 색인 이력을 갱신

    history는 최근 MAX_CACHE_HISTORY개만 유지합니다.

    Returns:
        저장된 파일 경로
    """
    CACHE_DIR.mkdir(parents=True, exist_ok=True)
    g, n_plus, n_minus = catalog.type
    path = catalog_path(g, n_plus, n_minus)
    catalog.save(path)

    index = load_cache_index()
    now = datetime.now().isoformat()
    index["catalogs"][path.name] = {
        "type": [g, n_plus, n_minus],
        "entries": len(catalog),
        "stored_at": now,
    }

    history = index.get("history", [])
    history.append({"timestamp": now, "file": path.name, "entries": len(catalog)})
    index["history"] = history[-MAX_CACHE_HISTORY:]

    _save_cache_index(index)
    return path


def cached_catalog(g: int, n_plus: int, n_minus: int, threads: int = 1, progress: bool = False) -> GraphCatalog:
    """캐시에 있으면 로드, 없으면 열거 후 저장"""
    catalog = load_catalog(g, n_plus, n_minus)
    if catalog is not None:
        return catalog
    catalog = enumerate_graphs(g, n_plus, n_minus, threads=threads, progress=progress)
    store_catalog(catalog)
    return catalog


def _save_cache_index(index: dict):
    """색인을 파일에 저장 (내부 함수)"""
    CACHE_DIR.mkdir(parents=True, exist_ok=True)
    CACHE_INDEX_FILE.write_text(
        json.dumps(index, ensure_ascii=False, indent=2),
        encoding="utf-8",
    )
