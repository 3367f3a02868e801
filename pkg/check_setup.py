"""
환경 점검 스크립트

RIBBON_* 설정값, 필수 패키지, 캐시/로그 디렉토리, 카탈로그 캐시 색인을 확인하고
작은 부피 계산 두 개로 계산 경로가 정상인지 점검합니다.

사용법:
    python check_setup.py
"""

import json
import os
import sys
from collections import Counter
from importlib import metadata
from pathlib import Path

from dotenv import load_dotenv
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

load_dotenv()

console = Console()

# 상태별 집계 (pass / fail / warn)
results: Counter = Counter()

# import 이름 → requirements.txt 패키지 이름
REQUIRED_PACKAGES = {
    "sympy": "sympy",
    "networkx": "networkx",
    "dotenv": "python-dotenv",
    "click": "click",
    "tqdm": "tqdm",
    "rich": "rich",
}

STYLE = {
    "pass": ("green", "✅"),
    "fail": ("red", "❌"),
    "warn": ("yellow", "⚠️ "),
}


def _record(status: str, item: str, note: str = ""):
    results[status] += 1
    color, icon = STYLE[status]
    console.print(f"[{color}]  {icon} {item}[/{color}]")
    if note:
        hint = "yellow" if status == "fail" else "dim"
        console.print(f"[{hint}]     → {note}[/{hint}]")


def check_pass(item: str, detail: str = ""):
    _record("pass", item, detail)


def check_fail(item: str, fix: str):
    _record("fail", item, fix)


def check_warn(item: str, detail: str):
    _record("warn", item, detail)


def _section(title: str):
    console.print(f"\n[bold cyan]{title}[/bold cyan]")


# ============================================
# 1. 실행 환경과 패키지
# ============================================
def check_runtime():
    """Python 3.10 이상과 requirements.txt 패키지"""
    _section("1. 실행 환경")

    if sys.version_info < (3, 10):
        check_fail(f"Python {sys.version.split()[0]} (3.10 이상 필요)", "X | None 타입 표기를 쓰므로 3.10 이상이 필요합니다")
    else:
        check_pass(f"Python {sys.version.split()[0]}")

    missing = []
    for import_name, dist_name in REQUIRED_PACKAGES.items():
        try:
            __import__(import_name)
        except ImportError:
            missing.append(dist_name)
            continue
        try:
            check_pass(dist_name, metadata.version(dist_name))
        except metadata.PackageNotFoundError:
            check_pass(dist_name)
    if missing:
        check_fail(f"미설치 패키지: {', '.join(missing)}", "pip install -r requirements.txt")


# ============================================
# 2. RIBBON_* 설정값
# ============================================
def check_settings():
    """.env 또는 환경변수의 RIBBON_* 값 형식 검사 (모두 기본값 있음)"""
    _section("2. 설정값 (RIBBON_*)")

    if not Path(".env").exists():
        check_warn(".env 없음, 기본값 사용", "cp .env.template .env")

    threads = os.getenv("RIBBON_THREADS", "1")
    if threads.isdigit() and int(threads) >= 1:
        check_pass(f"RIBBON_THREADS = {threads}")
    else:
        check_fail(f"RIBBON_THREADS = {threads!r}", "1 이상의 정수로 설정하세요")

    seed = os.getenv("RIBBON_SEED", "20240601")
    try:
        int(seed)
        check_pass(f"RIBBON_SEED = {seed}")
    except ValueError:
        check_fail(f"RIBBON_SEED = {seed!r}", "정수로 설정하세요")

    for var, default in (("RIBBON_CACHE_DIR", ".ribbon_cache"), ("RIBBON_LOG_DIR", "logs")):
        path = Path(os.getenv(var, default) or default)
        if not path.exists():
            check_warn(f"{var} = {path}/ (없음)", "첫 실행 때 생성됩니다")
        elif not path.is_dir():
            check_fail(f"{var} = {path} 는 디렉토리가 아닙니다", f"{var} 를 다른 경로로 바꾸세요")
        elif not os.access(path, os.W_OK):
            check_fail(f"{var} = {path}/ 쓰기 불가", f"chmod u+w {path}")
        else:
            check_pass(f"{var} = {path}/")


# ============================================
# 3. 카탈로그 캐시 색인
# ============================================
def check_cache_index():
    """색인의 코드 버전과 색인된 카탈로그 파일 존재 여부"""
    _section("3. 카탈로그 캐시")

    import catalog_cache

    index_file = catalog_cache.CACHE_INDEX_FILE
    if not index_file.exists():
        check_warn("index.json 없음", "python cli.py enumerate 0 2 2 실행 시 생성됩니다")
        return

    try:
        index = json.loads(index_file.read_text(encoding="utf-8"))
        catalogs = index["catalogs"]
        history = index["history"]
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        check_warn(f"index.json 손상 ({type(e).__name__})", "다음 실행 시 자동으로 재생성됩니다")
        return

    if index.get("version") != catalog_cache.CODE_VERSION:
        check_warn(
            f"캐시 버전 {index.get('version')} ≠ 코드 버전 {catalog_cache.CODE_VERSION}",
            "해당 카탈로그는 다시 열거됩니다",
        )

    lost = [name for name in catalogs if not (index_file.parent / name).exists()]
    if lost:
        check_warn(f"색인에만 있는 카탈로그 {len(lost)}개", "필요할 때 다시 열거됩니다")
    check_pass("index.json", f"카탈로그 {len(catalogs) - len(lost)}개, 이력 {len(history)}건")


# ============================================
# 4. 계산 점검
# ============================================
def check_computation():
    """F_{0,3} = L1+L2+L3 와 Z_{1,1,1}(6|6) = 9"""
    _section("4. 계산 점검")

    from volumes import f_polynomial, make_point, z_evaluate

    try:
        text = f_polynomial(0, 3).pretty()
        value = z_evaluate(1, 1, 1, make_point([6], [6]))
    except Exception as e:
        check_fail(f"부피 계산 오류: {e}", "python cli.py -v fpoly 0 3 으로 로그를 확인하세요")
        return

    if text == "L1 + L2 + L3":
        check_pass("F_{0,3}", text)
    else:
        check_fail(f"F_{{0,3}} = {text}", "volumes.py 재귀식을 확인하세요")
    if value == 9:
        check_pass("Z_{1,1,1}(6|6)", "9")
    else:
        check_fail(f"Z_{{1,1,1}}(6|6) = {value}", "volumes.py 재귀식을 확인하세요")


# ============================================
# 결과 요약
# ============================================
def print_summary() -> int:
    """요약 표를 출력하고 실패 건수를 반환"""
    table = Table(title="점검 결과", header_style="bold")
    table.add_column("상태")
    table.add_column("건수", justify="right")
    for status, label in (("pass", "통과"), ("fail", "실패"), ("warn", "경고")):
        color, icon = STYLE[status]
        table.add_row(f"[{color}]{icon} {label}[/{color}]", str(results[status]))

    console.print()
    console.print(table)
    if results["fail"]:
        console.print(f"\n[bold red]{results['fail']}개 항목 실패. 위 안내를 따라 주세요.[/bold red]")
    else:
        console.print("\n[bold green]필수 항목 모두 통과.[/bold green]")
    return results["fail"]


def main() -> int:
    console.print(Panel("[bold]리본 그래프 부피 계산 - 환경 점검[/bold]", border_style="magenta"))
    results.clear()
    check_runtime()
    check_settings()
    check_cache_index()
    check_computation()
    return 1 if print_summary() else 0


if __name__ == "__main__":
    sys.exit(main())
