"""
도메인 예외 정의

입력 검증 실패는 모두 RibbonError(ValueError) 계열로 표현합니다.
CLI는 이 계열을 입력 오류(종료 코드 2)로 처리하고,
그 밖의 예외는 내부 오류(종료 코드 1)로 처리합니다.
"""


class RibbonError(ValueError):
    """모든 도메인 입력 오류의 기반 클래스"""

    def __init__(self, message: str = ""):
        super().__init__(message or self.__class__.__name__)

    @property
    def name(self) -> str:
        """위반된 공리/조건의 이름 (클래스명)"""
        return self.__class__.__name__


# ============================================
# 리본 그래프 공리
# ============================================
class NotPermutation(RibbonError):
    """배열이 0..N-1의 순열이 아님"""


class NotInvolution(RibbonError):
    """s1이 대합(involution)이 아님"""


class FixedPoint(RibbonError):
    """s1에 고정점이 있음"""


class Disconnected(RibbonError):
    """그래프(또는 안정 그래프)가 연결되어 있지 않음"""


class OddEuler(RibbonError):
    """오일러 지표로부터 정수 종수를 얻을 수 없음"""


class ResidueViolation(RibbonError):
    """부호 있는 경계 길이의 합이 0이 아님"""


class OddDegree(RibbonError):
    """꼭짓점 차수가 홀수"""


class NotFourValent(RibbonError):
    """4가가 아닌 꼭짓점이 있음"""


# ============================================
# 곡선 / 절단
# ============================================
class InvalidStep(RibbonError):
    """곡선 단어가 s⁺/s⁻ 스텝 관계를 위반"""


class NotSimple(RibbonError):
    """곡선이 단순(자기 교차 없음)하지 않음"""


class NotAdmissible(RibbonError):
    """곡선을 따라 자르면 꼭짓점이 분리되거나 경계 구조가 깨짐"""


class SingleVertex(RibbonError):
    """꼭짓점이 하나뿐인 (최소) 그래프"""


# ============================================
# 안정 그래프 공리
# ============================================
class SignViolation(RibbonError):
    """짝지어진 슬롯의 부호가 같음"""


class DirectionViolation(RibbonError):
    """성분에 양 또는 음 슬롯이 없음"""


class StabilityViolation(RibbonError):
    """성분이 안정 조건 2g-2+#slots > 0 을 만족하지 않음"""


class LabelViolation(RibbonError):
    """다리(leg) 라벨이 1..n± 가 아님"""


# ============================================
# 열거 / 부피
# ============================================
class UnstableType(RibbonError):
    """불안정하거나 허용되지 않는 (g, n⁺, n⁻) 유형"""


class ProfileMismatch(RibbonError):
    """경계 에지 수 프로파일이 유형과 맞지 않음"""


class EmptyCell(RibbonError):
    """양의 정수 메트릭 해가 없음"""


class NonIntegralInput(RibbonError):
    """정수 입력이 필요하거나 잔여 조건을 만족하지 않음"""


class NotOrientable(RibbonError):
    """부호 함수 ε가 존재하지 않음 (방향을 줄 수 없는 그래프)"""
