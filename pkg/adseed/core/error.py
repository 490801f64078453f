from .internal import *


"""
" class AdseedError
"""
class AdseedError(Exception):
    DEFAULT_CODE = ADSEED_ERR_INPUT_PARAMETER

    def __init__(self, msg: str, code: int = None):
        self.code = self.DEFAULT_CODE if code is None else code
        self.msg = msg
        super().__init__(msg)

    def ExitCode(self) -> int:
        return self.code // 1000

    def __str__(self):
        return f"{type(self).__name__}(code={self.code}, msg='{self.msg}')"


class InputError(AdseedError):
    DEFAULT_CODE = ADSEED_ERR_INPUT_PARAMETER


class SmallBudgetError(InputError):
    DEFAULT_CODE = ADSEED_ERR_INPUT_SMALL_BUDGET


class CapExceededError(AdseedError):
    DEFAULT_CODE = ADSEED_ERR_CAP_SUBSETS


class InfeasibleError(AdseedError):
    DEFAULT_CODE = ADSEED_ERR_INFEASIBLE_POLICY
