import logging

from threading import Condition
from typing import Any
from enum import Enum

logger = logging.getLogger("adseed.utils")

"""
" Enum FutureState
"""
class FutureState(Enum):
    DEFER = 0
    READY = 1
    FAILED = 2

"""
" class FutureResult
"""
class FutureResult:
    FUTURE_SUCC = 0
    FUTURE_ERR_FAILED = 2

    def __init__(self, code: int, msg: str, value: Any = None, error: BaseException = None):
        self.code = code
        self.msg = msg
        self.value = value
        self.error = error

    def __str__(self):
        return f"FutureResult(code={str(self.code)}, msg='{self.msg}', value={self.value})"

"""
" class Future. GetResult() blocks until Ready() or Fail() is called.
"""
class Future:
    def __init__(self):
        self.__state = FutureState.DEFER
        self.__value = None
        self.__msg = None
        self.__error = None
        self.__condition = Condition()

    def GetResult(self) -> FutureResult:
        with self.__condition:
            self.__condition.wait_for(lambda: not self.__IsDeferred())
            if self.__state == FutureState.READY:
                return FutureResult(FutureResult.FUTURE_SUCC, "success", self.__value)
            return FutureResult(FutureResult.FUTURE_ERR_FAILED, self.__msg, error=self.__error)

    def Ready(self, value):
        with self.__condition:
            ready = self.__Ready(value)
            self.__condition.notify_all()
            return ready

    def Fail(self, reason: str, error: BaseException = None):
        with self.__condition:
            fail = self.__Fail(reason, error)
            self.__condition.notify_all()
            return fail

    def __Ready(self, value):
        if not self.__IsDeferred():
            logger.warning("[Future] future state is not DEFER")
            return False
        self.__value = value
        self.__state = FutureState.READY
        return True

    def __Fail(self, message: str, error: BaseException):
        if not self.__IsDeferred():
            logger.warning("[Future] future state is not DEFER")
            return False
        self.__msg = message
        self.__error = error
        self.__state = FutureState.FAILED
        return True

    def __IsDeferred(self):
        return self.__state == FutureState.DEFER
