import logging
import threading

from typing import Any, Callable, List, Sequence

from .future import Future, FutureResult

logger = logging.getLogger("adseed.utils")


class Thread(Future):
    def __init__(self, target: Callable = None, name: str = None, args=(), kwargs=None):
        super().__init__()
        self.__target = target
        self.__args = args
        self.__kwargs = {} if kwargs is None else kwargs
        self.__thread = threading.Thread(target=self.__ThreadFunc, name=name, daemon=True)

    def Start(self):
        return self.__thread.start()

    def __ThreadFunc(self):
        try:
            value = self.__target(*self.__args, **self.__kwargs)
            self.Ready(value)
        except BaseException as e:
            self.Fail(f"[Thread] target func raise exception: name={type(e).__name__}, args={str(e.args)}", e)


"""
" function ParallelMap. applies target to every item; results keep item order.
"""
def ParallelMap(target: Callable[[Any], Any], items: Sequence[Any], workers: int = 1) -> List[Any]:
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [target(item) for item in items]

    workers = min(workers, len(items))
    slices = [items[w::workers] for w in range(workers)]
    threads = []
    for w, part in enumerate(slices):
        thread = Thread(target=lambda part=part: [target(item) for item in part], name=f"adseed_worker_{w}")
        thread.Start()
        threads.append(thread)

    results = [None] * len(items)
    for w, thread in enumerate(threads):
        result = thread.GetResult()
        if result.code != FutureResult.FUTURE_SUCC:
            logger.error(result.msg)
            if result.error is not None:
                raise result.error
            raise RuntimeError(result.msg)
        for j, value in enumerate(result.value):
            results[w + j * workers] = value

    return results
