import os
import logging
import threading

from dataclasses import dataclass, replace, fields

from ..utils.singleton import Singleton
from .error import InputError

logger = logging.getLogger("adseed.core")

THREADS_ENV = "ADSEED_THREADS"


def _ThreadsFromEnv() -> int:
    value = os.environ.get(THREADS_ENV)
    if not value:
        return 1
    try:
        return max(1, int(value))
    except ValueError:
        logger.warning("[Config] ignore malformed %s=%r", THREADS_ENV, value)
        return 1


"""
" class Config
"""
@dataclass(frozen=True)
class Config:
    enum_limit: int = 20
    subset_cap: int = 1_000_000
    mc_samples: int = 10_000
    block_samples: int = 1_000
    exact_realization_cap: int = 10_000
    small_k_threshold: int = 4
    oracle_max_x: int = 8
    oracle_max_neighbors: int = 14
    gap_la_max_m: int = 200
    mc_chunk: int = 1024
    fw_max_iters: int = 10_000
    fw_tol: float = 1e-6
    threads: int = 1


"""
" class ConfigFactory
"""
class ConfigFactory(Singleton):
    __config = None
    __lock = threading.Lock()

    def __init__(self):
        super().__init__()

    def Init(self, **overrides) -> Config:
        known = {f.name for f in fields(Config)}
        unknown = set(overrides) - known
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")

        with self.__class__.__lock:
            base = self.__class__.__config or Config(threads=_ThreadsFromEnv())
            values = {k: v for k, v in overrides.items() if v is not None}
            self.__class__.__config = replace(base, **values)
            return self.__class__.__config

    def Get(self) -> Config:
        config = self.__class__.__config
        if config is None:
            return self.Init()
        return config

    def Reset(self):
        with self.__class__.__lock:
            self.__class__.__config = None


"""
" function ConfigFactoryInitialize. used to override the process-wide defaults.
"""
def ConfigFactoryInitialize(**overrides) -> Config:
    return ConfigFactory().Init(**overrides)


def GetConfig() -> Config:
    return ConfigFactory().Get()
