from __future__ import annotations
import os
import logging

log = logging.getLogger("Ptolab.Config")

_DEF_LOG_DIR = os.path.join(os.path.expanduser("~"), ".ptolab")


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return float(raw)
    except ValueError:
        log.warning(f"Ignoring {name}={raw!r}: not a number, using {default}")
        return default


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default


def get_log_dir() -> str:
    return os.environ.get("PTOLAB_LOG_DIR", _DEF_LOG_DIR)


def default_threads() -> int:
    return _env_int("PTOLAB_THREADS", 1)


def default_tol() -> float:
    return _env_float("PTOLAB_TOL", 1e-9)


def default_eq_tol() -> float:
    return _env_float("PTOLAB_EQ_TOL", 1e-7)
