import logging
import logging.handlers
import os
import platform
import sys
import threading
from datetime import datetime

import numpy as np

from ptolab import __version__
from ptolab.system.config import get_log_dir

LOG_NAME = "ptolab.log"
LOG_MAX_BYTES = 5 * 1024 * 1024
LOG_BACKUPS = 3

_HANDLER_TAG = "_ptolab_handler"


def _tagged(handler: logging.Handler, fmt: str, level: int, datefmt: str | None = None) -> logging.Handler:
    handler.setFormatter(logging.Formatter(fmt, datefmt=datefmt))
    handler.setLevel(level)
    setattr(handler, _HANDLER_TAG, True)
    return handler


def setup_logging(level: int = logging.INFO, log_dir: str | None = None) -> str:
    """
    Initializes process-wide logging.
    - Console handler on stderr at `level` (stdout is reserved for reports).
    - Rotating DEBUG file handler in the log directory (PTOLAB_LOG_DIR).
    Returns the log file path.
    """
    log_dir = log_dir or get_log_dir()
    os.makedirs(log_dir, exist_ok=True)
    log_file = os.path.join(log_dir, LOG_NAME)

    root = logging.getLogger()
    root.setLevel(logging.DEBUG)

    # drop handlers from a previous call so repeated setup stays single-sink
    for h in [h for h in root.handlers if getattr(h, _HANDLER_TAG, False)]:
        root.removeHandler(h)
        h.close()

    root.addHandler(_tagged(
        logging.handlers.RotatingFileHandler(log_file, maxBytes=LOG_MAX_BYTES, backupCount=LOG_BACKUPS,
                                             encoding="utf-8"),
        "%(asctime)s [%(levelname)s] %(name)s: %(message)s", logging.DEBUG, datefmt="%Y-%m-%d %H:%M:%S",
    ))
    root.addHandler(_tagged(logging.StreamHandler(sys.stderr), "[%(levelname)s] %(message)s", level))

    log = logging.getLogger("Ptolab.Session")
    log.debug("=" * 60)
    log.debug(f"ptolab {__version__} session started: {datetime.now()}")
    log.debug(f"Platform: {platform.system()} {platform.release()} | Python {sys.version.split()[0]} "
              f"| numpy {np.__version__}")
    log.debug(f"Log Path: {log_file}")
    log.debug("=" * 60)
    return log_file


def _log_uncaught(exc_type, exc_value, exc_traceback):
    if issubclass(exc_type, KeyboardInterrupt):
        sys.__excepthook__(exc_type, exc_value, exc_traceback)
        return
    logging.getLogger("Ptolab.Crash").critical("Uncaught exception", exc_info=(exc_type, exc_value, exc_traceback))


def install_crash_handlers() -> None:
    """Route uncaught exceptions (main thread, worker threads, unraisable) into the log."""
    crash = logging.getLogger("Ptolab.Crash")
    sys.excepthook = _log_uncaught
    sys.unraisablehook = lambda args: crash.error(f"Unraisable exception: {args.exc_value}")
    threading.excepthook = lambda args: crash.critical(
        f"Uncaught exception in thread {args.thread.name if args.thread else '?'}",
        exc_info=(args.exc_type, args.exc_value, args.exc_traceback),
    )
    crash.debug("Crash handlers installed.")
