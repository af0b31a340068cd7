import logging
import functools

from ptolab.errors import PtolabError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

log = logging.getLogger("Ptolab.CLI")


def safe_command(func):
    """
    Decorator for CLI subcommand handlers.
    Expected errors (bad input, violated preconditions, unreadable files)
    are logged and turned into the usage exit status instead of a traceback.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except PtolabError as e:
            log.error(f"{func.__name__.removeprefix('cmd_')}: {e}")
            return EXIT_USAGE
        except OSError as e:
            log.error(f"{func.__name__.removeprefix('cmd_')}: cannot access file: {e}")
            return EXIT_USAGE
        except Exception as e:
            log.exception(f"Unexpected error in command '{func.__name__}': {e}")
            raise
    return wrapper
