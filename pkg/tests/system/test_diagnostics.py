import logging
import os

import pytest

from ptolab.errors import PreconditionError, StructuralError
from ptolab.system.diagnostics import LOG_NAME, setup_logging
from ptolab.system.wrappers import EXIT_OK, EXIT_USAGE, safe_command


@pytest.fixture
def clean_root_logger():
    root = logging.getLogger()
    before = list(root.handlers)
    level = root.level
    yield root
    for h in list(root.handlers):
        if h not in before:
            root.removeHandler(h)
            h.close()
    root.setLevel(level)


def test_setup_logging_writes_the_log_file(tmp_path, clean_root_logger):
    path = setup_logging(logging.WARNING, str(tmp_path))
    assert path == os.path.join(str(tmp_path), LOG_NAME)
    logging.getLogger("Ptolab.Test").info("hello file")
    for h in clean_root_logger.handlers:
        h.flush()
    with open(path, encoding="utf-8") as f:
        assert "Ptolab.Test: hello file" in f.read()


def test_setup_logging_is_idempotent(tmp_path, clean_root_logger):
    setup_logging(logging.INFO, str(tmp_path))
    count = len(clean_root_logger.handlers)
    setup_logging(logging.DEBUG, str(tmp_path))
    assert len(clean_root_logger.handlers) == count


def test_log_dir_from_environment(tmp_path, monkeypatch, clean_root_logger):
    monkeypatch.setenv("PTOLAB_LOG_DIR", str(tmp_path / "logs"))
    path = setup_logging()
    assert os.path.exists(path)


def test_safe_command_exit_codes(caplog):
    @safe_command
    def cmd_ok():
        return EXIT_OK

    @safe_command
    def cmd_bad_input():
        raise StructuralError("matrix is not symmetric")

    @safe_command
    def cmd_precondition():
        raise PreconditionError("n too small")

    @safe_command
    def cmd_missing_file():
        open("/nonexistent/ptolab/matrix.csv")

    assert cmd_ok() == EXIT_OK
    assert cmd_bad_input() == EXIT_USAGE
    assert cmd_precondition() == EXIT_USAGE
    assert cmd_missing_file() == EXIT_USAGE
    assert "bad_input: matrix is not symmetric" in caplog.text


def test_safe_command_lets_bugs_through():
    @safe_command
    def cmd_bug():
        raise ZeroDivisionError("oops")

    with pytest.raises(ZeroDivisionError):
        cmd_bug()
