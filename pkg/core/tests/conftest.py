import json
from io import StringIO
from typing import Any, Dict, List, Tuple

import pytest
from django.core.management import call_command

from core.oracles.instances import SimpleGraph


@pytest.fixture
def triangle() -> SimpleGraph:
    return SimpleGraph(3, ((0, 1), (1, 2), (0, 2)))


@pytest.fixture
def path4() -> SimpleGraph:
    return SimpleGraph(4, ((0, 1), (1, 2), (2, 3)))


@pytest.fixture
def star3() -> SimpleGraph:
    """Center 0 with leaves 1, 2, 3."""
    return SimpleGraph(4, ((0, 1), (0, 2), (0, 3)))


class CommandRun:
    """Captured output of one management command."""

    def __init__(self, stdout: str, stderr: str):
        self.stdout = stdout
        self.stderr = stderr

    @property
    def payload(self) -> Dict[str, Any]:
        return json.loads(self.stdout)


@pytest.fixture
def run_command():
    """Call a management command and return its captured stdout/stderr."""

    def run(name: str, *args: str, **options: Any) -> CommandRun:
        out, err = StringIO(), StringIO()
        call_command(name, *args, stdout=out, stderr=err, **options)
        return CommandRun(out.getvalue(), err.getvalue())

    return run


@pytest.fixture
def write_file(tmp_path):
    """Write text or bytes under tmp_path and return the path as a string."""

    def write(name: str, content: str | bytes) -> str:
        target = tmp_path / name
        target.write_bytes(content.encode("utf-8") if isinstance(content, str) else content)
        return str(target)

    return write


def graph_file(n: int, edges: List[Tuple[int, int]], *extra: str) -> str:
    lines = [f"p {n} {len(edges)}"] + [f"e {u} {v}" for u, v in edges] + list(extra)
    return "\n".join(lines) + "\n"
