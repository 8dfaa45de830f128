import contextlib
from pathlib import Path

import pytest

from rdgai.apparatus_model import parse_document
from rdgai.llm_gateway import ModelConfig

from .mock_llm import MockLLMServer

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"

# number -> (label, "PASS"/"FAIL", optional note), filled by the acceptance tests
CRITERION_RESULTS: dict[int, tuple[str, str, str]] = {}


@contextlib.contextmanager
def criterion(number: int, label: str):
    """Record a pass/fail verdict for one acceptance criterion."""
    note = {"text": ""}
    try:
        yield note
    except BaseException:
        CRITERION_RESULTS[number] = (label, "FAIL", note["text"])
        raise
    CRITERION_RESULTS[number] = (label, "PASS", note["text"])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERION_RESULTS):
        label, verdict, note = CRITERION_RESULTS[number]
        suffix = f" [{note}]" if note else ""
        terminalreporter.write_line(
            f"criterion {number} ({label}): {verdict}{suffix}"
        )


@pytest.fixture
def john8_path() -> Path:
    return FIXTURES / "john8_sample.xml"


@pytest.fixture
def john8_doc(john8_path):
    return parse_document(john8_path.read_text(encoding="utf-8"))


@pytest.fixture
def inverse_path() -> Path:
    return FIXTURES / "inverse_pair.xml"


@pytest.fixture
def inverse_doc(inverse_path):
    return parse_document(inverse_path.read_text(encoding="utf-8"))


@pytest.fixture
def minimal_doc():
    return parse_document((FIXTURES / "minimal.xml").read_text(encoding="utf-8"))


@pytest.fixture
def mock_server():
    """Factory starting mock chat-completion servers, stopped afterwards."""
    servers: list[MockLLMServer] = []

    def start(respond) -> MockLLMServer:
        server = MockLLMServer(respond).start()
        servers.append(server)
        return server

    yield start
    for server in servers:
        server.stop()


@pytest.fixture
def config_for():
    def make(server: MockLLMServer, **overrides) -> ModelConfig:
        values = {
            "endpoint_url": server.url,
            "model_name": "mock-model",
            "api_key": "test-key-1234",
            "timeout": 10.0,
        }
        values.update(overrides)
        return ModelConfig(**values)

    return make
