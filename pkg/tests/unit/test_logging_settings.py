import json
import logging
import os
import subprocess
import sys

import pytest

from logging_config import JSONRenderer, TransformLogger, configure_logging
from settings import ToolkitSettings

CODE_DIR = os.path.join(os.path.dirname(__file__), "..", "..", "code")

LIBRARY_SCRIPT = """
from bisimulation import coarsest_bisimulation
from kripke_model import RelationalStructure
from lazy_model import PeriodicState, explore, periodic_extension, properize_countable
from properize import ProductState, properize_finite

model = RelationalStructure.build(
    ["x1", "x2"], 2, {1: [("x1", "x2")], 2: [("x2", "x2")]}, {"p": ["x1"]}
)
properized, _ = properize_finite(model)
coarsest_bisimulation(properized.model)
origin = PeriodicState("x1", 0)
explore(properize_countable(periodic_extension(model)), ProductState(origin, origin), 2)
"""


class RecordingLogger:
    def __init__(self):
        self.events = []

    def debug(self, **event):
        self.events.append(("debug", event))

    def error(self, **event):
        self.events.append(("error", event))


class TestTransformLogger:

    def test_timed_success(self):
        recorder = RecordingLogger()
        with TransformLogger("test", recorder).timed("work", input_size=3, mode="fast") as record:
            record["output_size"] = 9
            record["rounds"] = 2
        level, event = recorder.events[0]
        assert level == "debug"
        assert event["operation"] == "work"
        assert event["input_size"] == 3
        assert event["output_size"] == 9
        assert event["rounds"] == 2
        assert event["mode"] == "fast"
        assert event["success"] is True

    def test_timed_failure_is_logged_and_reraised(self):
        recorder = RecordingLogger()
        with pytest.raises(RuntimeError):
            with TransformLogger("test", recorder).timed("work"):
                raise RuntimeError("boom")
        level, event = recorder.events[0]
        assert level == "error"
        assert event["error"] == "boom"
        assert event["success"] is False


class TestJSONRenderer:

    def test_sets_and_tuples(self):
        line = JSONRenderer()(None, "info", {"event": "x", "states": frozenset({"b", "a"}), "edge": ("a", "b")})
        assert json.loads(line) == {"event": "x", "states": ["a", "b"], "edge": ["a", "b"]}


class TestSettings:

    def test_defaults(self):
        settings = ToolkitSettings()
        assert settings.log_level == "WARNING"
        assert settings.explore_state_limit == 100_000
        assert settings.default_skew_agent == 1

    def test_environment_prefix(self, monkeypatch):
        monkeypatch.setenv("PROPERIZE_EXPLORE_STATE_LIMIT", "12")
        monkeypatch.setenv("PROPERIZE_LOG_FORMAT", "json")
        settings = ToolkitSettings()
        assert settings.explore_state_limit == 12
        assert settings.log_format == "json"

    def test_configure_logging_sets_level(self):
        configure_logging("DEBUG")
        assert logging.getLogger().level == logging.DEBUG
        configure_logging("WARNING")
        assert logging.getLogger().level == logging.WARNING


class TestLibraryDefaults:

    def test_library_calls_write_nothing_to_stdout(self):
        env = {key: value for key, value in os.environ.items() if not key.startswith("PROPERIZE_")}
        result = subprocess.run(
            [sys.executable, "-c", LIBRARY_SCRIPT],
            cwd=CODE_DIR,
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        assert result.stdout == ""
        assert "model_transform" not in result.stderr
