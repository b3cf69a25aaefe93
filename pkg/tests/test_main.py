# tests/test_main.py

import logging

import main
from subspace_lab.config import settings


def test_run_logs_and_starts_uvicorn(monkeypatch, caplog):
    calls = []
    monkeypatch.setattr(main.uvicorn, "run", lambda *args, **kwargs: calls.append((args, kwargs)))
    caplog.set_level(logging.INFO, logger="main")

    main.run()

    [(args, kwargs)] = calls
    assert args == ("subspace_lab.api:app",)
    assert kwargs["port"] == 8000
    assert kwargs["log_level"] == settings.LOG_LEVEL.lower()
    assert "Starting Subspace Lab API server..." in caplog.messages
