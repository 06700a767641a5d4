from src.config import Settings, load_settings


def test_defaults():
    settings = Settings()
    assert settings.residual_tol == 1e-9
    assert settings.continuation_checkpoints == [1.0, 10.0, 100.0, 1000.0]


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("KNOTYY_MARKOV_SAMPLES", "12")
    monkeypatch.setenv("KNOTYY_PROGRESS", "false")
    monkeypatch.setenv("KNOTYY_CONTINUATION_CHECKPOINTS", "1,5,50")
    settings = load_settings()
    assert settings.markov_samples == 12
    assert settings.progress is False
    assert settings.continuation_checkpoints == [1.0, 5.0, 50.0]
