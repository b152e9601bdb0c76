import numpy as np
import pytest

from credal import Dataset, FitConfig, ecm_fit, tecm_fit


def assert_monotone(trace, slack=1e-9):
    """Objective values must never rise by more than the stated slack."""
    t = np.asarray(trace, dtype=float)
    assert t.ndim == 1 and t.size >= 1
    assert np.all(np.isfinite(t))
    assert t.min() >= 0.0
    rises = np.diff(t)
    assert np.all(rises <= slack), f"objective rose along the trace: {t.tolist()}"


@pytest.fixture
def checked_ecm():
    def run(data, c, config=None):
        model = ecm_fit(data, c, config)
        assert_monotone(model.objective_trace)
        return model

    return run


@pytest.fixture
def checked_tecm():
    def run(data, c, source, config=None):
        model = tecm_fit(data, c, source, config)
        assert_monotone(model.objective_trace)
        return model

    return run


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def two_blob_dataset(separation=10.0, size=50, seed=0):
    """Two spherical clusters on the x axis, labels 1 and 2."""
    r = np.random.default_rng(seed)
    a = r.normal(scale=1.0, size=(size, 2))
    b = r.normal(scale=1.0, size=(size, 2)) + [separation, 0.0]
    labels = np.repeat([1, 2], size)
    return Dataset(np.vstack([a, b]), labels)


def quick_config(**overrides):
    base = dict(epsilon=1e-6, max_iter=200)
    base.update(overrides)
    return FitConfig(**base)
