import pytest


@pytest.fixture(autouse=True)
def _isolated_reference_cache(tmp_path_factory, monkeypatch):
    # keep benchmark reference files out of the user's real cache; one
    # shared directory per session so expensive references are reused
    d = tmp_path_factory.getbasetemp() / "radau-refs"
    d.mkdir(exist_ok=True)
    monkeypatch.setenv("RADAU_CACHE_DIR", str(d))
    yield
