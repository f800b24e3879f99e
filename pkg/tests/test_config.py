from pathlib import Path

import pytest

from finpot.config import ProfileError, Settings, load_profiles, parse_profiles


def test_packaged_profiles(profiles):
    students = {pid for pid, p in profiles.items() if p.role == "student"}
    assert students == {"mistral-7b", "orca-2-7b", "orca-2-13b", "phi-3-mini", "phi-3-medium"}
    assert profiles["gpt-4-teacher"].role == "teacher"
    assert profiles["gpt-4-judge"].role == "judge"
    assert profiles["phi-3-mini"].envelope is not None
    assert all(p.family for pid, p in profiles.items() if pid in students)


def test_profiles_file(tmp_path):
    path = tmp_path / "profiles.toml"
    path.write_text('[local]\nrole = "student"\nfamily = "phi-3"\nmodel_id = "local/phi"\nprovider = "scripted"\n')
    [profile] = load_profiles(path).values()
    assert profile.id == "local"
    assert profile.max_retries == 3


def test_invalid_profile():
    with pytest.raises(ProfileError):
        parse_profiles({"broken": {"role": "critic", "model_id": "x"}})
    with pytest.raises(ProfileError):
        parse_profiles({"flat": "value"})


def test_missing_profiles_file(tmp_path):
    with pytest.raises(ProfileError):
        load_profiles(tmp_path / "absent.toml")


def test_settings_from_env(monkeypatch, tmp_path):
    monkeypatch.setenv("FINPOT_RUNS_DIR", str(tmp_path / "runs"))
    monkeypatch.delenv("FINPOT_CACHE_DIR", raising=False)
    monkeypatch.delenv("FINPOT_PROFILES", raising=False)
    settings = Settings.from_env()
    assert settings.runs_dir == tmp_path / "runs"
    assert settings.cache_dir == tmp_path / "runs" / ".cache"
    assert settings.profiles_path is None


def test_settings_defaults():
    assert Settings().runs_dir == Path("runs")
