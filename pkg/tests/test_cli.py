import io
import json
import os

import pytest

from siegelcov.cache import Cache, ChecksumMismatch, checksum
from siegelcov.cli import run


def invoke(*argv):
    out = io.StringIO()
    status = run(list(argv), out)
    return status, out.getvalue()


def test_decompose_json():
    status, text = invoke("decompose", "--d", "2")
    assert status == 0
    data = json.loads(text)
    assert [r["lambda"] for r in data["decomposition"]] == [[12, 0], [10, 2], [8, 4], [6, 6]]
    assert [r["weight"] for r in data["decomposition"]] == [[12, 6], [8, 8], [4, 10], [0, 12]]


def test_decompose_pretty():
    status, text = invoke("decompose", "--d", "3", "--pretty")
    assert status == 0
    assert "[12, 6]" in text and "2" in text


def test_precision_floor_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        invoke("seed", "--prec", "0")
    assert exc.value.code == 2
    assert "at least" in capsys.readouterr().err


def test_unknown_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        invoke("decompose", "--d", "2", "--bogus")
    assert exc.value.code == 2


def test_seed_writes_cache(tmp_path):
    status, text = invoke("seed", "--prec", "12", "--cache-dir", str(tmp_path))
    assert status == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["chi5_N12.json", "chi63_N12.json"]
    for name in ("chi5", "chi63"):
        have, payload = Cache(tmp_path).read(name, 12)
        assert have == 12 and payload


def test_cache_serves_lower_precision(tmp_path):
    invoke("seed", "--prec", "14", "--cache-dir", str(tmp_path))
    have, _ = Cache(tmp_path).read("chi5", 10)
    assert have == 14
    assert Cache(tmp_path).read("chi5", 16) is None


def test_checksum_mismatch(tmp_path, capsys):
    invoke("seed", "--prec", "10", "--cache-dir", str(tmp_path))
    path = tmp_path / "chi5_N10.json"
    doc = json.loads(path.read_text())
    doc["payload"]["coeffs"] = doc["payload"]["coeffs"][:-1]
    path.write_text(json.dumps(doc))
    with pytest.raises(ChecksumMismatch):
        Cache(tmp_path).read("chi5", 10)
    status, _ = invoke("construct", "--d", "2", "--lambda", "6,6", "--prec", "10",
                       "--cache-dir", str(tmp_path))
    assert status == 1
    assert "checksum mismatch" in capsys.readouterr().err


def test_atomic_write_leaves_no_temporaries(tmp_path):
    cache = Cache(tmp_path)
    entry = cache.write("demo", 8, {"x": [1, 2, 3]})
    assert entry.checksum == checksum({"x": [1, 2, 3]})
    assert sorted(os.listdir(tmp_path)) == ["demo_N8.json"]
    cache.write("demo", 8, {"x": [4]})
    assert cache.read("demo", 8) == (8, {"x": [4]})


def test_failed_write_keeps_previous_version(tmp_path):
    cache = Cache(tmp_path)
    cache.write("demo", 8, {"x": 1})
    with pytest.raises(TypeError):
        cache.write("demo", 8, {"x": object()})
    assert cache.read("demo", 8) == (8, {"x": 1})
    assert sorted(os.listdir(tmp_path)) == ["demo_N8.json"]


def test_lock_times_out(tmp_path):
    from siegelcov.cache import CacheError
    cache = Cache(tmp_path, lock_timeout=0.1)
    (tmp_path / ".lock").write_text("held")
    with pytest.raises(CacheError):
        cache.write("demo", 8, {})


def test_reruns_are_byte_identical(tmp_path):
    argv = ("construct", "--d", "3", "--lambda", "15,3", "--prec", "12", "--reduce",
            "--cache-dir", str(tmp_path))
    first = invoke(*argv)
    second = invoke(*argv)
    assert first[0] == 0 and first == second
    data = json.loads(first[1])
    assert data["orders"] == [2]
    assert data["forms"][0]["weight"] == [12, 2]


def test_covariants_command():
    status, text = invoke("covariants", "--d", "2", "--lambda", "6,6")
    assert status == 0
    (cov,) = json.loads(text)
    assert cov["lambda"] == [6, 6]


def test_bad_lambda_is_reported(capsys):
    status, _ = invoke("covariants", "--d", "2", "--lambda", "11,1")
    assert status == 1


def test_hecke_command():
    status, text = invoke("hecke", "--space", "8,8", "--prec", "20", "--p", "2")
    assert status == 0
    (entry,) = json.loads(text)
    assert entry["matrix"] == [["1344"]]
    assert entry["eigenvalues"] == ["1344"]


def test_hecke_unknown_space(capsys):
    status, _ = invoke("hecke", "--space", "2,2", "--prec", "12")
    assert status == 1


def test_reproduce_d4_orders():
    status, text = invoke("reproduce", "--table", "d4-orders", "--prec", "24")
    assert status == 0
    rows = {tuple(r["lambda"]): r["orders"] for r in json.loads(text)["rows"]}
    assert rows[(16, 8)] == [0, 2, 3]
    assert rows[(21, 3)] == [2]
