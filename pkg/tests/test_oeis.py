import pytest
import requests

from algebra.errors import InvalidOeisIdError, NetworkUnavailableError, OeisError
from services import oeis_service
from services.oeis_service import (
    CACHE,
    LOCAL,
    NETWORK,
    OeisClient,
    cross_validate,
    fetch_bfile,
    normalize_oeis_id,
    parse_bfile,
)

BAXTER_PREFIX = "0 1\n1 1\n2 2\n3 6\n4 22"


def test_parse_bfile_examples():
    bfile = parse_bfile(BAXTER_PREFIX)
    assert bfile.entries == ((0, 1), (1, 1), (2, 2), (3, 6), (4, 22))
    assert parse_bfile("# comment\n0 1").entries == ((0, 1),)
    assert parse_bfile("\n\n5 120\n\n").entries == ((5, 120),)


def test_parse_bfile_rejects_bad_lines():
    with pytest.raises(OeisError, match="line 2"):
        parse_bfile("0 1\n0 2")
    with pytest.raises(OeisError, match="line 3"):
        parse_bfile("0 1\n1 1\n2 two")
    with pytest.raises(OeisError, match="line 1"):
        parse_bfile("17")


def test_serialize_then_parse_keeps_entries():
    bfile = parse_bfile(BAXTER_PREFIX, "A001181")
    assert parse_bfile(bfile.serialize(), "A001181").entries == bfile.entries


def test_normalize_oeis_id():
    assert normalize_oeis_id("a001181") == "A001181"
    assert normalize_oeis_id("b001181") == "A001181"
    for bad in ("XYZ", "A1181", "A0011810", ""):
        with pytest.raises(InvalidOeisIdError):
            normalize_oeis_id(bad)


def test_baxter_matches_the_fixture(baxter):
    bfile = OeisClient().resolve("A001181")
    assert bfile.source == LOCAL
    # the OEIS entry starts with a(0) = 0, the recurrence with B_0 = 1
    report = cross_validate(baxter, bfile, lower=1)
    assert report.ok
    assert report.confirmed == 60


def test_h_matches_the_fixture(h):
    report = cross_validate(h, OeisClient().resolve("A001499"))
    assert report.ok
    assert report.confirmed == 61
    assert report.to_dict()["mismatches"] == []


def test_perturbed_value_is_the_only_mismatch(baxter):
    entries = dict(parse_bfile(BAXTER_PREFIX).entries)
    entries[3] = 7
    tampered = parse_bfile("\n".join(f"{k} {v}" for k, v in entries.items()))
    report = cross_validate(baxter, tampered)
    assert report.confirmed == 4
    assert report.mismatches == [{"index": "3", "expected": "7", "actual": "6"}]


def test_limit_bounds_the_comparison(h):
    report = cross_validate(h, OeisClient().resolve("A001499"), limit=10)
    assert report.confirmed == 11


def test_warm_cache_is_served_from_disk(tmp_path):
    client = OeisClient(cache_dir=str(tmp_path), allow_network=False, fixture_dir=str(tmp_path / "none"))
    client.cache_path("A001181").write_text(BAXTER_PREFIX)
    bfile = client.fetch_bfile("A001181")
    assert bfile.source == CACHE
    assert bfile.as_dict()[4] == 22


def test_cold_cache_offline_names_the_miss(tmp_path):
    with pytest.raises(NetworkUnavailableError, match="A001499"):
        fetch_bfile("A001499", cache_dir=str(tmp_path), allow_network=False)


def test_invalid_id_is_rejected(tmp_path):
    with pytest.raises(InvalidOeisIdError):
        fetch_bfile("XYZ", cache_dir=str(tmp_path))


class _Response:
    def __init__(self, text, status=200):
        self.text = text
        self.status = status

    def raise_for_status(self):
        if self.status >= 400:
            raise requests.HTTPError(f"status {self.status}")


def test_download_is_cached(monkeypatch, tmp_path):
    calls = []

    def fake_get(url, timeout):
        calls.append(url)
        return _Response("0 1\n1 0\n2 1\n3 6\n4 90\n")

    monkeypatch.setattr(oeis_service.requests, "get", fake_get)
    client = OeisClient(cache_dir=str(tmp_path), allow_network=True, base_url="https://example.org/")
    first = client.fetch_bfile("A001499")
    second = client.fetch_bfile("A001499")
    assert calls == ["https://example.org/A001499/b001499.txt"]
    assert (first.source, second.source) == (NETWORK, CACHE)
    assert first.entries == second.entries


def test_download_failure_names_the_cache_miss(monkeypatch, tmp_path):
    monkeypatch.setattr(oeis_service.requests, "get", lambda url, timeout: _Response("", 404))
    client = OeisClient(cache_dir=str(tmp_path), allow_network=True)
    with pytest.raises(NetworkUnavailableError, match="cache miss for A001499"):
        client.fetch_bfile("A001499")
    assert not client.cache_path("A001499").exists()
