import json

import pytest

from olgpaygo import data
from olgpaygo.exceptions import IngestionError, LookupFailure


@pytest.fixture(scope="module")
def bundled():
    return data.ingest()


def test_bundled_rows(bundled):
    brazil = bundled["Brazil"]
    assert brazil.H[0] == 20 and brazil.e[0] == 2603
    us = bundled["US"]
    assert us.H[5] == 95 and len(us.e) == 4
    assert bundled["Italy"].e[3] == 29469
    assert set(bundled) == set(data.COUNTRIES)


def test_derived_series(bundled):
    brazil = data.derive_series(bundled["Brazil"])
    assert brazil.beta[0] == pytest.approx(2.49, abs=0.005)
    assert brazil.gamma[4] == pytest.approx(1.14, abs=0.005)
    assert brazil.beta[3] == brazil.beta[4] == brazil.beta[2]
    assert len(brazil.gamma) == 5


@pytest.mark.parametrize("country", data.COUNTRIES)
def test_derived_tables_close_to_published(bundled, country):
    cs = data.derive_series(bundled[country])
    for got, ref in zip(cs.alpha, data.canonical_alpha(country)):
        assert got == pytest.approx(ref, abs=0.05)
    for got, ref in zip(cs.beta, data.canonical_beta(country)):
        assert got == pytest.approx(ref, abs=0.05)
    for got, ref in zip(cs.gamma, data.canonical_gamma(country)):
        assert got == pytest.approx(ref, abs=0.1)


def test_canonical_lookup():
    assert data.canonical_gamma("Brazil") == (4.42, 1.67, 1.61, 1.21, 1.14)
    assert data.canonical_gamma("china") == (2.93, 7.75, 4.37, 3.71, 2.82)
    assert data.canonical_gamma("Italy") == (2.41, 1.62, 0.72, 0.78, 0.71)
    assert data.canonical_gamma("USA") == data.canonical_gamma("US")
    with pytest.raises(LookupFailure):
        data.canonical_gamma("Atlantis")


def test_constant_series_gives_unit_ratios():
    series = data.ingest_text("country,t,H_millions,gdp_pc\n"
                              + "".join(f"Flat,{t},5,100\n" for t in range(4)))
    cs = data.derive_series(series["Flat"])
    assert cs.alpha == cs.beta == cs.gamma == (1.0, 1.0, 1.0)


def test_round_trip(tmp_path, bundled):
    path = tmp_path / "copy.csv"
    text = data.serialize(bundled, path)
    assert data.ingest(path) == bundled
    assert data.bundled_path().read_text(encoding="utf-8") == text
    assert b"\r\n" not in path.read_bytes()


@pytest.mark.parametrize("body,row", [
    ("A,0,-5,100\n", 2),
    ("A,0,5,100\nA,2,5,100\n", 3),
    ("A,0,5,100\nA,1,5\n", 3),
    ("A,0,5,abc\n", 2),
    ("A,x,5,100\n", 2),
    ("A,0,5,100\nA,1,5,\nA,2,5,100\n", 4),
    ("A,0,5,0\n", 2),
])
def test_ingestion_errors_carry_row(body, row):
    with pytest.raises(IngestionError) as info:
        data.ingest_text("country,t,H_millions,gdp_pc\n" + body)
    assert info.value.row == row
    assert str(info.value).startswith(f"row {row}:")


def test_bad_header_and_missing_file(tmp_path):
    with pytest.raises(IngestionError):
        data.ingest_text("name,t,H,e\nA,0,1,1\n")
    with pytest.raises(IngestionError):
        data.ingest(tmp_path / "absent.csv")


def test_json_export(bundled):
    payload = json.loads(data.to_json(data.derive_series(bundled["India"])))
    assert payload["name"] == "India"
    assert len(payload["gamma"]) == 5
