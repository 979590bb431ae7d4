import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tomofit import (
    CountRecord,
    EmptyBasisError,
    EmptyEnsembleError,
    IntensityRecord,
    ParseError,
    SchemaError,
    SixCountRecord,
    ValidationError,
    ZeroIntensityError,
    parse_records,
    stokes_from_counts,
    stokes_from_intensities,
    stokes_from_six_counts,
)


@pytest.mark.parametrize(
    "counts, expected",
    [
        ((500, 500, 500, 500), (0, 0, 0)),
        ((1000, 0, 500, 500), (0, 0, 1)),
        ((500, 500, 750, 500), (0.5, 0, 0)),
    ],
)
def test_stokes_from_counts(counts, expected):
    assert tuple(stokes_from_counts(CountRecord(*counts))) == pytest.approx(expected, abs=1e-15)


def test_counts_out_of_range_propagate():
    # n_d > N is taken as measurement error and passed through
    assert stokes_from_counts(CountRecord(500, 500, 1100, 500)).s1 == pytest.approx(1.2)


def test_empty_ensemble():
    with pytest.raises(EmptyEnsembleError):
        CountRecord(0, 0, 5, 5)


@pytest.mark.parametrize(
    "counts, expected",
    [
        ((7, 7, 7, 7, 7, 7), (0, 0, 0)),
        ((1, 0, 1, 1, 1, 1), (1, 0, 0)),
        ((75, 25, 60, 40, 90, 10), (0.5, 0.2, 0.8)),
    ],
)
def test_stokes_from_six_counts(counts, expected):
    assert tuple(stokes_from_six_counts(SixCountRecord(*counts))) == pytest.approx(expected, abs=1e-15)


def test_six_counts_empty_basis_named():
    with pytest.raises(EmptyBasisError) as err:
        SixCountRecord(1, 1, 0, 0, 1, 1)
    assert err.value.basis == "R/L"


@pytest.mark.parametrize(
    "values, expected",
    [
        ((2, 1, 1, 1), (0, 0, 0)),
        ((1, 1.05, 0.5, 0.5), (0, 0, 1.1)),
        ((4, 4, 2, 2), (0, 0, 1)),
    ],
)
def test_stokes_from_intensities(values, expected):
    assert tuple(stokes_from_intensities(IntensityRecord(*values))) == pytest.approx(expected, abs=1e-15)


def test_zero_intensity():
    with pytest.raises(ZeroIntensityError):
        IntensityRecord(0, 0, 0, 0)


count = st.integers(0, 10**6)


@given(count, count, count, count)
def test_six_counts_bounded(a, b, c, d):
    rec = SixCountRecord(a + 1, b, c, d + 1, b + 1, a)
    assert all(abs(v) <= 1 for v in stokes_from_six_counts(rec))


@given(st.integers(1, 10**6), st.data())
def test_six_and_four_count_paths_agree(n, data):
    nh = data.draw(st.integers(0, n))
    nd = data.draw(st.integers(0, n))
    nr = data.draw(st.integers(0, n))
    six = stokes_from_six_counts(SixCountRecord(nd, n - nd, nr, n - nr, nh, n - nh))
    four = stokes_from_counts(CountRecord(nh, n - nh, nd, nr))
    assert tuple(six) == pytest.approx(tuple(four), abs=1e-15)


@given(st.floats(0.01, 100), st.floats(0, 2), st.floats(0, 2), st.floats(0, 2), st.floats(1e-3, 1e3))
def test_intensity_scale_invariance(i, h, d, r, c):
    base = stokes_from_intensities(IntensityRecord(i, h * i, d * i, r * i))
    scaled = stokes_from_intensities(IntensityRecord(c * i, c * h * i, c * d * i, c * r * i))
    assert tuple(scaled) == pytest.approx(tuple(base), abs=1e-12)


def test_parse_csv_four_count():
    data = b"label,n_h,n_v,n_d,n_r\nlbl1,500,500,750,500\n"
    (rec,) = parse_records(data, "csv")
    assert rec == CountRecord(500, 500, 750, 500, label="lbl1")
    assert rec.line == 2


def test_parse_csv_header_order_and_crlf():
    data = b"n_r,n_d,n_v,n_h\r\n1,2,3,4\r\n\r\n5,6,7,8\r\n"
    recs = parse_records(data, "csv")
    assert recs == [CountRecord(4, 3, 2, 1), CountRecord(8, 7, 6, 5)]
    assert [r.line for r in recs] == [2, 4]


def test_parse_csv_six_and_intensity():
    six = parse_records(b"n_d,n_a,n_r,n_l,n_h,n_v\n75,25,60,40,90,10\n", "csv")
    assert isinstance(six[0], SixCountRecord)
    inten = parse_records("i_total,i_h,i_d,i_r\n1,1.05,0.5,0.5\n", "csv")
    assert inten == [IntensityRecord(1, 1.05, 0.5, 0.5)]


def test_parse_json_single_and_array():
    (rec,) = parse_records(b'{"i_total":1,"i_h":1.05,"i_d":0.5,"i_r":0.5}', "json")
    assert isinstance(rec, IntensityRecord)
    recs = parse_records(io.BytesIO(b'[{"n_h":1,"n_v":1,"n_d":1,"n_r":1,"label":"a"},{"n_h":2,"n_v":0,"n_d":1,"n_r":1}]'))
    assert [r.label for r in recs] == ["a", None]


def test_negative_count_line_reported():
    data = b"label,n_h,n_v,n_d,n_r\nok,1,1,1,1\nbad,500,-3,1,1\n"
    with pytest.raises(ValidationError) as err:
        parse_records(data, "csv")
    assert err.value.line == 3


def test_malformed_row():
    with pytest.raises(ParseError) as err:
        parse_records(b"n_h,n_v,n_d,n_r\n1,2,x,4\n", "csv")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_records(b"n_h,n_v,n_d,n_r\n1,2,3\n", "csv")


@pytest.mark.parametrize(
    "data",
    [
        b"n_h,n_v,n_d\n1,2,3\n",
        b"n_h,n_v,n_d,n_r,i_total\n1,1,1,1,1\n",
        b'{"n_h":1,"n_v":1,"n_d":1,"n_r":1,"i_h":2}',
    ],
)
def test_schema_errors(data):
    with pytest.raises(SchemaError):
        parse_records(data)


def test_json_errors():
    with pytest.raises(ParseError):
        parse_records(b"[1, 2]", "json")
    with pytest.raises(ParseError):
        parse_records(b'{"n_h":"1","n_v":1,"n_d":1,"n_r":1}', "json")
    with pytest.raises(ParseError):
        parse_records(b"{not json", "json")
    with pytest.raises(ValidationError) as err:
        parse_records(b'[{"n_h":1,"n_v":1,"n_d":1,"n_r":1},{"n_h":0,"n_v":0,"n_d":1,"n_r":1}]', "json")
    assert err.value.index == 1


def test_non_utf8_rejected():
    with pytest.raises(ParseError):
        parse_records(b"n_h,n_v,n_d,n_r\n\xff,1,1,1\n", "csv")
