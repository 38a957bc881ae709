import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wkit import formats
from wkit.complex_core import ChainMap, Complex, homotopy_witness
from wkit.exact_linalg import Ring
from wkit.homotopy_cat import certify_triangle, cone_triangle
from wkit.sampling import random_chain_map, random_complex

RINGS = [Ring.gf(2), Ring.gf(3), Ring.zmod(4), Ring.integers(), Ring.rationals()]


def test_documented_example_reads():
    text = json.dumps({"format": "wk-complex", "version": 1, "ring": "gf2",
                       "terms": [{"degree": 0, "rank": 1}, {"degree": 1, "rank": 1}],
                       "differentials": [{"degree": 0, "matrix": [[1]]}]})
    X = formats.loads(text)
    assert X == Complex.from_diffs(Ring.gf(2), 0, [[[1]]])


def test_rationals_are_written_as_strings():
    Q = Ring.rationals()
    X = Complex.from_diffs(Q, 0, [[[Q.parse_element("1/2")]]])
    obj = formats.complex_to_obj(X)
    assert obj["differentials"][0]["matrix"] == [["1/2"]]


@pytest.mark.parametrize("text, msg", [
    ("not json", "JSON"),
    ('{"format": "wk-zzz", "version": 1}', "format"),
    ('{"format": "wk-complex", "version": 2, "ring": "gf2", "terms": []}', "version"),
    ('{"format": "wk-complex", "version": 1, "ring": "gf4", "terms": []}', "prime"),
    ('{"format": "wk-complex", "version": 1, "ring": "gf2", "terms": [{"degree": 0, "rank": 1}],'
     ' "differentials": [{"degree": 0, "matrix": [[1]]}]}', "shape"),
    ('{"format": "wk-complex", "version": 1, "ring": "gf2", "terms": [{"degree": 0, "rank": 1},'
     ' {"degree": 1, "rank": 1}, {"degree": 2, "rank": 1}], "differentials": [{"degree": 0, "matrix": [[1]]},'
     ' {"degree": 1, "matrix": [[1]]}]}', "invalid complex"),
    ('{"format": "wk-complex", "version": 1, "ring": "gf2", "terms": [{"degree": 0, "rank": true}]}', "integer"),
])
def test_malformed_inputs(text, msg):
    with pytest.raises(formats.ParseError, match=msg):
        formats.loads(text)


def test_read_checks_the_expected_type(tmp_path):
    X = Complex.stalk(Ring.gf(2), 1, 0)
    p = tmp_path / "x.json"
    formats.write(X, p)
    assert formats.read(p, Complex) == X
    with pytest.raises(formats.ParseError):
        formats.read(p, ChainMap)
    with pytest.raises(formats.ParseError):
        formats.read(tmp_path / "missing.json")


def test_certificate_round_trip_replays():
    rng = random.Random(2)
    R = Ring.gf(3)
    f = random_chain_map(random_complex(R, rng, 0, 1, 2), random_complex(R, rng, 0, 1, 2), rng)
    c = certify_triangle(cone_triangle(f))
    text = formats.to_text(c)
    c2 = formats.loads(text)
    assert c2.verify()
    assert formats.to_text(c2) == text


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(RINGS), st.integers(0, 10 ** 6), st.booleans())
def test_round_trip_is_byte_identical(ring, seed, filtered):
    rng = random.Random(seed)
    lv = (-1, 1) if filtered else None
    X = random_complex(ring, rng, -1, 1, 2, levels=lv)
    Y = random_complex(ring, rng, -1, 1, 2, levels=lv)
    f = random_chain_map(X, Y, rng, filtered=filtered)
    for value in (X, f):
        text = formats.to_text(value)
        back = formats.loads(text)
        assert back == value
        assert formats.to_text(back) == text
    h = homotopy_witness(f)
    if h is not None:
        h2 = formats.loads(formats.to_text(h))
        assert h2.verify(f)
