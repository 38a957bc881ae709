"""Reading and writing complexes, maps, homotopies and triangle certificates.

All files are JSON objects with a ``format`` tag and a ``version``.  Matrix
entries are exact integers (strings "p/q" over the rationals), stored row
major.  Writing uses sorted keys and a fixed layout, so writing the value
read from a file reproduces the file byte for byte.

Complex::

    {"format": "wk-complex", "version": 1, "ring": "gf2",
     "terms": [{"degree": 0, "rank": 1}, {"degree": 1, "rank": 1}],
     "differentials": [{"degree": 0, "matrix": [[1]]}]}

A term may carry ``"levels": [...]`` (one level per generator); then every
term must have them and the complex is filtered.  Maps, homotopies and
certificates embed their complexes::

    {"format": "wk-map", "version": 1, "source": {...}, "target": {...},
     "components": [{"degree": 0, "matrix": [[1]]}]}
"""
from __future__ import annotations

import json
from pathlib import Path

from .complex_core import ChainMap, Complex, HomotopyWitness, VerificationError
from .exact_linalg import Matrix, Ring, RingError, parse_ring
from .homotopy_cat import CandidateTriangle, TriangleCertificate

VERSION = 1


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# encoding

def _entry(ring: Ring, x):
    return ring.format(x) if ring.kind == "q" else int(x)


def matrix_to_lists(M: Matrix) -> list:
    return [[_entry(M.ring, x) for x in row] for row in M.to_lists()]


def complex_to_obj(X: Complex) -> dict:
    terms = []
    for n in X.support:
        t = {"degree": n, "rank": X.rank(n)}
        if X.is_filtered:
            t["levels"] = list(X.level(n))
        terms.append(t)
    diffs = [{"degree": n, "matrix": matrix_to_lists(D)} for n, D in sorted(X.diffs.items()) if not D.is_zero()]
    obj = {"format": "wk-complex", "version": VERSION, "ring": X.ring.descriptor,
           "terms": terms, "differentials": diffs}
    if X.is_filtered and X.is_zero():
        obj["filtered"] = True
    return obj


def map_to_obj(f: ChainMap) -> dict:
    comps = [{"degree": n, "matrix": matrix_to_lists(M)} for n, M in sorted(f.comps.items()) if not M.is_zero()]
    return {"format": "wk-map", "version": VERSION, "source": complex_to_obj(f.source),
            "target": complex_to_obj(f.target), "components": comps}


def homotopy_to_obj(h: HomotopyWitness) -> dict:
    comps = [{"degree": n, "matrix": matrix_to_lists(M)} for n, M in sorted(h.h.items())
             if M.rows and M.cols and not M.is_zero()]
    return {"format": "wk-homotopy", "version": VERSION, "source": complex_to_obj(h.source),
            "target": complex_to_obj(h.target), "components": comps}


def certificate_to_obj(c: TriangleCertificate) -> dict:
    t = c.triangle
    return {"format": "wk-certificate", "version": VERSION,
            "u": map_to_obj(t.u), "v": map_to_obj(t.v), "w": map_to_obj(t.w),
            "phi": map_to_obj(c.phi), "psi": map_to_obj(c.psi),
            "h_left": homotopy_to_obj(c.h_left), "h_right": homotopy_to_obj(c.h_right),
            "h_psiphi": homotopy_to_obj(c.h_psiphi), "h_phipsi": homotopy_to_obj(c.h_phipsi)}


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def to_text(value) -> str:
    if isinstance(value, Complex):
        return dumps(complex_to_obj(value))
    if isinstance(value, ChainMap):
        return dumps(map_to_obj(value))
    if isinstance(value, HomotopyWitness):
        return dumps(homotopy_to_obj(value))
    if isinstance(value, TriangleCertificate):
        return dumps(certificate_to_obj(value))
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write(value, path) -> None:
    Path(path).write_text(to_text(value))


# ---------------------------------------------------------------------------
# decoding

def _need(obj: dict, key: str, kind: str):
    if not isinstance(obj, dict):
        raise ParseError(f"{kind}: expected an object")
    if key not in obj:
        raise ParseError(f"{kind}: missing field {key!r}")
    return obj[key]


def _check_header(obj, fmt: str):
    if not isinstance(obj, dict):
        raise ParseError(f"expected a {fmt} object")
    if obj.get("format") != fmt:
        raise ParseError(f"expected format {fmt!r}, got {obj.get('format')!r}")
    if obj.get("version") != VERSION:
        raise ParseError(f"unsupported version {obj.get('version')!r}")


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def matrix_from_lists(ring: Ring, rows, shape: tuple) -> Matrix:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a list of rows")
    r, c = shape
    if len(rows) != r or any(len(row) != c for row in rows):
        got = (len(rows), len(rows[0]) if rows else 0)
        raise ParseError(f"matrix has shape {got}, expected {shape}")
    out = []
    for row in rows:
        vals = []
        for x in row:
            if isinstance(x, bool):
                raise ParseError(f"bad matrix entry {x!r}")
            if isinstance(x, int):
                vals.append(ring.norm(x))
            elif isinstance(x, str):
                try:
                    vals.append(ring.parse_element(x))
                except (ValueError, ZeroDivisionError, RingError) as e:
                    raise ParseError(f"bad matrix entry {x!r}: {e}") from None
            else:
                raise ParseError(f"bad matrix entry {x!r}")
        out.append(vals)
    return Matrix(ring, r, c, [x for row in out for x in row])


def complex_from_obj(obj) -> Complex:
    _check_header(obj, "wk-complex")
    try:
        ring = parse_ring(str(_need(obj, "ring", "complex")))
    except RingError as e:
        raise ParseError(str(e)) from None
    terms = _need(obj, "terms", "complex")
    diffs = obj.get("differentials", [])
    if not isinstance(terms, list) or not isinstance(diffs, list):
        raise ParseError("terms and differentials must be lists")
    ranks, levels = {}, {}
    for t in terms:
        n = _int(_need(t, "degree", "term"), "degree")
        if n in ranks:
            raise ParseError(f"degree {n} listed twice")
        ranks[n] = _int(_need(t, "rank", "term"), "rank")
        if ranks[n] < 0:
            raise ParseError("negative rank")
        if "levels" in t:
            lv = t["levels"]
            if not isinstance(lv, list):
                raise ParseError("levels must be a list")
            levels[n] = [_int(x, "level") for x in lv]
    filtered = bool(levels) or bool(obj.get("filtered"))
    if filtered and set(levels) != {n for n, r in ranks.items() if r}:
        raise ParseError("levels must be given for every term or for none")
    ds = {}
    for dd in diffs:
        n = _int(_need(dd, "degree", "differential"), "degree")
        if n in ds:
            raise ParseError(f"differential in degree {n} listed twice")
        ds[n] = matrix_from_lists(ring, _need(dd, "matrix", "differential"), (ranks.get(n + 1, 0), ranks.get(n, 0)))
    try:
        return Complex(ring, ranks, ds, levels if filtered else None)
    except (ValueError, VerificationError) as e:
        raise ParseError(f"invalid complex: {e}") from None


def _components(obj, ring: Ring, shape_of) -> dict:
    comps = {}
    raw = obj.get("components", [])
    if not isinstance(raw, list):
        raise ParseError("components must be a list")
    for c in raw:
        n = _int(_need(c, "degree", "component"), "degree")
        if n in comps:
            raise ParseError(f"component in degree {n} listed twice")
        comps[n] = matrix_from_lists(ring, _need(c, "matrix", "component"), shape_of(n))
    return comps


def map_from_obj(obj) -> ChainMap:
    _check_header(obj, "wk-map")
    X = complex_from_obj(_need(obj, "source", "map"))
    Y = complex_from_obj(_need(obj, "target", "map"))
    if X.ring != Y.ring:
        raise ParseError("source and target over different rings")
    comps = _components(obj, X.ring, lambda n: (Y.rank(n), X.rank(n)))
    try:
        return ChainMap(X, Y, comps)
    except (ValueError, VerificationError) as e:
        raise ParseError(f"invalid chain map: {e}") from None


def homotopy_from_obj(obj) -> HomotopyWitness:
    _check_header(obj, "wk-homotopy")
    X = complex_from_obj(_need(obj, "source", "homotopy"))
    Y = complex_from_obj(_need(obj, "target", "homotopy"))
    comps = _components(obj, X.ring, lambda n: (Y.rank(n - 1), X.rank(n)))
    return HomotopyWitness(X, Y, comps)


def certificate_from_obj(obj) -> TriangleCertificate:
    _check_header(obj, "wk-certificate")
    get = lambda k, f: f(_need(obj, k, "certificate"))
    try:
        t = CandidateTriangle(get("u", map_from_obj), get("v", map_from_obj), get("w", map_from_obj))
    except ValueError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"invalid triangle: {e}") from None
    return TriangleCertificate(t, get("phi", map_from_obj), get("psi", map_from_obj),
                               get("h_left", homotopy_from_obj), get("h_right", homotopy_from_obj),
                               get("h_psiphi", homotopy_from_obj), get("h_phipsi", homotopy_from_obj))


_READERS = {
    "wk-complex": complex_from_obj,
    "wk-map": map_from_obj,
    "wk-homotopy": homotopy_from_obj,
    "wk-certificate": certificate_from_obj,
}


def loads(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"not valid JSON: {e}") from None
    if not isinstance(obj, dict) or obj.get("format") not in _READERS:
        raise ParseError("unknown or missing format tag")
    return _READERS[obj["format"]](obj)


def read(path, expect: type | None = None):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from None
    value = loads(text)
    if expect is not None and not isinstance(value, expect):
        raise ParseError(f"{path}: expected a {expect.__name__}, got a {type(value).__name__}")
    return value
