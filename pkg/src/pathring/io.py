"""Parsing of the JSON input documents consumed by the CLI.

Two document kinds exist; both are strict (unknown fields are rejected):

* cdga documents: fields `degrees`, `unit`, `d`, `product`, and the
  optional `augmentations`.  Vectors are lists of [basis_name, "p/q"]
  pairs.
* geometry documents: fields `punctures`, `path`, and the optional
  `words`, `connection`, `splitting`.  Complex numbers are pairs of
  decimal or rational strings.

The exact grammar is written out in README.md.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import chen
from .cdga import CDGA, Augmentation, GradedVectorSpace
from .errors import ParseError


def _fail(msg: str) -> ParseError:
    return ParseError(msg)


def _check_fields(doc: dict, allowed: set, kind: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise _fail(f"unknown fields in {kind} document: {', '.join(sorted(unknown))}")


def parse_rational(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise _fail(f"bad rational {text!r}: {exc}") from None


def parse_vector(items) -> dict:
    if not isinstance(items, list):
        raise _fail(f"vector must be a list of [name, rational] pairs, got {type(items).__name__}")
    out = {}
    for pair in items:
        if not (isinstance(pair, list) and len(pair) == 2):
            raise _fail(f"bad vector entry {pair!r}")
        name, value = pair
        out[str(name)] = parse_rational(value)
    return out


def parse_complex(pair) -> complex:
    if not (isinstance(pair, list) and len(pair) == 2):
        raise _fail(f"complex numbers are [re, im] string pairs, got {pair!r}")
    return complex(float(parse_rational(pair[0])), float(parse_rational(pair[1])))


def load_cdga_document(doc: dict):
    """Parse a cdga document; returns (algebra, named augmentations)."""
    if not isinstance(doc, dict):
        raise _fail("cdga document must be a JSON object")
    _check_fields(doc, {"degrees", "unit", "d", "product", "augmentations"}, "cdga")
    for required in ("degrees", "unit"):
        if required not in doc:
            raise _fail(f"cdga document is missing the {required!r} field")
    degrees_raw = doc["degrees"]
    if not isinstance(degrees_raw, dict):
        raise _fail("degrees must map degree strings to name lists")
    degrees = {}
    for key, names in degrees_raw.items():
        try:
            deg = int(key)
        except ValueError:
            raise _fail(f"bad degree key {key!r}") from None
        if not isinstance(names, list):
            raise _fail(f"degree {key} must list basis names")
        degrees[deg] = [str(n) for n in names]
    differential = {}
    for entry in doc.get("d", []):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise _fail(f"bad differential entry {entry!r}")
        differential[str(entry[0])] = parse_vector(entry[1])
    products = {}
    for entry in doc.get("product", []):
        if not (isinstance(entry, list) and len(entry) == 3):
            raise _fail(f"bad product entry {entry!r}")
        products[(str(entry[0]), str(entry[1]))] = parse_vector(entry[2])
    try:
        algebra = CDGA(GradedVectorSpace(degrees), str(doc["unit"]), differential, products)
    except (ValueError, KeyError) as exc:
        raise _fail(f"inconsistent cdga tables: {exc}") from None
    augmentations = {}
    for name, vec in doc.get("augmentations", {}).items():
        values = parse_vector(vec)
        try:
            augmentations[str(name)] = Augmentation(algebra, values)
        except Exception as exc:
            raise _fail(f"bad augmentation {name!r}: {exc}") from None
    return algebra, augmentations


def _parse_segment(entry: dict):
    if not isinstance(entry, dict) or "type" not in entry:
        raise _fail(f"bad path segment {entry!r}")
    kind = entry["type"]
    if kind == "line":
        _check_fields(entry, {"type", "from", "to"}, "line segment")
        return chen.LineSegment(parse_complex(entry["from"]), parse_complex(entry["to"]))
    if kind == "arc":
        _check_fields(entry, {"type", "center", "radius", "from_angle", "to_angle"}, "arc segment")
        return chen.CircularArc(
            parse_complex(entry["center"]),
            float(parse_rational(entry["radius"])),
            float(parse_rational(entry["from_angle"])),
            float(parse_rational(entry["to_angle"])),
        )
    if kind == "bezier":
        _check_fields(entry, {"type", "points"}, "bezier segment")
        pts = entry["points"]
        if not (isinstance(pts, list) and len(pts) == 4):
            raise _fail("bezier segments need exactly 4 control points")
        return chen.CubicBezier(*(parse_complex(p) for p in pts))
    raise _fail(f"unknown segment type {kind!r}")


def load_geometry_document(doc: dict):
    """Parse a geometry document; returns (line, path, words, connection, splitting)."""
    if not isinstance(doc, dict):
        raise _fail("geometry document must be a JSON object")
    _check_fields(doc, {"punctures", "path", "words", "connection", "splitting"}, "geometry")
    for required in ("punctures", "path"):
        if required not in doc:
            raise _fail(f"geometry document is missing the {required!r} field")
    try:
        line = chen.PuncturedLine([parse_complex(p) for p in doc["punctures"]])
    except ValueError as exc:
        raise _fail(str(exc)) from None
    segs = doc["path"]
    if not isinstance(segs, list) or not segs:
        raise _fail("path must be a nonempty list of segments")
    try:
        path = chen.Path([_parse_segment(s) for s in segs])
    except chen.EndpointMismatch as exc:
        raise _fail(f"discontinuous path: {exc}") from None
    words = []
    for w in doc.get("words", []):
        if not isinstance(w, list):
            raise _fail(f"bad word {w!r}")
        word = tuple(int(k) for k in w)
        for k in word:
            if not 0 <= k < line.n_forms:
                raise _fail(f"word letter {k} is not a puncture index")
        words.append(word)
    connection = None
    if "connection" in doc:
        conn = doc["connection"]
        if not isinstance(conn, dict):
            raise _fail("connection must be an object")
        _check_fields(conn, {"rank", "entries"}, "connection")
        entries = {}
        for item in conn.get("entries", []):
            _check_fields(item, {"row", "col", "form", "coeff"}, "connection entry")
            key = (int(item["row"]), int(item["col"]))
            coeffs = entries.setdefault(key, {})
            form = int(item["form"])
            coeffs[form] = coeffs.get(form, 0) + parse_complex(item["coeff"])
        try:
            connection = chen.UnipotentConnection(int(conn["rank"]), entries)
        except ValueError as exc:
            raise _fail(str(exc)) from None
    splitting = None
    if "splitting" in doc:
        splitting = [int(k) for k in doc["splitting"]]
    return line, path, words, connection, splitting


def load_json_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise _fail(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise _fail(f"invalid JSON in {path}: {exc}") from None
