"""Space specs, design CSV tables and the JSON documents written by the CLI."""
from __future__ import annotations

import csv
import io
import json
import os
from fractions import Fraction
from typing import Sequence

from .contrast import CONSTANT, ContrastLabel, ContrastRep, contrast_matrix
from .core import DesignSpace, FractionalDesign, build_space, fraction_from_points, space_from_counts, to_rational
from .polynomial import IndicatorPoly, Poly


def rational_json(v: Fraction):
    """Integers stay JSON numbers; everything else becomes ``"p/q"``."""
    v = Fraction(v)
    return v.numerator if v.denominator == 1 else str(v)


def parse_space_spec(text: str) -> DesignSpace:
    """``"2,2,3"`` (default codings), a JSON object ``{"factors": [[-1,1], ...]}``,
    or a path to a file holding the JSON object."""
    text = text.strip()
    if not text:
        raise ValueError("empty space spec")
    if not text.startswith("{") and os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read().strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed space JSON: {exc}") from None
        return space_from_json(obj)
    try:
        counts = [int(p) for p in text.split(",")]
    except ValueError:
        raise ValueError(f"malformed space spec {text!r}: expected level counts like '2,2,3'") from None
    return space_from_counts(counts)


def space_from_json(obj) -> DesignSpace:
    if not isinstance(obj, dict) or not isinstance(obj.get("factors"), list):
        raise ValueError('space JSON must be an object with a "factors" list')
    return build_space([[to_rational(v) for v in f] for f in obj["factors"]])


def space_to_json(space: DesignSpace) -> dict:
    return {"factors": [[rational_json(v) for v in f.levels] for f in space.factors]}


def default_names(n: int) -> list[str]:
    return [f"x{j + 1}" for j in range(n)]


def read_design_csv(source, space: DesignSpace) -> FractionalDesign:
    """Parse a design table (header row of factor names, one row per run)."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, encoding="utf-8", newline="") as fh:
            text = fh.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    rows = [r for r in rows if not r[0].lstrip().startswith("#")]
    if not rows:
        raise ValueError("design table is empty (a header row is required)")
    header, body = rows[0], rows[1:]
    if len(header) != space.n:
        raise ValueError(f"design header has {len(header)} columns, space has {space.n} factors")
    points = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != space.n:
            raise ValueError(f"row {lineno}: {len(row)} values, expected {space.n}")
        points.append([to_rational(c) for c in row])
    return fraction_from_points(space, points)


def design_csv(F: FractionalDesign, names: Sequence[str] | None = None) -> str:
    names = list(names) if names else default_names(F.space.n)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for pt in F.points:
        w.writerow([str(v) for v in pt])
    return buf.getvalue()


def theta_terms_json(space: DesignSpace, poly: Poly) -> list[dict]:
    return [
        {"exponents": list(a), "value": str(poly.coefficient(a))}
        for a in space.exponents
        if poly.coefficient(a)
    ]


def indicator_to_json(ind: IndicatorPoly) -> dict:
    return {"space": space_to_json(ind.space), "theta": theta_terms_json(ind.space, ind.poly)}


def indicator_from_json(obj, space: DesignSpace | None = None) -> IndicatorPoly:
    """Read an indicator document; ``space`` overrides (and is checked against) the embedded one."""
    if not isinstance(obj, dict) or not isinstance(obj.get("theta"), list):
        raise ValueError('indicator JSON must be an object with a "theta" list')
    embedded = space_from_json(obj["space"]) if "space" in obj else None
    if space is None:
        if embedded is None:
            raise ValueError("indicator JSON has no space and none was given")
        space = embedded
    elif embedded is not None and embedded != space:
        raise ValueError(f"indicator was computed on {embedded.describe()}, not {space.describe()}")
    terms = {}
    for item in obj["theta"]:
        a = tuple(int(e) for e in item["exponents"])
        if not space.in_exponent_set(a):
            raise ValueError(f"exponent vector {list(a)} is outside the exponent set")
        if a in terms:
            raise ValueError(f"duplicate exponent vector {list(a)}")
        terms[a] = to_rational(item["value"])
    return IndicatorPoly(space, Poly(terms))


def load_first_json(text: str):
    """Decode the first JSON value in ``text``, ignoring anything after it."""
    text = text.lstrip()
    try:
        obj, _ = json.JSONDecoder().raw_decode(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from None
    return obj


def contrast_to_json(rep: ContrastRep) -> dict:
    return {
        "constant": str(rep.constant),
        "terms": [
            {"J": list(lab.J), "itilde": list(lab.itilde), "value": str(v)}
            for lab, v in rep.nonzero_terms()
        ],
    }


def contrast_from_json(obj, space: DesignSpace) -> ContrastRep:
    labels = contrast_matrix(space).labels
    vals = {lab: Fraction(0) for lab in labels}
    vals[CONSTANT] = to_rational(str(obj["constant"]))
    for item in obj.get("terms", []):
        lab = ContrastLabel(tuple(item["J"]), tuple(item["itilde"]))
        if lab not in vals:
            raise ValueError(f"unknown contrast label {lab}")
        vals[lab] = to_rational(item["value"])
    return ContrastRep(space, tuple((lab, vals[lab]) for lab in labels))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)

