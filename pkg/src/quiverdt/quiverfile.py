"""Reading quiver spec files.

A spec file is JSON text with keys:

* ``vertices``: list of vertex names;
* ``arrows``: list of ``[tail, head, label]`` triples;
* ``potential`` (optional): list of ``{"coeff": "p/q", "cycle": [labels]}``;
* ``stabilities`` (optional): named slope data,
  ``{"name": {"c": {vertex: "p/q"}, "r": {vertex: "p/q"}}}``.

Rationals are written as integer or "p/q" strings throughout.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Dict, Tuple

from .quiver import Arrow, Quiver, Stability


class QuiverFileError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise QuiverFileError(f"bad rational literal {text!r}") from exc
    raise QuiverFileError(f"bad rational literal {text!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def load_quiver_file(path) -> Tuple[Quiver, Dict[str, Stability]]:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise QuiverFileError(f"cannot parse quiver file {path}: {exc}") from exc
    if not isinstance(data, dict) or "vertices" not in data:
        raise QuiverFileError(f"{path}: expected an object with a 'vertices' key")
    vertices = tuple(str(v) for v in data["vertices"])
    arrows = []
    for entry in data.get("arrows", ()):
        if len(entry) != 3:
            raise QuiverFileError(f"{path}: arrow {entry!r} is not [tail, head, label]")
        arrows.append(Arrow(str(entry[0]), str(entry[1]), str(entry[2])))
    terms = []
    for term in data.get("potential", ()):
        coeff = parse_rational(term.get("coeff", 1))
        cycle = tuple(str(x) for x in term.get("cycle", ()))
        terms.append((coeff, cycle))
    try:
        quiver = Quiver(vertices, tuple(arrows), tuple(terms), name=path.stem)
    except ValueError as exc:
        raise QuiverFileError(f"{path}: {exc}") from exc
    stabilities: Dict[str, Stability] = {}
    for name, spec in data.get("stabilities", {}).items():
        try:
            c = {v: parse_rational(x) for v, x in spec["c"].items()}
            r = {v: parse_rational(x) for v, x in spec["r"].items()}
            stabilities[name] = quiver.stability(c, r)
        except (KeyError, ValueError) as exc:
            raise QuiverFileError(f"{path}: bad stability {name!r}: {exc}") from exc
    return quiver, stabilities
