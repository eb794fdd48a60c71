"""Instance files and random instance generation.

File format (JSON, one object)::

    {"format": "halftheta-instance", "version": 1,
     "points": [["0", "0"], ["3/2", "5"], ...],
     "constraints": [[0, 1], ...],
     "meta": {...}}

Coordinates are decimal integers or ``p/q`` strings; JSON integers are
accepted on input, JSON floats are not.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .cones import Instance, InvalidInstance
from .exact import orient, properly_intersect, scalar

FORMAT = "halftheta-instance"
VERSION = 1


class ParseError(ValueError):
    pass


class ValidationError(InvalidInstance):
    pass


class GenerationExhausted(RuntimeError):
    pass


def _coord_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _parse_coord(raw, where: str) -> Fraction:
    if isinstance(raw, bool) or isinstance(raw, float):
        raise ParseError(f"{where}: floating-point coordinate {raw!r} rejected")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return scalar(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: {exc}") from None
    raise ParseError(f"{where}: expected integer or 'p/q' string, got {type(raw).__name__}")


def serialize_instance(inst: Instance) -> str:
    """Canonical text form; parse_instance(serialize_instance(x)) == x."""
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "points": [[_coord_text(p.x), _coord_text(p.y)] for p in inst.points],
        "constraints": [list(c) for c in sorted(inst.constraints)],
        "meta": inst.meta,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ": ")) + "\n"


def parse_instance(data, validate: bool = True) -> Instance:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    if doc.get("format") != FORMAT:
        raise ParseError(f"unknown format {doc.get('format')!r}")
    if doc.get("version") != VERSION:
        raise ParseError(f"unsupported version {doc.get('version')!r}")
    raw_points = doc.get("points")
    if not isinstance(raw_points, list):
        raise ParseError("'points' must be a list")
    points = []
    for i, p in enumerate(raw_points):
        if not isinstance(p, list) or len(p) != 2:
            raise ParseError(f"point {i}: expected [x, y]")
        points.append((_parse_coord(p[0], f"point {i} x"), _parse_coord(p[1], f"point {i} y")))
    raw_cons = doc.get("constraints", [])
    if not isinstance(raw_cons, list):
        raise ParseError("'constraints' must be a list")
    cons = []
    for i, c in enumerate(raw_cons):
        if (not isinstance(c, list) or len(c) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in c)):
            raise ParseError(f"constraint {i}: expected [i, j] integer pair")
        cons.append(tuple(c))
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError("'meta' must be an object")
    inst = Instance.build(points, cons, meta)
    if validate and not inst.validation.ok:
        raise ValidationError(inst.validation)
    return inst


def load_instance(path, validate: bool = True) -> Instance:
    with open(path, "rb") as fh:
        return parse_instance(fh.read(), validate=validate)


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_instance(inst))


def generate_instance(seed: int, n: int, constraint_budget: int = 0, bbox=(1000, 1000),
                      max_tries: int = 2000) -> Instance:
    """Random integer instance in general position; deterministic in ``seed``.

    Points are rejection-sampled one at a time.  Constraints are drawn
    greedily from vertex pairs, favouring short ones, and kept when they
    cross no constraint already accepted.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if isinstance(bbox, int):
        bbox = (bbox, bbox)
    width, height = bbox
    rng = random.Random(seed)
    pts: list = []
    ys: set = set()
    for _ in range(n):
        for _attempt in range(max_tries):
            p = (rng.randrange(width), rng.randrange(height))
            # integer directions hit a 60-degree ray only when horizontal
            if p[1] in ys:
                continue
            if any(orient(a, b, p) == 0 for i, a in enumerate(pts) for b in pts[i + 1:]):
                continue
            break
        else:
            raise GenerationExhausted(f"could not place point {len(pts)} in {bbox}")
        pts.append(p)
        ys.add(p[1])

    cons: list = []
    if constraint_budget > 0 and n >= 2:
        pairs = sorted(((a, b) for a in range(n) for b in range(a + 1, n)),
                       key=lambda e: ((pts[e[0]][0] - pts[e[1]][0]) ** 2
                                      + (pts[e[0]][1] - pts[e[1]][1]) ** 2, e))
        taken = set()
        for _attempt in range(8 * constraint_budget):
            if len(cons) >= constraint_budget:
                break
            e = pairs[int(len(pairs) * rng.random() ** 3)]
            if e in taken:
                continue
            seg = (pts[e[0]], pts[e[1]])
            if any(properly_intersect(seg, (pts[a], pts[b])) for a, b in cons):
                continue
            taken.add(e)
            cons.append(e)
    meta = {"seed": seed, "n": n, "constraint_budget": constraint_budget,
            "bbox": [width, height], "generator": "halftheta.generate_instance/1"}
    return Instance.build(pts, cons, meta)
