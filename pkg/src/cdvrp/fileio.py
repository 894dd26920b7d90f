"""Text instance files and JSON solution documents.

Instance files are line-oriented with sections NAME, SIZE, FLEET, DEMANDS
and exactly one of COORDS (2D points, depot first) or MATRIX (strict lower
triangle, row per vertex). ``#`` starts a comment. Example::

    NAME tiny
    SIZE 2
    FLEET
    0 1 4 inf
    DEMANDS
    0 1
    MATRIX
    1

Solutions are JSON documents with fields algorithm, parameters, tours
(class/sequence/length/load), pi, alpha and meta, rendered with 12
significant digits so a rewrite of a parsed file is byte-identical.
"""

from __future__ import annotations

import json
import math
from typing import Optional

import numpy as np

from .errors import InstanceFormatError
from .metric import (
    FleetSpec,
    MetricInstance,
    VehicleClass,
    euclidean_instance,
    validate_instance,
)
from .solvers import RoutedTour, RoutingSolution
from .treetour import tour_from_seq

_SECTIONS = ("NAME", "SIZE", "FLEET", "DEMANDS", "COORDS", "MATRIX")


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def _fmt(x: float) -> str:
    """Exact shortest decimal for a float (round-trips bit-for-bit)."""
    return repr(float(x))


# ---------------------------------------------------------------------------
# instance files
# ---------------------------------------------------------------------------


def parse_instance(text: str, validate: bool = True) -> MetricInstance:
    """Parse an instance document; optionally reject invalid metrics.

    Raises :class:`InstanceFormatError` with a 1-based line number for
    malformed input, and (when ``validate``) for instances that fail the
    metric/fleet checks, naming the first violation.
    """
    sections: dict[str, list[tuple[int, str]]] = {}
    current: Optional[str] = None
    section_line: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)
        kw = head[0].upper()
        if kw in _SECTIONS:
            if kw in sections:
                raise InstanceFormatError(f"duplicate section {kw}", line=lineno)
            sections[kw] = []
            section_line[kw] = lineno
            current = kw
            if len(head) > 1:
                sections[kw].append((lineno, head[1]))
            continue
        if current is None:
            raise InstanceFormatError(f"unknown section {head[0]!r}", line=lineno)
        sections[current].append((lineno, line))

    def tokens(kw: str) -> list[tuple[int, str]]:
        return [
            (lineno, tok)
            for lineno, chunk in sections.get(kw, [])
            for tok in chunk.split()
        ]

    def number(lineno: str, tok: str) -> float:
        try:
            return float(tok)
        except ValueError:
            raise InstanceFormatError(f"expected a number, got {tok!r}", line=lineno)

    if "SIZE" not in sections:
        raise InstanceFormatError("missing SIZE section")
    size_toks = tokens("SIZE")
    if len(size_toks) != 1:
        raise InstanceFormatError("SIZE takes exactly one value", line=section_line["SIZE"])
    n = int(number(*size_toks[0]))
    if n < 1:
        raise InstanceFormatError(f"SIZE must be >= 1, got {n}", line=size_toks[0][0])

    name = "unnamed"
    if "NAME" in sections:
        name = " ".join(chunk for _, chunk in sections["NAME"]) or "unnamed"

    if "FLEET" not in sections or not sections["FLEET"]:
        raise InstanceFormatError("missing FLEET section")
    classes = []
    for lineno, chunk in sections["FLEET"]:
        parts = chunk.split()
        if len(parts) not in (3, 4):
            raise InstanceFormatError(
                f"fleet line needs 'class Q T [multiplicity|inf]', got {chunk!r}",
                line=lineno,
            )
        cid = int(number(lineno, parts[0]))
        if cid != len(classes):
            raise InstanceFormatError(
                f"fleet class ids must be consecutive from 0, got {cid}", line=lineno
            )
        q = number(lineno, parts[1])
        t = number(lineno, parts[2])
        mult: Optional[int] = None
        if len(parts) == 4 and parts[3].lower() != "inf":
            mult = int(number(lineno, parts[3]))
        try:
            classes.append(VehicleClass(q, t, mult))
        except ValueError as exc:
            raise InstanceFormatError(str(exc), line=lineno)
    fleet = FleetSpec(tuple(classes))

    dem_toks = tokens("DEMANDS")
    if "DEMANDS" not in sections:
        raise InstanceFormatError("missing DEMANDS section")
    if len(dem_toks) != n:
        raise InstanceFormatError(
            f"expected {n} demand values, got {len(dem_toks)}",
            line=section_line["DEMANDS"],
        )
    demands = [number(l, t) for l, t in dem_toks]

    has_coords = "COORDS" in sections
    has_matrix = "MATRIX" in sections
    if has_coords == has_matrix:
        raise InstanceFormatError("need exactly one of COORDS or MATRIX")

    if has_coords:
        toks = tokens("COORDS")
        if len(toks) != 2 * n:
            raise InstanceFormatError(
                f"expected {2 * n} coordinate values, got {len(toks)}",
                line=section_line["COORDS"],
            )
        vals = [number(l, t) for l, t in toks]
        points = [(vals[2 * i], vals[2 * i + 1]) for i in range(n)]
        try:
            inst = euclidean_instance(points, demands, fleet, name=name)
        except ValueError as exc:
            raise InstanceFormatError(str(exc), line=section_line["COORDS"])
    else:
        toks = tokens("MATRIX")
        want = n * (n - 1) // 2
        if len(toks) != want:
            raise InstanceFormatError(
                f"expected {want} lower-triangular entries for SIZE {n}, got {len(toks)}",
                line=section_line["MATRIX"],
            )
        vals = [number(l, t) for l, t in toks]
        dist = np.zeros((n, n))
        pos = 0
        for i in range(1, n):
            for j in range(i):
                dist[i, j] = dist[j, i] = vals[pos]
                pos += 1
        try:
            inst = MetricInstance(dist=dist, demand=np.asarray(demands), fleet=fleet, name=name)
        except ValueError as exc:
            raise InstanceFormatError(str(exc), line=section_line["MATRIX"])

    if validate:
        report = validate_instance(inst)
        if not report.ok:
            v = report.violations[0]
            data_line = section_line["COORDS" if has_coords else "MATRIX"]
            raise InstanceFormatError(
                f"instance fails validation: {v.kind} at {v.where} "
                f"(magnitude {v.magnitude:g})",
                line=data_line,
            )
    return inst


def format_instance(inst: MetricInstance) -> str:
    """Render an instance back to the text format (COORDS when available)."""
    lines = [f"NAME {inst.name}", f"SIZE {inst.n}", "FLEET"]
    for cid, c in enumerate(inst.fleet.classes):
        mult = "inf" if c.multiplicity is None else str(c.multiplicity)
        lines.append(f"{cid} {_fmt(c.capacity)} {_fmt(c.distance_bound)} {mult}")
    lines.append("DEMANDS")
    lines.append(" ".join(_fmt(q) for q in inst.demand))
    if inst.coords is not None:
        lines.append("COORDS")
        for x, y in inst.coords:
            lines.append(f"{_fmt(x)} {_fmt(y)}")
    else:
        lines.append("MATRIX")
        for i in range(1, inst.n):
            lines.append(" ".join(_fmt(inst.dist[i, j]) for j in range(i)))
    return "\n".join(lines) + "\n"


def read_instance(path, validate: bool = True) -> MetricInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read(), validate=validate)


# ---------------------------------------------------------------------------
# solution documents
# ---------------------------------------------------------------------------


def _jsonable(value):
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot serialize non-finite value {value}")
        return _round12(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating,)):
        return _round12(float(value))
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


def solution_to_doc(sol: RoutingSolution) -> dict:
    meta = dict(sol.meta)
    algorithm = meta.pop("algorithm", "unknown")
    parameters = meta.pop("parameters", {})
    return _jsonable(
        {
            "algorithm": algorithm,
            "parameters": parameters,
            "tours": [
                {
                    "class": class_id,
                    "sequence": list(tour.seq),
                    "length": tour.length,
                    "load": tour.load,
                }
                for tour, class_id in sol.tours
            ],
            "pi": sol.pi,
            "alpha": sol.alpha,
            "meta": meta,
        }
    )


def write_solution(sol: RoutingSolution, inst: MetricInstance) -> str:
    """Serialize a solution deterministically (field order fixed, 12 significant digits)."""
    return json.dumps(solution_to_doc(sol), indent=2) + "\n"


def dump_solution_doc(doc: dict) -> str:
    """Re-serialize a parsed solution document; a second write is byte-identical."""
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def parse_solution(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid solution JSON: {exc}", line=exc.lineno)
    for key in ("algorithm", "tours", "pi", "alpha"):
        if key not in doc:
            raise InstanceFormatError(f"solution document missing field {key!r}")
    return doc


def solution_from_doc(inst: MetricInstance, doc: dict) -> RoutingSolution:
    """Rebuild a RoutingSolution from a parsed document, recomputing tours."""
    routed = []
    for entry in doc["tours"]:
        seq = tuple(int(v) for v in entry["sequence"])
        routed.append(RoutedTour(tour_from_seq(inst, seq), int(entry["class"])))
    meta = dict(doc.get("meta", {}))
    meta["algorithm"] = doc.get("algorithm", "unknown")
    meta["parameters"] = doc.get("parameters", {})
    return RoutingSolution(tours=tuple(routed), alpha=float(doc["alpha"]), meta=meta)
