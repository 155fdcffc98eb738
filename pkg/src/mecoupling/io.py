"""File formats: JSON in, JSON/TSV out.

Collections travel as {"distributions": [[...], ...]}, joint tables as
{"joint": [[...], ...]}, couplings as the full cell record written by
write_coupling. Floats are serialized with the shortest representation
that round-trips, so re-parsing reproduces the binary doubles exactly.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .engine import Coupling
from .errors import CouplingError, ParseError
from .pmf import Pmf

TOOL_NAME = "mecoupling"
FORMAT_VERSION = "0.1.0"


def _load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not valid JSON ({exc})") from exc


def _number_rows(raw: Any, path: str, key: str) -> list[list[float]]:
    if not isinstance(raw, dict) or key not in raw:
        raise ParseError(f"{path}: expected an object with a {key!r} key")
    rows = raw[key]
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{path}: {key!r} must be a non-empty array of arrays")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not row:
            raise ParseError(f"{path}: {key}[{i}] must be a non-empty array")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ParseError(f"{path}: {key}[{i}][{j}] is not a number: {v!r}")
        out.append([float(v) for v in row])
    return out


def read_collection(path: str) -> list[Pmf]:
    """Read a pmf collection, reporting bad rows by position."""
    rows = _number_rows(_load(path), path, "distributions")
    pmfs = []
    for i, row in enumerate(rows):
        try:
            pmfs.append(Pmf(row))
        except CouplingError as exc:
            raise ParseError(f"{path}: distributions[{i}]: {exc}") from exc
    return pmfs


def read_joint(path: str) -> np.ndarray:
    """Read a joint table (rows = first variable, columns = second)."""
    rows = _number_rows(_load(path), path, "joint")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ParseError(f"{path}: joint[{i}] has {len(row)} entries, expected {width}")
    return np.asarray(rows, dtype=np.float64)


def write_coupling(path: str, coupling: Coupling) -> None:
    """Write a coupling file: masses, maps, provenance, and shape metadata."""
    payload = {
        "tool": TOOL_NAME,
        "version": FORMAT_VERSION,
        "m": coupling.m,
        "n": coupling.n,
        "truncation": coupling.truncation,
        "q": coupling.q.masses.tolist(),
        "maps": coupling.maps.tolist(),
        "provenance": coupling.provenance.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def read_coupling(path: str) -> Coupling:
    """Read a coupling file back, validating shape coherence."""
    raw = _load(path)
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: expected a coupling object")
    for key in ("m", "n", "q", "maps", "provenance"):
        if key not in raw:
            raise ParseError(f"{path}: missing key {key!r}")
    m, n = raw["m"], raw["n"]
    if not isinstance(m, int) or not isinstance(n, int) or m < 1 or n < 1:
        raise ParseError(f"{path}: m and n must be positive integers")
    truncation = raw.get("truncation")
    if truncation is not None and (not isinstance(truncation, int) or truncation < 1):
        raise ParseError(f"{path}: truncation must be null or an integer >= 1")
    try:
        q = Pmf(raw["q"])
    except CouplingError as exc:
        raise ParseError(f"{path}: q: {exc}") from exc
    k = len(q)
    maps = raw["maps"]
    if not isinstance(maps, list) or len(maps) != m:
        raise ParseError(f"{path}: maps must hold {m} rows")
    for i, row in enumerate(maps):
        if not isinstance(row, list) or len(row) != k:
            raise ParseError(f"{path}: maps[{i}] must hold {k} labels")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < n:
                raise ParseError(f"{path}: maps[{i}][{j}] is not a label in [0, {n}): {v!r}")
    prov = raw["provenance"]
    if not isinstance(prov, list) or len(prov) != k:
        raise ParseError(f"{path}: provenance must hold {k} (rank, stick) pairs")
    for j, pair in enumerate(prov):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or any(isinstance(v, bool) or not isinstance(v, int) or v < 0 for v in pair)
        ):
            raise ParseError(f"{path}: provenance[{j}] is not a (rank, stick) pair: {pair!r}")
    return Coupling(
        q=q,
        maps=np.asarray(maps, dtype=np.int64),
        provenance=np.asarray(prov, dtype=np.int64),
        n=n,
        truncation=truncation,
    )


def write_report(path: str, report: dict) -> None:
    """Write any machine-readable report as JSON."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
