"""Versioned JSON shape documents.

Numbers round-trip exactly (shortest-repr float serialization), so a saved
shape reloads with bit-identical moments.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ShapeError, ShapeFileError
from .fourier import FourierBoundary, is_simple
from .geometry import Ellipsoid, Polygon, SimplicialBody
from .ops import shape_kind

__all__ = ["SHAPE_FORMAT_VERSION", "shape_to_dict", "shape_from_dict",
           "save_shape", "load_shape"]

SHAPE_FORMAT_VERSION = 1


def shape_to_dict(shape, name: str | None = None) -> dict:
    kind = shape_kind(shape)
    doc = {"format_version": SHAPE_FORMAT_VERSION, "kind": kind}
    if name:
        doc["name"] = str(name)
    if kind == "polygon":
        doc["payload"] = {"vertices": shape.vertices.tolist()}
    elif kind == "simplicial":
        doc["payload"] = {
            "vertices": shape.vertices.tolist(),
            "simplices": shape.simplices.tolist(),
            "facets": shape.facets.tolist(),
        }
    elif kind == "ellipsoid":
        doc["payload"] = {
            "center": shape.center.tolist(),
            "semi_axes": shape.semi_axes.tolist(),
        }
    else:
        doc["payload"] = {
            "a0": shape.a0, "b0": shape.b0,
            "a": shape.a.tolist(), "ap": shape.ap.tolist(),
            "b": shape.b.tolist(), "bp": shape.bp.tolist(),
        }
    return doc


def shape_from_dict(doc: dict):
    if not isinstance(doc, dict):
        raise ShapeFileError("shape document must be a JSON object")
    version = doc.get("format_version")
    if version != SHAPE_FORMAT_VERSION:
        raise ShapeFileError(f"unsupported shape format version {version!r}")
    kind = doc.get("kind")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise ShapeFileError("shape document has no payload object")
    try:
        if kind == "polygon":
            return Polygon(payload["vertices"])
        if kind == "simplicial":
            return SimplicialBody(payload["vertices"], payload["simplices"],
                                  payload["facets"])
        if kind == "ellipsoid":
            return Ellipsoid(payload["semi_axes"], payload.get("center"))
        if kind == "fourier":
            fb = FourierBoundary(payload.get("a0", 0.0), payload.get("b0", 0.0),
                                 payload["a"], payload["ap"],
                                 payload["b"], payload["bp"])
            if not is_simple(fb):
                raise ShapeFileError("invalid fourier shape: curve is not simple")
            return fb
    except KeyError as exc:
        raise ShapeFileError(f"shape payload is missing field {exc}") from exc
    except ShapeError as exc:
        raise ShapeFileError(f"invalid {kind} shape: {exc}") from exc
    raise ShapeFileError(f"unknown shape kind {kind!r}")


def save_shape(shape, path, name: str | None = None) -> None:
    doc = shape_to_dict(shape, name=name or Path(path).stem)
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_shape(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ShapeFileError(f"cannot read shape file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ShapeFileError(f"shape file {path} is not valid JSON: {exc}") from exc
    return shape_from_dict(doc)
