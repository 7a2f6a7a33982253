"""File formats: moment tables, measures, cubature rules, and basis JSON.

All floats are serialized with 17 significant digits and all object keys are
sorted, so identical inputs produce byte-identical artifacts and every
write -> parse round trip is lossless.
"""

from __future__ import annotations

import csv
import json
import math
import os

from .decompose import DistributedMomentTable, MonomialMomentTable
from .cubature import ComponentMeasureSet, PseudoCubature
from .harmonics import SolidHarmonicBasis, build_basis
from .polycore import MultiPoly
from .stieltjes import AtomicMeasure

__all__ = [
    "dumps_canonical",
    "write_json",
    "load_moment_table",
    "write_distributed_table",
    "load_monomial_csv",
    "write_monomial_csv",
    "write_component_measures",
    "load_component_measures",
    "write_cubature",
    "load_cubature",
    "cached_basis",
]

BASIS_CACHE_ENV = "PSEUDOMOMENT_BASIS_CACHE"


class SchemaError(ValueError):
    """Input file does not match any supported schema."""


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------

def _fmt_float(x):
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if math.isnan(x):
        return '"nan"'
    s = format(x, ".17g")
    return s


def dumps_canonical(obj, indent=0):
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {dumps_canonical(obj[k], indent + 1)}'
            for k in sorted(obj, key=str))
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(f"{pad}  {dumps_canonical(v, indent + 1)}" for v in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    return json.dumps(obj)


def write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(dumps_canonical(obj))
        fh.write("\n")


# ---------------------------------------------------------------------------
# moment tables
# ---------------------------------------------------------------------------

def write_distributed_table(path, tbl):
    entries = [
        {"j": j, "k": k, "l": l, "value": float(v)}
        for (j, k, l), v in sorted(tbl.values.items(), key=lambda kv: (kv[0][1], kv[0][2], kv[0][0]))
    ]
    write_json(path, {
        "dimension": tbl.dim,
        "k_max": tbl.k_max,
        "order": tbl.order,
        "basis_fingerprint": tbl.basis_fingerprint,
        "entries": entries,
    })


def load_moment_table(path):
    """Load a distributed-moment JSON table or a monomial CSV table."""
    if path.endswith(".csv"):
        return load_monomial_csv(path)
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: not valid JSON ({e})") from None
    for key in ("dimension", "k_max", "order", "entries"):
        if key not in data:
            raise SchemaError(f"{path}: missing required field {key!r}")
    values = {}
    for i, e in enumerate(data["entries"]):
        try:
            key = (int(e["j"]), int(e["k"]), int(e["l"]))
            v = float(e["value"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"{path}: bad entry #{i}: {exc}") from None
        if key in values:
            raise SchemaError(f"{path}: duplicate entry for (j,k,l)={key}")
        if isinstance(e["value"], complex):
            raise SchemaError(f"{path}: complex moment at {key}; tables must be real")
        values[key] = v
    try:
        return DistributedMomentTable(
            dim=int(data["dimension"]), k_max=int(data["k_max"]), order=int(data["order"]),
            values=values, basis_fingerprint=data.get("basis_fingerprint", ""))
    except ValueError as e:
        raise SchemaError(f"{path}: {e}") from None


def write_monomial_csv(path, tbl):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"alpha_{i+1}" for i in range(tbl.dim)] + ["value"])
        for alpha in sorted(tbl.values, key=lambda a: (sum(a), tuple(-x for x in a))):
            w.writerow([*alpha, format(tbl.values[alpha], ".17g")])


def load_monomial_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: empty CSV")
    header = rows[0]
    if header[-1] != "value" or not all(h == f"alpha_{i+1}" for i, h in enumerate(header[:-1])):
        raise SchemaError(f"{path}: expected header alpha_1,...,alpha_d,value, got {header}")
    dim = len(header) - 1
    values = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != dim + 1:
            raise SchemaError(f"{path}:{lineno}: expected {dim + 1} fields")
        try:
            alpha = tuple(int(x) for x in row[:-1])
            values[alpha] = float(row[-1])
        except ValueError as e:
            raise SchemaError(f"{path}:{lineno}: {e}") from None
    degree = max((sum(a) for a in values), default=0)
    try:
        return MonomialMomentTable(dim=dim, degree=degree, values=values)
    except ValueError as e:
        raise SchemaError(f"{path}: {e}") from None


# ---------------------------------------------------------------------------
# component measures and cubature
# ---------------------------------------------------------------------------

def write_component_measures(path, cms):
    comps = [
        {"k": k, "l": l, "nodes": [float(t) for t in m.nodes], "weights": [float(w) for w in m.weights]}
        for (k, l), m in cms.sorted_items()
    ]
    write_json(path, {
        "dimension": cms.dim,
        "basis_fingerprint": cms.basis_fingerprint,
        "components": comps,
    })


def load_component_measures(path):
    with open(path) as fh:
        data = json.load(fh)
    for key in ("dimension", "components"):
        if key not in data:
            raise SchemaError(f"{path}: missing required field {key!r}")
    entries = {}
    for c in data["components"]:
        entries[(int(c["k"]), int(c["l"]))] = AtomicMeasure(
            tuple(float(t) for t in c["nodes"]), tuple(float(w) for w in c["weights"]))
    return ComponentMeasureSet(dim=int(data["dimension"]), entries=entries,
                               basis_fingerprint=data.get("basis_fingerprint", ""))


def write_cubature(path, rule):
    shells = [
        {"k": k, "l": l,
         "nodes": [{"r": float(r), "w": float(w)} for r, w in zip(m.nodes, m.weights)]}
        for k, l, m in rule.shells
    ]
    payload = {"dimension": rule.dim, "degree": rule.degree, "shells": shells}
    if rule.points is not None:
        payload["points"] = [
            {"x": [float(v) for v in x], "w": float(w)} for x, w in rule.points
        ]
    write_json(path, payload)


def load_cubature(path):
    import numpy as np
    with open(path) as fh:
        data = json.load(fh)
    shells = tuple(
        (int(s["k"]), int(s["l"]),
         AtomicMeasure(tuple(float(n["r"]) for n in s["nodes"]),
                       tuple(float(n["w"]) for n in s["nodes"])))
        for s in data["shells"])
    points = None
    if "points" in data:
        points = tuple((np.array([float(v) for v in p["x"]]), float(p["w"])) for p in data["points"])
    return PseudoCubature(dim=int(data["dimension"]), degree=int(data["degree"]),
                          shells=shells, points=points)


# ---------------------------------------------------------------------------
# basis cache
# ---------------------------------------------------------------------------

def basis_from_json_dict(data):
    from .harmonics import surface_area
    dim = int(data["dimension"])
    k_max = int(data["k_max"])
    layers = [[] for _ in range(k_max + 1)]
    for h in data["harmonics"]:
        terms = {tuple(c["alpha"]): complex(c["re"], c["im"]) for c in h["coefficients"]}
        layers[int(h["k"])].append(MultiPoly(dim, terms))
    return SolidHarmonicBasis(dim=dim, k_max=k_max,
                              elements=tuple(tuple(layer) for layer in layers),
                              surface_area=surface_area(dim))


def cached_basis(d, k_max):
    """build_basis with an optional on-disk cache (PSEUDOMOMENT_BASIS_CACHE)."""
    cache_dir = os.environ.get(BASIS_CACHE_ENV)
    if not cache_dir:
        return build_basis(d, k_max)
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, f"basis_d{d}_k{k_max}.json")
    if os.path.exists(path):
        with open(path) as fh:
            return basis_from_json_dict(json.load(fh))
    basis = build_basis(d, k_max)
    write_json(path, basis.to_json_dict())
    return basis
