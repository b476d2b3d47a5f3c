"""Model files: the JSON description of a complex with connection data.

All exact numbers travel as strings in the polynomial grammar, so a model
file never contains floats except in the solver block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .branes import BraneComplex
from .dg import Connection, HomElement
from .errors import ModelParseError
from .exact import ExteriorForm, Matrix, Ring, Scalar, parse_poly, parse_scalar
from .yang_mills import SolverConfig


@dataclass
class NamedVariation:
    name: str
    index: int
    element: HomElement


@dataclass
class ModelFile:
    ring: Ring
    complex: BraneComplex
    base_connections: dict
    variations: list
    mode: str
    solver: SolverConfig
    eval_points: list
    raw_bytes: bytes

    def variation(self, name: str) -> NamedVariation:
        for v in self.variations:
            if v.name == name:
                return v
        raise ModelParseError(f"no variation named {name!r}", "variations")


def _expect(obj, key, where, kind=None):
    if key not in obj:
        raise ModelParseError(f"missing field {key!r}", where)
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise ModelParseError(
            f"field {key!r} should be {kind.__name__}, got {type(value).__name__}",
            where,
        )
    return value


def _parse_matrix(rows, ring, shape, where) -> Matrix:
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise ModelParseError(f"expected {shape[0]} rows", where)
    entries = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise ModelParseError(f"expected {shape[1]} columns", f"{where}[{r}]")
        out = []
        for c, text in enumerate(row):
            try:
                out.append(parse_poly(text, ring))
            except ModelParseError as err:
                raise ModelParseError(str(err), f"{where}[{r}][{c}]") from None
        entries.append(out)
    return Matrix(entries)


def _parse_one_form_matrix(data, ring, rank, where) -> Matrix:
    if not isinstance(data, list) or len(data) != ring.n_vars:
        raise ModelParseError(
            f"one_form_matrix needs {ring.n_vars} frame components", where
        )
    per_dx = [
        _parse_matrix(layer, ring, (rank, rank), f"{where}[{k}]")
        for k, layer in enumerate(data)
    ]

    def entry(r, c):
        comps = {}
        for k in range(ring.n_vars):
            p = per_dx[k].entries[r][c]
            if not p.is_zero():
                comps[(k,)] = p
        return ExteriorForm(ring, 1, comps)

    return Matrix.build(rank, rank, entry)


def load_model(path: str, validate_square: bool = True) -> ModelFile:
    try:
        raw = open(path, "rb").read()
    except OSError as err:
        raise ModelParseError(str(err), path)
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ModelParseError(f"invalid JSON: {err}", path)

    ring_obj = _expect(data, "ring", "ring", dict)
    n_vars = _expect(ring_obj, "n_vars", "ring", int)
    trunc = _expect(ring_obj, "trunc_degree", "ring", int)
    if n_vars < 1 or trunc < 1:
        raise ModelParseError("ring parameters must be positive", "ring")
    ring = Ring(n_vars, trunc)

    modules = {}
    for idx, entry in enumerate(_expect(data, "modules", "modules", list)):
        where = f"modules[{idx}]"
        index = _expect(entry, "index", where, int)
        rank = _expect(entry, "rank", where, int)
        if rank < 1:
            raise ModelParseError("rank must be positive", where)
        if index in modules:
            raise ModelParseError(f"duplicate module index {index}", where)
        modules[index] = rank

    diffs = {}
    for idx, entry in enumerate(data.get("differentials", [])):
        where = f"differentials[{idx}]"
        i = _expect(entry, "from_index", where, int)
        if i not in modules or (i + 1) not in modules:
            raise ModelParseError(
                f"differential endpoints {i}, {i + 1} must both be modules", where
            )
        shape = (modules[i + 1], modules[i])
        diffs[i] = _parse_matrix(_expect(entry, "matrix", where, list), ring, shape, where)

    try:
        complex_ = BraneComplex(ring, modules, diffs, validate=validate_square)
    except Exception as err:
        raise ModelParseError(str(err), "differentials") from None

    base_connections = {}
    for idx, entry in enumerate(data.get("base_connections", [])):
        where = f"base_connections[{idx}]"
        index = _expect(entry, "index", where, int)
        if index not in modules:
            raise ModelParseError(f"no module with index {index}", where)
        A = _parse_one_form_matrix(
            _expect(entry, "one_form_matrix", where, list), ring, modules[index], where
        )
        base_connections[index] = Connection(complex_.term(index), A)

    variations = []
    for idx, entry in enumerate(data.get("variations", [])):
        where = f"variations[{idx}]"
        name = _expect(entry, "name", where, str)
        index = _expect(entry, "index", where, int)
        if index not in modules:
            raise ModelParseError(f"no module with index {index}", where)
        A = _parse_one_form_matrix(
            _expect(entry, "one_form_matrix", where, list), ring, modules[index], where
        )
        module = complex_.term(index)
        variations.append(NamedVariation(name, index, HomElement(module, module, 1, A)))

    pairing = data.get("pairing", {"mode": "hermitian"})
    mode = pairing.get("mode", "hermitian")
    if mode not in ("hermitian", "bilinear"):
        raise ModelParseError(f"unknown pairing mode {mode!r}", "pairing.mode")

    solver_obj = data.get("solver", {})
    solver = SolverConfig(
        starts=int(solver_obj.get("starts", 40)),
        seed=int(solver_obj.get("seed", 1)),
        tol=float(solver_obj.get("tol", 1e-12)),
        max_iter=int(solver_obj.get("max_iter", 80)),
    )

    eval_points = []
    for idx, point in enumerate(data.get("eval_points", [])):
        where = f"eval_points[{idx}]"
        if not isinstance(point, list):
            raise ModelParseError("evaluation point must be a list", where)
        if len(point) != n_vars:
            raise ModelParseError(
                f"evaluation point needs {n_vars} coordinates", where
            )
        try:
            eval_points.append([parse_scalar(v) for v in point])
        except ModelParseError as err:
            raise ModelParseError(str(err), where) from None
    if not eval_points:
        eval_points = [[Scalar(0)] * n_vars]

    return ModelFile(
        ring,
        complex_,
        base_connections,
        variations,
        mode,
        solver,
        eval_points,
        raw,
    )
