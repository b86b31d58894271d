"""JSON function specs: schema, parsing and construction.

A spec is one JSON object with a ``kind`` and a list of ``modes``.  Complex
numbers are written as a number or a ``[re, im]`` pair.

``trig-poly``
    ``modes: [{"n", "coeff", "radial"?}]``; ``radial`` holds ascending
    polynomial coefficients in ``r`` (default ``[1]``).
``annulus-mode``
    top-level ``breakpoints`` ``[e_0 < ... < e_K]`` and per-mode ``values``
    (``K`` entries), constant on each ``[e_i, e_{i+1})``.
``bump-mode``
    ``modes: [{"n", "lo", "hi", "plateau_fraction"?, "amplitude"?}]``.
``taylor``
    ``coefficients: [c_0, c_1, ...]`` for ``sum c_k z^k``.
``sampled``
    either ``samples`` (a circle function on the uniform grid) or
    ``modes: [{"n", "nodes", "values"}]`` with piecewise-linear profiles.

An optional top-level ``amplitudes`` list rescales the modes in order.
"""

from __future__ import annotations

import json

import jsonschema

from .disc_fn import (
    BumpProfile,
    CircleFunction,
    MonomialProfile,
    PiecewiseConstantProfile,
    PolynomialProfile,
    RadialFourierFunction,
    SampledProfile,
    ScaledProfile,
    SumProfile,
)
from .errors import DomainError, SpecError

KINDS = ("trig-poly", "annulus-mode", "bump-mode", "taylor", "sampled")

_COMPLEX = {
    "oneOf": [
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_REALS = {"type": "array", "items": {"type": "number"}}
_COMPLEXES = {"type": "array", "items": _COMPLEX}

_MODE_SCHEMAS = {
    "trig-poly": {
        "type": "object",
        "required": ["n", "coeff"],
        "properties": {"n": {"type": "integer"}, "coeff": _COMPLEX, "radial": _COMPLEXES},
        "additionalProperties": False,
    },
    "annulus-mode": {
        "type": "object",
        "required": ["n", "values"],
        "properties": {"n": {"type": "integer"}, "values": _COMPLEXES},
        "additionalProperties": False,
    },
    "bump-mode": {
        "type": "object",
        "required": ["n", "lo", "hi"],
        "properties": {
            "n": {"type": "integer"},
            "lo": {"type": "number"},
            "hi": {"type": "number"},
            "plateau_fraction": {"type": "number"},
            "amplitude": _COMPLEX,
        },
        "additionalProperties": False,
    },
    "sampled": {
        "type": "object",
        "required": ["n", "nodes", "values"],
        "properties": {"n": {"type": "integer"}, "nodes": _REALS, "values": _COMPLEXES},
        "additionalProperties": False,
    },
}

SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": list(KINDS)},
        "modes": {"type": "array"},
        "breakpoints": _REALS,
        "coefficients": _COMPLEXES,
        "samples": _COMPLEXES,
        "amplitudes": _COMPLEXES,
        "name": {"type": "string"},
    },
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": kind}}},
            "then": {"properties": {"modes": {"type": "array", "items": schema}}},
        }
        for kind, schema in _MODE_SCHEMAS.items()
    ]
    + [
        {"if": {"properties": {"kind": {"const": "taylor"}}}, "then": {"required": ["coefficients"]}},
        {"if": {"properties": {"kind": {"const": "annulus-mode"}}},
         "then": {"required": ["breakpoints", "modes"]}},
        {"if": {"properties": {"kind": {"enum": ["trig-poly", "bump-mode"]}}},
         "then": {"required": ["modes"]}},
        {"if": {"properties": {"kind": {"const": "sampled"}}},
         "then": {"oneOf": [{"required": ["samples"]}, {"required": ["modes"]}]}},
    ],
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _cx(v) -> complex:
    return complex(v[0], v[1]) if isinstance(v, list) else complex(v)


def _path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def validate(doc) -> None:
    errors = list(_VALIDATOR.iter_errors(doc))
    if errors:
        # the deepest error names the most specific field
        err = max(errors, key=lambda e: len(e.absolute_path))
        raise SpecError(err.message, path=_path(err.absolute_path))


def loads(text: str) -> dict:
    """Parse and validate spec text; syntax errors carry line and column."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    validate(doc)
    return doc


def load(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def _scaled(modes: dict, amplitudes) -> dict:
    if amplitudes is None:
        return modes
    keys = sorted(modes)
    if len(amplitudes) != len(keys):
        raise SpecError("amplitudes must match the number of modes", path="$.amplitudes")
    return {n: ScaledProfile(_cx(a), modes[n]) for n, a in zip(keys, amplitudes)}


def _collect(items, build):
    modes: dict = {}
    for i, m in enumerate(items):
        try:
            prof = build(m)
        except DomainError as exc:
            raise SpecError(str(exc), path=f"$.modes[{i}]") from None
        n = int(m["n"])
        modes[n] = SumProfile((modes[n], prof)) if n in modes else prof
    return modes


def build(doc: dict):
    """Spec document -> ``RadialFourierFunction`` (or ``CircleFunction`` for sampled circles)."""
    validate(doc)
    kind = doc["kind"]
    if kind == "sampled" and "samples" in doc:
        return CircleFunction(samples=[_cx(v) for v in doc["samples"]])
    if kind == "taylor":
        modes = {k: MonomialProfile(_cx(c), k) for k, c in enumerate(doc["coefficients"]) if _cx(c) != 0}
    elif kind == "trig-poly":
        modes = _collect(doc["modes"], lambda m: ScaledProfile(
            _cx(m["coeff"]), PolynomialProfile([_cx(c) for c in m.get("radial", [1.0])])))
    elif kind == "annulus-mode":
        edges = doc["breakpoints"]

        def piece(m):
            if len(m["values"]) != len(edges) - 1:
                raise DomainError("values must have one entry per breakpoint interval")
            return PiecewiseConstantProfile(edges, [_cx(v) for v in m["values"]])

        modes = _collect(doc["modes"], piece)
    elif kind == "bump-mode":
        modes = _collect(doc["modes"], lambda m: BumpProfile(
            m["lo"], m["hi"], m.get("plateau_fraction", 0.9), _cx(m.get("amplitude", 1.0))))
    else:
        modes = _collect(doc["modes"], lambda m: SampledProfile(m["nodes"], [_cx(v) for v in m["values"]]))
    return RadialFourierFunction(_scaled(modes, doc.get("amplitudes")))


def circle_from_spec(doc: dict) -> CircleFunction:
    """Circle function of a spec: the sample list, or the modes at ``r = 1``."""
    if doc["kind"] not in ("sampled", "trig-poly", "taylor"):
        raise SpecError(f"kind {doc['kind']} does not define a circle function", path="$.kind")
    f = build(doc)
    if isinstance(f, CircleFunction):
        return f
    return CircleFunction.from_modes({n: complex(p(1.0)) for n, p in f.modes.items()})


def complex_json(z: complex):
    return [float(z.real), float(z.imag)]
