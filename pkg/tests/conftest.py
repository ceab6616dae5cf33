"""Shared helpers: random coupling generators, quadrature oracle pieces, and
a minimal JSON-schema checker for the CLI outputs."""

from __future__ import annotations

import math

import numpy as np

from gdkp import Coupling, make_coupling


def random_coupling(rng: np.random.Generator) -> Coupling:
    eta = rng.uniform(0.0, math.pi)
    m = rng.normal(size=4)
    m /= np.linalg.norm(m)
    return make_coupling(eta, m)


def random_permeable(rng: np.random.Generator, min_radius: float = 1e-3) -> Coupling:
    while True:
        c = random_coupling(rng)
        if math.hypot(c.m[1], c.m[2]) > min_radius:
            return c


def random_nonsingular(rng: np.random.Generator, margin: float = 1e-6) -> Coupling:
    while True:
        c = random_coupling(rng)
        if abs(math.sin(c.eta) - c.m[1]) > margin:
            return c


def simpson(y: np.ndarray, h: float) -> complex:
    return h / 3.0 * (y[0] + y[-1] + 4.0 * np.sum(y[1:-1:2]) + 2.0 * np.sum(y[2:-2:2]))


def quad_overlap(s1, s2, n: int = 5000) -> complex:
    """Brute-force Zak-gauge inner product over the unit cell by composite
    Simpson on each half (the integrand jumps at x = 0)."""
    from gdkp import evaluate_zak_gauge

    left = np.linspace(-0.5, 0.0, n + 1)
    left[-1] = -1e-15  # stay on the x < 0 branch at the break
    right = np.linspace(0.0, 0.5, n + 1)
    total = 0.0 + 0.0j
    for x in (left, right):
        u1 = evaluate_zak_gauge(s1, x)
        u2 = evaluate_zak_gauge(s2, x)
        integrand = np.einsum("ij,ij->i", np.conj(u1), u2)
        total += simpson(integrand, 0.5 / n)
    return total


def check_schema(obj, schema, path="$"):
    """Tiny JSON-schema subset checker (type/required/properties/items/enum)."""
    kind = schema.get("type")
    if kind == "object":
        assert isinstance(obj, dict), f"{path}: expected object"
        for key in schema.get("required", ()):
            assert key in obj, f"{path}: missing required key {key!r}"
        props = schema.get("properties", {})
        for key, sub in props.items():
            if key in obj:
                check_schema(obj[key], sub, f"{path}.{key}")
        extra = schema.get("additionalProperties")
        if isinstance(extra, dict):
            for key, val in obj.items():
                if key not in props:
                    check_schema(val, extra, f"{path}.{key}")
    elif kind == "array":
        assert isinstance(obj, list), f"{path}: expected array"
        if "items" in schema:
            for i, val in enumerate(obj):
                check_schema(val, schema["items"], f"{path}[{i}]")
    elif kind == "number":
        assert isinstance(obj, (int, float)) and not isinstance(obj, bool), f"{path}: expected number"
    elif kind == "integer":
        assert isinstance(obj, int) and not isinstance(obj, bool), f"{path}: expected integer"
    elif kind == "string":
        assert isinstance(obj, str), f"{path}: expected string"
    elif kind == "boolean":
        assert isinstance(obj, bool), f"{path}: expected boolean"
    if "enum" in schema:
        assert obj in schema["enum"], f"{path}: {obj!r} not in {schema['enum']}"
