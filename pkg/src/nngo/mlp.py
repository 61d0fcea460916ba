"""Feed-forward network model: JSON persistence and context-generic evaluation.

A network is a stack of dense layers, each applying an activation to an
affine combination of the previous layer's outputs, with optional
per-component affine scaling in front of the first layer and behind the
last. One forward-pass implementation serves every arithmetic context, so
the numbers used for bounding are produced by exactly the same recursion as
the ones used for plain evaluation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .contexts import DualContext, RealContext
from .envelopes import ActivationMode
from .errors import SchemaError, ShapeError

ACTIVATIONS = ("tanh", "sigmoid", "identity")


@dataclass
class AffineScale:
    """Componentwise map x -> a*x + b."""

    a: list
    b: list


@dataclass
class Layer:
    weights: list  # rows = this layer's neurons, columns = inputs from below
    bias: list
    activation: str

    @property
    def size(self) -> int:
        return len(self.bias)


@dataclass
class Mlp:
    n_inputs: int
    layers: list
    input_scale: Optional[AffineScale] = None
    output_scale: Optional[AffineScale] = None
    _w_arrays: list = field(default=None, repr=False, compare=False)

    @property
    def n_outputs(self) -> int:
        return self.layers[-1].size

    def eval(self, xs, ctx, mode: ActivationMode = ActivationMode.ENVELOPE):
        """Forward pass over context values; returns one value per output."""
        if len(xs) != self.n_inputs:
            raise ShapeError("inputs", f"expected {self.n_inputs} inputs, got {len(xs)}")
        z = list(xs)
        if self.input_scale is not None:
            z = [ctx.affine(((a, v),), b)
                 for a, b, v in zip(self.input_scale.a, self.input_scale.b, z)]
        for layer in self.layers:
            pre = [ctx.affine(tuple(zip(row, z)), b)
                   for row, b in zip(layer.weights, layer.bias)]
            if layer.activation == "tanh":
                z = [ctx.tanh(p) for p in pre]
            elif layer.activation == "sigmoid":
                z = [ctx.sigmoid(p) for p in pre]
            else:
                z = pre
        if self.output_scale is not None:
            z = [ctx.affine(((a, v),), b)
                 for a, b, v in zip(self.output_scale.a, self.output_scale.b, z)]
        return z

    def eval_batch(self, X: np.ndarray) -> np.ndarray:
        """Vectorized real evaluation of many points (rows of X)."""
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_inputs:
            raise ShapeError("inputs", f"expected {self.n_inputs} columns, got {X.shape[1]}")
        if self._w_arrays is None:
            self._w_arrays = [(np.asarray(l.weights, dtype=float),
                               np.asarray(l.bias, dtype=float)) for l in self.layers]
        z = X
        if self.input_scale is not None:
            z = z * np.asarray(self.input_scale.a) + np.asarray(self.input_scale.b)
        for layer, (W, b) in zip(self.layers, self._w_arrays):
            pre = z @ W.T + b
            if layer.activation == "tanh":
                z = np.tanh(pre)
            elif layer.activation == "sigmoid":
                z = 1.0 / (1.0 + np.exp(-pre))
            else:
                z = pre
        if self.output_scale is not None:
            z = z * np.asarray(self.output_scale.a) + np.asarray(self.output_scale.b)
        return z

    def grad(self, x) -> np.ndarray:
        """Exact Jacobian (outputs x inputs) at a point."""
        ctx = DualContext(self.n_inputs)
        seeds = [ctx.variable(i, float(v)) for i, v in enumerate(x)]
        outs = self.eval(seeds, ctx)
        return np.array([list(o.grad) for o in outs], dtype=float)


_REAL_CTX = RealContext()


def mlp_eval_real(mlp: Mlp, x) -> list:
    return mlp.eval([float(v) for v in x], _REAL_CTX)


def _require(cond: bool, fieldpath: str, message: str, exc=SchemaError):
    if not cond:
        raise exc(fieldpath, message)


def _float_list(raw, fieldpath: str) -> list:
    _require(isinstance(raw, list), fieldpath, "expected a list of numbers")
    out = []
    for i, v in enumerate(raw):
        _require(isinstance(v, (int, float)) and not isinstance(v, bool),
                 f"{fieldpath}[{i}]", "expected a number")
        f = float(v)
        _require(np.isfinite(f), f"{fieldpath}[{i}]", "value must be finite")
        out.append(f)
    return out


def _parse_scale(raw, fieldpath: str, expected_len: int) -> AffineScale:
    _require(isinstance(raw, dict), fieldpath, "expected an object with 'a' and 'b'")
    for key in raw:
        _require(key in ("a", "b"), f"{fieldpath}.{key}", "unknown field")
    _require("a" in raw and "b" in raw, fieldpath, "both 'a' and 'b' are required")
    a = _float_list(raw["a"], f"{fieldpath}.a")
    b = _float_list(raw["b"], f"{fieldpath}.b")
    _require(len(a) == expected_len, f"{fieldpath}.a",
             f"expected {expected_len} entries, got {len(a)}", ShapeError)
    _require(len(b) == expected_len, f"{fieldpath}.b",
             f"expected {expected_len} entries, got {len(b)}", ShapeError)
    return AffineScale(a, b)


def mlp_from_dict(doc: dict) -> Mlp:
    _require(isinstance(doc, dict), "$", "expected a JSON object")
    for key in doc:
        _require(key in ("n_inputs", "layers", "input_scale", "output_scale"),
                 key, "unknown field")
    _require("n_inputs" in doc, "n_inputs", "missing")
    _require(isinstance(doc["n_inputs"], int) and not isinstance(doc["n_inputs"], bool),
             "n_inputs", "expected an integer")
    n_inputs = doc["n_inputs"]
    _require(n_inputs >= 1, "n_inputs", "must be at least 1")

    _require("layers" in doc, "layers", "missing")
    _require(isinstance(doc["layers"], list) and doc["layers"],
             "layers", "expected a non-empty list")
    layers = []
    prev = n_inputs
    for li, raw in enumerate(doc["layers"]):
        path = f"layers[{li}]"
        _require(isinstance(raw, dict), path, "expected an object")
        for key in raw:
            _require(key in ("weights", "bias", "activation"), f"{path}.{key}",
                     "unknown field")
        for key in ("weights", "bias", "activation"):
            _require(key in raw, f"{path}.{key}", "missing")
        _require(raw["activation"] in ACTIVATIONS, f"{path}.activation",
                 f"expected one of {ACTIVATIONS}, got {raw['activation']!r}")
        _require(isinstance(raw["weights"], list) and raw["weights"],
                 f"{path}.weights", "expected a non-empty list of rows")
        weights = []
        for ri, row in enumerate(raw["weights"]):
            row = _float_list(row, f"{path}.weights[{ri}]")
            _require(len(row) == prev, f"{path}.weights[{ri}]",
                     f"expected {prev} entries, got {len(row)}", ShapeError)
            weights.append(row)
        bias = _float_list(raw["bias"], f"{path}.bias")
        _require(len(bias) == len(weights), f"{path}.bias",
                 f"expected {len(weights)} entries, got {len(bias)}", ShapeError)
        layers.append(Layer(weights, bias, raw["activation"]))
        prev = len(weights)

    input_scale = None
    if doc.get("input_scale") is not None:
        input_scale = _parse_scale(doc["input_scale"], "input_scale", n_inputs)
    output_scale = None
    if doc.get("output_scale") is not None:
        output_scale = _parse_scale(doc["output_scale"], "output_scale", prev)
    return Mlp(n_inputs, layers, input_scale, output_scale)


def mlp_to_dict(mlp: Mlp) -> dict:
    doc = {
        "n_inputs": mlp.n_inputs,
        "layers": [
            {"weights": [list(row) for row in l.weights],
             "bias": list(l.bias),
             "activation": l.activation}
            for l in mlp.layers
        ],
    }
    if mlp.input_scale is not None:
        doc["input_scale"] = {"a": list(mlp.input_scale.a), "b": list(mlp.input_scale.b)}
    if mlp.output_scale is not None:
        doc["output_scale"] = {"a": list(mlp.output_scale.a), "b": list(mlp.output_scale.b)}
    return doc


def mlp_load(path) -> Mlp:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from exc
    return mlp_from_dict(doc)


def mlp_save(mlp: Mlp, path) -> None:
    # floats serialize via repr: lossless shortest round-trip decimals
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(mlp_to_dict(mlp), fh, indent=1)
        fh.write("\n")
