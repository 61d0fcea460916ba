"""Reduced-space problem definition and JSON loader.

A problem exposes only its box-bounded input variables to the solver; the
networks are evaluated as explicit maps inside objective and constraint
expressions, never as equations. Constraints are inequalities g(x) <= 0.
Network inputs may themselves be expressions of the variables, which covers
objectives that feed scaled or combined flows into a map.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

from . import expr as ex
from .contexts import DualContext, IntervalContext, McCormickContext, RealContext
from .envelopes import ActivationMode
from .errors import SchemaError, UnresolvedNameError
from .interval import Interval
from .mlp import Mlp, mlp_load


@dataclass
class NetworkBinding:
    net_id: str
    mlp: Mlp
    input_exprs: list


@dataclass
class Problem:
    variables: list  # ordered (name, Interval)
    networks: dict  # net_id -> NetworkBinding, insertion ordered
    objective: object
    constraints: list
    mode: ActivationMode = ActivationMode.ENVELOPE
    source_path: Optional[str] = None
    _var_index: dict = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def box(self) -> tuple:
        return tuple(b for _, b in self.variables)

    def var_index(self, name: str) -> int:
        if self._var_index is None:
            self._var_index = {name: i for i, (name, _) in enumerate(self.variables)}
        return self._var_index[name]


class _Env:
    """Binds variable values and caches each network's outputs so the
    objective and all constraints share a single propagation."""

    def __init__(self, problem: Problem, ctx, values):
        self.problem = problem
        self.ctx = ctx
        self.values = values
        self._net_cache = {}

    def var(self, name: str):
        return self.values[self.problem.var_index(name)]

    def net_output(self, net_id: str, index: int):
        outs = self._net_cache.get(net_id)
        if outs is None:
            binding = self.problem.networks[net_id]
            inputs = [ex.evaluate(e, self.ctx, self) for e in binding.input_exprs]
            outs = binding.mlp.eval(inputs, self.ctx, self.problem.mode)
            self._net_cache[net_id] = outs
        return outs[index]


def evaluate_all(problem: Problem, ctx, values):
    """Objective value and constraint values over any context."""
    env = _Env(problem, ctx, values)
    obj = ex.evaluate(problem.objective, ctx, env)
    cons = [ex.evaluate(g, ctx, env) for g in problem.constraints]
    return obj, cons


def evaluate_objective(problem: Problem, x) -> float:
    obj, _ = evaluate_all(problem, RealContext(), [float(v) for v in x])
    return float(obj)


def evaluate_constraints(problem: Problem, x) -> list:
    _, cons = evaluate_all(problem, RealContext(), [float(v) for v in x])
    return [float(g) for g in cons]


def max_violation(problem: Problem, x) -> float:
    if not problem.constraints:
        return 0.0
    return max(0.0, max(evaluate_constraints(problem, x)))


def relax_at(problem: Problem, box, point):
    """McCormick relaxations of objective and constraints at one point."""
    ctx = McCormickContext(problem.n, problem.mode)
    values = [ctx.variable(i, b, p) for i, (b, p) in enumerate(zip(box, point))]
    return evaluate_all(problem, ctx, values)


def interval_bounds(problem: Problem, box):
    """Natural interval bounds of objective and constraints over a box."""
    ctx = IntervalContext(problem.mode)
    return evaluate_all(problem, ctx, list(box))


def gradients_at(problem: Problem, x):
    """Objective and constraint values with gradients (dual evaluation)."""
    ctx = DualContext(problem.n)
    values = [ctx.variable(i, float(v)) for i, v in enumerate(x)]
    return evaluate_all(problem, ctx, values)


def _require(cond: bool, fieldpath: str, message: str):
    if not cond:
        raise SchemaError(fieldpath, message)


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def problem_from_dict(doc: dict, base_dir: str = ".",
                      source_path: Optional[str] = None) -> Problem:
    _require(isinstance(doc, dict), "$", "expected a JSON object")
    known = ("variables", "networks", "objective", "constraints", "mode")
    for key in doc:
        if key in ("equalities", "equality_constraints"):
            raise SchemaError(key, "equality constraints are not supported: "
                              "network equations are eliminated by explicit "
                              "evaluation, remaining constraints must be "
                              "inequalities g(x) <= 0")
        _require(key in known, key, "unknown field")

    _require("variables" in doc, "variables", "missing")
    _require(isinstance(doc["variables"], list) and doc["variables"],
             "variables", "expected a non-empty list")
    variables = []
    seen = set()
    for vi, raw in enumerate(doc["variables"]):
        path = f"variables[{vi}]"
        _require(isinstance(raw, dict), path, "expected an object")
        for key in ("name", "lo", "hi"):
            _require(key in raw, f"{path}.{key}", "missing")
        name = raw["name"]
        _require(isinstance(name, str) and name, f"{path}.name", "expected a name")
        _require(name not in seen, f"{path}.name", f"duplicate variable {name!r}")
        seen.add(name)
        _require(_is_number(raw["lo"]) and _is_number(raw["hi"]),
                 f"{path}.lo", "bounds must be numbers")
        lo, hi = float(raw["lo"]), float(raw["hi"])
        _require(lo < hi, path, f"need lo < hi, got [{lo}, {hi}]")
        try:
            box = Interval(lo, hi)
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from exc
        variables.append((name, box))

    networks = {}
    for ni, raw in enumerate(doc.get("networks", [])):
        path = f"networks[{ni}]"
        _require(isinstance(raw, dict), path, "expected an object")
        for key in ("id", "file", "inputs"):
            _require(key in raw, f"{path}.{key}", "missing")
        net_id = raw["id"]
        _require(isinstance(net_id, str) and net_id, f"{path}.id", "expected a name")
        _require(net_id not in networks, f"{path}.id", f"duplicate network {net_id!r}")
        mlp = mlp_load(os.path.join(base_dir, raw["file"]))
        _require(isinstance(raw["inputs"], list), f"{path}.inputs", "expected a list")
        input_exprs = [ex.parse(s) for s in raw["inputs"]]
        _require(len(input_exprs) == mlp.n_inputs, f"{path}.inputs",
                 f"network takes {mlp.n_inputs} inputs, got {len(input_exprs)}")
        for ei, e in enumerate(input_exprs):
            for name in ex.variable_names(e):
                if name not in seen:
                    raise UnresolvedNameError(f"{path}.inputs[{ei}]",
                                              f"unknown variable {name!r}")
            if ex.network_references(e):
                raise SchemaError(f"{path}.inputs[{ei}]",
                                  "network inputs may reference variables only")
        networks[net_id] = NetworkBinding(net_id, mlp, input_exprs)

    _require("objective" in doc, "objective", "missing")
    _require(isinstance(doc["objective"], str), "objective", "expected an expression string")
    objective = ex.parse(doc["objective"])
    constraints = []
    raw_cons = doc.get("constraints", [])
    _require(isinstance(raw_cons, list), "constraints", "expected a list")
    for ci, s in enumerate(raw_cons):
        _require(isinstance(s, str), f"constraints[{ci}]", "expected an expression string")
        constraints.append(ex.parse(s))

    mode_raw = doc.get("mode", "envelope")
    try:
        mode = ActivationMode(mode_raw)
    except ValueError as exc:
        raise SchemaError("mode", f"unknown mode {mode_raw!r}") from exc

    for where, e in [("objective", objective)] + [
            (f"constraints[{i}]", g) for i, g in enumerate(constraints)]:
        for name in ex.variable_names(e):
            if name not in seen:
                raise UnresolvedNameError(where, f"unknown variable {name!r}")
        for net_id, index in ex.network_references(e):
            if net_id not in networks:
                raise UnresolvedNameError(where, f"unknown network {net_id!r}")
            n_out = networks[net_id].mlp.n_outputs
            if not 0 <= index < n_out:
                raise UnresolvedNameError(
                    where, f"network {net_id!r} has {n_out} outputs, got index {index}")

    return Problem(variables, networks, objective, constraints, mode, source_path)


def problem_load(path) -> Problem:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from exc
    return problem_from_dict(doc, base_dir=os.path.dirname(os.path.abspath(path)),
                             source_path=str(path))
