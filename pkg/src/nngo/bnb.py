"""Best-first branch-and-bound in the space of the network inputs.

Each node carries a sub-box. Lower bounds come from linearizing the
McCormick relaxations at the node centerpoint: without constraints the
affine underestimator is minimized over the box in closed form, with
constraints a small LP is solved. Nodes are fathomed by bound dominance or
certain infeasibility, upper bounds come from a feasible point at or near
the centerpoint, and branching bisects the longest edge relative to the
root box. Single-threaded runs are bit-deterministic: queue ties break on
the node id.
"""

from __future__ import annotations

import heapq
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import SolverAbortError
from .interval import Interval
from .localopt import local_solve
from .problem import Problem, evaluate_constraints, evaluate_objective, relax_at
from .simplex import INFEASIBLE, OPTIMAL, solve_box_lp

FEAS_TOL = 1e-6


class Status(Enum):
    CONVERGED = "Converged"
    TIME_LIMIT = "TimeLimit"
    ITER_LIMIT = "IterLimit"
    INFEASIBLE = "Infeasible"


@dataclass
class Node:
    box: tuple  # one Interval per variable
    lb: float
    id: int
    depth: int

    def center(self) -> list:
        return [b.mid for b in self.box]


@dataclass
class SolveConfig:
    eps_abs: float = 1e-4
    eps_rel: float = 1e-12
    time_limit: Optional[float] = None
    iter_limit: Optional[int] = None
    ub_mode: str = "local_search"  # or "point_eval"
    multistart: int = 1
    threads: int = 1
    log: Optional[Callable] = None  # called with (iter, wall, lb, ub, nodes_open)


@dataclass
class SolveReport:
    best_x: Optional[np.ndarray]
    ub: float
    lb: float
    iterations: int
    nodes_left: int
    status: Status
    wall_time: float


def lower_bound(problem: Problem, node: Node):
    """(lower bound, certainly-infeasible flag) for one node.

    OverflowError from the relaxation propagation is wrapped into a solver
    abort naming the active mode: the node cannot be bounded in that mode.
    """
    center = node.center()
    try:
        obj, cons = relax_at(problem, node.box, center)
    except OverflowError as exc:
        raise SolverAbortError(problem.mode.value,
                               f"relaxation overflow while bounding node {node.id}: {exc}") from exc

    for g in cons:
        if g.box.lo > 0.0:
            return math.inf, True

    if not cons:
        lb = obj.cv
        for s, b, c in zip(obj.sub_cv, node.box, center):
            lb += min(s * (b.lo - c), s * (b.hi - c))
        return max(lb, obj.box.lo), False

    # minimize the objective cut subject to the constraint cuts over the box
    c_vec = list(obj.sub_cv)
    const = obj.cv - sum(s * ci for s, ci in zip(obj.sub_cv, center))
    rows, rhs = [], []
    for g in cons:
        rows.append(list(g.sub_cv))
        rhs.append(sum(s * ci for s, ci in zip(g.sub_cv, center)) - g.cv)
    res = solve_box_lp(c_vec, rows, rhs,
                       [b.lo for b in node.box], [b.hi for b in node.box])
    if res.status == INFEASIBLE:
        return math.inf, True
    if res.status != OPTIMAL:
        return obj.box.lo, False
    return max(res.objective + const, obj.box.lo), False


def branch(node: Node, root_box: tuple, next_id: int):
    """Bisect the widest edge relative to the root box; ties take the lowest
    coordinate. Children inherit the parent's bound."""
    rel = [(b.width / r.width if r.width > 0.0 else 0.0)
           for b, r in zip(node.box, root_box)]
    k = max(range(len(rel)), key=lambda i: (rel[i], -i))
    b = node.box[k]
    m = b.mid
    if not (b.lo < m < b.hi):
        return None
    left = tuple(Interval(bb.lo, m) if i == k else bb for i, bb in enumerate(node.box))
    right = tuple(Interval(m, bb.hi) if i == k else bb for i, bb in enumerate(node.box))
    return (Node(left, node.lb, next_id, node.depth + 1),
            Node(right, node.lb, next_id + 1, node.depth + 1))


def _feasible(problem: Problem, x) -> bool:
    if not problem.constraints:
        return True
    return max(evaluate_constraints(problem, x)) <= FEAS_TOL


def _upper_candidates(problem: Problem, node: Node, cfg: SolveConfig):
    """Candidate points for the incumbent, all inside the node box."""
    center = node.center()
    if cfg.ub_mode == "point_eval":
        yield center
        return
    result = local_solve(problem, center, box=node.box)
    yield list(result.x)
    if not result.converged:
        yield center
    if cfg.multistart > 1:
        rng = np.random.default_rng(node.id)
        lo = np.array([b.lo for b in node.box])
        hi = np.array([b.hi for b in node.box])
        for _ in range(cfg.multistart - 1):
            start = rng.uniform(lo, hi)
            yield list(local_solve(problem, start, box=node.box).x)


def solve(problem: Problem, cfg: SolveConfig = None) -> SolveReport:
    if cfg is None:
        cfg = SolveConfig()
    t0 = time.perf_counter()
    root_box = problem.box
    heap = []  # (lb, id, node)
    next_id = 0
    root = Node(root_box, -math.inf, next_id, 0)
    next_id += 1
    heapq.heappush(heap, (root.lb, root.id, root))

    ub = math.inf
    best_x = None
    iterations = 0
    status = None
    # lowest bound among discarded regions; open regions are covered by the
    # heap minimum, so min(heap top, floor) is a valid global lower bound
    fathom_floor = math.inf
    pool = ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None

    def wall() -> float:
        return time.perf_counter() - t0

    def global_lb() -> float:
        bound = min(fathom_floor, heap[0][0]) if heap else fathom_floor
        return min(bound, ub)

    def gap_closed(lb: float) -> bool:
        if math.isinf(ub):
            return False
        return (ub - lb) <= cfg.eps_abs or (ub - lb) <= cfg.eps_rel * abs(ub)

    try:
        while heap:
            if cfg.time_limit is not None and wall() >= cfg.time_limit:
                status = Status.TIME_LIMIT
                break
            if cfg.iter_limit is not None and iterations >= cfg.iter_limit:
                status = Status.ITER_LIMIT
                break

            batch = []
            n_pop = min(cfg.threads, len(heap)) if pool else 1
            for _ in range(n_pop):
                batch.append(heapq.heappop(heap)[2])
            if pool:
                bounds = list(pool.map(lambda nd: lower_bound(problem, nd), batch))
            else:
                bounds = [lower_bound(problem, batch[0])]

            for node, (lb_node, infeasible) in zip(batch, bounds):
                iterations += 1
                lb_node = max(lb_node, node.lb)  # a parent bound stays valid
                if infeasible or lb_node >= ub - cfg.eps_abs:
                    fathom_floor = min(fathom_floor, lb_node)
                    continue
                node.lb = lb_node
                for cand in _upper_candidates(problem, node, cfg):
                    val = evaluate_objective(problem, cand)
                    if val < ub and _feasible(problem, cand):
                        ub = val
                        best_x = np.array(cand, dtype=float)
                children = branch(node, root_box, next_id)
                if children is None:
                    # a point-width box: its bound is exact, keep it as a floor
                    fathom_floor = min(fathom_floor, lb_node)
                    continue
                next_id += 2
                for child in children:
                    heapq.heappush(heap, (child.lb, child.id, child))

            if cfg.log is not None:
                cfg.log(iterations, wall(), global_lb(), ub, len(heap))
            if gap_closed(global_lb()):
                status = Status.CONVERGED
                break
    finally:
        if pool:
            pool.shutdown(wait=False)

    if status is None:
        # exhausted the queue: the search proved the incumbent optimal
        status = Status.CONVERGED if best_x is not None else Status.INFEASIBLE
        lb = ub
    else:
        lb = global_lb()
    if cfg.log is not None:
        cfg.log(iterations, wall(), lb, ub, len(heap))
    return SolveReport(best_x, ub, lb, iterations, len(heap), status, wall())
