#!/usr/bin/env python3
"""Regenerate the committed model and problem fixtures.

Deterministic per the seeds below. The trained peaks surrogate keeps solver
tests independent of training stochasticity; the compressor-shaped problem
exercises the constrained two-network objective structure with synthetic
maps (the industrial map data behind the original is not public).

Run from the repository root:

    python3 scripts/make_fixtures.py
"""

import json
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from nngo.interval import Interval
from nngo.mlp import mlp_save
from nngo.train import TrainConfig, lhc_sample, make_peaks_dataset, split_dataset, train_mlp

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "nngo", "fixtures")

PEAKS_SOURCE = ("3*(1-x1)^2*exp(-x1^2-(x2+1)^2)"
                " - 10*(x1/5 - x1^3 - x2^5)*exp(-x1^2-x2^2)"
                " - exp(-(x1+1)^2-x2^2)/3")


def write_json(name, doc):
    path = os.path.join(OUT_DIR, name)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    print("wrote", path)


def make_peaks_fixtures():
    data = make_peaks_dataset(2000, seed=20)
    mlp, rep = train_mlp(data, [2, 47, 1],
                         TrainConfig(max_epochs=30000, patience=3000, seed=11, lr=0.01))
    print(f"peaks surrogate: std mse train={rep.train_mse:.3e} "
          f"val={rep.val_mse:.3e} test={rep.test_mse:.3e}")
    mlp_save(mlp, os.path.join(OUT_DIR, "peaks_mlp_47.json"))

    write_json("peaks_net.json", {
        "variables": [{"name": "x1", "lo": -3.0, "hi": 3.0},
                      {"name": "x2", "lo": -3.0, "hi": 3.0}],
        "networks": [{"id": "net1", "file": "peaks_mlp_47.json",
                      "inputs": ["x1", "x2"]}],
        "objective": "net1.y[0]",
        "constraints": [],
        "mode": "envelope",
    })
    write_json("peaks_exact.json", {
        "variables": [{"name": "x1", "lo": -3.0, "hi": 3.0},
                      {"name": "x2", "lo": -3.0, "hi": 3.0}],
        "networks": [],
        "objective": PEAKS_SOURCE,
        "constraints": [],
        "mode": "envelope",
    })


def _train_map(fn, v_lo, v_hi, seed):
    """Fit a two-hidden-layer map (pressure ratio, flow) -> specific power."""
    box = [Interval(4.0, 5.0), Interval(v_lo, v_hi)]
    X = lhc_sample(405, box, seed)
    y = fn(X[:, 0], X[:, 1])
    data = split_dataset(X, y, seed + 1)
    mlp, rep = train_mlp(data, [2, 10, 10, 1],
                         TrainConfig(max_epochs=20000, patience=2000, seed=seed, lr=0.01))
    print(f"map seed {seed}: std mse test={rep.test_mse:.3e}")
    return mlp


def make_compressor_fixture():
    # smooth synthetic specific-power maps, flows in 1e3 m^3/h
    def map1(pi, v):
        return 0.050 + 0.010 * ((v - 78.0) / 15.0) ** 2 + 0.002 * pi

    def map2(pi, v):
        return 0.048 + 0.012 * ((v - 33.0) / 8.0) ** 2 + 0.002 * pi

    m1 = _train_map(map1, 55.0, 105.0, seed=31)
    m2 = _train_map(map2, 20.0, 50.0, seed=32)
    mlp_save(m1, os.path.join(OUT_DIR, "compressor_map1.json"))
    mlp_save(m2, os.path.join(OUT_DIR, "compressor_map2.json"))

    # one degree of freedom: the split factor between the two machines
    write_json("compressor.json", {
        "variables": [{"name": "x", "lo": 0.0, "hi": 1.0}],
        "networks": [
            {"id": "w1", "file": "compressor_map1.json",
             "inputs": ["4.5", "100*x"]},
            {"id": "w2", "file": "compressor_map2.json",
             "inputs": ["4.5", "100*(1-x)"]},
        ],
        "objective": "w1.y[0]*(100*x)/0.8305 + w2.y[0]*(100*(1-x))/0.8305",
        "constraints": [
            "100*x - 100",
            "61.5 - 100*x",
            "100*(1-x) - 44.4",
            "25.3 - 100*(1-x)",
        ],
        "mode": "envelope",
    })


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    np.seterr(all="raise")
    make_peaks_fixtures()
    make_compressor_fixture()


if __name__ == "__main__":
    main()
