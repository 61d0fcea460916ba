"""Latin hypercube sampling and compact full-batch network training.

Training is deliberately simple: standardized inputs and targets, dense
tanh layers, full-batch gradient descent with adaptive moment estimates,
and early stopping on the validation split. The point is to produce
reasonably fit networks for the optimizer to chew on, deterministically
per seed, without reaching for an ML framework.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError
from .interval import Interval
from .mlp import AffineScale, Layer, Mlp

SPLIT_RATIOS = (0.7, 0.15, 0.15)


def lhc_sample(n: int, box, seed: int) -> np.ndarray:
    """n stratified samples over a box, one point per stratum per dimension,
    with an independent permutation per dimension."""
    if n < 1:
        raise ValueError(f"need at least one sample, got {n}")
    rng = np.random.default_rng(seed)
    dims = len(box)
    out = np.empty((n, dims))
    for d in range(dims):
        perm = rng.permutation(n)
        u = rng.uniform(size=n)
        unit = (perm + u) / n
        out[:, d] = box[d].lo + unit * box[d].width
    return out


@dataclass
class Dataset:
    inputs: np.ndarray
    targets: np.ndarray
    train_idx: np.ndarray
    val_idx: np.ndarray
    test_idx: np.ndarray


def split_dataset(inputs: np.ndarray, targets: np.ndarray, seed: int,
                  ratios=SPLIT_RATIOS) -> Dataset:
    inputs = np.asarray(inputs, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if targets.ndim == 1:
        targets = targets[:, None]
    n = inputs.shape[0]
    if targets.shape[0] != n:
        raise ShapeError("targets", f"expected {n} rows, got {targets.shape[0]}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    n_train = int(round(ratios[0] * n))
    n_val = int(round(ratios[1] * n))
    return Dataset(inputs, targets,
                   np.sort(order[:n_train]),
                   np.sort(order[n_train:n_train + n_val]),
                   np.sort(order[n_train + n_val:]))


def make_peaks_dataset(n: int, seed: int) -> Dataset:
    from .peaks import PEAKS_HI, PEAKS_LO, peaks
    box = [Interval(PEAKS_LO, PEAKS_HI), Interval(PEAKS_LO, PEAKS_HI)]
    X = lhc_sample(n, box, seed)
    y = peaks(X[:, 0], X[:, 1])
    return split_dataset(X, y, seed + 1)


def load_dataset_csv(path, n_targets: int = 1, seed: int = 0) -> Dataset:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ShapeError("csv", "empty file")
        rows = [[float(v) for v in row] for row in reader if row]
    cols = len(header)
    if cols < n_targets + 1:
        raise ShapeError("csv", f"need at least {n_targets + 1} columns, got {cols}")
    data = np.array(rows, dtype=float)
    if data.shape[1] != cols:
        raise ShapeError("csv", "ragged rows")
    return split_dataset(data[:, :cols - n_targets], data[:, cols - n_targets:], seed)


def save_dataset_csv(path, inputs: np.ndarray, targets: np.ndarray,
                     input_names=None, target_names=None) -> None:
    inputs = np.asarray(inputs)
    targets = np.asarray(targets)
    if targets.ndim == 1:
        targets = targets[:, None]
    if input_names is None:
        input_names = [f"x{i + 1}" for i in range(inputs.shape[1])]
    if target_names is None:
        target_names = [f"y{i + 1}" if targets.shape[1] > 1 else "y"
                        for i in range(targets.shape[1])]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(input_names) + list(target_names))
        for xi, yi in zip(inputs, targets):
            writer.writerow([repr(float(v)) for v in xi] + [repr(float(v)) for v in yi])


@dataclass
class TrainConfig:
    max_epochs: int = 5000
    patience: int = 200
    seed: int = 0
    lr: float = 0.01


@dataclass
class TrainReport:
    train_mse: float
    val_mse: float
    test_mse: float
    train_mse_raw: float
    val_mse_raw: float
    test_mse_raw: float
    epochs: int
    best_epoch: int
    val_history: list = field(repr=False, default_factory=list)


def _init_params(arch, rng):
    params = []
    for fan_in, fan_out in zip(arch[:-1], arch[1:]):
        scale = np.sqrt(2.0 / (fan_in + fan_out))
        W = rng.normal(0.0, scale, size=(fan_out, fan_in))
        b = np.zeros(fan_out)
        params.append([W, b])
    return params


def _forward(params, X):
    """Activations per layer; hidden layers tanh, last layer identity."""
    acts = [X]
    z = X
    last = len(params) - 1
    for i, (W, b) in enumerate(params):
        pre = z @ W.T + b
        z = pre if i == last else np.tanh(pre)
        acts.append(z)
    return acts


def _backward(params, acts, resid):
    """Gradients of mean squared error; resid = prediction - target."""
    n = resid.shape[0]
    grads = []
    delta = 2.0 * resid / (n * resid.shape[1])
    for i in range(len(params) - 1, -1, -1):
        W, _ = params[i]
        z_in = acts[i]
        grads.append([delta.T @ z_in, delta.sum(axis=0)])
        if i > 0:
            delta = (delta @ W) * (1.0 - acts[i] ** 2)
    grads.reverse()
    return grads


def _mse(params, X, Y) -> float:
    pred = _forward(params, X)[-1]
    return float(np.mean((pred - Y) ** 2))


def train_mlp(data: Dataset, arch, cfg: TrainConfig = None):
    """Fit a tanh network of the given layer sizes; returns (Mlp, TrainReport).

    Inputs and targets are standardized on the training split; the scalings
    are stored on the returned model so it maps raw inputs to raw targets.
    Weights from the best-validation epoch are kept.
    """
    if cfg is None:
        cfg = TrainConfig()
    arch = list(arch)
    if arch[0] != data.inputs.shape[1]:
        raise ShapeError("arch", f"first layer size {arch[0]} != "
                                 f"{data.inputs.shape[1]} input columns")
    if arch[-1] != data.targets.shape[1]:
        raise ShapeError("arch", f"last layer size {arch[-1]} != "
                                 f"{data.targets.shape[1]} target columns")
    if len(arch) < 2:
        raise ShapeError("arch", "need at least input and output sizes")

    X_train_raw = data.inputs[data.train_idx]
    x_mean = X_train_raw.mean(axis=0)
    x_std = X_train_raw.std(axis=0)
    x_std[x_std == 0.0] = 1.0
    y_mean = data.targets[data.train_idx].mean(axis=0)
    y_std = data.targets[data.train_idx].std(axis=0)
    y_std[y_std == 0.0] = 1.0

    X = (data.inputs - x_mean) / x_std
    Y = (data.targets - y_mean) / y_std
    Xt, Yt = X[data.train_idx], Y[data.train_idx]
    Xv, Yv = X[data.val_idx], Y[data.val_idx]
    Xs, Ys = X[data.test_idx], Y[data.test_idx]

    rng = np.random.default_rng(cfg.seed)
    params = _init_params(arch, rng)
    moments = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
    second = [[np.zeros_like(W), np.zeros_like(b)] for W, b in params]
    b1, b2, eps = 0.9, 0.999, 1e-8

    best_val = np.inf
    best_epoch = 0
    best_params = [[W.copy(), b.copy()] for W, b in params]
    val_history = []
    epoch = 0
    for epoch in range(1, cfg.max_epochs + 1):
        acts = _forward(params, Xt)
        grads = _backward(params, acts, acts[-1] - Yt)
        for li in range(len(params)):
            for pi in range(2):
                g = grads[li][pi]
                moments[li][pi] = b1 * moments[li][pi] + (1 - b1) * g
                second[li][pi] = b2 * second[li][pi] + (1 - b2) * g * g
                m_hat = moments[li][pi] / (1 - b1 ** epoch)
                v_hat = second[li][pi] / (1 - b2 ** epoch)
                params[li][pi] = params[li][pi] - cfg.lr * m_hat / (np.sqrt(v_hat) + eps)
        val = _mse(params, Xv, Yv) if len(Xv) else _mse(params, Xt, Yt)
        val_history.append(val)
        if val < best_val:
            best_val = val
            best_epoch = epoch
            best_params = [[W.copy(), b.copy()] for W, b in params]
        elif epoch - best_epoch >= cfg.patience:
            break

    params = best_params
    layers = []
    last = len(params) - 1
    for i, (W, b) in enumerate(params):
        layers.append(Layer([list(map(float, row)) for row in W],
                            [float(v) for v in b],
                            "identity" if i == last else "tanh"))
    mlp = Mlp(
        n_inputs=arch[0],
        layers=layers,
        input_scale=AffineScale([float(1.0 / s) for s in x_std],
                                [float(-m / s) for m, s in zip(x_mean, x_std)]),
        output_scale=AffineScale([float(s) for s in y_std],
                                 [float(m) for m in y_mean]),
    )

    def raw_mse(idx):
        if not len(idx):
            return 0.0
        pred = mlp.eval_batch(data.inputs[idx])
        return float(np.mean((pred - data.targets[idx]) ** 2))

    report = TrainReport(
        train_mse=_mse(params, Xt, Yt),
        val_mse=_mse(params, Xv, Yv) if len(Xv) else 0.0,
        test_mse=_mse(params, Xs, Ys) if len(Xs) else 0.0,
        train_mse_raw=raw_mse(data.train_idx),
        val_mse_raw=raw_mse(data.val_idx),
        test_mse_raw=raw_mse(data.test_idx),
        epochs=epoch,
        best_epoch=best_epoch,
        val_history=val_history,
    )
    return mlp, report
