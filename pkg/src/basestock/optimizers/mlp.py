"""Optional network-parameterized agent head.

The order-up-to vector is produced by a small fully connected network with
softplus hidden layers fed a constant all-ones input.  Gradients compose
the simulator's forward-mode cost gradient with an analytic backward pass
through the head; Adam updates the weights.  With a constant input this is
a reparameterization of the direct vector (the output bias alone can absorb
the solution), so it must converge to the same costs.
"""

from __future__ import annotations

import time
from typing import Optional, Sequence

import numpy as np

from ..network import Network
from ..simulator import batch_demands, grad_episode_batch
from .adam import AgentConfig
from .common import (
    Checkpoint,
    InteractionCounter,
    NonFiniteCost,
    TEST_STREAM,
    TRAIN_STREAM,
    episode_scorer,
    finalize_run,
    initial_ouls,
)


def _softplus(x):
    return np.logaddexp(0.0, x)


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


class _Head:
    """Tiny MLP: ones(n) -> hidden layers (softplus) -> linear output (n)."""

    def __init__(self, n_out: int, hidden: Sequence[int], rng: np.random.Generator, bias0: np.ndarray):
        sizes = [n_out, *hidden, n_out]
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            scale = np.sqrt(2.0 / (fan_in + fan_out))
            self.weights.append(rng.normal(0.0, scale, (fan_out, fan_in)))
            self.biases.append(np.zeros(fan_out))
        # Start at the same levels the direct agent starts from.
        self.biases[-1][:] = bias0
        self.input = np.ones(n_out)

    def forward(self):
        activations = [self.input]
        pre = []
        h = self.input
        for layer, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = w @ h + b
            pre.append(z)
            h = _softplus(z) if layer < len(self.weights) - 1 else z
            activations.append(h)
        return h, (pre, activations)

    def backward(self, grad_out: np.ndarray, cache):
        pre, activations = cache
        grads_w = [None] * len(self.weights)
        grads_b = [None] * len(self.weights)
        delta = grad_out
        for layer in reversed(range(len(self.weights))):
            grads_w[layer] = np.outer(delta, activations[layer])
            grads_b[layer] = delta
            if layer > 0:
                delta = (self.weights[layer].T @ delta) * _sigmoid(pre[layer - 1])
        return grads_w, grads_b

    def params(self):
        return self.weights + self.biases

    @staticmethod
    def apply_updates(params, updates):
        for p, u in zip(params, updates):
            p -= u


def optimize_mlp(
    net: Network,
    config: AgentConfig = AgentConfig(),
    seed: int = 0,
    hidden: Sequence[int] = (8,),
    init_levels: Optional[dict[int, float]] = None,
):
    """Train the MLP head with Adam on simulated episode cost."""
    started = time.perf_counter()
    counter = InteractionCounter()
    levels = init_levels if init_levels is not None else net.init_levels()
    n = len(net.decision_edges())
    head = _Head(n, hidden, np.random.default_rng(seed), initial_ouls(net))

    test = episode_scorer(net, seed, TEST_STREAM, config.test_episodes, init_levels=levels)
    params = head.params()
    m = [np.zeros_like(p) for p in params]
    v = [np.zeros_like(p) for p in params]
    step = 0
    trace: list[Checkpoint] = []

    def checkpoint(episodes_done: int) -> None:
        ouls, _ = head.forward()
        cost = test(ouls)
        counter.measurement += config.test_episodes
        trace.append(Checkpoint(episodes_done, ouls.copy(), cost))

    checkpoint(0)
    episodes_done = 0
    while episodes_done < config.episodes:
        batch = min(config.batch_size, config.episodes - episodes_done)
        demands = batch_demands(
            net, seed, TRAIN_STREAM, range(episodes_done, episodes_done + batch), net.horizon
        )
        ouls, cache = head.forward()
        costs, grads = grad_episode_batch(net, ouls, demands, levels)
        if not (np.all(np.isfinite(costs)) and np.all(np.isfinite(grads))):
            raise NonFiniteCost(ouls)
        grad_out = grads.mean(axis=0)
        grads_w, grads_b = head.backward(grad_out, cache)
        flat_grads = grads_w + grads_b

        step += 1
        updates = []
        for i, g in enumerate(flat_grads):
            m[i] = config.beta1 * m[i] + (1 - config.beta1) * g
            v[i] = config.beta2 * v[i] + (1 - config.beta2) * g * g
            m_hat = m[i] / (1 - config.beta1**step)
            v_hat = v[i] / (1 - config.beta2**step)
            updates.append(config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon))
        _Head.apply_updates(params, updates)

        episodes_done += batch
        counter.training += batch
        if episodes_done % config.checkpoint_every == 0 or episodes_done >= config.episodes:
            checkpoint(episodes_done)

    best = min(trace, key=lambda c: c.test_cost)
    return finalize_run(net, "mlp", trace, best.ouls, best.test_cost, counter, seed, started)
