"""
Deep Q-network learner of one agent: a fully connected ReLU network with a
target copy, RMSProp training on replayed experience and an epsilon-greedy
policy. Plain numpy, no autodiff.
"""
import copy
import json
import logging
import math
from collections import deque, namedtuple
from dataclasses import dataclass

import numpy as np

from . import err

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "pyirsdrl-qnet"
CHECKPOINT_VERSION = 1

TRAIN = "train"
TARGET = "target"

MSE = "mse"
HUBER = "huber"

Experience = namedtuple('Experience', 'state action reward next_state')


@dataclass(frozen=True)
class AgentHyperparams(object):
    gamma: float = 0.7
    epsilon0: float = 0.6
    epsilon_min: float = 0.005
    epsilon_decay: float = 1.0 - 10.0 ** -3.5
    batch_size: int = 10
    pool_size: int = 300
    align_period: int = 50
    learning_rate: float = 1e-3
    rms_decay: float = 0.9
    rms_eps: float = 1e-8
    loss: str = MSE
    huber_delta: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise err.DataError("gamma must lie in [0, 1), got %r" % self.gamma)
        if not 0.0 <= self.epsilon_min <= self.epsilon0 <= 1.0:
            raise err.DataError("need 0 <= epsilon_min <= epsilon0 <= 1")
        if not 0.0 < self.epsilon_decay <= 1.0:
            raise err.DataError("epsilon_decay must lie in (0, 1]")
        if not 1 <= self.batch_size <= self.pool_size:
            raise err.DataError("need 1 <= batch_size <= pool_size")
        if self.align_period < 1:
            raise err.DataError("align_period must be >= 1")
        if not self.learning_rate > 0 or not 0.0 <= self.rms_decay < 1.0 or not self.rms_eps > 0:
            raise err.DataError("invalid RMSProp settings")
        if self.loss not in (MSE, HUBER):
            raise err.DataError("unknown loss %r" % (self.loss,))
        if not self.huber_delta > 0:
            raise err.DataError("huber_delta must be positive")

    @classmethod
    def from_config(cls, config):
        return cls(gamma=config.gamma, epsilon0=config.epsilon0,
                   epsilon_min=config.epsilon_min, epsilon_decay=config.epsilon_decay,
                   batch_size=config.batch_size, pool_size=config.pool_size,
                   align_period=config.align_period, learning_rate=config.learning_rate,
                   rms_decay=config.rms_decay, rms_eps=config.rms_eps,
                   loss=config.loss, huber_delta=config.huber_delta)


class ExperiencePool(object):
    """Ring buffer of experiences; the oldest is evicted first."""

    def __init__(self, capacity):
        if capacity < 1:
            raise err.DataError("pool capacity must be >= 1")
        self.capacity = capacity
        self._items = deque(maxlen=capacity)

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def push(self, experience):
        self._items.append(experience)

    def sample(self, batch_size, stream):
        """Uniform sample without replacement; empty while the pool is smaller than the batch."""
        if len(self._items) < batch_size:
            return []
        picks = stream.choice(len(self._items), batch_size, replace=False)
        return [self._items[i] for i in picks]


def replay_push(pool, experience):
    pool.push(experience)


def replay_sample(pool, batch_size, stream):
    return pool.sample(batch_size, stream)


def init_layers(sizes, stream=None):
    """
    Layers ``[(W, b), ...]`` with W of shape (out, in). Weights are drawn
    U(-sqrt(6 / fan_in), sqrt(6 / fan_in)), biases start at zero; without a
    stream every weight is zero.
    """
    if len(sizes) < 2 or any(int(s) < 1 for s in sizes):
        raise err.DataError("invalid layer sizes %r" % (sizes,))
    layers = []
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        if stream is None:
            w = np.zeros((fan_out, fan_in))
        else:
            limit = math.sqrt(6.0 / fan_in)
            w = stream.uniform(-limit, limit, size=(fan_out, fan_in))
        layers.append((w, np.zeros(fan_out)))
    return layers


def _activations(layers, x):
    """Inputs of every layer plus the output, for back-propagation."""
    outputs = [x]
    for n, (w, b) in enumerate(layers):
        a = outputs[-1] @ w.T + b
        if n < len(layers) - 1:
            a = np.maximum(a, 0.0)
        outputs.append(a)
    return outputs


def forward(layers, s):
    """Q-values for a single state (n,) or a batch (B, n)."""
    s = np.asarray(s, dtype=float)
    width = layers[0][0].shape[1]
    if s.shape[-1] != width or s.ndim not in (1, 2):
        raise err.DimensionError("state has shape %r, network expects width %d" % (s.shape, width))
    return _activations(layers, s)[-1]


def loss_and_gradients(layers, states, actions, targets, loss=MSE, huber_delta=1.0):
    """
    Loss of the selected Q-values against *targets* and its gradient for
    every (W, b).

    :return: ``(loss, [(dW, db), ...])``
    """
    states = np.atleast_2d(np.asarray(states, dtype=float))
    actions = np.asarray(actions, dtype=int)
    targets = np.asarray(targets, dtype=float)
    batch = states.shape[0]
    outputs = _activations(layers, states)
    rows = np.arange(batch)
    residual = outputs[-1][rows, actions] - targets

    if loss == HUBER:
        small = np.abs(residual) <= huber_delta
        value = np.where(small, 0.5 * residual ** 2,
                         huber_delta * (np.abs(residual) - 0.5 * huber_delta)).mean()
        slope = np.clip(residual, -huber_delta, huber_delta) / batch
    else:
        value = np.mean(residual ** 2)
        slope = 2.0 * residual / batch

    delta = np.zeros_like(outputs[-1])
    delta[rows, actions] = slope
    grads = [None] * len(layers)
    for n in range(len(layers) - 1, -1, -1):
        w, _ = layers[n]
        grads[n] = (delta.T @ outputs[n], delta.sum(axis=0))
        if n:
            delta = (delta @ w) * (outputs[n] > 0)
    return float(value), grads


class QNetwork(object):
    """
    Train and target copies of one MLP plus the RMSProp accumulators of
    the train copy.
    """

    def __init__(self, sizes, stream=None):
        self.sizes = tuple(int(s) for s in sizes)
        self.train = init_layers(self.sizes, stream)
        self.target = copy.deepcopy(self.train)
        self.rms = [(np.zeros_like(w), np.zeros_like(b)) for w, b in self.train]
        self.steps = 0

    def __repr__(self):
        return "QNetwork(%s)" % "-".join(str(s) for s in self.sizes)

    @property
    def input_size(self):
        return self.sizes[0]

    @property
    def output_size(self):
        return self.sizes[-1]

    def layers(self, which=TRAIN):
        if which == TRAIN:
            return self.train
        if which == TARGET:
            return self.target
        raise err.DataError("unknown network %r" % (which,))

    def to_dict(self):
        def dump(layers):
            return [[w.tolist(), b.tolist()] for w, b in layers]
        return {
            "format": CHECKPOINT_FORMAT,
            "version": CHECKPOINT_VERSION,
            "sizes": list(self.sizes),
            "steps": self.steps,
            "train": dump(self.train),
            "target": dump(self.target),
            "rms": dump(self.rms),
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("format") != CHECKPOINT_FORMAT:
            raise err.DataError("not a Q-network checkpoint")
        if data.get("version") != CHECKPOINT_VERSION:
            raise err.NotSupportedError("checkpoint version %r" % (data.get("version"),))
        net = cls(data["sizes"])

        def load(dumped):
            layers = [(np.array(w, dtype=float), np.array(b, dtype=float)) for w, b in dumped]
            for (w, b), (w0, b0) in zip(layers, net.train):
                if w.shape != w0.shape or b.shape != b0.shape:
                    raise err.DimensionError("checkpoint layer shapes do not match its sizes")
            return layers
        net.train = load(data["train"])
        net.target = load(data["target"])
        net.rms = load(data["rms"])
        net.steps = int(data.get("steps", 0))
        return net

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f)

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.from_dict(json.load(f))


def mlp_forward(net, which, s):
    return forward(net.layers(which), s)


def rmsprop_update(net, grads, hp):
    rho, lr, eps = hp.rms_decay, hp.learning_rate, hp.rms_eps
    layers = []
    rms = []
    for (w, b), (ms_w, ms_b), (g_w, g_b) in zip(net.train, net.rms, grads):
        ms_w = rho * ms_w + (1.0 - rho) * g_w * g_w
        ms_b = rho * ms_b + (1.0 - rho) * g_b * g_b
        layers.append((w - lr * g_w / (np.sqrt(ms_w) + eps),
                       b - lr * g_b / (np.sqrt(ms_b) + eps)))
        rms.append((ms_w, ms_b))
    net.train = layers
    net.rms = rms
    net.steps += 1


def q_targets(net, batch, gamma):
    """r + gamma max_a' Q(s', a'; w-), always bootstrapped."""
    rewards = np.array([e.reward for e in batch], dtype=float)
    if gamma == 0.0:
        return rewards
    following = np.array([e.next_state for e in batch], dtype=float)
    return rewards + gamma * forward(net.target, following).max(axis=1)


def train_step(net, batch, hp):
    """One RMSProp step on *batch*; returns the loss before the update."""
    if not batch:
        raise err.DataError("train_step needs a non-empty batch")
    states = np.array([e.state for e in batch], dtype=float)
    actions = [e.action for e in batch]
    loss, grads = loss_and_gradients(net.train, states, actions,
                                     q_targets(net, batch, hp.gamma),
                                     hp.loss, hp.huber_delta)
    rmsprop_update(net, grads, hp)
    return loss


def select_action(net, s, epsilon, stream):
    """Epsilon-greedy; greedy ties go to the lowest action index."""
    if not 0.0 <= epsilon <= 1.0:
        raise err.DataError("epsilon must lie in [0, 1], got %r" % (epsilon,))
    if stream.random() < epsilon:
        return int(stream.integers(net.output_size))
    return int(np.argmax(mlp_forward(net, TRAIN, s)))


def epsilon_decay(epsilon, hp):
    return max(hp.epsilon_min, hp.epsilon_decay * epsilon)


def align_target(net):
    net.target = copy.deepcopy(net.train)
