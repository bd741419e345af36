"""
Who sets each cell's variables: a learning agent (DQN1/DQN2/DQN3) or one
of the fixed baselines.
"""
import logging
import os
from dataclasses import dataclass

import numpy as np

from . import err
from .codebook import mrc_select_all
from .constants import SCHEME
from .dqn import (ExperiencePool, Experience, QNetwork, align_target,
                  epsilon_decay, select_action, train_step)
from .mdp import action_count, apply_action, decode_action
from .signal_model import effective_channels

logger = logging.getLogger(__name__)

AGENT = "agent"
RANDOM = "random"
MAXIMUM = "maximum"
QUARTER = "quarter"
MRC = "mrc"
OFF = "off"


@dataclass(frozen=True)
class SchemeSpec(object):
    """
    How one scheme picks (power, IRS, combiner). ``arity`` and ``hidden``
    are set for learning schemes only.
    """
    name: str
    power: str
    irs: str
    combiner: str
    arity: int = None
    hidden: tuple = ()

    @property
    def learning(self):
        return self.arity is not None

    @property
    def combiner_slots(self):
        return self.combiner == AGENT

    def slots(self, K):
        return 2 * K + 1 if self.combiner_slots else K + 1

    def actions(self, K):
        return action_count(self.arity, self.slots(K))


SCHEMES = {
    SCHEME.DQN1: SchemeSpec(SCHEME.DQN1, AGENT, AGENT, AGENT, arity=2, hidden=(70, 100)),
    SCHEME.DQN2: SchemeSpec(SCHEME.DQN2, AGENT, AGENT, MRC, arity=2, hidden=(40, 30)),
    SCHEME.DQN3: SchemeSpec(SCHEME.DQN3, AGENT, AGENT, MRC, arity=3, hidden=(70, 70)),
    SCHEME.RRR: SchemeSpec(SCHEME.RRR, RANDOM, RANDOM, RANDOM),
    SCHEME.MRR: SchemeSpec(SCHEME.MRR, MAXIMUM, RANDOM, RANDOM),
    SCHEME.MRM: SchemeSpec(SCHEME.MRM, MAXIMUM, RANDOM, MRC),
    SCHEME.FRM: SchemeSpec(SCHEME.FRM, QUARTER, RANDOM, MRC),
    SCHEME.RRM: SchemeSpec(SCHEME.RRM, RANDOM, RANDOM, MRC),
    SCHEME.MM_NOIRS: SchemeSpec(SCHEME.MM_NOIRS, MAXIMUM, OFF, MRC),
}


def scheme_spec(name):
    try:
        return SCHEMES[name]
    except KeyError:
        raise err.DataError("unknown scheme %r" % (name,))


def mrc_combiners(channels, variables, cells):
    """Re-pick the combiners of *cells* by MRC on the current effective channels."""
    cells = list(cells)
    if not cells:
        return variables
    effective = effective_channels(channels, variables.phi, variables.powers)
    for cell in cells:
        own = effective[cell, :, cell, :]
        variables = variables.with_cell(
            cell, combiner_idx=mrc_select_all(variables.space.combiners, own))
    return variables


def baseline_policy(kind, variables, cell, stream, channels=None):
    """
    Set cell *cell*'s variables the way baseline *kind* does.

    MRC combiners need *channels*; without them the combiners are left for
    :func:`mrc_combiners` so that every cell's powers and IRS are fixed
    first.
    """
    spec = scheme_spec(kind)
    if spec.learning:
        raise err.DataError("%s is not a baseline" % (kind,))
    space = variables.space
    K = variables.shape[1]
    n_power, n_combiner, n_irs = space.sizes

    if spec.power == RANDOM:
        power = stream.integers(n_power, size=K)
    elif spec.power == MAXIMUM:
        power = np.full(K, space.power_set.max_index)
    else:
        power = np.full(K, space.power_set.nearest(0.25 * space.power_set[-1]))

    irs = stream.integers(n_irs) if spec.irs == RANDOM else None
    combiner = stream.integers(n_combiner, size=K) if spec.combiner == RANDOM else None

    variables = variables.with_cell(cell, power_idx=power, combiner_idx=combiner, irs_idx=irs)
    if spec.combiner == MRC and channels is not None:
        variables = mrc_combiners(channels, variables, [cell])
    return variables


class BaselinePolicy(object):
    """A fixed rule; never reads rewards, never trains."""

    learning = False

    def __init__(self, cell, spec, stream):
        self.cell = cell
        self.spec = spec
        self.stream = stream

    def __repr__(self):
        return "BaselinePolicy(cell=%d, %s)" % (self.cell, self.spec.name)

    def decide(self, variables):
        return baseline_policy(self.spec.name, variables, self.cell, self.stream)


class DQNAgent(object):
    """
    The learner of one BS.

    Experience bookkeeping follows the slot loop: the (s, a, r) of slot t
    waits in :attr:`pending` until the state of slot t + 1 completes it.
    """

    learning = True

    def __init__(self, cell, spec, hp, state_dim, K, registry, hidden=None):
        self.cell = cell
        self.spec = spec
        self.hp = hp
        self.K = K
        sizes = (state_dim,) + tuple(hidden or spec.hidden) + (spec.actions(K),)
        self.net = QNetwork(sizes, registry.stream("agent", cell, "init"))
        self.pool = ExperiencePool(hp.pool_size)
        self.act_stream = registry.stream("agent", cell, "act")
        self.replay_stream = registry.stream("agent", cell, "replay")
        self.epsilon = hp.epsilon0
        self.decisions = 0
        self.pending = None
        self.last_loss = None

    def __repr__(self):
        return "DQNAgent(cell=%d, %s, %r)" % (self.cell, self.spec.name, self.net)

    def act(self, state, first=False):
        """
        Choose an action for *state*: uniformly at random on the first
        decision, epsilon-greedy afterwards. Completes the pending
        experience with *state*.
        """
        if self.pending is not None:
            s, a, r = self.pending
            self.pool.push(Experience(s, a, r, state))
            self.pending = None
        if first:
            action = int(self.act_stream.integers(self.net.output_size))
        else:
            action = select_action(self.net, state, self.epsilon, self.act_stream)
            self.epsilon = epsilon_decay(self.epsilon, self.hp)
        self.decisions += 1
        return action

    def gradients(self, action):
        return decode_action(action, self.spec.arity, self.spec.slots(self.K))

    def decide(self, variables, action):
        return apply_action(variables, self.cell, self.gradients(action),
                            update_combiners=self.spec.combiner_slots)

    def learn(self, state, action, reward):
        """Store (s, a, r), train once when the pool is large enough, align on cadence."""
        self.pending = (state, action, float(reward))
        batch = self.pool.sample(self.hp.batch_size, self.replay_stream)
        self.last_loss = train_step(self.net, batch, self.hp) if batch else None
        if self.decisions % self.hp.align_period == 0:
            align_target(self.net)
        return self.last_loss

    def checkpoint_path(self, directory):
        return os.path.join(directory, "agent-%d.json" % self.cell)

    def save(self, directory):
        self.net.save(self.checkpoint_path(directory))

    def restore(self, directory):
        path = self.checkpoint_path(directory)
        try:
            net = QNetwork.load(path)
        except (OSError, ValueError) as e:
            if isinstance(e, err.Error):
                raise
            raise err.OperationalError("cannot restore cell %d from %s: %s" % (self.cell, path, e))
        if net.sizes != self.net.sizes:
            raise err.DimensionError("checkpoint of cell %d has shape %r, expected %r"
                                     % (self.cell, net.sizes, self.net.sizes))
        self.net = net
        logger.info("cell %d: restored weights from %s", self.cell, directory)


def make_policy(cell, scheme, config, registry, state_dim, hp):
    spec = scheme_spec(scheme)
    if spec.learning:
        return DQNAgent(cell, spec, hp, state_dim, config.ues_per_cell, registry,
                        hidden=config.hidden_layers or None)
    return BaselinePolicy(cell, spec, registry.stream("policy", cell))
