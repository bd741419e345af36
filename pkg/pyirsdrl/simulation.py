"""
The slot loop: environment step, agent decisions, measurement, rewards,
learning and record keeping for one run, plus multi-run sweeps.
"""
import logging
import os
import warnings
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from tqdm import tqdm

from . import err, records
from .channel import advance_channels, build_topology, init_channels
from .codebook import build_design_space
from .dqn import AgentHyperparams
from .mdp import (all_neighbor_sets, build_state, cell_penalties, compute_reward,
                  exchange_messages, exchange_overhead, measure, measure_with,
                  random_variables, state_size)
from .numerics import StreamRegistry
from .policies import MRC, OFF, make_policy, mrc_combiners, scheme_spec

DEBUG = False
VERBOSE = False

logger = logging.getLogger(__name__)

SlotResult = namedtuple('SlotResult', 'slot measurement variables rewards penalty_sums epsilons losses')


class Simulation(object):
    """
    One network and its agents.

    Building a Simulation draws the topology, the codebooks, the slot-0
    channels and random initial variables, and measures them once so that
    the first slot has a previous measurement to build states from.

    :param config: :class:`~pyirsdrl.config.SimConfig`
    :param registry: :class:`~pyirsdrl.numerics.StreamRegistry`; one keyed
        by ``config.seed`` when omitted
    """

    def __init__(self, config, registry=None):
        self.config = config
        self.registry = registry or StreamRegistry(config.seed)
        self.topology = build_topology(config, self.registry.stream("topology"))
        self.space = build_design_space(config, self.registry)
        self.channels = init_channels(self.topology, config.path_loss,
                                      self.registry.stream("channel", "init"),
                                      config.mobility.correlation)
        self._evolve = self.registry.stream("channel", "evolve")

        L, K = config.cells, config.ues_per_cell
        self.b1, self.b2 = config.interfering, config.interfered
        self.specs = [scheme_spec(config.cell_scheme(cell)) for cell in range(L)]
        self.mrc_cells = [cell for cell, spec in enumerate(self.specs) if spec.combiner == MRC]
        irs_enabled = np.array([spec.irs != OFF for spec in self.specs])

        variables = random_variables(self.space, L, K, self.registry.stream("variables", "init"),
                                     irs_enabled)
        self.variables = mrc_combiners(self.channels, variables, self.mrc_cells)
        self.measurement = self._measure(self.channels, self.variables)
        self.neighbors = all_neighbor_sets(self.measurement.norms, self.b1, self.b2)
        if self.neighbors[0].degenerate:
            warnings.warn("%d cells leave fewer than B=%d neighbors; missing slots are padded"
                          % (L, max(self.b1, self.b2)), err.Warning)
        self.penalties = cell_penalties(self.measurement, self.neighbors, config.sigma2,
                                        config.bandwidth)
        self.inboxes = exchange_messages(self.measurement, self.neighbors, self.penalties)

        self.state_dim = state_size(K, self.b1, self.b2)
        hp = AgentHyperparams.from_config(config)
        self.policies = [make_policy(cell, spec.name, config, self.registry, self.state_dim, hp)
                         for cell, spec in enumerate(self.specs)]
        if config.resume_from:
            for policy in self.learners:
                policy.restore(config.resume_from)

        self.slot = 0
        self._executor = ThreadPoolExecutor(config.workers) if config.workers > 1 else None

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        del exc_info
        self.close()

    def close(self):
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None

    @property
    def learners(self):
        return [p for p in self.policies if p.learning]

    def _fan_out(self, fn, items):
        if self._executor is None:
            return [fn(item) for item in items]
        return list(self._executor.map(fn, items))

    def _measure(self, channels, variables):
        return measure(channels, variables, self.config.sigma2, self.config.bandwidth)

    def _states(self, tilde):
        states = [None] * len(self.policies)
        sum_rates = self.measurement.sum_rates()
        for policy in self.learners:
            cell = policy.cell
            states[cell] = build_state(cell, self.measurement.scalars, tilde,
                                       self.neighbors[cell], self.inboxes[cell],
                                       self.variables, float(sum_rates[cell]),
                                       self.b1, self.b2)
        return states

    def step(self):
        """Advance one slot and return its :class:`SlotResult`."""
        config = self.config
        slot = self.slot
        channels = advance_channels(self.channels, self._evolve)

        # time-t channels seen through the variables of t - T
        tilde = measure_with(channels, self.variables)
        if not np.all(np.isfinite(tilde)):
            raise err.NumericalError("non-finite channel in slot %d" % slot, slot=slot)
        states = self._states(tilde)

        first = slot == 0
        actions = dict(self._fan_out(
            lambda p: (p.cell, p.act(states[p.cell], first=first)), self.learners))

        variables = self.variables
        for policy in self.policies:
            if policy.learning:
                variables = policy.decide(variables, actions[policy.cell])
            else:
                variables = policy.decide(variables)
        variables = mrc_combiners(channels, variables, self.mrc_cells)

        measurement = self._measure(channels, variables)
        if not measurement.is_finite():
            raise err.NumericalError("non-finite measurement in slot %d" % slot, slot=slot)

        if slot % config.neighbor_period == 0:
            self.neighbors = all_neighbor_sets(measurement.norms, self.b1, self.b2)
        penalties = cell_penalties(measurement, self.neighbors, config.sigma2, config.bandwidth)
        rewards = []
        penalty_sums = []
        for sets in self.neighbors:
            received = [penalties[sets.cell, i] for i in sets.interfered]
            rewards.append(compute_reward(measurement.rates[sets.cell], received))
            penalty_sums.append(float(sum(received)))
        if not np.all(np.isfinite(rewards)):
            raise err.NumericalError("non-finite reward in slot %d" % slot, slot=slot)

        losses = dict(self._fan_out(
            lambda p: (p.cell, p.learn(states[p.cell], actions[p.cell], rewards[p.cell])),
            self.learners))
        epsilons = [getattr(p, "epsilon", None) for p in self.policies]

        self.channels = channels
        self.variables = variables
        self.measurement = measurement
        self.penalties = penalties
        self.inboxes = exchange_messages(measurement, self.neighbors, penalties)
        self.slot += 1

        if DEBUG:
            logger.debug("slot %d: mean rate %.4f, rewards %s", slot,
                         float(measurement.rates.mean()), np.round(rewards, 4).tolist())
        return SlotResult(slot, measurement, variables, rewards, penalty_sums, epsilons,
                          [losses.get(cell) for cell in range(len(self.policies))])

    def save_checkpoints(self, directory):
        os.makedirs(directory, exist_ok=True)
        for policy in self.learners:
            policy.save(directory)


def scheme_label(config):
    return "mixed" if config.cell_schemes else config.scheme


def run_scenario(config):
    """
    Run ``config.slots`` slots and write the records, ``summary.json`` and
    ``timing.json`` under ``config.out_dir``.

    :return: the summary dict
    """
    started = records.now()
    try:
        os.makedirs(config.out_dir, exist_ok=True)
    except OSError as e:
        raise err.OperationalError("cannot create %s: %s" % (config.out_dir, e))
    scheme = scheme_label(config)
    logger.info("running %s for %d slots, seed %d, config %s", scheme, config.slots,
                config.seed, config.config_hash()[:12])

    mean_rates = []
    reward_sums = np.zeros(config.cells)
    with Simulation(config) as sim:
        if config.dump_topology:
            records.write_json(os.path.join(config.out_dir, records.TOPOLOGY_FILE),
                               sim.topology.to_dict())
        if config.dump_codebooks:
            records.write_json(os.path.join(config.out_dir, records.CODEBOOK_FILE),
                               sim.space.to_dict())
        slots = range(config.slots)
        if VERBOSE:
            slots = tqdm(slots, desc=scheme, unit="slot")
        with records.RecordWriter(config.out_dir, scheme) as writer:
            for _ in slots:
                result = sim.step()
                writer.write_slot(result)
                mean_rates.append(float(np.mean(result.measurement.rates)))
                reward_sums += result.rewards
        if config.checkpoint_dir:
            sim.save_checkpoints(config.checkpoint_dir)

    summary = records.build_summary(config, scheme, mean_rates, reward_sums,
                                    exchange_overhead(config.ues_per_cell, config.interfered))
    records.write_outputs(config.out_dir, summary, started, records.now())
    logger.info("%s: final moving-average rate %s", scheme, summary["final_ma_rate"])
    return summary


def run_sweep(config, schemes, seeds, rhos=None, out_dir=None):
    """
    Run every (rho, scheme, seed) combination and write ``comparison.json``
    with the per-seed final moving-average rates and their median.
    """
    out_dir = out_dir or config.out_dir
    rhos = list(rhos) if rhos else [config.rho]
    comparison = {}
    for rho in rhos:
        rho_key = "default" if rho is None else repr(float(rho))
        by_scheme = comparison.setdefault(rho_key, {})
        for scheme in schemes:
            finals = []
            for seed in seeds:
                run_dir = os.path.join(out_dir, "rho-%s" % rho_key, scheme, "seed-%d" % seed)
                summary = run_scenario(config.replace(rho=rho, scheme=scheme, seed=seed,
                                                      out_dir=run_dir))
                finals.append(summary["final_ma_rate"])
            valid = [f for f in finals if f is not None]
            by_scheme[scheme] = {
                "seeds": list(seeds),
                "final_ma_rate": finals,
                "median": float(np.median(valid)) if valid else None,
            }
    records.write_json(os.path.join(out_dir, "comparison.json"), comparison)
    return comparison
