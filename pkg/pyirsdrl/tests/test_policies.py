import numpy as np

from pyirsdrl import err
from pyirsdrl.codebook import mrc_select_all
from pyirsdrl.constants import SCHEME
from pyirsdrl.dqn import AgentHyperparams
from pyirsdrl.mdp import random_variables, state_size
from pyirsdrl.numerics import StreamRegistry
from pyirsdrl.policies import (
    SCHEMES, BaselinePolicy, DQNAgent, baseline_policy, make_policy, mrc_combiners, scheme_spec)
from pyirsdrl.signal_model import effective_channels
from pyirsdrl.tests import base

__all__ = ["TestSchemes", "TestBaselines", "TestDQNAgent"]


class TestSchemes(base.PyIRSDRLTestCase):
    def test_every_scheme_known(self):
        self.assertEqual(set(SCHEME.ALL), set(SCHEMES))
        with self.assertRaises(err.DataError):
            scheme_spec("greedy")

    def test_slots(self):
        self.assertEqual(7, scheme_spec(SCHEME.DQN1).slots(3))
        self.assertEqual(4, scheme_spec(SCHEME.DQN2).slots(3))
        self.assertEqual(4, scheme_spec(SCHEME.DQN3).slots(3))
        self.assertTrue(scheme_spec(SCHEME.DQN3).learning)
        self.assertFalse(scheme_spec(SCHEME.MRM).learning)


class TestBaselines(base.PyIRSDRLTestCase):
    def setUp(self):
        self.space = self.design_space()
        self.variables = random_variables(self.space, 3, 2, self.stream("v"))
        self.channels = self.random_channels(L=3, K=2, M=3, N=3, seed=1)

    def test_maximum_power(self):
        v = baseline_policy(SCHEME.MRR, self.variables, 1, self.stream("p"))
        self.assertEqual([4, 4], v.power_idx[1].tolist())
        self.assertTrue(np.array_equal(self.variables.power_idx[0], v.power_idx[0]))
        self.assertTrue(np.all(v.combiner_idx[1] < 8))

    def test_quarter_power(self):
        v = baseline_policy(SCHEME.FRM, self.variables, 0, self.stream("p"))
        self.assertEqual([3, 3], v.power_idx[0].tolist())
        space = self.design_space(power_levels=10)
        v = random_variables(space, 3, 2, self.stream("v"))
        self.assertEqual([6, 6], baseline_policy(SCHEME.FRM, v, 2, self.stream()).power_idx[2].tolist())

    def test_random_draws_follow_stream(self):
        a = baseline_policy(SCHEME.RRR, self.variables, 2, self.stream("same"))
        b = baseline_policy(SCHEME.RRR, self.variables, 2, self.stream("same"))
        self.assertTrue(np.array_equal(a.power_idx, b.power_idx))
        self.assertTrue(np.array_equal(a.combiner_idx, b.combiner_idx))
        self.assertEqual(a.irs_idx.tolist(), b.irs_idx.tolist())

    def test_no_irs_keeps_index(self):
        v = baseline_policy(SCHEME.MM_NOIRS, self.variables, 0, self.stream())
        self.assertEqual(self.variables.irs_idx.tolist(), v.irs_idx.tolist())

    def test_mrc(self):
        v = mrc_combiners(self.channels, self.variables, [0, 2])
        effective = effective_channels(self.channels, v.phi, v.powers)
        for cell in (0, 2):
            self.assertEqual(mrc_select_all(self.space.combiners, effective[cell, :, cell]).tolist(),
                             v.combiner_idx[cell].tolist())
        self.assertEqual(self.variables.combiner_idx[1].tolist(), v.combiner_idx[1].tolist())
        self.assertIs(self.variables, mrc_combiners(self.channels, self.variables, []))

    def test_mrc_with_channels(self):
        v = baseline_policy(SCHEME.MRM, self.variables, 1, self.stream(), channels=self.channels)
        self.assertEqual(v.combiner_idx.tolist(),
                         mrc_combiners(self.channels, v, [1]).combiner_idx.tolist())

    def test_not_a_baseline(self):
        with self.assertRaises(err.DataError):
            baseline_policy(SCHEME.DQN2, self.variables, 0, self.stream())

    def test_policy_object(self):
        policy = BaselinePolicy(1, scheme_spec(SCHEME.MRR), self.stream())
        self.assertFalse(policy.learning)
        self.assertEqual([4, 4], policy.decide(self.variables).power_idx[1].tolist())


class TestDQNAgent(base.PyIRSDRLTestCase):
    def agent(self, scheme=SCHEME.DQN2, seed=0, **hp):
        params = dict(batch_size=2, pool_size=10, align_period=3)
        params.update(hp)
        return DQNAgent(1, scheme_spec(scheme), AgentHyperparams(**params), state_size(2), 2,
                        StreamRegistry(seed))

    def test_network_shape(self):
        self.assertEqual((34, 40, 30, 8), self.agent().net.sizes)
        self.assertEqual((34, 70, 100, 32), self.agent(SCHEME.DQN1).net.sizes)
        self.assertEqual((34, 70, 70, 27), self.agent(SCHEME.DQN3).net.sizes)

    def test_first_decision_keeps_epsilon(self):
        agent = self.agent()
        action = agent.act(np.zeros(34), first=True)
        self.assertTrue(0 <= action < 8)
        self.assertEqual(0.6, agent.epsilon)
        agent.act(np.zeros(34))
        self.assertAlmostEqual(0.6 * agent.hp.epsilon_decay, agent.epsilon, places=15)

    def test_experience_bookkeeping(self):
        agent = self.agent()
        stream = self.stream("states")
        state = stream.normal(34)
        losses = []
        for slot in range(6):
            action = agent.act(state, first=slot == 0)
            self.assertEqual(slot, len(agent.pool))
            following = stream.normal(34)
            losses.append(agent.learn(state, action, 1.0))
            state = following
        self.assertEqual([None, None], losses[:2])
        self.assertTrue(all(loss is not None for loss in losses[3:]))
        self.assertEqual(6, agent.decisions)

    def test_align_cadence(self):
        agent = self.agent()
        stream = self.stream("states")
        for slot in range(4):
            state = stream.normal(34)
            agent.learn(state, agent.act(state, first=slot == 0), 2.0)
            if agent.decisions % 3 == 0:
                for (w0, b0), (w1, b1) in zip(agent.net.train, agent.net.target):
                    self.assertTrue(np.array_equal(w0, w1))
                    self.assertTrue(np.array_equal(b0, b1))
        self.assertFalse(np.array_equal(agent.net.train[-1][1], agent.net.target[-1][1]))

    def test_decide(self):
        space = self.design_space()
        v = random_variables(space, 3, 2, self.stream("v"))
        agent = self.agent()
        w = agent.decide(v, 0)
        self.assertEqual(np.maximum(v.power_idx[1] - 1, 0).tolist(), w.power_idx[1].tolist())
        self.assertEqual(v.combiner_idx.tolist(), w.combiner_idx.tolist())
        self.assertEqual(max(v.irs_idx[1] - 1, 0), w.irs_idx[1])
        self.assertEqual([1, 1, 1], agent.gradients(7).tolist())

    def test_save_restore(self):
        directory = self.tempdir()
        agent = self.agent(seed=1)
        agent.save(directory)
        other = self.agent(seed=2)
        self.assertFalse(np.array_equal(agent.net.train[0][0], other.net.train[0][0]))
        other.restore(directory)
        self.assertTrue(np.array_equal(agent.net.train[0][0], other.net.train[0][0]))
        with self.assertRaises(err.DimensionError):
            self.agent(SCHEME.DQN3).restore(directory)

    def test_make_policy(self):
        config = self.small_config(hidden_layers=(8,))
        registry = StreamRegistry(0)
        hp = AgentHyperparams.from_config(config)
        agent = make_policy(0, SCHEME.DQN2, config, registry, state_size(2), hp)
        self.assertEqual((34, 8, 8), agent.net.sizes)
        self.assertTrue(agent.learning)
        self.assertIsInstance(make_policy(0, SCHEME.RRM, config, registry, 34, hp), BaselinePolicy)
