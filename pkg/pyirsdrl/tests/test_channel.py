import numpy as np

from pyirsdrl import err
from pyirsdrl.channel import (
    ChannelSet, MobilityParams, PathLossParams, advance_channels, build_topology,
    hex_centers, in_hexagon, init_channels, jakes_rho, large_scale, path_loss_db)
from pyirsdrl.numerics import complex_gaussian_array
from pyirsdrl.tests import base

__all__ = ["TestTopology", "TestPathLoss", "TestJakes", "TestChannels", "TestGaussMarkov"]


class TestTopology(base.PyIRSDRLTestCase):
    def test_seven_cells(self):
        centers = hex_centers(7, 100.0)
        d = np.linalg.norm(centers[1:] - centers[0], axis=1)
        self.assertTrue(np.all(np.abs(d - 100.0) < 1e-9), d)
        # the outer six are each other's neighbors around the ring
        ring = np.linalg.norm(centers[1:] - np.roll(centers[1:], 1, axis=0), axis=1)
        self.assertTrue(np.all(np.abs(ring - 100.0) < 1e-9), ring)

    def test_single_cell(self):
        self.assertTrue(np.array_equal(hex_centers(1, 100.0), np.zeros((1, 2))))
        topology = build_topology(self.small_config(cells=1), self.stream("topo"))
        self.assertEqual(1, topology.cells)

    def test_larger_layouts(self):
        centers = hex_centers(19, 100.0)
        self.assertEqual(19, len({tuple(np.round(c, 6)) for c in centers}))
        d = np.linalg.norm(centers[:, None] - centers[None], axis=-1)
        self.assertGreaterEqual(d[~np.eye(19, dtype=bool)].min(), 100.0 - 1e-9)

    def test_invalid_cell_count(self):
        with self.assertRaises(err.DataError):
            hex_centers(0, 100.0)

    def test_ues_inside_their_hexagon(self):
        config = self.small_config(cells=7, ues_per_cell=10)
        for seed in range(5):
            topology = build_topology(config, self.stream("topo", seed))
            bs = topology.bs_positions
            for cell in range(7):
                delta = topology.ue_positions[cell, :, :2] - bs[cell, :2]
                self.assertTrue(np.all(np.linalg.norm(delta, axis=1) <= topology.circumradius + 1e-9))
                self.assertTrue(np.all(in_hexagon(delta[:, 0], delta[:, 1], 100.0)))
            self.assertTrue(np.all(topology.ue_positions[..., 2] == 1.5))

    def test_irs_placement(self):
        topology = build_topology(self.small_config(cells=7), self.stream("topo"))
        offset = topology.irs_positions - topology.bs_positions
        self.assertTrue(np.allclose(offset, [10.0, 0.0, 0.0]))
        self.assertTrue(np.all(topology.bs_positions[:, 2] == 10.0))
        self.assertEqual((2, 3, 3), (topology.K, topology.M, topology.N))

    def test_to_dict(self):
        data = build_topology(self.small_config(), self.stream("topo")).to_dict()
        self.assertEqual(3, data["cells"])
        self.assertEqual((3, 2, 3), np.array(data["ue_positions"]).shape)


class TestPathLoss(base.PyIRSDRLTestCase):
    p = PathLossParams()

    def test_values(self):
        self.assertAlmostEqual(-30.0, path_loss_db(1.0, 2.2, self.p), places=12)
        self.assertAlmostEqual(-105.0, path_loss_db(100.0, 3.75, self.p), places=12)
        self.assertAlmostEqual(-40.0, path_loss_db(10.0, 1.0, self.p), places=12)

    def test_clamps_below_reference_distance(self):
        self.assertEqual(path_loss_db(1.0, 3.0, self.p), path_loss_db(0.25, 3.0, self.p))

    def test_decreasing(self):
        d = np.linspace(1.5, 500.0, 50)
        self.assertTrue(np.all(np.diff(path_loss_db(d, 2.0, self.p)) < 0))
        self.assertGreater(path_loss_db(20.0, 2.0, self.p), path_loss_db(20.0, 2.5, self.p))

    def test_invalid(self):
        for d in (0.0, -3.0):
            with self.assertRaises(err.DataError):
                path_loss_db(d, 2.0, self.p)
        with self.assertRaises(err.DataError):
            PathLossParams(alpha_ub=0.0)
        with self.assertRaises(err.DataError):
            PathLossParams(d0=0.0)

    def test_irs_to_bs_gain(self):
        topology = build_topology(self.small_config(), self.stream("topo"))
        _, _, beta_ib, beta_ii = large_scale(topology, self.p)
        for cell in range(topology.cells):
            self.assertAlmostEqual(1e-4, beta_ib[cell, cell], places=15)
        self.assertTrue(np.all(np.diag(beta_ii) == 0.0))


class TestJakes(base.PyIRSDRLTestCase):
    def test_static(self):
        self.assertEqual(1.0, jakes_rho(0.0, 2.5e9, 5e-3))
        self.assertLess(jakes_rho(0.1, 2.5e9, 5e-3), 1.0)

    def test_reference_speeds(self):
        self.assertTrue(0.9985 <= jakes_rho(1.0, 2.5e9, 5e-3) <= 0.999)
        self.assertTrue(0.988 <= jakes_rho(3.0, 2.5e9, 5e-3) <= 0.992)
        self.assertTrue(0.89 <= jakes_rho(9.0, 2.5e9, 5e-3) <= 0.92)

    def test_negative_speed(self):
        with self.assertRaises(err.DataError):
            jakes_rho(-1.0, 2.5e9, 5e-3)

    def test_mobility_params(self):
        self.assertEqual(0.9, MobilityParams(rho=0.9).correlation)
        self.assertEqual(jakes_rho(3.0, 2.5e9, 5e-3), MobilityParams().correlation)
        with self.assertRaises(err.DataError):
            MobilityParams(rho=1.5)
        with self.assertRaises(err.DataError):
            MobilityParams(slot_s=0.0)


class TestChannels(base.PyIRSDRLTestCase):
    def setUp(self):
        self.config = self.small_config()
        self.topology = build_topology(self.config, self.stream("topo"))

    def test_deterministic(self):
        a = init_channels(self.topology, self.config.path_loss, self.stream("ch", 3))
        b = init_channels(self.topology, self.config.path_loss, self.stream("ch", 3))
        for name in ("h_ub", "h_ui", "g_ib", "g_ii"):
            self.assertTrue(np.array_equal(getattr(a, name), getattr(b, name)), name)

    def test_shapes(self):
        channels = init_channels(self.topology, self.config.path_loss, self.stream("ch"))
        self.assertEqual((3, 2, 3, 3, 3), channels.shape)
        self.assertEqual((3, 2, 3, 3), channels.h_ub.shape)
        self.assertEqual((3, 3, 3, 3), channels.g_ii.shape)
        for r in range(3):
            self.assertTrue(np.all(channels.g_ii[r, r] == 0))

    def test_direct_gain_matches_large_scale(self):
        beta_ub = large_scale(self.topology, self.config.path_loss)[0]
        stream = self.stream("redraw")
        acc = 0.0
        for _ in range(1000):
            channels = init_channels(self.topology, self.config.path_loss, stream)
            acc += np.mean(np.abs(channels.h_ub) ** 2 / beta_ub[..., None])
        self.assertAlmostEqual(1.0, acc / 1000, delta=0.05)


def fading_set(shape, stream, rho):
    u = complex_gaussian_array(shape, stream)
    u_ui = complex_gaussian_array((1, 1, 1, 1), stream)
    g_ib = complex_gaussian_array((1, 1, 1, 1), stream)
    g_ii = np.zeros((1, 1, 1, 1), dtype=complex)
    return ChannelSet(np.ones(shape[:-1]), np.ones((1, 1, 1)), np.ones((1, 1)), np.zeros((1, 1)),
                      u, u_ui, g_ib, g_ii, rho)


class TestGaussMarkov(base.PyIRSDRLTestCase):
    def test_rho_one_keeps_state(self):
        channels = self.random_channels(rho=1.0)
        after = advance_channels(channels, self.stream("evolve"))
        self.assertTrue(np.array_equal(channels.u_ub, after.u_ub))
        self.assertTrue(np.array_equal(channels.h_ui, after.h_ui))

    def test_rho_zero_redraws(self):
        channels = fading_set((10, 10, 10, 10), self.stream("init"), 0.0)
        after = advance_channels(channels, self.stream("evolve"))
        corr = np.mean(np.conj(channels.u_ub) * after.u_ub)
        self.assertLess(abs(corr), 0.05)

    def test_stationary_reflections(self):
        channels = self.random_channels(rho=0.9)
        g_ib, g_ii = channels.g_ib.copy(), channels.g_ii.copy()
        stream = self.stream("evolve")
        for _ in range(50):
            channels = advance_channels(channels, stream)
        self.assertTrue(np.array_equal(g_ib, channels.g_ib))
        self.assertTrue(np.array_equal(g_ii, channels.g_ii))

    def check_statistics(self, rho, steps):
        channels = fading_set((10, 10, 10, 1), self.stream("init", int(rho * 1000)), rho)
        stream = self.stream("evolve", int(rho * 1000))
        power = 0.0
        lagged = 0.0
        for _ in range(steps):
            after = advance_channels(channels, stream)
            power += np.mean(np.abs(channels.u_ub) ** 2)
            lagged += np.mean((np.conj(channels.u_ub) * after.u_ub).real)
            channels = after
        self.assertTrue(0.9 <= power / steps <= 1.1, power / steps)
        self.assertAlmostEqual(rho, lagged / power, delta=0.02)

    def test_statistics(self):
        for rho in (0.9, 0.99, 0.999):
            self.check_statistics(rho, 2000)

    @base.slow
    def test_statistics_long(self):
        for rho in (0.9, 0.99, 0.999):
            self.check_statistics(rho, 10 ** 4)
