import numpy as np

from pyirsdrl import err
from pyirsdrl.codebook import (
    COMBINER, IRS, Codebook, build_combiner_codebook, build_irs_codebook, build_power_set,
    mrc_scores, mrc_select, mrc_select_all)
from pyirsdrl.numerics import lin2db
from pyirsdrl.tests import base

__all__ = ["TestPowerSet", "TestCodebooks", "TestMRC", "TestDesignSpace"]


class TestPowerSet(base.PyIRSDRLTestCase):
    def test_reference_levels(self):
        powers = build_power_set(10.0, 1000.0, 10)
        self.assertEqual(10, len(powers))
        self.assertEqual(10.0, powers[0])
        self.assertEqual(1000.0, powers[9])
        steps_db = np.diff([lin2db(p) for p in powers.values])
        self.assertAllClose(steps_db, np.full(9, 20.0 / 9), rtol=1e-9)
        self.assertTrue(np.all(np.diff(powers.values) > 0))

    def test_two_levels(self):
        powers = build_power_set(1.0, 2.0, 2)
        self.assertEqual([1.0, 2.0], powers.values.tolist())
        self.assertEqual(1, powers.max_index)

    def test_nearest(self):
        powers = build_power_set(10.0, 1000.0, 10)
        # a quarter of the maximum lands on 23.3 dBm
        self.assertEqual(6, powers.nearest(250.0))
        self.assertAlmostEqual(23.333, lin2db(powers[6]), places=3)
        self.assertEqual(0, powers.nearest(0.0))
        self.assertEqual(9, powers.nearest(1e6))

    def test_invalid(self):
        with self.assertRaises(err.DataError):
            build_power_set(10.0, 1000.0, 1)
        with self.assertRaises(err.DataError):
            build_power_set(1000.0, 10.0, 5)
        with self.assertRaises(err.DataError):
            build_power_set(0.0, 10.0, 5)


class TestCodebooks(base.PyIRSDRLTestCase):
    def test_combiners_unit_norm(self):
        codebook = build_combiner_codebook(5, 30, self.stream("z"))
        self.assertEqual(COMBINER, codebook.kind)
        self.assertEqual((30, 5), codebook.codewords.shape)
        self.assertAllClose(np.linalg.norm(codebook.codewords, axis=1), np.ones(30))

    def test_irs_unit_modulus(self):
        codebook = build_irs_codebook(5, 30, self.stream("q"))
        self.assertEqual(IRS, codebook.kind)
        self.assertAllClose(np.abs(codebook.codewords), np.ones((30, 5)))

    def test_deterministic(self):
        a = build_irs_codebook(4, 16, self.stream("q", 9))
        b = build_irs_codebook(4, 16, self.stream("q", 9))
        self.assertTrue(np.array_equal(a.codewords, b.codewords))
        c = build_irs_codebook(4, 16, self.stream("q", 10))
        self.assertFalse(np.array_equal(a.codewords, c.codewords))

    def test_distinct_codewords(self):
        for codebook in (build_combiner_codebook(5, 30, self.stream("z")),
                         build_irs_codebook(5, 30, self.stream("q"))):
            rows = {tuple(np.round(row, 12)) for row in codebook.codewords}
            self.assertEqual(30, len(rows))

    def test_to_dict(self):
        data = build_combiner_codebook(2, 3, self.stream("z")).to_dict()
        self.assertEqual(3, data["size"])
        self.assertEqual(2, data["dimension"])
        self.assertEqual(["0", "1", "2"], sorted(data["codewords"]))
        self.assertEqual(2, len(data["codewords"]["1"]))

    def test_invalid(self):
        with self.assertRaises(err.DataError):
            build_combiner_codebook(0, 4, self.stream())
        with self.assertRaises(err.DataError):
            build_irs_codebook(3, 0, self.stream())


class TestMRC(base.PyIRSDRLTestCase):
    def setUp(self):
        self.codebook = Codebook(COMBINER, np.array([[1, 0], [0, 1], [1, 1]]) / np.array(
            [[1.0], [1.0], [np.sqrt(2)]]))

    def test_hand_cases(self):
        self.assertEqual(0, mrc_select(self.codebook, np.array([2.0, 0.1])))
        self.assertEqual(1, mrc_select(self.codebook, np.array([0.1, 2.0])))
        self.assertEqual(2, mrc_select(self.codebook, np.array([1.0, 1.0])))

    def test_ties_go_low(self):
        tied = Codebook(COMBINER, np.array([[1, 0], [0, 1]], dtype=complex))
        self.assertEqual(0, mrc_select(tied, np.array([1.0, 1.0])))
        self.assertEqual(0, mrc_select(tied, np.zeros(2)))

    def test_scale_and_phase_invariant(self):
        codebook = build_combiner_codebook(4, 20, self.stream("z"))
        stream = self.stream("h")
        for _ in range(20):
            h = self.random_unit_vector(4, stream)
            index = mrc_select(codebook, h)
            self.assertEqual(index, mrc_select(codebook, 7.5 * np.exp(1j * 1.3) * h))
            scores = mrc_scores(codebook, h)
            self.assertEqual(scores.max(), scores[index])

    def test_vectorized(self):
        codebook = build_combiner_codebook(3, 10, self.stream("z"))
        stream = self.stream("h")
        h = np.array([[self.random_unit_vector(3, stream) for _ in range(4)] for _ in range(2)])
        every = mrc_select_all(codebook, h)
        self.assertEqual((2, 4), every.shape)
        for a in range(2):
            for b in range(4):
                self.assertEqual(mrc_select(codebook, h[a, b]), every[a, b])
        with self.assertRaises(err.DimensionError):
            mrc_select_all(codebook, h[..., :2])

    def test_dimension_mismatch(self):
        with self.assertRaises(err.DimensionError):
            mrc_select(self.codebook, np.ones(3))


class TestDesignSpace(base.PyIRSDRLTestCase):
    def test_sizes(self):
        space = self.design_space()
        self.assertEqual((5, 8, 8), space.sizes)
        self.assertEqual(3, space.combiners.dimension)
        self.assertEqual(3, space.irs.dimension)
        self.assertEqual({"powers_mw", "combiners", "irs"}, set(space.to_dict()))

    def test_run_seed_moves_codebooks(self):
        a = self.design_space(seed=1)
        b = self.design_space(seed=2)
        self.assertFalse(np.array_equal(a.irs.codewords, b.irs.codewords))

    def test_codebook_seed_pins_codebooks(self):
        a = self.design_space(seed=1, codebook_seed=42)
        b = self.design_space(seed=2, codebook_seed=42)
        self.assertTrue(np.array_equal(a.irs.codewords, b.irs.codewords))
        self.assertTrue(np.array_equal(a.combiners.codewords, b.combiners.codewords))
