import io
import json
import os
from unittest import mock

from pyirsdrl import cli, err, records
from pyirsdrl.optionfile import Parser
from pyirsdrl.tests import base

__all__ = ["TestCommandLine", "TestOptionFile"]


class TestCommandLine(base.PyIRSDRLTestCase):
    def config_file(self, **params):
        path = os.path.join(self.tempdir(), "sim.json")
        data = dict(self.small)
        data.update(params)
        with open(path, "w") as f:
            json.dump(data, f)
        return path

    def test_template(self):
        """ template prints every field as JSON """
        with mock.patch("sys.stdout", new_callable=io.StringIO) as out:
            self.assertEqual(cli.EXIT_OK, cli.main(["template"]))
        self.assertEqual(7, json.loads(out.getvalue())["cells"])

    def test_run(self):
        out = self.tempdir()
        code = cli.main(["run", "--config", self.config_file(), "--scenario", "rrm",
                         "--slots", "3", "--seed", "2", "--out", out, "--dump-topology"])
        self.assertEqual(cli.EXIT_OK, code)
        summary = records.read_json(os.path.join(out, records.SUMMARY_FILE))
        self.assertEqual("rrm", summary["scheme"])
        self.assertEqual(3, summary["slots"])
        self.assertEqual(2, summary["config"]["seed"])
        self.assertTrue(os.path.exists(os.path.join(out, records.TOPOLOGY_FILE)))

    def test_sweep(self):
        out = self.tempdir()
        code = cli.main(["sweep", "--config", self.config_file(), "--schemes", "mrm,frm",
                         "--seeds", "0,1", "--rhos", "0.9", "--slots", "2", "--out", out])
        self.assertEqual(cli.EXIT_OK, code)
        comparison = records.read_json(os.path.join(out, "comparison.json"))
        self.assertEqual({"mrm", "frm"}, set(comparison["0.9"]))

    def test_config_errors(self):
        missing = os.path.join(self.tempdir(), "missing.json")
        self.assertEqual(cli.EXIT_CONFIG, cli.main(["run", "--config", missing]))
        self.assertEqual(cli.EXIT_CONFIG, cli.main(["run", "--config", self.config_file(cells=0)]))
        self.assertEqual(cli.EXIT_CONFIG, cli.main(["sweep", "--config", self.config_file(),
                                                    "--schemes", "mrm,greedy"]))

    def test_unusable_paths(self):
        blocker = os.path.join(self.tempdir(), "plain-file")
        with open(blocker, "w") as f:
            f.write("x")
        self.assertEqual(cli.EXIT_CONFIG, cli.main(["run", "--config", self.config_file(),
                                                    "--slots", "1",
                                                    "--out", os.path.join(blocker, "sub")]))
        self.assertEqual(cli.EXIT_CONFIG, cli.main(["run", "--config", self.config_file(),
                                                    "--out", self.tempdir(),
                                                    "--resume-from", self.tempdir()]))

    def test_numerical_failure(self):
        with mock.patch("pyirsdrl.simulation.run_scenario",
                        side_effect=err.NumericalError("nan rate", slot=4)):
            code = cli.main(["run", "--config", self.config_file(), "--out", self.tempdir()])
        self.assertEqual(cli.EXIT_NUMERICAL, code)

    def test_unknown_scenario(self):
        with mock.patch("sys.stderr", new_callable=io.StringIO):
            with self.assertRaises(SystemExit):
                cli.main(["run", "--scenario", "greedy"])


class TestOptionFile(base.PyIRSDRLTestCase):
    def test_group(self):
        parser = Parser()
        parser.read_string("[irs-sim]\nCells = 3\nscheme = 'mrm'\nhidden_layers = \"8,4\"\nflag\n")
        self.assertEqual({"Cells": "3", "scheme": "mrm", "hidden_layers": "8,4", "flag": None},
                         parser.group("irs-sim"))

    def test_unbalanced_quotes_kept(self):
        parser = Parser()
        parser.read_string("[g]\na = 'x\nb = \"\n")
        self.assertEqual("'x", parser.get("g", "a"))
        self.assertEqual("\"", parser.get("g", "b"))
