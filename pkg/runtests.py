#!/usr/bin/env python
import unittest

import pyirsdrl.simulation
pyirsdrl.simulation.DEBUG = True
pyirsdrl.simulation.VERBOSE = False

import pyirsdrl.tests
unittest.main(pyirsdrl.tests, verbosity=2)
