#!/usr/bin/env python
import cProfile
import time

import pyirsdrl
from pyirsdrl.config import SimConfig
from pyirsdrl.numerics import StreamRegistry
from pyirsdrl.simulation import Simulation
from pyirsdrl import signal_model

pyirsdrl.simulation.DEBUG = False
pyirsdrl.simulation.VERBOSE = False

def func_time(func):
    def _wrapper(*args, **kwargs):
        start = time.time()
        func(*args, **kwargs)
        print(func.__name__, 'run:', time.time() - start)
    return _wrapper

config = SimConfig(slots=0, out_dir="benchmark-out")

@func_time
def slots(scheme, num, workers=1):
    with Simulation(config.replace(scheme=scheme, workers=workers)) as sim:
        for _ in range(num):
            sim.step()

@func_time
def effective_channels(num):
    with Simulation(config) as sim:
        powers = sim.variables.powers
        phi = sim.variables.phi
        for _ in range(num):
            signal_model.effective_channels(sim.channels, phi, powers)

@func_time
def monte_carlo(draws):
    with Simulation(config) as sim:
        v = sim.variables
        signal_model.empirical_sinr(sim.channels, v.phi, v.powers, v.combiners[0, 0],
                                    config.sigma2, (0, 0), draws,
                                    StreamRegistry(1).stream("benchmark"))

if __name__ == "__main__":
    effective_channels(10000)
    monte_carlo(100000)
    slots("mrm", 1000)
    slots("dqn2", 1000)
    slots("dqn2", 1000, workers=4)
    cProfile.run('slots("dqn1", 500)')
