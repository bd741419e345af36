from .config import SimConfig
from .err import (
    Warning, Error, InterfaceError, ConfigError, DataError, DimensionError,
    DomainError, InternalError, InvalidStateError, OperationalError,
    NumericalError, NotSupportedError)

VERSION = (0, 1, 0, None)
if VERSION[3] is not None:
    VERSION_STRING = "%d.%d.%d_%s" % VERSION
else:
    VERSION_STRING = "%d.%d.%d" % VERSION[:3]


def Simulate(*args, **kwargs):
    """
    Run one scheme; see simulation.run_scenario() for more information.
    Arguments are passed to SimConfig.load().
    """
    from .simulation import run_scenario
    return run_scenario(SimConfig.load(*args, **kwargs))


from . import config as _orig_config

if _orig_config.SimConfig.load.__doc__ is not None:
    Simulate.__doc__ = _orig_config.SimConfig.load.__doc__
del _orig_config


def get_version():
    version = VERSION
    if VERSION[3] is None:
        version = VERSION[:3]
    return '.'.join(map(str, version))


simulate = Simulate

__version__ = get_version()
