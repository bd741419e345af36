from pyirsdrl.tests.test_numerics import *
from pyirsdrl.tests.test_channel import *
from pyirsdrl.tests.test_signal_model import *
from pyirsdrl.tests.test_codebook import *
from pyirsdrl.tests.test_mdp import *
from pyirsdrl.tests.test_dqn import *
from pyirsdrl.tests.test_policies import *
from pyirsdrl.tests.test_config import *
from pyirsdrl.tests.test_records import *
from pyirsdrl.tests.test_simulation import *
from pyirsdrl.tests.test_cli import *

if __name__ == "__main__":
    import unittest
    unittest.main()
