#!/usr/bin/env python
import logging

import pyirsdrl


print(pyirsdrl.get_version())
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')

# a desk-scale network: three cells, two UEs each
for scheme in ("dqn2", "mrm", "mm-noirs"):
    summary = pyirsdrl.simulate(cells=3, ues_per_cell=2, antennas=3, irs_elements=3,
                                rho=0.99, slots=2000, ma_window=500, scheme=scheme,
                                out_dir="example-out/%s" % scheme)
    print(scheme, summary["final_ma_rate"])
