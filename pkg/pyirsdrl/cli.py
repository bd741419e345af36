"""
Command line entry point::

    pyirsdrl run --config sim.json --scenario dqn2 --seed 3 --slots 8000 --out runs/a
    pyirsdrl sweep --config sim.json --schemes dqn2,mrm,rrr --seeds 0,1,2 --rhos 0.999,0.99,0.9
    pyirsdrl template > sim.json

Exit codes: 0 on success, 2 for configuration, input or output-path errors,
3 when a run hits a non-finite value. A run writes its records and
``summary.json`` under ``--out``; wall-clock ``runtime_s`` goes to
``timing.json`` next to it.
"""
import argparse
import json
import logging
import sys

from . import err, simulation
from .config import SimConfig
from .constants import SCHEME

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

logger = logging.getLogger(__name__)


def _int_list(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _str_list(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _add_config_arguments(parser):
    parser.add_argument('--config', help='JSON or option file with SimConfig fields')
    parser.add_argument('--group', help='group to read from an option file (default: irs-sim)')
    parser.add_argument('--seed', type=int, help='global seed')
    parser.add_argument('--slots', type=int, help='number of slots to simulate')
    parser.add_argument('--out', help='output directory')
    parser.add_argument('--workers', type=int, help='threads for the agent phases')
    parser.add_argument('-v', '--verbose', action='store_true', help='progress bar and info logs')
    parser.add_argument('--debug', action='store_true', help='per-slot debug logs')


def build_parser():
    parser = argparse.ArgumentParser(prog='pyirsdrl',
                                     description='Multi-IRS multi-cell uplink simulator '
                                                 'with per-BS deep Q-learning agents')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    run = commands.add_parser('run', help='run one scheme')
    _add_config_arguments(run)
    run.add_argument('--scenario', choices=SCHEME.ALL, help='scheme used by every BS')
    run.add_argument('--dump-topology', action='store_true', default=None,
                     help='write topology.json')
    run.add_argument('--dump-codebooks', action='store_true', default=None,
                     help='write codebooks.json')
    run.add_argument('--checkpoint-dir', help='save agent weights here after the run')
    run.add_argument('--resume-from', help='load agent weights from here before the run')

    sweep = commands.add_parser('sweep', help='compare schemes over seeds and rho values')
    _add_config_arguments(sweep)
    sweep.add_argument('--schemes', type=_str_list, required=True)
    sweep.add_argument('--seeds', type=_int_list, default=[0])
    sweep.add_argument('--rhos', type=_float_list, default=None)

    commands.add_parser('template', help='print the default configuration as JSON')
    return parser


def _load_config(args):
    overrides = {
        "seed": args.seed,
        "slots": args.slots,
        "out_dir": args.out,
        "workers": args.workers,
    }
    if args.command == 'run':
        overrides.update({
            "scheme": args.scenario,
            "dump_topology": args.dump_topology,
            "dump_codebooks": args.dump_codebooks,
            "checkpoint_dir": args.checkpoint_dir,
            "resume_from": args.resume_from,
        })
    return SimConfig.load(read_default_file=args.config, read_default_group=args.group,
                          **overrides)


def _setup_logging(args):
    level = logging.WARNING
    if getattr(args, 'verbose', False):
        level = logging.INFO
    if getattr(args, 'debug', False):
        level = logging.DEBUG
        simulation.DEBUG = True
    simulation.VERBOSE = getattr(args, 'verbose', False)
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s')


def main(argv=None):
    args = build_parser().parse_args(argv)
    _setup_logging(args)

    if args.command == 'template':
        json.dump(SimConfig.template(), sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
        return EXIT_OK

    try:
        config = _load_config(args)
        if args.command == 'run':
            simulation.run_scenario(config)
        else:
            unknown = [s for s in args.schemes if s not in SCHEME.ALL]
            if unknown:
                raise err.ConfigError("unknown schemes: %s" % ", ".join(unknown))
            simulation.run_sweep(config, args.schemes, args.seeds, args.rhos)
    except err.ConfigError as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    except err.NumericalError as e:
        logger.error("numerical failure in slot %s: %s", e.slot, e)
        return EXIT_NUMERICAL
    except err.Error as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
