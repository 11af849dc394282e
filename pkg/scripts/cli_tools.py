#!/usr/bin/env python3
"""Developer helpers around the netgood library.

Usage examples:
  python scripts/cli_tools.py examples
  python scripts/cli_tools.py star-sweep --start 0.1 --stop 0.3 --steps 9
  python scripts/cli_tools.py write-star --g-in 0.25 --output samples/star.json
"""
from pathlib import Path
import argparse
import json
import sys

import numpy as np

REPO = Path(__file__).resolve().parents[1]
SAMPLES = REPO / 'samples'
sys.path.insert(0, str(REPO))

from netgood.cli.main import main as netgood_main  # noqa: E402
from netgood.core.exceptions import NetGoodException  # noqa: E402
from netgood.models.game import Exponential, GameSpec  # noqa: E402
from netgood.services import equilibrium  # noqa: E402

INV_E = float(np.exp(-1.0))

# (argv, exit code the command should return)
EXAMPLES = [
    (['classify', 'example1_substitutes.json'], 0),
    (['solve', 'example1_substitutes.json'], 0),
    (['solve', 'example1_multiple.json', '--all'], 0),
    (['solve', 'example1_complements.json'], 4),
    (['whatif', 'example2_before.json', '--edge', '0', '2', '--weight', '0.4'], 0),
    (['solve', 'example3_star_g02.json', 'pareto'], 0),
    (['solve', 'example3_star_g03.json', 'pareto'], 0),
    (['solve', 'example3_star_g02.json', 'coalition'], 0),
    (['centrality', 'example1_substitutes.json', '--alpha', '-1', '--exo', 'qbar'], 0),
]


def star_game(g_in, g_out=0.2, leaves=3):
    n = leaves + 1
    g = np.zeros((n, n))
    g[0, 1:] = g_out
    g[1:, 0] = g_in
    return GameSpec.uniform(g, Exponential(1.0), INV_E)


def run_examples():
    failures = 0
    for argv, expected in EXAMPLES:
        full = [argv[0], str(SAMPLES / argv[1])] + argv[2:]
        print('$ netgood', ' '.join(argv))
        code = netgood_main(full)
        status = 'ok' if code == expected else f'FAILED (exit {code}, expected {expected})'
        print(f'-> {status}\n')
        failures += code != expected
    return 1 if failures else 0


def star_sweep(start, stop, steps):
    print(f'{"g_in":>8} {"nash_0":>10} {"nash_leaf":>10} {"pareto_0":>10} {"pareto_leaf":>11}')
    for g_in in np.linspace(start, stop, steps):
        game = star_game(float(g_in))
        nash = equilibrium.solve_nash(game).profiles[0].x
        try:
            report = equilibrium.solve_pareto(game)
        except NetGoodException as exc:
            print(f'{g_in:8.4f} {nash[0]:10.4f} {nash[1]:10.4f}  {type(exc).__name__}')
            continue
        if not report.found:
            print(f'{g_in:8.4f} {nash[0]:10.4f} {nash[1]:10.4f}  no interior optimum')
            continue
        x = report.profiles[0].x
        print(f'{g_in:8.4f} {nash[0]:10.4f} {nash[1]:10.4f} {x[0]:10.4f} {x[1]:11.4f}')
    return 0


def write_star(g_in, g_out, leaves, output):
    n = leaves + 1
    edges = [{'from': 0, 'to': k, 'weight': g_out} for k in range(1, n)]
    edges += [{'from': k, 'to': 0, 'weight': g_in} for k in range(1, n)]
    document = {
        'schema_version': '1',
        'n': n,
        'edges': edges,
        'benefit': {'family': 'exponential', 'params': {'saturation': 1.0}},
        'costs': [INV_E] * n,
        'coalitions': [[0], list(range(1, n))],
        'lambda': [1.0] * n,
    }
    text = json.dumps(document, indent=2) + '\n'
    if output:
        Path(output).write_text(text, encoding='utf-8')
        print('wrote', output)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    p = argparse.ArgumentParser(prog='cli_tools')
    sub = p.add_subparsers(dest='cmd')

    sub.add_parser('examples')

    swp = sub.add_parser('star-sweep')
    swp.add_argument('--start', type=float, default=0.1)
    swp.add_argument('--stop', type=float, default=0.3)
    swp.add_argument('--steps', type=int, default=9)

    wrt = sub.add_parser('write-star')
    wrt.add_argument('--g-in', dest='g_in', type=float, required=True)
    wrt.add_argument('--g-out', dest='g_out', type=float, default=0.2)
    wrt.add_argument('--leaves', type=int, default=3)
    wrt.add_argument('--output', default=None)

    args = p.parse_args(argv)
    if args.cmd == 'examples':
        return run_examples()
    elif args.cmd == 'star-sweep':
        return star_sweep(args.start, args.stop, args.steps)
    elif args.cmd == 'write-star':
        return write_star(args.g_in, args.g_out, args.leaves, args.output)
    else:
        p.print_help()


if __name__ == '__main__':
    sys.exit(main())
