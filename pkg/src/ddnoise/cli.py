"""Command-line frontend.

::

    python -m ddnoise run --qft 5 --t1 0.002 --t2 0.001 --mode advanced
    python -m ddnoise run --qasm bell.qasm --t1 0.3 --noise-qubits 1
    python -m ddnoise bench --bench 4:12:2 --timeout 60
    python -m ddnoise validate --channel t1 --p 0.3

Reports are JSON documents written to stdout (or ``--out``).  Keys are
sorted and every field except those under ``timings`` (and the bench
``time_s`` columns) is a pure function of the inputs.

Run report fields: ``source``, ``n``, ``mode``, ``num_gates``, ``initial``,
``noise``, ``noise_qubits``, ``probabilities`` (all ``2**n`` values for
n <= 10) or ``top_k`` (``[index, bitstring, probability]`` triples),
``trace``, ``fidelity``, ``samples``, ``stats`` and ``timings``.
Bitstrings put ``q[0]`` first.

Exit codes: 0 success, 1 usage error, 2 runtime error, 3 invariant violation.
"""
import argparse
import json
import logging
import math
import sys

from ddnoise import bench
from ddnoise.circuit.qasm import load_qasm
from ddnoise.circuit.qft import gen_qft
from ddnoise.circuit.simulate import MODES, simulate
from ddnoise.dd.core import Package
from ddnoise.density import sample_probabilities
from ddnoise.errors import ChannelValidationError, DDError, InvariantViolation
from ddnoise.noise import NoiseParams, kraus_t1, kraus_t2, validate_channel
from ddnoise.oracle import MAX_DENSE_QUBITS

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_INVARIANT = 0, 1, 2, 3
FULL_PROBABILITY_LIMIT = 10


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _probability(text):
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(p) and 0.0 <= p <= 1.0):
        raise argparse.ArgumentTypeError(f"probability must lie in [0, 1], got {text}")
    return p


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _qubit_list(text):
    try:
        return tuple(int(q) for q in text.split(',') if q.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated qubits, got {text!r}") from None


def _sweep_range(text):
    parts = text.split(':')
    if len(parts) not in (2, 3):
        raise argparse.ArgumentTypeError(f"expected MIN:MAX[:STEP], got {text!r}")
    try:
        lo, hi, *step = (int(x) for x in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers in {text!r}") from None
    step = step[0] if step else 1
    if lo < 1 or hi < lo or step < 1:
        raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
    return list(range(lo, hi + 1, step))


def _timeout(text):
    try:
        t = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not t >= 0:
        raise argparse.ArgumentTypeError(f"timeout must be >= 0, got {text}")
    return t


def build_parser():
    parser = _Parser(prog='ddnoise', description=__doc__.split('\n\n')[0])
    parser.add_argument('-v', '--verbose', action='count', default=0)
    sub = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    run = sub.add_parser('run', help='simulate one circuit')
    src = run.add_mutually_exclusive_group(required=True)
    src.add_argument('--qft', type=_positive_int, metavar='N')
    src.add_argument('--qasm', metavar='PATH')
    run.add_argument('--t1', type=_probability, default=0.0, metavar='P')
    run.add_argument('--t2', type=_probability, default=0.0, metavar='P')
    run.add_argument('--mode', choices=MODES, default='advanced')
    run.add_argument('--shots', type=_positive_int, metavar='K')
    run.add_argument('--seed', type=int, default=0)
    run.add_argument('--no-swaps', action='store_true', help='QFT without final swaps')
    run.add_argument('--top-k', type=_positive_int, default=16, metavar='K')
    run.add_argument('--initial', type=int, default=0, help='initial basis-state index')
    run.add_argument('--noise-qubits', type=_qubit_list, metavar='Q[,Q...]',
                     help='apply the channels once, after the last gate, to these qubits')
    run.add_argument('--no-fidelity', action='store_true')
    run.add_argument('--ratio-keys', action='store_true',
                     help='key the addition cache on weight ratios')
    run.add_argument('--out', metavar='PATH')

    b = sub.add_parser('bench', help='naive vs advanced QFT sweep')
    b.add_argument('--bench', type=_sweep_range, required=True, metavar='MIN:MAX[:STEP]')
    b.add_argument('--timeout', type=_timeout, default=bench.DEFAULT_TIMEOUT, metavar='SECS')
    b.add_argument('--t1', type=_probability, default=bench.QFT_NOISE.t1_p, metavar='P')
    b.add_argument('--t2', type=_probability, default=bench.QFT_NOISE.t2_p, metavar='P')
    b.add_argument('--swaps', action='store_true', help='QFT with final swaps')
    b.add_argument('--ratio-keys', action='store_true',
                   help='key the addition cache on weight ratios')
    b.add_argument('--repeat', type=_positive_int, default=1,
                   help='runs per point, fastest kept')
    b.add_argument('--parallel', action='store_true',
                   help='run points in separate processes (timings flagged contended)')
    b.add_argument('--strict', action='store_true',
                   help='exit 3 when the hard scaling check fails')
    b.add_argument('--out', metavar='PATH')

    v = sub.add_parser('validate', help='check Kraus completeness of a channel')
    v.add_argument('--channel', choices=('t1', 't2'), required=True)
    v.add_argument('--p', type=_probability, required=True)
    v.add_argument('--out', metavar='PATH')
    return parser


def _bits(index, n):
    return format(index, f'0{n}b')


def cmd_run(args):
    if args.qasm is not None:
        if args.no_swaps:
            raise UsageError("--no-swaps only applies to --qft")
        circuit = load_qasm(args.qasm)
        source = {'kind': 'qasm', 'path': args.qasm}
    else:
        circuit = gen_qft(args.qft, not args.no_swaps)
        source = {'kind': 'qft', 'n': args.qft, 'with_final_swaps': not args.no_swaps}
    n = circuit.n
    if args.mode == 'dense' and n > MAX_DENSE_QUBITS:
        raise UsageError(f"--mode dense supports at most {MAX_DENSE_QUBITS} qubits, got {n}")
    if not 0 <= args.initial < (1 << n):
        raise UsageError(f"--initial {args.initial} out of range for {n} qubits")
    if args.noise_qubits is not None and any(not 0 <= q < n for q in args.noise_qubits):
        raise UsageError(f"--noise-qubits {args.noise_qubits} out of range for {n} qubits")
    params = NoiseParams(args.t1, args.t2)
    report = simulate(circuit, params, args.mode, args.initial,
                      with_fidelity=False if args.no_fidelity else None,
                      noise_qubits=args.noise_qubits,
                      pkg=Package(add_ratio_keys=args.ratio_keys))
    doc = {
        'source': source, 'n': n, 'mode': args.mode, 'num_gates': report.num_gates,
        'initial': args.initial,
        'noise': {'t1_p': params.t1_p, 't2_p': params.t2_p},
        'add_cache': 'ratio' if args.ratio_keys else 'edge',
        'noise_qubits': None if args.noise_qubits is None else list(args.noise_qubits),
        'trace': report.trace, 'fidelity': report.fidelity,
        'stats': report.stats, 'timings': report.timings,
    }
    probs = report.probabilities
    if n <= FULL_PROBABILITY_LIMIT:
        doc['probabilities'] = [float(x) for x in probs]
    else:
        doc['top_k'] = [[i, _bits(i, n), p] for i, p in report.top_k(args.top_k)]
    if args.shots:
        counts = sample_probabilities(probs, args.shots, args.seed)
        doc['samples'] = {'shots': args.shots, 'seed': args.seed,
                          'counts': {_bits(i, n): c for i, c in sorted(counts.items())}}
    return doc, EXIT_OK


def cmd_bench(args):
    params = NoiseParams(args.t1, args.t2)
    doc = bench.bench_sweep(args.bench, params, args.timeout, args.swaps,
                            parallel=args.parallel, repeat=args.repeat,
                            ratio_keys=args.ratio_keys)
    code = EXIT_OK
    if args.strict and not doc['guard']['hard_ok']:
        code = EXIT_INVARIANT
    return doc, code


def cmd_validate(args):
    channel = (kraus_t1 if args.channel == 't1' else kraus_t2)(args.p)
    check = validate_channel(channel)
    doc = {
        'channel': channel.kind, 'p': channel.p, 'passed': check.passed,
        'residual': check.residual,
        'matrices': [[[[z.real, z.imag] for z in row] for row in e.tolist()]
                     for e in channel.matrices],
    }
    return doc, EXIT_OK if check.passed else EXIT_INVARIANT


COMMANDS = {'run': cmd_run, 'bench': cmd_bench, 'validate': cmd_validate}


def _emit(doc, path):
    text = json.dumps(doc, indent=2, sort_keys=True) + '\n'
    if path:
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                            format='%(levelname)s %(name)s: %(message)s')
        doc, code = COMMANDS[args.command](args)
        _emit(doc, args.out)
        return code
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (InvariantViolation, ChannelValidationError) as exc:
        print(f"ddnoise: invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (DDError, OSError, ValueError) as exc:
        print(f"ddnoise: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
