"""Naive-versus-advanced timing sweep over noisy QFT circuits.

The sweep uses the QFT without the final qubit-reversal swaps by default;
the document records which variant ran.

Each point is one fresh simulation in its own :class:`Package`, with a
cooperative deadline checked before every gate.  A point that runs out of
time is recorded as ``timeout`` and the sweep moves on.
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from ddnoise.circuit.qft import gen_qft
from ddnoise.circuit.simulate import simulate
from ddnoise.dd.core import Package
from ddnoise.errors import SimulationTimeout
from ddnoise.noise import NoiseParams

logger = logging.getLogger(__name__)

BENCH_MODES = ('naive', 'advanced')
DEFAULT_TIMEOUT = 60.0
QFT_NOISE = NoiseParams(t1_p=0.002, t2_p=0.001)


@dataclass
class BenchPoint:
    n: int
    mode: str
    status: str                      # 'ok' or 'timeout'
    time_s: Optional[float] = None
    peak_nodes: Optional[int] = None
    peak_memory_bytes: Optional[int] = None
    compute_cache_hits: Optional[int] = None
    compute_cache_misses: Optional[int] = None
    unique_table_hits: Optional[int] = None
    add_calls: Optional[int] = None
    contended: bool = False

    @property
    def done(self):
        return self.status == 'ok'


def run_point(n, mode, params=QFT_NOISE, timeout=DEFAULT_TIMEOUT, with_swaps=False, repeat=1,
              ratio_keys=False):
    """Time one QFT simulation; the best of ``repeat`` runs is kept.

    ``ratio_keys`` selects the addition-cache keying of the package, see
    :class:`ddnoise.dd.core.Package`.
    """
    circuit = gen_qft(n, with_swaps)
    best = None
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        try:
            report = simulate(circuit, params, mode, with_fidelity=False,
                              deadline=t0 + timeout,
                              pkg=Package(add_ratio_keys=ratio_keys))
        except SimulationTimeout:
            return BenchPoint(n, mode, 'timeout')
        elapsed = time.perf_counter() - t0
        if best is None or elapsed < best[0]:
            best = (elapsed, report)
    elapsed, report = best
    s = report.stats
    return BenchPoint(
        n, mode, 'ok', time_s=elapsed, peak_nodes=s['peak_nodes'],
        peak_memory_bytes=s['peak_memory_bytes'],
        compute_cache_hits=s['compute_cache_hits'],
        compute_cache_misses=s['compute_cache_misses'],
        unique_table_hits=s['unique_table_hits'], add_calls=s['add_calls'])


def _run_point_args(args):
    return run_point(*args)


def time_ratios(points):
    """``{n: naive time / advanced time}`` for every n where both finished."""
    by_n = {}
    for pt in points:
        by_n.setdefault(pt.n, {})[pt.mode] = pt
    ratios = {}
    for n, modes in sorted(by_n.items()):
        naive = modes.get('naive')
        adv = modes.get('advanced')
        if naive and adv and naive.done and adv.done and adv.time_s > 0:
            ratios[n] = naive.time_s / adv.time_s
    return ratios


def monotonicity_guard(points):
    """Check the expected scaling of the sweep.

    Soft: the naive/advanced ratio never decreases with n, and advanced
    finishes wherever naive does (violations become warnings).  Hard: the
    ratio at the largest completed n is at least the one before it.
    """
    ratios = time_ratios(points)
    warnings = []
    status = {(pt.n, pt.mode): pt.done for pt in points}
    for (n, mode), done in sorted(status.items()):
        if mode == 'naive' and done and not status.get((n, 'advanced'), False):
            warnings.append(f"n={n}: naive finished but advanced did not")
    ns = sorted(ratios)
    for a, b in zip(ns, ns[1:]):
        if ratios[b] < ratios[a]:
            warnings.append(f"ratio fell from {ratios[a]:.2f} (n={a}) to {ratios[b]:.2f} (n={b})")
    hard_ok = True
    if len(ns) >= 2:
        hard_ok = ratios[ns[-1]] >= ratios[ns[-2]]
    for w in warnings:
        logger.warning("benchmark guard: %s", w)
    return {'ratios': {str(n): r for n, r in ratios.items()}, 'warnings': warnings,
            'hard_ok': hard_ok}


def bench_sweep(ns, params=QFT_NOISE, timeout=DEFAULT_TIMEOUT, with_swaps=False,
                modes=BENCH_MODES, parallel=False, repeat=1, ratio_keys=False):
    """Run every ``(n, mode)`` point; returns a JSON-ready document."""
    jobs = [(n, mode, params, timeout, with_swaps, repeat, ratio_keys)
            for n in ns for mode in modes]
    if parallel:
        with ProcessPoolExecutor() as pool:
            points = list(pool.map(_run_point_args, jobs))
        for pt in points:
            pt.contended = True
    else:
        points = []
        for job in jobs:
            pt = _run_point_args(job)
            logger.info("n=%d %s: %s", pt.n, pt.mode, pt.status)
            points.append(pt)
    return {
        'circuit': 'qft',
        'with_final_swaps': with_swaps,
        'add_cache': 'ratio' if ratio_keys else 'edge',
        'noise': {'t1_p': params.t1_p, 't2_p': params.t2_p},
        'timeout_s': timeout,
        'parallel': parallel,
        'rows': [asdict(pt) for pt in points],
        'guard': monotonicity_guard(points),
    }
