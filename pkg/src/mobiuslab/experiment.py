"""Weighted orbit averages with reproducible reductions and reports.

Sarnak sums pair an observable along a stream with a multiplicative weight,

    S_M = (1/M) sum_{n=1..M} v(n) w(n),

and the bilinear test sums compare two prime dilations of the same orbit,

    C_M = (1/M) sum_{n=1..M} v(r n) conj(v(s n)).

Partial sums are evaluated at ascending checkpoints.  Summation follows a
fixed reduction tree over chunks of 4096 products; worker threads only
compute chunk sums, never change the combination order, so results are
bit-identical for every worker count and rerun.
"""

from __future__ import annotations

import json
import pathlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arith import WeightTable
from .spectral import Observable
from .streams import SymbolStream

CHUNK = 4096


def pow2_checkpoints(limit: int) -> tuple:
    """1, 2, 4, ... up to limit, with limit itself always included."""
    if limit < 1:
        raise ValueError("limit must be positive, got %d" % limit)
    points = []
    p = 1
    while p <= limit:
        points.append(p)
        p *= 2
    if points[-1] != limit:
        points.append(limit)
    return tuple(points)


def _validate_checkpoints(checkpoints) -> tuple:
    points = tuple(int(c) for c in checkpoints)
    if not points:
        raise ValueError("need at least one checkpoint")
    if any(c < 1 for c in points):
        raise ValueError("checkpoints must be positive, got %s" % (points,))
    if any(b <= a for a, b in zip(points, points[1:])):
        raise ValueError("checkpoints must be strictly ascending, got %s" % (points,))
    return points


def _tree_combine(parts):
    """Fixed-shape pairwise combination; order never depends on worker count."""
    parts = list(parts)
    if not parts:
        return 0.0 + 0.0j
    while len(parts) > 1:
        combined = []
        for i in range(0, len(parts) - 1, 2):
            combined.append(parts[i] + parts[i + 1])
        if len(parts) % 2:
            combined.append(parts[-1])
        parts = combined
    return parts[0]


def _chunk_sums(products: np.ndarray, workers: int = 1):
    """Sum of each fixed 4096-wide chunk, optionally computed in threads."""
    edges = range(0, len(products), CHUNK)
    if workers <= 1 or len(products) <= CHUNK:
        return [np.add.reduce(products[i : i + CHUNK]) for i in edges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: np.add.reduce(products[i : i + CHUNK]), edges))


def _partial_sums(products: np.ndarray, checkpoints, workers: int = 1):
    """Exact partial sums over products[0:M], tree-combined per checkpoint."""
    sums = _chunk_sums(products, workers)
    out = []
    for m in checkpoints:
        full, rest = divmod(m, CHUNK)
        parts = sums[:full]
        if rest:
            parts = parts + [np.add.reduce(products[full * CHUNK : full * CHUNK + rest])]
        out.append(complex(_tree_combine(parts)))
    return out


@dataclass(frozen=True)
class ConvergenceReport:
    checkpoints: tuple
    values: tuple  # complex partial averages, one per checkpoint
    sample_size: int
    system: str
    observable: str
    weight: str | None = None
    primes: tuple | None = None

    @property
    def final(self) -> complex:
        return self.values[-1]

    def rows(self):
        return [(m, v.real, v.imag) for m, v in zip(self.checkpoints, self.values)]


def sarnak_series(
    stream: SymbolStream,
    obs: Observable,
    weights: WeightTable | None,
    checkpoints,
    workers: int = 1,
) -> ConvergenceReport:
    """Weighted averages S_M at each checkpoint; orbit positions start at 1."""
    checkpoints = _validate_checkpoints(checkpoints)
    limit = checkpoints[-1]
    if weights is not None and weights.limit < limit:
        raise ValueError("weight table reaches %d, need %d" % (weights.limit, limit))
    v = obs.evaluate(stream, 1, limit)
    if weights is None:
        products = v
    else:
        products = v * weights.values[1 : limit + 1]
    partials = _partial_sums(products, checkpoints, workers)
    return ConvergenceReport(
        checkpoints=checkpoints,
        values=tuple(s / m for s, m in zip(partials, checkpoints)),
        sample_size=limit,
        system=stream.name,
        observable=obs.name or obs.kind,
        weight=weights.kind if weights is not None else "none",
    )


def kbsz_series(
    stream: SymbolStream,
    obs: Observable,
    r: int,
    s: int,
    checkpoints,
    workers: int = 1,
) -> ConvergenceReport:
    """Bilinear averages C_M = (1/M) sum v(rn) conj(v(sn)) at each checkpoint."""
    r, s = int(r), int(s)
    if r < 1 or s < 1:
        raise ValueError("dilations must be positive, got r=%d s=%d" % (r, s))
    checkpoints = _validate_checkpoints(checkpoints)
    limit = checkpoints[-1]
    idx = np.arange(1, limit + 1, dtype=np.int64)
    products = obs.evaluate_at(stream, r * idx) * np.conj(obs.evaluate_at(stream, s * idx))
    partials = _partial_sums(products, checkpoints, workers)
    return ConvergenceReport(
        checkpoints=checkpoints,
        values=tuple(c / m for c, m in zip(partials, checkpoints)),
        sample_size=limit,
        system=stream.name,
        observable=obs.name or obs.kind,
        weight=None,
        primes=(r, s),
    )


def block_sweep(
    stream: SymbolStream,
    k: int,
    weights: WeightTable | None,
    checkpoints,
    alphabet_size: int | None = None,
    workers: int = 1,
):
    """One Sarnak report per length-k block appearing in the scanned prefix.

    Returns a dict keyed by the block tuple.  Blocks are collected from the
    prefix covering every window the reports read.
    """
    from .spectral import make_block_indicator

    if k < 1:
        raise ValueError("block length must be positive, got %d" % k)
    checkpoints = _validate_checkpoints(checkpoints)
    limit = checkpoints[-1]
    if alphabet_size is None:
        alphabet_size = stream.alphabet_size
    if alphabet_size is None:
        raise ValueError("alphabet size unknown, pass alphabet_size")
    prefix = stream.prefix(limit + k)
    windows = np.lib.stride_tricks.sliding_window_view(prefix, k)
    blocks = sorted(map(tuple, np.unique(windows, axis=0).tolist()))
    reports = {}
    for block in blocks:
        obs = make_block_indicator(block, 0, alphabet_size)
        reports[block] = sarnak_series(stream, obs, weights, checkpoints, workers)
    return reports


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class ExperimentConfig:
    """One run: a stream, an observable, a weight, and the checkpoint grid.

    kbsz switches the run to the bilinear sums at the given prime pair, in
    which case the weight is ignored.
    """

    name: str
    stream: SymbolStream = field(repr=False)
    observable: Observable = field(repr=False)
    sample_size: int
    weight: WeightTable | None = None
    checkpoints: tuple | None = None  # None means powers of two
    kbsz: tuple | None = None
    workers: int = 1

    def __post_init__(self):
        if self.kbsz is not None:
            r, s = (int(p) for p in self.kbsz)
            if r == s or not (_is_prime(r) and _is_prime(s)):
                raise ValueError("kbsz needs two distinct primes, got (%d, %d)" % (r, s))
            object.__setattr__(self, "kbsz", (r, s))

    def resolved_checkpoints(self) -> tuple:
        if self.checkpoints is None:
            return pow2_checkpoints(self.sample_size)
        points = _validate_checkpoints(self.checkpoints)
        if points[-1] > self.sample_size:
            raise ValueError("checkpoint %d beyond sample size %d" % (points[-1], self.sample_size))
        return points


def run_config(config: ExperimentConfig) -> ConvergenceReport:
    checkpoints = config.resolved_checkpoints()
    if config.kbsz is not None:
        r, s = config.kbsz
        return kbsz_series(config.stream, config.observable, r, s, checkpoints, config.workers)
    return sarnak_series(config.stream, config.observable, config.weight, checkpoints, config.workers)


def _format_number(v: float) -> str:
    return format(v + 0.0, ".12g")  # + 0.0 folds -0.0 into 0


def report_csv(report: ConvergenceReport) -> bytes:
    lines = ["N,real,imag"]
    for m, re, im in report.rows():
        lines.append("%d,%s,%s" % (m, _format_number(re), _format_number(im)))
    return ("\n".join(lines) + "\n").encode("ascii")


def report_json(report: ConvergenceReport) -> bytes:
    payload = {
        "metadata": {
            "system": report.system,
            "observable": report.observable,
            "weight": report.weight,
            "r": report.primes[0] if report.primes else None,
            "s": report.primes[1] if report.primes else None,
        },
        "rows": [
            {"N": m, "real": re, "imag": im} for m, re, im in report.rows()
        ],
    }
    return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("ascii")


def run_experiment(config: ExperimentConfig, out_dir, formats=("csv", "json")):
    """Run one config and write its report files.

    Returns (report, list of paths).  Identical configs produce byte
    identical files regardless of worker count.
    """
    report = run_config(config)
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for fmt in formats:
        if fmt == "csv":
            path = out_dir / (config.name + ".csv")
            path.write_bytes(report_csv(report))
        elif fmt == "json":
            path = out_dir / (config.name + ".json")
            path.write_bytes(report_json(report))
        else:
            raise ValueError("unknown format %r" % fmt)
        paths.append(path)
    return report, paths
