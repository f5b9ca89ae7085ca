"""Seeded workload generators and timing helpers for the CLI bench command."""

from __future__ import annotations

import random
import statistics
import time
from dataclasses import dataclass, field

from . import approx, batch, core, dense, dynamic2, offline
from .ordertree import available_backends


@dataclass
class Timing:
    name: str
    updates: int
    mean_us: float
    p50_us: float
    p90_us: float
    extra: dict = field(default_factory=dict)

    def row(self) -> str:
        cells = [
            f"workload={self.name}",
            f"updates={self.updates}",
            f"mean_us={self.mean_us:.2f}",
            f"p50_us={self.p50_us:.2f}",
            f"p90_us={self.p90_us:.2f}",
        ]
        cells.extend(f"{k}={v}" for k, v in sorted(self.extra.items()))
        return " ".join(cells)


def _timing(name: str, samples_ns: list[int], **extra) -> Timing:
    micros = [s / 1000.0 for s in samples_ns]
    if len(micros) >= 2:
        q = statistics.quantiles(micros, n=10)
        p50, p90 = statistics.median(micros), q[8]
    else:
        p50 = p90 = micros[0]
    return Timing(
        name=name,
        updates=len(micros),
        mean_us=statistics.fmean(micros),
        p50_us=p50,
        p90_us=p90,
        extra=extra,
    )


def random_two_color(rng: random.Random, m: int, k: int) -> core.Necklace:
    """Balanced random two-color sequence with counts divisible by k."""
    half = m // 2
    half -= half % k
    other = m - half
    other -= other % k
    colors = [0] * half + [1] * other
    rng.shuffle(colors)
    return core.build_necklace(colors, k)


def bench_updates(workload: str, m: int, k: int, steps: int, seed: int) -> Timing:
    rng = random.Random(seed)
    if workload == "dense":
        n = max(2, m // k)
        colors = [c for c in range(n) for _ in range(k)]
        rng.shuffle(colors)
        neck = core.build_necklace(colors, k)
        index = dense.dense_offline_split(neck)
    else:
        neck = random_two_color(rng, m, k)
        offline.offline_split(neck)
        index = None
    policy = dynamic2.FencePolicy.for_necklace(neck)

    samples: list[int] = []
    for _ in range(steps):
        j1 = rng.randrange(1, neck.m + 1)
        j2 = rng.randrange(1, neck.m + 1)
        while j2 == j1:
            j2 = rng.randrange(1, neck.m + 1)
        t0 = time.perf_counter_ns()
        if workload == "swap":
            dynamic2.swap(neck, min(j1, neck.m - 1))
        elif workload == "path":
            dynamic2.relocate_path(neck, j1, j2)
        elif workload == "colorpath":
            dynamic2.relocate_colorpath(neck, j1, j2)
        elif workload == "fence":
            dynamic2.relocate_fence(neck, j1, j2, policy)
        elif workload == "batch":
            batch.batch_relocate(neck, [(j1, j2)])
        elif workload == "dense":
            dense.dense_jump(neck, j1, j2, index)
        else:
            raise ValueError(f"unknown workload {workload!r}")
        samples.append(time.perf_counter_ns() - t0)
    return _timing(workload, samples, m=neck.m, k=k)


def bench_approx(m: int, k: int, trials: int, seed: int, epsilon: float) -> Timing:
    rng = random.Random(seed)
    samples: list[int] = []
    for t in range(trials):
        neck = random_two_color(rng, m, k)
        neck.mode = "approx"
        cfg = approx.ApproxConfig(epsilon=epsilon, seed=seed + t)
        t0 = time.perf_counter_ns()
        approx.approx_static(neck, cfg)
        samples.append(time.perf_counter_ns() - t0)
    return _timing("approx", samples, m=m, k=k, epsilon=epsilon)


def bench_index(m: int, updates: int, seed: int) -> list[Timing]:
    """Per-update cost of each order-statistic backend on the same workload."""
    out = []
    for name, cls in sorted(available_backends().items()):
        rng = random.Random(seed)
        tree = cls.from_colors(rng.randint(0, 1) for _ in range(m))
        tree.reset_touched()
        samples: list[int] = []
        for _ in range(updates):
            pos = rng.randint(1, len(tree) + 1)
            color = rng.randint(0, 1)
            t0 = time.perf_counter_ns()
            tree.insert(pos, color)
            tree.delete(rng.randint(1, len(tree)))
            samples.append(time.perf_counter_ns() - t0)
        out.append(
            _timing(
                f"index-{name}",
                samples,
                m=m,
                touched_per_update=round(tree.touched / updates, 2),
            )
        )
    return out


def bench_batch_vs_path(m: int, k: int, batch_size: int, seed: int) -> list[Timing]:
    """Same move set executed as one batch versus one-at-a-time paths."""
    rng = random.Random(seed)
    base = random_two_color(rng, m, k)
    offline.offline_split(base)
    color = 0
    sources = [p for p in range(1, base.m + 1) if base.color_of(base.at(p)) == color]
    rng.shuffle(sources)
    sources = sorted(sources[:batch_size])
    dests = rng.sample([p for p in range(1, base.m + 1) if p not in sources], batch_size)
    moves = list(zip(sources, dests))

    neck = base.clone()
    t0 = time.perf_counter_ns()
    batch.batch_relocate(neck, moves)
    batched = time.perf_counter_ns() - t0

    neck = base.clone()
    t0 = time.perf_counter_ns()
    for j1, j2 in moves:
        dynamic2.relocate_path(neck, j1, j2)
    sequential = time.perf_counter_ns() - t0

    per_bead_batch = batched / batch_size
    per_bead_path = sequential / batch_size
    return [
        _timing("batch", [batched], m=m, k=k, per_bead_us=round(per_bead_batch / 1000, 2)),
        _timing("path-sequential", [sequential], m=m, k=k, per_bead_us=round(per_bead_path / 1000, 2)),
    ]
