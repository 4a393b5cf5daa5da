"""Empirical mass-comparison scans over random rectangles.

The question behind the scan: can a rectangle hold a lot of disjoint-pair
mass while holding much less intersecting-pair mass?  Each scanned rectangle
gets one row comparing its mass under the disjoint base distribution (meet
zero) against the distribution with the target meet, both restricted to
equal-size sets.  Rows flag the combinations the theory rules out for large
rectangles: base mass above the bar 2^(-gamma n) with a target/base ratio
below 2/3.  `slack` softens the same comparison additively by 2^(-delta n).

Counting is exact.  Membership matrices are 0/1 floats and every matmul
entry is an integer far below 2^53, so the float pipeline commits no
rounding and a fixed seed reproduces the report byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..caps import support_cap
from ..combinatorics import MuParams
from ..errors import CapExceededError, ParameterRangeError

MODE_EXHAUSTIVE = "exhaustive"
MODE_SAMPLED = "sampled"

_STRING_LIMIT = 4096


@dataclass(frozen=True)
class ScanConfig:
    gamma: float = 0.1
    delta: float = 0.1
    samples: int = 256
    seed: int = 0
    densities: tuple[float, ...] = (0.9, 0.75, 0.5)
    exhaustive_limit: int = 4096

    def __post_init__(self) -> None:
        # negative exponents are legal: they raise the bar past 1, which is
        # how a deliberately empty above-bar population is asked for
        if not (math.isfinite(self.gamma) and math.isfinite(self.delta)):
            raise ParameterRangeError("gamma and delta must be finite")
        if self.samples < 0:
            raise ParameterRangeError("samples must be nonnegative")
        if not self.densities or any(not 0 < d <= 1 for d in self.densities):
            raise ParameterRangeError("densities must be probabilities in (0, 1]")
        if self.exhaustive_limit < 1:
            raise ParameterRangeError("exhaustive_limit must be positive")


@dataclass(frozen=True)
class ScanRow:
    label: str
    density: str
    rows: int
    cols: int
    count_base: int
    count_target: int
    mass_base: Fraction
    mass_target: Fraction
    ratio: Fraction | None
    above_bar: bool
    flagged: bool
    slack: float


@dataclass(frozen=True)
class ScanReport:
    params: MuParams
    target_k: int
    config: ScanConfig
    mode: str
    bar: float
    relief: float
    rows: tuple[ScanRow, ...] = field(default_factory=tuple)

    @property
    def flagged_count(self) -> int:
        return sum(1 for row in self.rows if row.flagged)

    @property
    def above_bar_count(self) -> int:
        return sum(1 for row in self.rows if row.above_bar)

    @property
    def min_ratio(self) -> Fraction | None:
        """Smallest target/base ratio among rectangles clearing the bar."""
        ratios = [row.ratio for row in self.rows if row.above_bar and row.ratio is not None]
        return min(ratios) if ratios else None

    @property
    def min_slack(self) -> float:
        return min(row.slack for row in self.rows)


def _size_m_masks(n: int, m: int) -> list[int]:
    masks = []
    for coords in combinations(range(n), m):
        mask = 0
        for c in coords:
            mask |= 1 << c
        masks.append(mask)
    masks.sort()
    return masks


def sampling_lemma_scan(p: MuParams, target_k: int, cfg: ScanConfig | None = None) -> ScanReport:
    """Scan rectangles over the size-m strings, comparing two meet classes.

    `p` fixes the base distribution and must have meet zero; `target_k` picks
    the comparison meet.  Small string sets are swept exhaustively, larger
    ones sampled with seeded density-cycled membership draws, and the full
    rectangle always leads the report as an anchor row.
    """
    cfg = ScanConfig() if cfg is None else cfg
    if p.k != 0:
        raise ParameterRangeError(
            f"the scan baseline is the disjoint distribution; pass meet 0, got {p.k}"
        )
    p.validate()
    if target_k < 1:
        raise ParameterRangeError(f"target meet must be at least 1, got {target_k}")
    target = MuParams(target_k, p.n, p.m)
    target.validate()

    masks = _size_m_masks(p.n, p.m)
    count = len(masks)
    if count > _STRING_LIMIT or count * count > support_cap():
        raise CapExceededError(f"{count} strings per side is past the scan limit")
    arr = np.array(masks, dtype=np.int64)
    meets = np.bitwise_count(arr[:, None] & arr[None, :])
    e_base = (meets == 0).astype(np.float64)
    e_target = (meets == target_k).astype(np.float64)

    row_sets = [np.ones(count, dtype=np.float64)]
    col_sets = [np.ones(count, dtype=np.float64)]
    labels = ["full"]
    densities = ["full"]
    if (1 << (2 * count)) <= cfg.exhaustive_limit:
        mode = MODE_EXHAUSTIVE
        for smask in range(1, 1 << count):
            s_row = np.array([(smask >> i) & 1 for i in range(count)], dtype=np.float64)
            for cmask in range(1, 1 << count):
                row_sets.append(s_row)
                col_sets.append(
                    np.array([(cmask >> j) & 1 for j in range(count)], dtype=np.float64)
                )
                labels.append(f"exh-{smask}-{cmask}")
                densities.append("exhaustive")
    else:
        mode = MODE_SAMPLED
        rng = np.random.Generator(np.random.PCG64(cfg.seed))
        for i in range(cfg.samples):
            d = cfg.densities[i % len(cfg.densities)]
            row_sets.append((rng.random(count) < d).astype(np.float64))
            col_sets.append((rng.random(count) < d).astype(np.float64))
            labels.append(f"sample-{i:05d}")
            densities.append(repr(d))

    ra = np.stack(row_sets)
    cb = np.stack(col_sets)
    counts_base = ((ra @ e_base) * cb).sum(axis=1)
    counts_target = ((ra @ e_target) * cb).sum(axis=1)
    n_rows = ra.sum(axis=1)
    n_cols = cb.sum(axis=1)

    bar = 2.0 ** (-cfg.gamma * p.n)
    relief = 2.0 ** (-cfg.delta * p.n)
    two_thirds = Fraction(2, 3)
    rows: list[ScanRow] = []
    for idx, label in enumerate(labels):
        cb_count = int(counts_base[idx])
        ct_count = int(counts_target[idx])
        mass_base = Fraction(cb_count, p.support_size)
        mass_target = Fraction(ct_count, target.support_size)
        ratio = mass_target / mass_base if cb_count else None
        above = mass_base >= bar
        flagged = above and ratio is not None and ratio < two_thirds
        slack = float(mass_target) - (2.0 / 3.0) * float(mass_base) + relief
        rows.append(
            ScanRow(
                label=label,
                density=densities[idx],
                rows=int(n_rows[idx]),
                cols=int(n_cols[idx]),
                count_base=cb_count,
                count_target=ct_count,
                mass_base=mass_base,
                mass_target=mass_target,
                ratio=ratio,
                above_bar=above,
                flagged=flagged,
                slack=slack,
            )
        )
    return ScanReport(
        params=p,
        target_k=target_k,
        config=cfg,
        mode=mode,
        bar=bar,
        relief=relief,
        rows=tuple(rows),
    )


def scan_to_csv(report: ScanReport) -> str:
    """Deterministic text form: summary comments, then one line per row."""
    p = report.params
    cfg = report.config
    lines = [
        f"# rectangle mass scan: meet 0 baseline vs meet {report.target_k}, "
        f"n={p.n} m={p.m}",
        f"# mode={report.mode} samples={cfg.samples} seed={cfg.seed} "
        f"densities={','.join(repr(d) for d in cfg.densities)}",
        f"# gamma={cfg.gamma!r} delta={cfg.delta!r} bar={report.bar!r} relief={report.relief!r}",
        f"# flagged={report.flagged_count} above_bar={report.above_bar_count} "
        f"min_ratio={'' if report.min_ratio is None else report.min_ratio} "
        f"min_slack={report.min_slack!r}",
    ]
    if report.above_bar_count == 0:
        lines.append("# warning: empty population, no scanned rectangle clears the bar")
    lines.append(
        "label,density,rows,cols,count_base,count_target,mass_base,mass_target,"
        "ratio,above_bar,flagged,slack"
    )
    for row in report.rows:
        ratio = "" if row.ratio is None else str(row.ratio)
        lines.append(
            f"{row.label},{row.density},{row.rows},{row.cols},"
            f"{row.count_base},{row.count_target},{row.mass_base},{row.mass_target},"
            f"{ratio},{int(row.above_bar)},{int(row.flagged)},{row.slack!r}"
        )
    return "\n".join(lines) + "\n"
