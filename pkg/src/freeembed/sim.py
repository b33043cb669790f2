"""Finite-size random-matrix checks: Wigner embedding and Monte Carlo trace moments.

All matrices are real.  Each replicate draws from its own generator seeded by
``(seed, replicate index)``, so serial and threaded runs see identical draws,
and replicate values are reduced in index order.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConfigError, SimulationError
from .mp import lemma2_moment, make_word

EMBEDDING_RTOL = 1e-12


class EntryLaw(str, Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"


def _law(law) -> EntryLaw:
    try:
        return EntryLaw(law)
    except ValueError:
        raise ConfigError(f"unknown entry law {law!r}; choose gaussian or rademacher") from None


def draw_entries(law, rng: np.random.Generator, shape) -> np.ndarray:
    """Independent mean-0, variance-1 entries."""
    law = _law(law)
    if law is EntryLaw.GAUSSIAN:
        return rng.standard_normal(shape)
    return rng.integers(0, 2, size=shape).astype(np.float64) * 2.0 - 1.0


def gen_wigner(size: int, law, rng: np.random.Generator) -> np.ndarray:
    """Real symmetric matrix, independent entries on and above the diagonal (diagonal variance 1)."""
    if size < 1:
        raise ConfigError("Wigner size must be >= 1")
    a = draw_entries(law, rng, (size, size))
    upper = np.triu(a)
    return upper + np.triu(a, 1).T


def sample_cov(p: int, n: int, law, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """X (p x n) and S = X X^T / n."""
    if p < 1 or n < 1:
        raise ConfigError("p and n must be >= 1")
    x = draw_entries(law, rng, (p, n))
    return x, (x @ x.T) / n


def embed(x: np.ndarray, w_top: np.ndarray, w_bottom: np.ndarray) -> np.ndarray:
    """[[W_top, X], [X^T, W_bottom]]."""
    p, n = x.shape
    if w_top.shape != (p, p) or w_bottom.shape != (n, n):
        raise ConfigError(
            f"dimension mismatch: X is {x.shape}, blocks are {w_top.shape} and {w_bottom.shape}"
        )
    return np.block([[w_top, x], [x.T, w_bottom]])


def corner_projections(p: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """diag(I_p, 0) and diag(0, I_n)."""
    upper = np.zeros((p + n, p + n))
    upper[:p, :p] = np.eye(p)
    lower = np.zeros((p + n, p + n))
    lower[p:, p:] = np.eye(n)
    return upper, lower


def embedding_sides(p: int, n: int, law="gaussian", seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Left side diag(S, 0) and right side (n+p)/n * Ibar W' Iunder W' Ibar with W' = W/sqrt(n+p)."""
    rng = np.random.default_rng(seed)
    x, s = sample_cov(p, n, law, rng)
    w = embed(x, gen_wigner(p, law, rng), gen_wigner(n, law, rng))
    upper, lower = corner_projections(p, n)
    lhs = np.zeros((p + n, p + n))
    lhs[:p, :p] = s
    ws = w / math.sqrt(n + p)
    rhs = ((n + p) / n) * (upper @ ws @ lower @ ws @ upper)
    return lhs, rhs


def verify_embedding_identity(p: int, n: int, law="gaussian", seed: int = 0) -> float:
    """Entrywise max |lhs - rhs| of the embedding identity for one draw."""
    lhs, rhs = embedding_sides(p, n, law, seed)
    return float(np.max(np.abs(lhs - rhs)))


def embedding_check(p: int, n: int, law="gaussian", seed: int = 0) -> tuple[float, float]:
    """(deviation, allowed) with allowed = 1e-12 * (1 + largest entry magnitude)."""
    lhs, rhs = embedding_sides(p, n, law, seed)
    dev = float(np.max(np.abs(lhs - rhs)))
    scale = float(max(np.max(np.abs(lhs)), np.max(np.abs(rhs))))
    return dev, EMBEDDING_RTOL * (1.0 + scale)


def corner_projection_moments(p: int, n: int, r: int) -> tuple[Fraction, Fraction]:
    """Normalized traces of Ibar^r and Iunder^r: exactly p/(n+p) and n/(n+p)."""
    if r < 1:
        raise ValueError("r must be >= 1")
    upper, lower = corner_projections(p, n)
    # idempotent 0/1 diagonals: traces are integer counts, independent of r
    tu = int(round(np.trace(np.linalg.matrix_power(upper, r))))
    tl = int(round(np.trace(np.linalg.matrix_power(lower, r))))
    return Fraction(tu, n + p), Fraction(tl, n + p)


# ---------------------------------------------------------------------------
# Monte Carlo

@dataclass(frozen=True)
class SimConfig:
    p: int
    n: int
    word: tuple[int, ...]
    replicates: int
    seed: int = 0
    law: str = "gaussian"
    m: int | None = None  # family count; defaults to the largest label in the word

    def __post_init__(self):
        object.__setattr__(self, "word", make_word(self.word, self.m))
        if self.p < 1 or self.n < 1:
            raise ConfigError("p and n must be >= 1")
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")
        object.__setattr__(self, "law", _law(self.law).value)

    @property
    def families(self) -> int:
        return self.m if self.m is not None else max(self.word)

    @property
    def y(self) -> Fraction:
        return Fraction(self.p, self.n)

    def echo(self) -> dict:
        d = asdict(self)
        d["word"] = list(self.word)
        d["m"] = self.families
        d["y"] = float(self.y)
        return d


@dataclass(frozen=True)
class SimReport:
    estimate: float
    std_error: float | None
    oracle_value: float
    abs_error: float
    rel_error: float | None
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def csv_row(self) -> dict:
        c = self.config
        return {
            "p": c["p"],
            "n": c["n"],
            "y": repr(c["y"]),
            "word": ",".join(map(str, c["word"])),
            "replicates": c["replicates"],
            "seed": c["seed"],
            "estimate": repr(self.estimate),
            "std_error": "" if self.std_error is None else repr(self.std_error),
            "oracle": repr(self.oracle_value),
            "abs_error": repr(self.abs_error),
            "rel_error": "" if self.rel_error is None else repr(self.rel_error),
        }

    def within_tolerance(self) -> bool:
        """|estimate - oracle| <= max(3 se, 0.05 |oracle| + 10/p)."""
        se = self.std_error or 0.0
        allowed = max(3.0 * se, 0.05 * abs(self.oracle_value) + 10.0 / self.config["p"])
        return self.abs_error <= allowed


CSV_COLUMNS = [
    "p", "n", "y", "word", "replicates", "seed",
    "estimate", "std_error", "oracle", "abs_error", "rel_error",
]


def reports_to_csv(reports: Sequence[SimReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for one replicate; a pure function of (seed, index)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def replicate_trace(cfg: SimConfig, index: int) -> float:
    """p^{-1} Tr(S^(w1) ... S^(wk)) for replicate ``index``."""
    rng = replicate_rng(cfg.seed, index)
    covs = [sample_cov(cfg.p, cfg.n, cfg.law, rng)[1] for _ in range(cfg.families)]
    prod = covs[cfg.word[0] - 1]
    for f in cfg.word[1:]:
        prod = prod @ covs[f - 1]
    value = float(np.trace(prod)) / cfg.p
    if not math.isfinite(value):
        raise SimulationError(f"replicate {index}: non-finite normalized trace {value}")
    return value


def oracle_value(word: Sequence[int], p: int, n: int) -> float:
    return float(lemma2_moment(word).evaluate(Fraction(p, n)))


def mc_trace_moment(cfg: SimConfig, workers: int = 1) -> SimReport:
    """Monte Carlo estimate of p^{-1} E Tr of the S-word against the free oracle at y = p/n."""
    idx = range(cfg.replicates)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda i: replicate_trace(cfg, i), idx))
    else:
        values = [replicate_trace(cfg, i) for i in idx]
    arr = np.asarray(values, dtype=np.float64)
    estimate = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(len(arr))) if len(arr) > 1 else None
    oracle = oracle_value(cfg.word, cfg.p, cfg.n)
    abs_err = abs(estimate - oracle)
    return SimReport(
        estimate=estimate,
        std_error=se,
        oracle_value=oracle,
        abs_error=abs_err,
        rel_error=abs_err / abs(oracle) if oracle else None,
        config=cfg.echo(),
    )


def convergence_study(
    word: Sequence[int],
    ladder: Sequence[tuple[int, int]],
    replicates: int,
    seed: int = 0,
    law="gaussian",
    workers: int = 1,
) -> list[SimReport]:
    """One report per (p, n) rung; all rungs must share y to within 1%."""
    if not ladder:
        raise ConfigError("empty dimension ladder")
    y0 = ladder[0][0] / ladder[0][1]
    for p, n in ladder:
        if abs(p / n - y0) > 0.01 * y0:
            raise ConfigError(f"rung ({p}, {n}) has y={p / n:.4g}, ladder uses y={y0:.4g}")
    return [
        mc_trace_moment(SimConfig(p, n, tuple(word), replicates, seed, law), workers=workers)
        for p, n in ladder
    ]
