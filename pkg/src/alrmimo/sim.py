"""
Monte-Carlo driver: symbol-error-rate sweeps and complexity sweeps over a
set of decoders.

Trials are paired. At a given (SNR, trial index) every decoder sees the
same channel, symbols and unit noise; the noise is only rescaled between
SNR points. Trial ``i`` is generated from its own Philox streams, so blocks
of trials can be farmed out to worker processes and merged in block order,
which makes every record independent of the worker count.
"""
from __future__ import annotations

import json
import math
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .alr import alr_decode, complex_alr_decode
from .channel import (CHANNEL_STREAM, SIGNAL_STREAM, complex_gaussian,
                      db_to_linear, snr_to_n0, trial_rng)
from .constellation import Constellation
from .detectors import (kim_park_ilr_decode, lll_sic_decode, lll_zf_decode,
                        ml_decode, mmse_gdfe_preprocess, sic_decode, zf_decode)
from .lattice import (DEFAULT_DELTA, complex_lll_reduce, iteration_bound,
                      lll_reduce)
from .linalg import FlopCounter, realify

__all__ = [
    "ConfigError",
    "ResultsIOError",
    "DecoderSpec",
    "ExperimentConfig",
    "ResultRecord",
    "REGISTERED_DECODERS",
    "PRESETS",
    "CSV_COLUMNS",
    "run_ser_sweep",
    "run_complexity_sweep",
    "run_experiment",
    "emit_results",
    "parse_results",
    "load_config",
    "config_from_mapping",
    "wilson_interval",
    "snr_at_ser",
    "diversity_slope",
]

REGISTERED_DECODERS = (
    "ml", "zf", "sic", "lll-zf", "lll-sic", "kim-park",
    "alr-v1", "alr-v2", "alr-v1-first", "alr-v2-first",
    "calr-v1", "calr-v2",
)
# decoders that make sense on the MMSE-GDFE effective channel
_MMSE_CAPABLE = {"zf", "sic", "lll-zf", "lll-sic", "kim-park",
                 "alr-v1", "alr-v2", "alr-v1-first", "alr-v2-first"}

CSV_COLUMNS = ("decoder", "snr_db", "trials", "symbol_errors",
               "vector_errors", "ser", "mean_lll_iterations", "mean_flops",
               "fallback_count", "wall_time_s")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the line or field."""


class ResultsIOError(OSError):
    """Reading or writing a results file failed."""


# --------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class DecoderSpec:
    """Parsed decoder tag such as ``alr-v2+mmse`` or ``calr-v2``."""

    tag: str
    base: str
    mmse: bool = False

    @classmethod
    def parse(cls, tag: str) -> "DecoderSpec":
        tag = tag.strip()
        base, _, suffix = tag.partition("+")
        if base not in REGISTERED_DECODERS:
            raise ConfigError(f"field 'decoders': unknown decoder {base!r}; "
                              f"registered: {', '.join(REGISTERED_DECODERS)}")
        if suffix and suffix != "mmse":
            raise ConfigError(f"field 'decoders': unknown option {suffix!r} "
                              f"in {tag!r}")
        mmse = suffix == "mmse"
        if mmse and base not in _MMSE_CAPABLE:
            raise ConfigError(f"field 'decoders': {base!r} does not take +mmse")
        return cls(tag=tag, base=base, mmse=mmse)

    @property
    def is_complex(self) -> bool:
        return self.base.startswith("calr")

    @property
    def epsilon(self) -> Optional[str]:
        if "alr" not in self.base:
            return None
        return "v1" if "-v1" in self.base else "v2"

    @property
    def variant(self) -> str:
        return "first" if self.base.endswith("-first") else "kmin"


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment.

    ``mode="ser"`` sweeps ``snr_db`` at ``M x N``; ``mode="complexity"``
    sweeps ``n = M = N`` over ``antennas`` at every SNR in ``snr_db``.
    ``min_errors`` stops a grid point once every decoder has made that many
    vector errors (0 disables early stopping); the check happens only at
    multiples of ``block_size`` trials.
    """

    M: int = 2
    N: int = 2
    q: int = 4
    decoders: Tuple[str, ...] = ("ml", "alr-v2", "lll-sic")
    snr_db: Tuple[float, ...] = tuple(float(s) for s in range(0, 21, 2))
    trials: int = 10_000
    seed: int = 0
    workers: int = 1
    out: Optional[str] = None
    format: str = "csv"
    mode: str = "ser"
    antennas: Tuple[int, ...] = (2, 3, 4, 5, 6, 7, 8)
    min_errors: int = 200
    block_size: int = 500
    noise_free: bool = False
    delta: float = DEFAULT_DELTA

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def bad(name, msg):
            raise ConfigError(f"field {name!r}: {msg}")

        if self.trials < 1:
            bad("trials", "must be >= 1")
        if not 1 <= self.M <= self.N:
            bad("M", f"need 1 <= M <= N, got M={self.M}, N={self.N}")
        try:
            Constellation.qam(self.q)
        except ValueError as e:
            bad("q", str(e))
        if not self.decoders:
            bad("decoders", "empty decoder list")
        for d in self.decoders:
            DecoderSpec.parse(d)
        if len(set(self.decoders)) != len(self.decoders):
            bad("decoders", "duplicate decoder")
        if not self.snr_db:
            bad("snr_db", "empty SNR grid")
        if any(not math.isfinite(s) for s in self.snr_db):
            bad("snr_db", "SNR values must be finite")
        if any(b <= a for a, b in zip(self.snr_db, self.snr_db[1:])):
            bad("snr_db", "SNR grid must be strictly increasing")
        if self.workers < 1:
            bad("workers", "must be >= 1")
        if self.format not in ("csv", "jsonl"):
            bad("format", "must be 'csv' or 'jsonl'")
        if self.mode not in ("ser", "complexity"):
            bad("mode", "must be 'ser' or 'complexity'")
        if not self.antennas or min(self.antennas) < 1:
            bad("antennas", "need positive antenna counts")
        if self.min_errors < 0:
            bad("min_errors", "must be >= 0")
        if self.block_size < 1:
            bad("block_size", "must be >= 1")
        if not 0.25 < self.delta < 1:
            bad("delta", "need 1/4 < delta < 1")
        if self.seed < 0:
            bad("seed", "must be >= 0")

    @property
    def constellation(self) -> Constellation:
        return Constellation.qam(self.q)


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _parse_grid(s: str, conv) -> tuple:
    """``"0:20:2"`` (inclusive range) or a comma/space separated list."""
    s = s.strip()
    if ":" in s:
        parts = s.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad range {s!r}")
        start, stop = float(parts[0]), float(parts[1])
        step = float(parts[2]) if len(parts) == 3 else 1.0
        if step <= 0:
            raise ValueError("range step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(conv(round(start + i * step, 10)) for i in range(count))
    items = [p for p in s.replace(",", " ").split() if p]
    return tuple(conv(p) for p in items)


def _to_int(v) -> int:
    f = float(v)
    if f != int(f):
        raise ValueError(f"not an integer: {v!r}")
    return int(f)


_FIELD_PARSERS = {
    "M": _to_int, "N": _to_int, "q": _to_int, "trials": _to_int,
    "seed": _to_int, "workers": _to_int, "min_errors": _to_int,
    "block_size": _to_int,
    "delta": float,
    "out": lambda s: None if s.strip().lower() in ("", "-", "none") else s.strip(),
    "format": lambda s: s.strip().lower(),
    "mode": lambda s: s.strip().lower(),
    "noise_free": _parse_bool,
    "decoders": lambda s: tuple(p.strip() for p in s.replace(",", " ").split()),
    "snr_db": lambda s: _parse_grid(s, float),
    "antennas": lambda s: _parse_grid(s, _to_int),
}
_KEY_ALIASES = {"snr": "snr_db", "qam": "q", "block": "block_size"}


def _parse_field(key: str, raw, where: str):
    key = _KEY_ALIASES.get(key, key)
    if key not in _FIELD_PARSERS:
        raise ConfigError(f"{where}: unknown key {key!r}")
    if not isinstance(raw, str):
        return key, raw
    try:
        return key, _FIELD_PARSERS[key](raw)
    except (ValueError, TypeError) as e:
        raise ConfigError(f"{where}: bad value for {key!r}: {e}") from None


def config_from_mapping(values: Dict[str, object],
                        base: Optional[ExperimentConfig] = None,
                        origins: Optional[Dict[str, str]] = None
                        ) -> ExperimentConfig:
    """Build a config from raw values (strings are parsed).

    ``origins`` maps keys to a location such as ``"config.txt line 4"`` for
    error messages.
    """
    origins = origins or {}
    parsed = {}
    for k, v in values.items():
        name, val = _parse_field(k, v, origins.get(k, f"field {k!r}"))
        parsed[name] = val
    base = base or ExperimentConfig()
    try:
        return replace(base, **parsed)
    except ConfigError as e:
        # point at the offending line when the field came from a file
        msg = str(e)
        for k, where in origins.items():
            name = _KEY_ALIASES.get(k, k)
            if msg.startswith(f"field {name!r}"):
                raise ConfigError(f"{where}: {msg}") from None
        raise


_LINE = re.compile(r"^([A-Za-z_]\w*)\s*(?:=|:|\s)\s*(.*)$")


def load_config(path: str) -> Tuple[Dict[str, str], Dict[str, str]]:
    """Read a flat ``key = value`` file (``key value`` and ``key: value``
    also accepted, ``#`` starts a comment).

    Returns (raw values, key -> "path line n").
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as e:
        raise ResultsIOError(f"cannot read config {path}: {e.strerror or e}") from e
    values, origins = {}, {}
    for n, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        hit = _LINE.match(text)
        if hit is None:
            raise ConfigError(f"{path} line {n}: expected 'key = value'")
        parts = [hit.group(1), hit.group(2).strip()]
        key = _KEY_ALIASES.get(parts[0], parts[0])
        if key not in _FIELD_PARSERS:
            raise ConfigError(f"{path} line {n}: unknown key {parts[0]!r}")
        values[key] = parts[1]
        origins[key] = f"{path} line {n}"
    return values, origins


PRESETS: Dict[str, Dict[str, str]] = {
    # SER curves, 6x6 16-QAM, both epsilon presets
    "fig1": {"mode": "ser", "M": "6", "N": "6", "q": "16",
             "decoders": "ml,alr-v1,alr-v2,lll-sic,lll-zf",
             "snr_db": "14:30:1", "trials": "1000000"},
    # SER curves with MMSE-GDFE preprocessing, 6x6 16-QAM
    "fig2": {"mode": "ser", "M": "6", "N": "6", "q": "16",
             "decoders": "ml,alr-v2+mmse,kim-park+mmse,lll-sic+mmse,lll-zf+mmse",
             "snr_db": "14:30:1", "trials": "1000000"},
    # as fig2 at 8x8
    "fig3": {"mode": "ser", "M": "8", "N": "8", "q": "16",
             "decoders": "ml,alr-v2+mmse,kim-park+mmse,lll-sic+mmse,lll-zf+mmse",
             "snr_db": "14:30:1", "trials": "1000000"},
    # mean LLL iterations, plain vs augmented, n = 2..8
    "fig4": {"mode": "complexity", "q": "16", "decoders": "lll-sic,alr-v2",
             "antennas": "2:8", "snr_db": "12", "trials": "10000"},
    # mean flops per decode at 12 dB
    "fig5": {"mode": "complexity", "q": "16",
             "decoders": "alr-v2,lll-sic,lll-zf,kim-park",
             "antennas": "2:8", "snr_db": "12", "trials": "10000"},
    # real vs complex augmented reduction
    "fig6": {"mode": "complexity", "q": "16", "decoders": "alr-v2,calr-v2",
             "antennas": "2:8", "snr_db": "12", "trials": "10000"},
}


# --------------------------------------------------------------------------
# records and serialization

def _sig10(x: float) -> float:
    return float(f"{float(x):.10g}")


@dataclass
class ResultRecord:
    """Aggregated outcome of one decoder at one grid point.

    ``ser = symbol_errors / (trials * M)`` counts complex symbols. Floats are
    held at 10 significant digits, the precision they are written with.
    ``wall_time_s`` is a measurement and is ignored by ``==``; ``extras``
    carries non-serialized bookkeeping (antenna count, bound checks).
    """

    decoder: str
    snr_db: float
    trials: int
    symbol_errors: int
    vector_errors: int
    ser: float
    mean_lll_iterations: float
    mean_flops: float
    fallback_count: int
    wall_time_s: float = field(default=0.0, compare=False)
    extras: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        for name in ("trials", "symbol_errors", "vector_errors",
                     "fallback_count"):
            setattr(self, name, int(getattr(self, name)))
        for name in ("snr_db", "ser", "mean_lll_iterations", "mean_flops",
                     "wall_time_s"):
            setattr(self, name, _sig10(getattr(self, name)))
        if self.vector_errors > self.trials:
            raise ValueError("more vector errors than trials")
        if self.symbol_errors < self.vector_errors:
            raise ValueError("fewer symbol errors than vector errors")

    def row(self) -> Dict[str, object]:
        return {k: getattr(self, k) for k in CSV_COLUMNS}

    @property
    def symbols(self) -> Optional[int]:
        """Number of complex symbols decoded (``trials * M``) when known."""
        M = self.extras.get("M")
        if M is None and self.ser > 0:
            M = round(self.symbol_errors / (self.ser * self.trials))
        return None if M is None else int(M) * self.trials

    def wilson(self, alpha: float = 0.05) -> Tuple[float, float]:
        """Wilson score interval for the SER."""
        n = self.symbols
        if n is None:
            raise ValueError("symbol count unknown for a zero-SER record "
                             "without extras['M']")
        return wilson_interval(self.symbol_errors, n, alpha)

    def wilson_half_width(self, alpha: float = 0.05) -> float:
        lo, hi = self.wilson(alpha)
        return 0.5 * (hi - lo)


def wilson_interval(count: int, nobs: int,
                    alpha: float = 0.05) -> Tuple[float, float]:
    from statsmodels.stats.proportion import proportion_confint
    lo, hi = proportion_confint(count, nobs, alpha=alpha, method="wilson")
    return float(lo), float(hi)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _format_text(records: Sequence[ResultRecord], fmt: str) -> str:
    if fmt == "csv":
        out = [",".join(CSV_COLUMNS)]
        for r in records:
            if "," in r.decoder:
                raise ValueError(f"decoder tag {r.decoder!r} contains a comma")
            out.append(",".join(_fmt(v) for v in r.row().values()))
        return "\n".join(out) + "\n"
    if fmt == "jsonl":
        return "".join(json.dumps(r.row()) + "\n" for r in records)
    raise ValueError(f"unknown format {fmt!r}")


def emit_results(records: Sequence[ResultRecord], path=None,
                 format: str = "csv") -> str:
    """Write records as CSV or JSON lines.

    ``path`` may be a filename, an open text stream or None (stdout).
    Returns the text written.
    """
    if not records:
        raise ValueError("no records to emit")
    text = _format_text(records, format)
    if path is None:
        sys.stdout.write(text)
    elif hasattr(path, "write"):
        path.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as e:
            raise ResultsIOError(
                f"cannot write {path}: {e.strerror or e}") from e
    return text


def _record_from_row(row: Dict[str, str]) -> ResultRecord:
    ints = {"trials", "symbol_errors", "vector_errors", "fallback_count"}
    kw = {}
    for k in CSV_COLUMNS:
        if k not in row:
            raise ValueError(f"missing column {k!r}")
        v = row[k]
        if k == "decoder":
            kw[k] = str(v)
        elif k in ints:
            kw[k] = int(v)
        else:
            kw[k] = float(v)
    return ResultRecord(**kw)


def parse_results(source, format: Optional[str] = None) -> List[ResultRecord]:
    """Inverse of :func:`emit_results`. ``source`` is a path or the text
    itself (anything containing a newline); the format is sniffed when not
    given."""
    if isinstance(source, (str, os.PathLike)) and "\n" not in str(source):
        try:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ResultsIOError(
                f"cannot read {source}: {e.strerror or e}") from e
    else:
        text = str(source)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if format is None:
        format = "jsonl" if lines and lines[0].lstrip().startswith("{") else "csv"
    if format == "jsonl":
        return [_record_from_row(json.loads(ln)) for ln in lines]
    if format != "csv":
        raise ValueError(f"unknown format {format!r}")
    header = lines[0].split(",")
    if tuple(header) != CSV_COLUMNS:
        raise ValueError("unexpected CSV header")
    return [_record_from_row(dict(zip(header, ln.split(","))))
            for ln in lines[1:]]


# --------------------------------------------------------------------------
# trial execution

@dataclass(frozen=True)
class _Block:
    M: int
    N: int
    q: int
    decoders: Tuple[str, ...]
    snr_db: float
    seed: int
    start: int
    stop: int
    noise_free: bool
    delta: float
    check_bound: bool


@dataclass
class _Stats:
    """Per-decoder sums over a set of trials; merging is plain addition."""

    trials: int
    symbol_errors: np.ndarray
    vector_errors: np.ndarray
    iterations: np.ndarray
    flops: np.ndarray
    fallbacks: np.ndarray
    seconds: np.ndarray
    bound_checks: int = 0
    bound_violations: int = 0

    @classmethod
    def zeros(cls, d: int) -> "_Stats":
        z = lambda: np.zeros(d, dtype=np.int64)
        return cls(0, z(), z(), z(), z(), z(), np.zeros(d))

    def merge(self, other: "_Stats") -> "_Stats":
        return _Stats(self.trials + other.trials,
                      self.symbol_errors + other.symbol_errors,
                      self.vector_errors + other.vector_errors,
                      self.iterations + other.iterations,
                      self.flops + other.flops,
                      self.fallbacks + other.fallbacks,
                      self.seconds + other.seconds,
                      self.bound_checks + other.bound_checks,
                      self.bound_violations + other.bound_violations)


def trial_data(seed: int, index: int, M: int, N: int, S: Constellation):
    """Channel, symbols and unit-variance noise of trial ``index``.

    The channel comes from its own stream, so it does not depend on the
    constellation. Returns (Hc, x, g) with ``w = sqrt(N0/2) * g``.
    """
    hc = complex_gaussian(trial_rng(seed, index, CHANNEL_STREAM), (N, M))
    rng = trial_rng(seed, index, SIGNAL_STREAM)
    x = S.sample(rng, 2 * M)
    g = rng.standard_normal(2 * N)
    return hc, x, g


class _Shared:
    """Per-trial cache of work that several decoders need (LLL of H, the
    MMSE-GDFE filter). Each user is charged the full cost and time."""

    def __init__(self, H, hc, n0, es, delta):
        self.H, self.hc, self.n0, self.es, self.delta = H, hc, n0, es, delta
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            t0 = time.perf_counter()
            val = fn()
            self._cache[key] = (val, time.perf_counter() - t0)
        return self._cache[key]

    def mmse(self):
        def make():
            fc = FlopCounter()
            pre = mmse_gdfe_preprocess(self.H, self.n0, self.es, flops=fc)
            return pre, fc.count
        return self._get("mmse", make)

    def reduction(self, mmse: bool):
        if mmse:
            (pre, _), _ = self.mmse()
            return self._get("lll-mmse", lambda: lll_reduce(
                pre.effective_h, delta=self.delta))
        return self._get("lll", lambda: lll_reduce(self.H, delta=self.delta))

    def complex_reduction(self):
        return self._get("clll", lambda: complex_lll_reduce(
            self.hc, delta=self.delta))

    def plain_reduction_if_done(self):
        hit = self._cache.get("lll")
        return None if hit is None else hit[0]


def _decode(spec: DecoderSpec, S: Constellation, sh: _Shared, y):
    """Run one decoder; returns (outcome, flops, seconds)."""
    extra_t = 0.0
    fc = FlopCounter()
    H = sh.H
    if spec.mmse:
        (pre, pre_flops), t = sh.mmse()
        extra_t += t
        fc.add(pre_flops)
        H = pre.effective_h
        y = pre.transform(y, flops=fc)
    base = spec.base
    t0 = time.perf_counter()
    if base == "ml":
        out = ml_decode(H, y, S, flops=fc)
    elif base == "zf":
        out = zf_decode(H, y, S, flops=fc)
    elif base == "sic":
        out = sic_decode(H, y, S, flops=fc)
    elif spec.is_complex:
        red, t = sh.complex_reduction()
        extra_t += t
        n = H.shape[0] // 2
        out = complex_alr_decode(sh.hc, y[:n] + 1j * y[n:], S,
                                 epsilon=spec.epsilon, variant=spec.variant,
                                 flops=fc, reduction=red, delta=sh.delta)
    else:
        red, t = sh.reduction(spec.mmse)
        extra_t += t
        if base == "lll-zf":
            out = lll_zf_decode(H, y, S, flops=fc, reduction=red)
        elif base == "lll-sic":
            out = lll_sic_decode(H, y, S, flops=fc, reduction=red)
        elif base == "kim-park":
            out = kim_park_ilr_decode(H, y, S, flops=fc, reduction=red)
        else:
            out = alr_decode(H, y, S, epsilon=spec.epsilon,
                             variant=spec.variant, flops=fc, reduction=red,
                             delta=sh.delta)
    return out, fc.count, time.perf_counter() - t0 + extra_t


def _run_block(block: _Block) -> _Stats:
    S = Constellation.qam(block.q)
    specs = [DecoderSpec.parse(d) for d in block.decoders]
    M, N = block.M, block.N
    n0 = snr_to_n0(db_to_linear(block.snr_db), M, S.avg_energy)
    scale = 0.0 if block.noise_free else math.sqrt(n0 / 2)
    st = _Stats.zeros(len(specs))
    for i in range(block.start, block.stop):
        hc, x, g = trial_data(block.seed, i, M, N, S)
        H = realify(hc)
        y = H @ x + scale * g
        sh = _Shared(H, hc, n0, S.avg_energy, block.delta)
        for j, spec in enumerate(specs):
            out, f, sec = _decode(spec, S, sh, y)
            wrong = out.x_hat != x
            sym = int(np.count_nonzero(wrong[:M] | wrong[M:]))
            st.symbol_errors[j] += sym
            st.vector_errors[j] += sym > 0
            st.iterations[j] += out.lll_iterations
            st.flops[j] += f
            st.fallbacks[j] += out.fallback_used
            st.seconds[j] += sec
        if block.check_bound:
            red = sh.plain_reduction_if_done()
            if red is None:
                red, _ = sh.reduction(False)
            st.bound_checks += 1
            bound = iteration_bound(red.a_input, red.big_a_input, red.m,
                                    block.delta)
            st.bound_violations += red.iterations > bound
        st.trials += 1
    return st


@contextmanager
def _pool(workers: int):
    if workers <= 1:
        yield None
        return
    ex = ProcessPoolExecutor(max_workers=workers)
    try:
        yield ex
    finally:
        ex.shutdown()


def _run_point(cfg: ExperimentConfig, M: int, N: int, snr: float,
               pool, min_errors: int, check_bound: bool) -> _Stats:
    bounds = [(s, min(s + cfg.block_size, cfg.trials))
              for s in range(0, cfg.trials, cfg.block_size)]
    blocks = [_Block(M, N, cfg.q, tuple(cfg.decoders), snr, cfg.seed, a, b,
                     cfg.noise_free, cfg.delta, check_bound)
              for a, b in bounds]
    total = _Stats.zeros(len(cfg.decoders))
    wave = max(1, 2 * cfg.workers)
    for w0 in range(0, len(blocks), wave):
        chunk = blocks[w0:w0 + wave]
        results = (pool.map(_run_block, chunk) if pool is not None
                   else map(_run_block, chunk))
        for st in results:
            total = total.merge(st)
            if min_errors and total.vector_errors.min() >= min_errors:
                return total
    return total


def _records(cfg, stats: _Stats, snr: float, M: int, suffix: str = ""
             ) -> List[ResultRecord]:
    out = []
    T = stats.trials
    for j, tag in enumerate(cfg.decoders):
        extras = {"M": M}
        if stats.bound_checks:
            extras["k_bound_checks"] = stats.bound_checks
            extras["k_bound_violations"] = stats.bound_violations
        out.append(ResultRecord(
            decoder=tag + suffix, snr_db=snr, trials=T,
            symbol_errors=int(stats.symbol_errors[j]),
            vector_errors=int(stats.vector_errors[j]),
            ser=stats.symbol_errors[j] / (T * M),
            mean_lll_iterations=stats.iterations[j] / T,
            mean_flops=stats.flops[j] / T,
            fallback_count=int(stats.fallbacks[j]),
            wall_time_s=float(stats.seconds[j]),
            extras=extras))
    return out


def run_ser_sweep(cfg: ExperimentConfig) -> List[ResultRecord]:
    """SER per decoder and SNR point at ``cfg.M x cfg.N``.

    Records are ordered by SNR, then by the decoder order of the config.
    """
    cfg.validate()
    records = []
    with _pool(cfg.workers) as pool:
        for snr in cfg.snr_db:
            st = _run_point(cfg, cfg.M, cfg.N, snr, pool, cfg.min_errors,
                            check_bound=False)
            records.extend(_records(cfg, st, snr, cfg.M))
    return records


def run_complexity_sweep(cfg: ExperimentConfig) -> List[ResultRecord]:
    """Mean LLL iterations and flops per decode for ``n = M = N`` in
    ``cfg.antennas``, at every SNR of ``cfg.snr_db``, over the full trial
    budget (no early stop).

    Decoder tags get an ``@nxn`` suffix. Every trial also checks the
    iteration count of the plain reduction of ``H`` against
    :func:`~alrmimo.lattice.iteration_bound`; the tallies are in
    ``extras["k_bound_checks"]`` and ``extras["k_bound_violations"]``.
    """
    cfg.validate()
    records = []
    with _pool(cfg.workers) as pool:
        for n in cfg.antennas:
            for snr in cfg.snr_db:
                st = _run_point(cfg, n, n, snr, pool, 0, check_bound=True)
                records.extend(_records(cfg, st, snr, n, f"@{n}x{n}"))
    return records


def run_experiment(cfg: ExperimentConfig) -> List[ResultRecord]:
    if cfg.mode == "complexity":
        return run_complexity_sweep(cfg)
    return run_ser_sweep(cfg)


# --------------------------------------------------------------------------
# curve summaries

def _curve(records: Sequence[ResultRecord], decoder: str):
    rs = sorted((r for r in records if r.decoder == decoder),
                key=lambda r: r.snr_db)
    if not rs:
        raise KeyError(f"no records for decoder {decoder!r}")
    return rs


def snr_at_ser(records: Sequence[ResultRecord], decoder: str,
               target: float) -> float:
    """SNR (dB) where the decoder's SER curve crosses ``target``.

    Interpolates ``log10(SER)`` linearly in dB between the first pair of
    consecutive points that brackets the target. Raises ``ValueError`` when
    the curve does not cross it.
    """
    rs = _curve(records, decoder)
    for a, b in zip(rs, rs[1:]):
        if a.ser >= target >= b.ser and b.ser > 0:
            if a.ser == b.ser:
                return a.snr_db
            la, lb, lt = (math.log10(a.ser), math.log10(b.ser),
                          math.log10(target))
            return a.snr_db + (la - lt) / (la - lb) * (b.snr_db - a.snr_db)
    raise ValueError(f"{decoder}: SER curve does not cross {target:g} "
                     f"within the measured grid")


def diversity_slope(records: Sequence[ResultRecord], decoder: str,
                    below: float = 1e-3, points: int = 3) -> float:
    """Least-squares slope of ``log10 SER`` against ``log10 rho`` over the
    last ``points`` grid points with ``0 < SER < below``."""
    rs = [r for r in _curve(records, decoder) if 0 < r.ser < below]
    if len(rs) < points:
        raise ValueError(f"{decoder}: need {points} points with "
                         f"0 < SER < {below:g}, have {len(rs)}")
    rs = rs[-points:]
    x = np.array([r.snr_db / 10.0 for r in rs])
    y = np.log10([r.ser for r in rs])
    return float(np.polyfit(x, y, 1)[0])
