"""
Command-line front end of :mod:`alrmimo.sim`.

    alrmimo-sim [CONFIG] [--preset fig1..fig6] [--trials N] [--seed S]
                [--workers W] [--out PATH] [--format csv|jsonl]
                [--KEY VALUE ...]

Values are layered: defaults, then the preset, then the config file, then
command-line options. Any config key can be given as ``--key value``.
Exit status is 0 on success, 2 for configuration errors and 3 for I/O
errors.
"""
import argparse
import sys
from typing import List, Optional

from .sim import (PRESETS, ConfigError, ResultsIOError, config_from_mapping,
                  emit_results, load_config, run_experiment)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="alrmimo-sim",
                description="Monte-Carlo SER and complexity sweeps.")
    p.add_argument("config", nargs="?", help="flat key = value config file")
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--trials")
    p.add_argument("--seed")
    p.add_argument("--workers")
    p.add_argument("--out")
    p.add_argument("--format")
    return p


_KNOWN = {"preset", "trials", "seed", "workers", "out", "format", "help"}


def _split_extra(argv: List[str]):
    """Separate ``--key value`` overrides for arbitrary config keys from the
    arguments argparse knows about."""
    known, pairs, origins = [], {}, {}
    i = 0
    while i < len(argv):
        tok = argv[i]
        name = tok[2:].split("=", 1)[0] if tok.startswith("--") else None
        if name is None or name in _KNOWN:
            known.append(tok)
            i += 1
            continue
        if "=" in tok:
            val = tok.split("=", 1)[1]
            i += 1
        else:
            if i + 1 >= len(argv):
                raise ConfigError(f"option {tok} needs a value")
            val = argv[i + 1]
            i += 2
        key = name.replace("-", "_")
        pairs[key] = val
        origins[key] = f"option --{name}"
    return known, pairs, origins


def build_config(argv: Optional[List[str]] = None):
    argv = sys.argv[1:] if argv is None else list(argv)
    known, extra, extra_origins = _split_extra(argv)
    args = _parser().parse_args(known)
    values, origins = {}, {}
    if args.preset:
        values.update(PRESETS[args.preset])
        origins.update({k: f"preset {args.preset}" for k in PRESETS[args.preset]})
    if args.config:
        v, o = load_config(args.config)
        values.update(v)
        origins.update(o)
    values.update(extra)
    origins.update(extra_origins)
    for key in ("trials", "seed", "workers", "out", "format"):
        val = getattr(args, key)
        if val is not None:
            values[key] = val
            origins[key] = f"option --{key}"
    return config_from_mapping(values, origins=origins)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        cfg = build_config(argv)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ResultsIOError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    records = run_experiment(cfg)
    try:
        emit_results(records, cfg.out, format=cfg.format)
    except ResultsIOError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
