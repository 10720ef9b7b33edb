"""
Command-line entry point.

    tfprecoding run fig1 --out results
    tfprecoding --preset fig3 --nfft 32 --set mc.trials=500
    tfprecoding list

Exit status: 0 on success, 2 for usage errors, 3 for an unknown preset,
4 for a malformed configuration and 5 when the output cannot be written.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from .experiments import PRESETS, ConfigError, UnknownPresetError, parse_config_text, resolve_config, run

EXIT_UNKNOWN_PRESET = 3
EXIT_BAD_CONFIG = 4
EXIT_OUTPUT = 5


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tfprecoding",
        description="Reproduce the OFDM precoding experiments as CSV tables.",
    )
    ap.add_argument("preset", nargs="?", help="preset name (see 'tfprecoding list')")
    ap.add_argument("--preset", dest="preset_opt", metavar="NAME", help="preset name, alternative to the positional form")
    ap.add_argument("--config", metavar="PATH", help="flat key=value file with dotted keys")
    ap.add_argument("--seed", type=int, help="base seed (non-negative integer)")
    ap.add_argument("--out", metavar="DIR", help="output directory (default: results)")
    ap.add_argument("--full", action="store_true", default=None, help="full-scale grids and trial counts")
    ap.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                    help="override one configuration key; repeatable")
    ap.add_argument("--nfft", type=int, metavar="N", help="shorthand for --set scenario.n_fft=N")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def _list_presets() -> None:
    for p in PRESETS.values():
        print(f"{p.name:6s} {p.mode:11s} {p.description}")


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv[:1] == ["list"]:
        _list_presets()
        return 0
    if argv[:1] == ["run"]:
        argv = argv[1:]
    args = build_parser().parse_args(argv)

    if args.preset and args.preset_opt and args.preset != args.preset_opt:
        print(f"error: conflicting presets {args.preset!r} and {args.preset_opt!r}", file=sys.stderr)
        return 2
    preset = args.preset or args.preset_opt

    try:
        file_values = {}
        if args.config:
            try:
                with open(args.config) as fh:
                    file_values = parse_config_text(fh.read(), args.config)
            except OSError as exc:
                raise ConfigError("--config", f"cannot read {args.config}: {exc.strerror}") from None
        overrides = {}
        for item in args.overrides:
            if "=" not in item:
                raise ConfigError(item, "--set expects KEY=VALUE")
            key, value = item.split("=", 1)
            overrides.update(parse_config_text(f"{key.strip()}={value}", "--set"))
        if args.nfft is not None:
            overrides["scenario.n_fft"] = str(args.nfft)
        cfg = resolve_config(preset, args.seed, args.out, args.full, file_values, overrides)
    except UnknownPresetError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_UNKNOWN_PRESET
    except ConfigError as exc:
        print(f"error: malformed configuration, key {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    t0 = time.perf_counter()
    try:
        paths = run(cfg)
    except OSError as exc:
        print(f"error: cannot write output under {cfg.out}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except ConfigError as exc:
        print(f"error: malformed configuration, key {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    print(f"{cfg.preset}: wrote {len(paths)} file(s) in {time.perf_counter() - t0:.1f} s")
    for p in paths:
        print(f"  {p}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
