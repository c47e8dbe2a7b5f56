"""Command-line entry point.

Subcommands mirror the pipeline stages (``mine``, ``embed``,
``preselect``, ``contexts``, ``rank``, ``eval``, ``all``) plus ``synth``
for generating a planted-euphemism benchmark dataset.  Exit codes:
0 success, 1 usage/config error, 2 runtime/stage error, 3 remote-scorer
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .config import PipelineConfig, RANK_METHODS
from .errors import ConfigError, EuphraseError, ScorerError
from .pipeline import run_stage
from .synthetic import SyntheticConfig, write_synthetic_dataset

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_SCORER = 3

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    # Usage problems are exit code 1 in this tool, not argparse's 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a flat JSON config file")
    parser.add_argument("--seed", type=int, help="override the configured random seed")
    parser.add_argument("--threads", type=int, help="worker threads for parallel stages")
    parser.add_argument("--out", help="override the configured output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="euphrase", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for stage in ("mine", "embed", "preselect", "contexts", "rank", "eval", "all"):
        stage_parser = sub.add_parser(stage, help=f"run the {stage} stage")
        _add_common(stage_parser)
        if stage in ("rank", "eval", "all"):
            stage_parser.add_argument(
                "--method",
                choices=RANK_METHODS,
                help="ranking method (default from config)",
            )
    synth = sub.add_parser("synth", help="generate a synthetic benchmark dataset")
    synth.add_argument("--out", required=True, help="directory for corpus/targets/truth files")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--docs", type=int, default=SyntheticConfig.n_docs)
    synth.add_argument("--targets", type=int, default=SyntheticConfig.n_targets)
    synth.add_argument("--vocab-size", type=int, default=SyntheticConfig.vocab_size)
    return parser


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    if args.out is not None:
        overrides["output_dir"] = args.out
    if getattr(args, "method", None):
        overrides["rank_method"] = args.method
    if overrides:
        config = PipelineConfig.from_dict({**dataclasses.asdict(config), **overrides})
    return config


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    try:
        if args.command == "synth":
            paths = write_synthetic_dataset(
                args.out,
                SyntheticConfig(
                    n_docs=args.docs,
                    n_targets=args.targets,
                    vocab_size=args.vocab_size,
                    seed=args.seed,
                ),
            )
            for name, path in sorted(paths.items()):
                print(f"{name}\t{path}")
            return EXIT_OK
        config = _resolve_config(args)
        run_stage(args.command, config, getattr(args, "method", None))
        return EXIT_OK
    except ConfigError as exc:
        logger.error("config error: %s", exc)
        return EXIT_USAGE
    except ScorerError as exc:
        logger.error("remote scorer failure: %s", exc)
        return EXIT_SCORER
    except (EuphraseError, OSError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
