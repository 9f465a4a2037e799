"""Command-line pipelines: validate, css, detect, report, synth.

Exit codes: 0 success, 2 input format error, 3 consistency error,
4 usage/configuration error. Failures print a one-line JSON error object to
stderr. All commands are deterministic given their inputs and configuration;
``detect`` writes a manifest with content hashes so a run can be verified
byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import css as css_mod
from . import detect as detect_mod
from . import follower as follower_mod
from . import portfolio as portfolio_mod
from . import synthgen as synth_mod
from .config import ConfigError, RunConfig, load_config_file, with_overrides
from .corpus import ConsistencyError, FormatError, load_corpus

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_CONSISTENCY = 3
EXIT_USAGE = 4

METHODS = ("m1", "m2a", "m2b")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        raise UsageError(message)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _add_corpus_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pubs", required=True, help="publications TSV")
    p.add_argument("--edges", required=True, help="citation edges TSV")
    p.add_argument("--hierarchy", required=True, help="micro/meso/macro hierarchy TSV")


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file (flags win)")
    p.add_argument("--keep-threshold", type=float, dest="keep_threshold")
    p.add_argument("--css-depth", type=int, dest="css_depth")
    p.add_argument(
        "--follower-semantics", choices=("union", "per_pair"), dest="follower_semantics"
    )
    p.add_argument(
        "--m1-compose-follower-filter",
        action=argparse.BooleanOptionalAction,
        default=None,
        dest="m1_compose_follower_filter",
    )
    p.add_argument(
        "--m2b-strict",
        action=argparse.BooleanOptionalAction,
        default=None,
        dest="m2b_strict",
    )


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config_file(args.config, RunConfig) if args.config else RunConfig()
    cfg = with_overrides(
        cfg,
        keep_threshold=getattr(args, "keep_threshold", None),
        css_depth=getattr(args, "css_depth", None),
        follower_semantics=getattr(args, "follower_semantics", None),
        m1_compose_follower_filter=getattr(args, "m1_compose_follower_filter", None),
        m2b_strict=getattr(args, "m2b_strict", None),
        out_dir=getattr(args, "out", None),
        log_level=getattr(args, "log_level", None),
    )
    cfg.validate()
    return cfg


def build_parser() -> _Parser:
    parser = _Parser(prog="citebreaks", description=__doc__)
    parser.add_argument(
        "--log-level",
        dest="log_level",
        default=None,
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="ingest the corpus and emit the ingestion report")
    _add_corpus_args(p)
    p.add_argument("--out", help="also write the report JSON here")

    p = sub.add_parser("css", help="citation-class partitions per meso-field")
    _add_corpus_args(p)
    _add_config_args(p)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("detect", help="run breakthrough selection methods")
    _add_corpus_args(p)
    _add_config_args(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--method", choices=METHODS + ("all",), default="all")

    p = sub.add_parser("report", help="per-unit portfolio reports")
    _add_corpus_args(p)
    _add_config_args(p)
    p.add_argument("--sets", required=True, help="directory with detect outputs")
    p.add_argument("--out", required=True, help="report TSV path")
    p.add_argument("--units", help="comma-separated unit ids (default: all in corpus)")
    p.add_argument("--reference", help="file of pub_ids (one per line) restricting the universe")

    p = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    p.add_argument("--config", help="key=value synth config file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def cmd_validate(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.pubs, args.edges, args.hierarchy)
    payload = corpus.ingest.to_json()
    print(payload)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_css(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    corpus = load_corpus(args.pubs, args.edges, args.hierarchy)
    counts = corpus_mod.citation_counts(corpus)
    partitions = css_mod.css_all_fields(corpus, counts, depth=cfg.css_depth)
    css_mod.write_css_tsv(partitions, out / "css_fields.tsv", out / "css_classes.tsv")
    if partitions:
        print(css_mod.css_summary(partitions).format_table())
    return EXIT_OK


def cmd_detect(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    requested = list(METHODS) if args.method == "all" else [args.method]
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    corpus = load_corpus(args.pubs, args.edges, args.hierarchy)
    counts = corpus_mod.citation_counts(corpus)
    partitions = css_mod.css_all_fields(corpus, counts, depth=cfg.css_depth)
    css_mod.write_css_tsv(partitions, out / "css_fields.tsv", out / "css_classes.tsv")

    pool = follower_mod.candidate_pool(corpus, partitions)
    pairs = follower_mod.find_pairs(pool, corpus)
    verdicts = follower_mod.filter_followers(
        pool, pairs, corpus, cfg.keep_threshold, cfg.follower_semantics
    )
    follower_mod.write_verdicts_tsv(verdicts, out / "follower_verdicts.tsv")

    sets: dict[str, detect_mod.BreakthroughSet] = {}
    if "m1" in requested:
        m1 = detect_mod.detect_m1(corpus, counts)
        if cfg.m1_compose_follower_filter:
            m1 = detect_mod.apply_follower_filter(
                m1, corpus, cfg.keep_threshold, cfg.follower_semantics
            )
        sets["m1"] = m1
    if "m2a" in requested or "m2b" in requested:
        m2a = detect_mod.detect_m2a(pool, verdicts)
        if "m2a" in requested:
            sets["m2a"] = m2a
        if "m2b" in requested:
            diffusion = detect_mod.macro_diffusion(m2a, corpus)
            sets["m2b"] = detect_mod.detect_m2b(m2a, diffusion, corpus, strict=cfg.m2b_strict)

    outputs = ["css_fields.tsv", "css_classes.tsv", "follower_verdicts.tsv"]
    for name in requested:
        bset = sets[name]
        detect_mod.write_breakthroughs_tsv(bset, out / f"breakthroughs_{name}.tsv")
        portfolio_mod.write_overlay_json(bset, corpus, out / f"overlay_{name}.json")
        outputs += [f"breakthroughs_{name}.tsv", f"overlay_{name}.json"]

    # the echo covers knobs that shape output content; where the files land
    # and how chatty the log is must not break byte-identical reruns
    config_echo = {
        k: v for k, v in cfg.to_dict().items() if k not in ("out_dir", "log_level")
    }
    manifest = {
        "command": "detect",
        "methods": requested,
        "config": config_echo,
        "inputs": {
            role: {"path": str(path), "sha256": _sha256(Path(path)), "bytes": Path(path).stat().st_size}
            for role, path in (
                ("pubs", args.pubs), ("edges", args.edges), ("hierarchy", args.hierarchy)
            )
        },
        "outputs": {name: _sha256(out / name) for name in sorted(outputs)},
    }
    with open(out / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    sets_dir = Path(args.sets)
    sets = []
    for name, label in (("m1", "M1"), ("m2a", "M2a"), ("m2b", "M2b")):
        path = sets_dir / f"breakthroughs_{name}.tsv"
        if not path.exists():
            raise FormatError(f"missing detection output {path}")
        loaded = detect_mod.read_breakthroughs_tsv(path)
        sets.append(detect_mod.BreakthroughSet(label, loaded.members, {}))

    corpus = load_corpus(args.pubs, args.edges, args.hierarchy)
    reference = None
    if args.reference:
        ref_path = Path(args.reference)
        if not ref_path.exists():
            raise FormatError(f"missing reference file {ref_path}")
        reference = {
            line.strip() for line in ref_path.read_text(encoding="utf-8").splitlines()
            if line.strip()
        }
    units = (
        [u for u in args.units.split(",") if u] if args.units else corpus.all_units()
    )
    reports = [portfolio_mod.reference_report(corpus, sets, reference)]
    reports += [portfolio_mod.unit_report(corpus, sets, u, reference) for u in units]
    portfolio_mod.write_report_tsv(reports, args.out)
    print(f"wrote {args.out} ({len(units)} units)")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    cfg = (
        load_config_file(args.config, synth_mod.SynthConfig)
        if args.config
        else synth_mod.SynthConfig()
    )
    cfg = with_overrides(cfg, seed=args.seed)
    try:
        cfg.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus, truth = synth_mod.generate(cfg)
    corpus_mod.write_corpus(
        corpus, out / "pubs.tsv", out / "edges.tsv", out / "hierarchy.tsv"
    )
    synth_mod.write_ground_truth_tsv(truth, out / "ground_truth.tsv")
    print(corpus.ingest.to_json())
    return EXIT_OK


_COMMANDS = {
    "validate": cmd_validate,
    "css": cmd_css,
    "detect": cmd_detect,
    "report": cmd_report,
    "synth": cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=(args.log_level or "WARNING").upper())
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        _fail(str(exc), "usage")
        return EXIT_USAGE
    except ConfigError as exc:
        _fail(str(exc), "config")
        return EXIT_USAGE
    except FormatError as exc:
        _fail(str(exc), "format")
        return EXIT_FORMAT
    except ConsistencyError as exc:
        _fail(str(exc), "consistency")
        return EXIT_CONSISTENCY
    except FileNotFoundError as exc:
        _fail(str(exc), "format")
        return EXIT_FORMAT


def _fail(message: str, kind: str) -> None:
    print(json.dumps({"error": message, "kind": kind}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
