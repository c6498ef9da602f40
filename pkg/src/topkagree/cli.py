"""Command-line interface.

Subcommands:
  agree     pairwise or method-human agreement tables
  delta     dynamic-vs-fixed agreement deltas per method
  bias      agreement by sentence-length bin
  apd       average pairwise difference across run corpora
  topk      per-(instance, method) token selections
  validate  corpus file check and summary

Exit codes: 0 success, 1 usage error, 2 data validation error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import reports
from .agreement import COMBINE_AVERAGE, COMBINE_ENTITIES, HUMAN
from .corpus import CorpusError, KSpec, load_corpus


class UsageError(Exception):
    """Bad flags or flag combinations; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _usage_int(text: str, flag: str, minimum: int = 1) -> int:
    try:
        value = int(text)
    except ValueError:
        raise UsageError(f"{flag}: {text!r} is not an integer") from None
    if value < minimum:
        raise UsageError(f"{flag}: must be >= {minimum}")
    return value


def _parse_k_specs(text: str) -> list[KSpec]:
    """Parse --k values.

    Accepts "dynamic", "fixed:N", and comma lists where bare integers
    extend the preceding fixed list: "fixed:1,2,3" or "fixed:3,dynamic".
    """
    specs: list[KSpec] = []
    in_fixed_tail = False
    for token in text.split(","):
        token = token.strip()
        if token == "dynamic":
            specs.append(KSpec.dynamic())
            in_fixed_tail = False
        elif token.startswith("fixed:"):
            specs.append(KSpec.fixed(_usage_int(token[6:], "--k")))
            in_fixed_tail = True
        elif in_fixed_tail and token:
            specs.append(KSpec.fixed(_usage_int(token, "--k")))
        else:
            raise UsageError(
                f"--k: bad spec {text!r} (use fixed:N, fixed:N,N,..., or dynamic)"
            )
    return list(dict.fromkeys(specs))


def _parse_int_list(text: str, flag: str) -> list[int]:
    tokens = [t.strip() for t in text.split(",")]
    if not all(tokens):
        raise UsageError(f"{flag}: bad list {text!r}")
    return [_usage_int(t, flag) for t in tokens]


def _parse_selectors(text: str):
    if text == "all-pairs":
        return ("all-pairs",)
    if text == "human":
        return ("human", None)
    if text.startswith("human:"):
        name = text[6:]
        if not name:
            raise UsageError("--selectors: human: needs a method name")
        return ("human", name)
    if text.startswith("pair:"):
        names = text[5:].split(",")
        if len(names) != 2 or not all(names):
            raise UsageError(
                "--selectors: pair: needs exactly two method names, e.g. pair:lime,shap"
            )
        return ("pair", names[0], names[1])
    raise UsageError(
        f"--selectors: bad spec {text!r} "
        "(use all-pairs, pair:A,B, human, or human:METHOD)"
    )


def _parse_bins(text: str):
    if text.startswith("quantile:"):
        return ("quantile", _usage_int(text[9:], "--bins"))
    ranges = []
    for part in text.split(","):
        lo, sep, hi = part.partition("-")
        if not sep:
            raise UsageError(
                f"--bins: bad spec {text!r} (use quantile:N or LO-HI,LO-HI,...)"
            )
        lo_v = _usage_int(lo, "--bins")
        hi_v = _usage_int(hi, "--bins")
        if lo_v > hi_v:
            raise UsageError(f"--bins: bin {part!r} has lo > hi")
        ranges.append((lo_v, hi_v))
    return ("explicit", tuple(ranges))


def _parse_run_input(text: str) -> tuple[str, Path]:
    if "=" in text:
        run_id, _, path = text.partition("=")
        if not run_id or not path:
            raise UsageError(f"--input: bad run spec {text!r} (use RUN_ID=PATH)")
        return run_id, Path(path)
    path = Path(text)
    return path.stem, path


def _check_tie_seed(args) -> None:
    if args.tie == "random" and args.seed is None:
        raise UsageError("--tie random requires --seed")
    if args.seed is not None and args.seed < 0:
        raise UsageError("--seed: must be >= 0")


def _load_input(args):
    path = Path(args.input)
    checksum = reports.file_sha256(path)
    corpus = load_corpus(path, strict=not args.lenient)
    return corpus, checksum


def _metadata(command: str, args, corpus, checksum: str, **extra) -> dict:
    md = {
        "command": command,
        "input": str(args.input),
        "input_sha256": checksum,
        "n_instances": len(corpus.instances),
        "methods": corpus.methods_sorted(),
        "skipped_records": corpus.skipped,
        "tie": getattr(args, "tie", None),
        "seed": getattr(args, "seed", None),
        "abs": getattr(args, "abs", False),
        "lenient": args.lenient,
    }
    md.update(extra)
    return md


def _emit(args, header, csv_rows, payload) -> int:
    out = Path(args.output)
    if args.format == "json":
        reports.write_json(out, payload)
        return 0
    if out.suffix == ".json":
        raise UsageError(
            "--output: with --format csv the path must not end in .json "
            "(that name is used for the metadata mirror)"
        )
    reports.write_csv(out, header, csv_rows)
    reports.write_json(out.with_suffix(".json"), payload)
    return 0


def _cmd_agree(args) -> int:
    k_specs = _parse_k_specs(args.k)
    selectors = _parse_selectors(args.selectors)
    _check_tie_seed(args)
    corpus, checksum = _load_input(args)
    pairs = reports.resolve_pairs(corpus, selectors)
    report = reports.agree_report(
        corpus, k_specs, pairs, combine=args.combine, tie_break=args.tie,
        seed=args.seed, use_abs=args.abs, jobs=args.jobs,
    )
    md = _metadata(
        "agree", args, corpus, checksum,
        k=[s.describe() for s in k_specs],
        selectors=args.selectors, combine=args.combine,
    )
    if report.dynamic_k is not None:
        md["dynamic_k"] = {
            m: {"mean": reports.round6(s.mean), "sd": reports.round6(s.sd)}
            for m, s in sorted(report.dynamic_k.items())
        }
    if any(b == HUMAN for _, b in pairs):
        md["human_note"] = (
            "method selections use the requested k spec and are not "
            "truncated to per-annotator selection counts"
        )
    payload = {"metadata": md, "rows": reports.agree_json_rows(report.entries)}
    return _emit(args, reports.AGREE_HEADER, reports.agree_csv_rows(report.entries), payload)


def _cmd_delta(args) -> int:
    ks = _parse_int_list(args.ks, "--ks")
    selectors = _parse_selectors(args.selectors)
    _check_tie_seed(args)
    corpus, checksum = _load_input(args)
    rows = reports.delta_report(
        corpus, ks, selectors, combine=args.combine, tie_break=args.tie,
        seed=args.seed, use_abs=args.abs, jobs=args.jobs,
    )
    md = _metadata(
        "delta", args, corpus, checksum,
        fixed_ks=sorted(set(ks)), selectors=args.selectors, combine=args.combine,
    )
    payload = {"metadata": md, "rows": reports.delta_json_rows(rows)}
    return _emit(args, reports.DELTA_HEADER, reports.delta_csv_rows(rows), payload)


def _cmd_bias(args) -> int:
    bins = _parse_bins(args.bins)
    ks = _parse_int_list(args.ks, "--ks")
    _check_tie_seed(args)
    corpus, checksum = _load_input(args)
    rows = reports.bias_report(
        corpus, bins, ks, tie_break=args.tie, seed=args.seed,
        use_abs=args.abs, jobs=args.jobs,
    )
    md = _metadata(
        "bias", args, corpus, checksum,
        bins=args.bins, fixed_ks=sorted(set(ks)),
        resolved_bins=[f"{r.length_lo}-{r.length_hi}" for r in rows[:: len(set(ks))]],
    )
    payload = {"metadata": md, "rows": reports.bias_json_rows(rows)}
    return _emit(args, reports.BIAS_HEADER, reports.bias_csv_rows(rows), payload)


def _cmd_topk(args) -> int:
    k_specs = _parse_k_specs(args.k)
    if len(k_specs) != 1:
        raise UsageError("topk takes exactly one k spec")
    _check_tie_seed(args)
    corpus, checksum = _load_input(args)
    rows = reports.topk_report(
        corpus, k_specs[0], tie_break=args.tie, seed=args.seed,
        use_abs=args.abs, jobs=args.jobs,
    )
    md = _metadata("topk", args, corpus, checksum, k=k_specs[0].describe())
    payload = {"metadata": md, "rows": reports.topk_json_rows(rows)}
    return _emit(args, reports.TOPK_HEADER, reports.topk_csv_rows(rows), payload)


def _cmd_apd(args) -> int:
    run_args = [_parse_run_input(text) for text in args.input]
    if len(run_args) < 2:
        raise UsageError("apd needs at least two --input run corpora")
    inputs_md = []
    runs = []
    for run_id, path in run_args:
        checksum = reports.file_sha256(path)
        corpus = load_corpus(path, strict=not args.lenient)
        runs.append((run_id, corpus))
        inputs_md.append(
            {"run_id": run_id, "path": str(path), "sha256": checksum}
        )
    scores, selected = reports.apd_report(runs)
    md = {
        "command": "apd",
        "inputs": inputs_md,
        "n_instances": len(runs[0][1].instances),
        "methods": runs[0][1].methods_sorted(),
        "lenient": args.lenient,
        "selected": selected,
    }
    payload = {"metadata": md, "rows": reports.apd_json_rows(scores, selected)}
    return _emit(args, reports.APD_HEADER, reports.apd_csv_rows(scores, selected), payload)


def _cmd_validate(args) -> int:
    corpus, checksum = _load_input(args)
    annotated = sum(1 for inst in corpus.instances if inst.human_selections)
    print(f"instances: {len(corpus.instances)}")
    print(f"methods: {', '.join(corpus.methods_sorted())}")
    print(f"annotated: {annotated}")
    print(f"max_tokens: {corpus.max_length()}")
    print(f"skipped: {corpus.skipped}")
    print(f"sha256: {checksum}")
    print("corpus OK")
    return 0


def _add_io_flags(sp, *, multi_input: bool = False) -> None:
    if multi_input:
        sp.add_argument(
            "--input", action="append", required=True, metavar="[RUN_ID=]PATH",
            help="run corpus, repeatable; run id defaults to the file stem",
        )
    else:
        sp.add_argument("--input", required=True, help="corpus file (JSON lines)")
    sp.add_argument("--output", required=True, help="report file to write")
    sp.add_argument("--format", choices=("csv", "json"), default="csv",
                    help="csv writes a .json metadata mirror alongside")
    sp.add_argument("--lenient", action="store_true",
                    help="skip and count malformed records instead of aborting")


def _add_selection_flags(sp) -> None:
    sp.add_argument("--tie", choices=("earliest", "random"), default="earliest",
                    help="tie handling for equal scores at the fixed-k boundary")
    sp.add_argument("--seed", type=int, default=None,
                    help="seed for --tie random; echoed into report metadata")
    sp.add_argument("--abs", action="store_true",
                    help="take absolute scores before selection")
    sp.add_argument("--jobs", type=int, default=1,
                    help="worker processes; output is identical for any value")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="topkagree",
        description="Agreement@k reports over token attribution corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    agree = sub.add_parser("agree", help="pairwise or method-human agreement")
    _add_io_flags(agree)
    agree.add_argument("--k", default="dynamic",
                       help="k spec: fixed:N, fixed:N,N,..., or dynamic")
    agree.add_argument("--selectors", default="all-pairs",
                       help="all-pairs, pair:A,B, human, or human:METHOD")
    agree.add_argument("--combine", choices=(COMBINE_ENTITIES, COMBINE_AVERAGE),
                       default=COMBINE_ENTITIES,
                       help="how method and annotator selections are combined")
    _add_selection_flags(agree)
    agree.set_defaults(func=_cmd_agree)

    delta = sub.add_parser("delta", help="dynamic-vs-fixed agreement deltas")
    _add_io_flags(delta)
    delta.add_argument("--ks", default="1,2,3,4,5",
                       help="comma list of fixed k values to compare against")
    delta.add_argument("--selectors", default="all-pairs",
                       help="all-pairs, pair:A,B, human, or human:METHOD")
    delta.add_argument("--combine", choices=(COMBINE_ENTITIES, COMBINE_AVERAGE),
                       default=COMBINE_ENTITIES)
    _add_selection_flags(delta)
    delta.set_defaults(func=_cmd_delta)

    bias = sub.add_parser("bias", help="agreement by sentence-length bin")
    _add_io_flags(bias)
    bias.add_argument("--bins", default="quantile:5",
                      help="quantile:N or explicit LO-HI,LO-HI,... token-count ranges")
    bias.add_argument("--ks", default="1,2,3,4,5",
                      help="comma list of fixed k values")
    _add_selection_flags(bias)
    bias.set_defaults(func=_cmd_bias)

    apd = sub.add_parser("apd", help="average pairwise difference across runs")
    _add_io_flags(apd, multi_input=True)
    apd.add_argument("--jobs", type=int, default=1,
                     help="accepted for interface symmetry; apd work is not parallelized")
    apd.set_defaults(func=_cmd_apd)

    topk = sub.add_parser("topk", help="per-(instance, method) selections")
    _add_io_flags(topk)
    topk.add_argument("--k", default="dynamic",
                      help="k spec: fixed:N or dynamic")
    _add_selection_flags(topk)
    topk.set_defaults(func=_cmd_topk)

    validate = sub.add_parser("validate", help="check a corpus file and print a summary")
    validate.add_argument("--input", required=True, help="corpus file (JSON lines)")
    validate.add_argument("--lenient", action="store_true",
                          help="skip and count malformed records instead of aborting")
    validate.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs: must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CorpusError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
