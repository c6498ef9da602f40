"""Report assembly and deterministic CSV/JSON emission.

All aggregation goes through math.fsum, so results are independent of the
order instances are reduced in and therefore of the worker count.  Files
are emitted with fixed 6-decimal formatting, stable row ordering, and a
trailing newline; CSV carries the data, the JSON mirror carries the same
rows plus full metadata.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import multiprocessing
from dataclasses import dataclass
from functools import partial
from itertools import combinations
from typing import Sequence

import numpy as np

from .agreement import (
    HUMAN,
    KStats,
    PairAgreement,
    UndefinedAgreementError,
    _k_stats,
    _require_methods,
    agreement_sentence,
    instance_human_score,
    method_selection,
    relevance,
)
from .corpus import AttributionInstance, Corpus, CorpusError, KSpec
from .runs import apd_select, build_run_matrix

ALL_PAIRS = ("all-pairs",)


@dataclass(frozen=True)
class DeltaRow:
    """Dynamic-vs-fixed agreement for one method at one fixed k.

    The two agreement columns are summed over the counterpart selectors
    (for a single counterpart the sum is just that pair's value).
    """

    method: str
    fixed_k: int
    mean_agreement_fixed: float
    mean_agreement_dynamic: float
    delta: float

    def __post_init__(self):
        expected = self.mean_agreement_dynamic - self.mean_agreement_fixed
        if abs(self.delta - expected) > 1e-12:
            raise ValueError("delta does not match dynamic - fixed")


@dataclass(frozen=True)
class BiasRow:
    """Mean agreement over all method pairs for one length bin and one k."""

    length_lo: int
    length_hi: int
    k: int
    mean_agreement: float
    n_instances: int

    @property
    def length_bin(self) -> str:
        return f"{self.length_lo}-{self.length_hi}"


@dataclass(frozen=True)
class TopKRow:
    """One (instance, method) selection record."""

    instance_id: str
    method: str
    k_spec: str
    k: int
    fallback_used: bool
    indices: tuple[int, ...]
    tokens: tuple[str, ...]


@dataclass
class AgreementReport:
    entries: list[PairAgreement]
    dynamic_k: dict[str, KStats] | None


# ---------------------------------------------------------------------------
# selector specs

def resolve_pairs(corpus: Corpus, selectors) -> list[tuple[str, str]]:
    """Expand a selector spec into concrete (a, b) pairs; b may be "human"."""
    kind = selectors[0]
    if kind == "all-pairs":
        methods = corpus.methods_sorted()
        if len(methods) < 2:
            raise CorpusError("all-pairs needs a corpus with at least two methods")
        return list(combinations(methods, 2))
    if kind == "pair":
        a, b = selectors[1], selectors[2]
        if a == b:
            raise CorpusError("a selector pair must name two different methods")
        _require_methods(corpus, [a, b])
        return [(a, b)]
    if kind == "human":
        method = selectors[1]
        if method is None:
            return [(m, HUMAN) for m in corpus.methods_sorted()]
        _require_methods(corpus, [method])
        return [(method, HUMAN)]
    raise ValueError(f"unknown selector spec {selectors!r}")


# ---------------------------------------------------------------------------
# per-instance scoring (parallelizable)

@dataclass(frozen=True)
class _ScoreConfig:
    pairs: tuple[tuple[str, str], ...]
    k_specs: tuple[KSpec, ...]
    combine: str
    tie_break: str
    seed: object
    use_abs: bool


def _score_instance(inst: AttributionInstance, cfg: _ScoreConfig) -> dict:
    methods = sorted({m for pair in cfg.pairs for m in pair if m != HUMAN})
    descs = [spec.describe() for spec in cfg.k_specs]
    sels = {}
    for m in methods:
        for spec, desc in zip(cfg.k_specs, descs):
            sels[(m, desc)] = method_selection(
                inst, m, spec, cfg.tie_break, cfg.seed, cfg.use_abs
            )
    scores: dict[tuple[str, str, str], float | None] = {}
    for a, b in cfg.pairs:
        for desc in descs:
            if b == HUMAN:
                if not inst.human_selections:
                    scores[(a, b, desc)] = None
                    continue
                try:
                    scores[(a, b, desc)] = instance_human_score(
                        inst, sels[(a, desc)], cfg.combine
                    )
                except UndefinedAgreementError:
                    scores[(a, b, desc)] = None
            else:
                rel = relevance(
                    [sels[(a, desc)].indices, sels[(b, desc)].indices], len(inst)
                )
                scores[(a, b, desc)] = agreement_sentence(rel)
    dynk = {}
    if "dynamic" in descs:
        dynk = {m: sels[(m, "dynamic")].k for m in methods}
    return {"n": len(inst), "scores": scores, "dynk": dynk}


def _map_instances(fn, instances, jobs: int):
    if jobs is None or jobs <= 1:
        return [fn(inst) for inst in instances]
    with multiprocessing.get_context().Pool(processes=jobs) as pool:
        chunk = max(1, len(instances) // (jobs * 4))
        return pool.map(fn, instances, chunksize=chunk)


def _reduce_pair(payloads, a: str, b: str, desc: str) -> tuple[float, int, int]:
    values = []
    skipped = 0
    for p in payloads:
        v = p["scores"][(a, b, desc)]
        if v is None:
            skipped += 1
        else:
            values.append(v)
    if not values:
        raise CorpusError(f"no scorable instances for selectors ({a}, {b})")
    return math.fsum(values) / len(values), len(values), skipped


def _dynamic_k_stats(payloads) -> dict[str, KStats]:
    methods = sorted(payloads[0]["dynk"]) if payloads else []
    return {m: _k_stats([p["dynk"][m] for p in payloads]) for m in methods}


# ---------------------------------------------------------------------------
# report builders

def agree_report(
    corpus: Corpus,
    k_specs: Sequence[KSpec],
    pairs: Sequence[tuple[str, str]],
    *,
    combine: str = "entities",
    tie_break: str = "earliest",
    seed=None,
    use_abs: bool = False,
    jobs: int = 1,
) -> AgreementReport:
    """Agreement entries for every (pair, k spec) combination."""
    if not corpus.instances:
        raise CorpusError("corpus has no instances")
    if not k_specs or not pairs:
        raise ValueError("agree_report needs at least one k spec and one pair")
    cfg = _ScoreConfig(tuple(pairs), tuple(k_specs), combine, tie_break, seed, use_abs)
    payloads = _map_instances(partial(_score_instance, cfg=cfg), corpus.instances, jobs)
    any_dynamic = any(spec.mode == "dynamic" for spec in k_specs)
    dyn_stats = _dynamic_k_stats(payloads) if any_dynamic else None
    entries = []
    for a, b in pairs:
        for spec in k_specs:
            desc = spec.describe()
            mean, n, skipped = _reduce_pair(payloads, a, b, desc)
            stats = None
            if spec.mode == "dynamic":
                stats = {a: dyn_stats[a]}
                if b != HUMAN:
                    stats[b] = dyn_stats[b]
            entries.append(PairAgreement(a, b, desc, mean, n, skipped, stats))
    return AgreementReport(entries, dyn_stats)


def delta_report(
    corpus: Corpus,
    fixed_ks: Sequence[int],
    selectors,
    *,
    combine: str = "entities",
    tie_break: str = "earliest",
    seed=None,
    use_abs: bool = False,
    jobs: int = 1,
) -> list[DeltaRow]:
    """Dynamic-over-fixed agreement deltas, one row per (method, fixed k)."""
    if not corpus.instances:
        raise CorpusError("corpus has no instances")
    ks = sorted(set(fixed_ks))
    if not ks:
        raise ValueError("delta_report needs at least one fixed k")
    pairs = resolve_pairs(corpus, selectors)
    methods = sorted({a for a, _ in pairs} | {b for _, b in pairs if b != HUMAN})
    counterparts: dict[str, list[str]] = {m: [] for m in methods}
    for a, b in pairs:
        counterparts[a].append(b)
        if b != HUMAN:
            counterparts[b].append(a)
    specs = tuple(KSpec.fixed(k) for k in ks) + (KSpec.dynamic(),)
    cfg = _ScoreConfig(tuple(pairs), specs, combine, tie_break, seed, use_abs)
    payloads = _map_instances(partial(_score_instance, cfg=cfg), corpus.instances, jobs)

    def pair_key(m: str, c: str) -> tuple[str, str]:
        if c == HUMAN:
            return (m, HUMAN)
        return (m, c) if (m, c) in set(pairs) else (c, m)

    means = {}
    for a, b in pairs:
        for spec in specs:
            desc = spec.describe()
            means[(a, b, desc)], _, _ = _reduce_pair(payloads, a, b, desc)

    rows = []
    for m in methods:
        cps = sorted(counterparts[m])
        dyn = math.fsum(means[pair_key(m, c) + ("dynamic",)] for c in cps)
        for k in ks:
            fixed = math.fsum(means[pair_key(m, c) + (f"fixed:{k}",)] for c in cps)
            rows.append(DeltaRow(m, k, fixed, dyn, dyn - fixed))
    return rows


def quantile_bins(lengths: Sequence[int], q: int) -> list[tuple[int, int]]:
    """Cut the observed lengths into up to q quantile bins (never empty)."""
    if q < 1:
        raise ValueError("quantile bin count must be >= 1")
    lo, hi = min(lengths), max(lengths)
    cuts = {int(np.quantile(sorted(lengths), i / q, method="lower")) for i in range(1, q)}
    uppers = sorted(v for v in cuts if lo <= v < hi) + [hi]
    bins = []
    start = lo
    for u in uppers:
        bins.append((start, u))
        start = u + 1
    return bins


def _assign_bins(lengths: Sequence[int], bins: Sequence[tuple[int, int]]) -> list[int]:
    for lo, hi in bins:
        if lo > hi:
            raise ValueError(f"invalid length bin {lo}-{hi}")
    assignment = []
    for n in lengths:
        hits = [i for i, (lo, hi) in enumerate(bins) if lo <= n <= hi]
        if len(hits) != 1:
            raise CorpusError(
                f"sentence length {n} falls in {len(hits)} bins; "
                "bins must cover every observed length exactly once"
            )
        assignment.append(hits[0])
    for i, (lo, hi) in enumerate(bins):
        if i not in assignment:
            raise CorpusError(f"length bin {lo}-{hi} contains no instances")
    return assignment


def bias_report(
    corpus: Corpus,
    bins,
    k_values: Sequence[int],
    *,
    tie_break: str = "earliest",
    seed=None,
    use_abs: bool = False,
    jobs: int = 1,
) -> list[BiasRow]:
    """Mean agreement over all method pairs per (length bin, fixed k).

    ``bins`` is ("quantile", q) or ("explicit", ((lo, hi), ...)).
    """
    if not corpus.instances:
        raise CorpusError("corpus has no instances")
    ks = sorted(set(k_values))
    if not ks:
        raise ValueError("bias_report needs at least one k value")
    lengths = [len(inst) for inst in corpus.instances]
    if bins[0] == "quantile":
        resolved = quantile_bins(lengths, bins[1])
    elif bins[0] == "explicit":
        resolved = [(int(lo), int(hi)) for lo, hi in bins[1]]
    else:
        raise ValueError(f"unknown bin spec {bins!r}")
    assignment = _assign_bins(lengths, resolved)

    pairs = resolve_pairs(corpus, ALL_PAIRS)
    specs = tuple(KSpec.fixed(k) for k in ks)
    cfg = _ScoreConfig(tuple(pairs), specs, "entities", tie_break, seed, use_abs)
    payloads = _map_instances(partial(_score_instance, cfg=cfg), corpus.instances, jobs)

    rows = []
    for b, (lo, hi) in enumerate(resolved):
        members = [p for p, bin_idx in zip(payloads, assignment) if bin_idx == b]
        for k in ks:
            desc = f"fixed:{k}"
            values = [p["scores"][(x, y, desc)] for p in members for x, y in pairs]
            mean = math.fsum(values) / len(values)
            rows.append(BiasRow(lo, hi, k, mean, len(members)))
    return rows


def _topk_instance(inst: AttributionInstance, cfg: _ScoreConfig) -> list[TopKRow]:
    rows = []
    spec = cfg.k_specs[0]
    for m in sorted(inst.attributions):
        sel = method_selection(inst, m, spec, cfg.tie_break, cfg.seed, cfg.use_abs)
        idx = tuple(sel.sorted_indices())
        rows.append(
            TopKRow(
                inst.instance_id, m, spec.describe(), sel.k, sel.fallback_used,
                idx, tuple(inst.tokens[i] for i in idx),
            )
        )
    return rows


def topk_report(
    corpus: Corpus,
    k_spec: KSpec,
    *,
    tie_break: str = "earliest",
    seed=None,
    use_abs: bool = False,
    jobs: int = 1,
) -> list[TopKRow]:
    """Per-(instance, method) selection records in corpus order."""
    if not corpus.instances:
        raise CorpusError("corpus has no instances")
    cfg = _ScoreConfig((), (k_spec,), "entities", tie_break, seed, use_abs)
    chunks = _map_instances(partial(_topk_instance, cfg=cfg), corpus.instances, jobs)
    return [row for chunk in chunks for row in chunk]


def check_runs_aligned(runs: Sequence[tuple[str, Corpus]]) -> None:
    """Reject run corpora whose instances, methods, or token counts differ."""
    ids = [rid for rid, _ in runs]
    if len(set(ids)) != len(ids):
        raise CorpusError("run ids must be unique")
    base_id, base = runs[0]
    base_ids = [inst.instance_id for inst in base.instances]
    for rid, corpus in runs[1:]:
        inst_ids = [inst.instance_id for inst in corpus.instances]
        if inst_ids != base_ids:
            raise CorpusError(
                f"run {rid!r}: instance ids differ from run {base_id!r}"
            )
        if corpus.method_names != base.method_names:
            raise CorpusError(
                f"run {rid!r}: methods {sorted(corpus.method_names)} differ from "
                f"run {base_id!r} methods {sorted(base.method_names)}"
            )
        for a, b in zip(base.instances, corpus.instances):
            if len(a) != len(b):
                raise CorpusError(
                    f"run {rid!r}: instance {b.instance_id!r} has {len(b)} tokens, "
                    f"run {base_id!r} has {len(a)}"
                )


def apd_report(runs: Sequence[tuple[str, Corpus]]) -> tuple[dict[str, float], str]:
    """APD score per run (input order) and the selected lowest-APD run."""
    if len(runs) < 2:
        raise CorpusError("apd needs at least two run corpora")
    check_runs_aligned(runs)
    matrices = [build_run_matrix(corpus, rid) for rid, corpus in runs]
    return apd_select(matrices)


# ---------------------------------------------------------------------------
# deterministic emission

def format_float(x: float) -> str:
    return f"{x:.6f}"


def round6(x: float) -> float:
    return round(x, 6)


def file_sha256(path) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


AGREE_HEADER = (
    "selector_a", "selector_b", "k_spec", "mean_agreement", "n_instances",
    "n_skipped", "dyn_k_mean_a", "dyn_k_sd_a", "dyn_k_mean_b", "dyn_k_sd_b",
)


def agree_csv_rows(entries: Sequence[PairAgreement]) -> list[list[str]]:
    rows = []
    for e in entries:
        dyn = ["", "", "", ""]
        if e.dynamic_k is not None:
            stats_a = e.dynamic_k.get(e.selector_a)
            if stats_a is not None:
                dyn[0], dyn[1] = format_float(stats_a.mean), format_float(stats_a.sd)
            stats_b = e.dynamic_k.get(e.selector_b)
            if stats_b is not None:
                dyn[2], dyn[3] = format_float(stats_b.mean), format_float(stats_b.sd)
        rows.append(
            [e.selector_a, e.selector_b, e.k_spec, format_float(e.mean_agreement),
             str(e.n_instances), str(e.n_skipped), *dyn]
        )
    return rows


def agree_json_rows(entries: Sequence[PairAgreement]) -> list[dict]:
    rows = []
    for e in entries:
        row = {
            "selector_a": e.selector_a,
            "selector_b": e.selector_b,
            "k_spec": e.k_spec,
            "mean_agreement": round6(e.mean_agreement),
            "n_instances": e.n_instances,
            "n_skipped": e.n_skipped,
        }
        if e.dynamic_k is not None:
            row["dynamic_k"] = {
                m: {"mean": round6(s.mean), "sd": round6(s.sd)}
                for m, s in sorted(e.dynamic_k.items())
            }
        rows.append(row)
    return rows


DELTA_HEADER = ("method", "fixed_k", "mean_agreement_fixed", "mean_agreement_dynamic", "delta")


def delta_csv_rows(rows: Sequence[DeltaRow]) -> list[list[str]]:
    out = []
    for r in rows:
        fixed_cell = format_float(r.mean_agreement_fixed)
        dyn_cell = format_float(r.mean_agreement_dynamic)
        # delta is emitted from the rounded cells so every emitted row is
        # exactly recomputable from the other two columns
        delta_cell = format_float(float(dyn_cell) - float(fixed_cell))
        out.append([r.method, str(r.fixed_k), fixed_cell, dyn_cell, delta_cell])
    return out


def delta_json_rows(rows: Sequence[DeltaRow]) -> list[dict]:
    out = []
    for r in rows:
        fixed6 = round6(r.mean_agreement_fixed)
        dyn6 = round6(r.mean_agreement_dynamic)
        out.append(
            {
                "method": r.method,
                "fixed_k": r.fixed_k,
                "mean_agreement_fixed": fixed6,
                "mean_agreement_dynamic": dyn6,
                "delta": round6(dyn6 - fixed6),
            }
        )
    return out


BIAS_HEADER = ("length_bin", "k", "mean_agreement", "n_instances")


def bias_csv_rows(rows: Sequence[BiasRow]) -> list[list[str]]:
    return [
        [r.length_bin, str(r.k), format_float(r.mean_agreement), str(r.n_instances)]
        for r in rows
    ]


def bias_json_rows(rows: Sequence[BiasRow]) -> list[dict]:
    return [
        {
            "length_bin": r.length_bin,
            "length_lo": r.length_lo,
            "length_hi": r.length_hi,
            "k": r.k,
            "mean_agreement": round6(r.mean_agreement),
            "n_instances": r.n_instances,
        }
        for r in rows
    ]


TOPK_HEADER = ("instance_id", "method", "k_spec", "k", "fallback_used", "indices", "tokens")


def topk_csv_rows(rows: Sequence[TopKRow]) -> list[list[str]]:
    return [
        [r.instance_id, r.method, r.k_spec, str(r.k),
         "true" if r.fallback_used else "false",
         " ".join(str(i) for i in r.indices), " ".join(r.tokens)]
        for r in rows
    ]


def topk_json_rows(rows: Sequence[TopKRow]) -> list[dict]:
    return [
        {
            "instance_id": r.instance_id,
            "method": r.method,
            "k_spec": r.k_spec,
            "k": r.k,
            "fallback_used": r.fallback_used,
            "indices": list(r.indices),
            "tokens": list(r.tokens),
        }
        for r in rows
    ]


APD_HEADER = ("run_id", "apd", "selected")


def apd_csv_rows(scores: dict[str, float], selected: str) -> list[list[str]]:
    return [
        [rid, format_float(apd), "true" if rid == selected else "false"]
        for rid, apd in scores.items()
    ]


def apd_json_rows(scores: dict[str, float], selected: str) -> list[dict]:
    return [
        {"run_id": rid, "apd": round6(apd), "selected": rid == selected}
        for rid, apd in scores.items()
    ]
