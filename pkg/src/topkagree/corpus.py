"""Domain types and line-delimited corpus ingestion.

A corpus file is UTF-8 JSON-lines, one instance per line:

    {"id": "...", "tokens": [...], "attributions": {"method": [...]},
     "human": [[0,1,...], ...], "gold_label": "...", "predicted_label": "..."}

``human``, ``gold_label`` and ``predicted_label`` are optional.  Every score
vector and every annotator vector must have exactly one entry per token.
"""

from __future__ import annotations

import dataclasses
import json
import math
import string
from dataclasses import dataclass, field
from typing import AbstractSet, Iterable, Mapping, Sequence

#: Tokens treated as punctuation when zeroing human annotations: every ASCII
#: punctuation character as a single-character token.
DEFAULT_PUNCTUATION = frozenset(string.punctuation)

_RECORD_FIELDS = frozenset(
    {"id", "tokens", "attributions", "human", "gold_label", "predicted_label"}
)


class CorpusError(ValueError):
    """A corpus or instance violates a structural invariant."""


class RecordError(CorpusError):
    """A single corpus-file line could not be parsed or validated."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class AttributionInstance:
    """One sentence with per-method score vectors and optional human annotations.

    ``attributions`` maps method name to a score vector of the same length as
    ``tokens``; ``human_selections`` holds one binary vector per annotator.
    Instances are immutable and safe to share between threads.
    """

    instance_id: str
    tokens: tuple[str, ...]
    attributions: Mapping[str, tuple[float, ...]]
    human_selections: tuple[tuple[int, ...], ...] | None = None
    gold_label: str | None = None
    predicted_label: str | None = None

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def n_annotators(self) -> int:
        return len(self.human_selections) if self.human_selections else 0


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of instances sharing one method-name set."""

    instances: tuple[AttributionInstance, ...]
    method_names: frozenset[str]
    skipped: int = field(default=0, compare=False)

    def __len__(self) -> int:
        return len(self.instances)

    def methods_sorted(self) -> list[str]:
        return sorted(self.method_names)

    def max_length(self) -> int:
        if not self.instances:
            raise CorpusError("corpus has no instances")
        return max(len(inst) for inst in self.instances)


@dataclass(frozen=True)
class KSpec:
    """How many tokens to select: a fixed count or profile-driven (dynamic)."""

    mode: str
    k: int | None = None

    def __post_init__(self):
        if self.mode == "fixed":
            if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 1:
                raise ValueError(f"fixed k must be a positive integer, got {self.k!r}")
        elif self.mode == "dynamic":
            if self.k is not None:
                raise ValueError("dynamic mode takes no k")
        else:
            raise ValueError(f"unknown k mode {self.mode!r}")

    @classmethod
    def fixed(cls, k: int) -> "KSpec":
        return cls("fixed", k)

    @classmethod
    def dynamic(cls) -> "KSpec":
        return cls("dynamic")

    @classmethod
    def parse(cls, text: str) -> "KSpec":
        """Parse ``"dynamic"`` or ``"fixed:N"``."""
        if text == "dynamic":
            return cls.dynamic()
        if text.startswith("fixed:"):
            raw = text[len("fixed:"):]
            try:
                return cls.fixed(int(raw))
            except ValueError:
                raise ValueError(f"invalid fixed k {raw!r}") from None
        raise ValueError(f"invalid k spec {text!r} (expected 'dynamic' or 'fixed:N')")

    def describe(self) -> str:
        return "dynamic" if self.mode == "dynamic" else f"fixed:{self.k}"


def make_instance(
    instance_id: str,
    tokens: Sequence[str],
    attributions: Mapping[str, Sequence[float]],
    human_selections: Sequence[Sequence[int]] | None = None,
    gold_label: str | None = None,
    predicted_label: str | None = None,
) -> AttributionInstance:
    """Normalize and validate one instance; raises CorpusError on violation."""
    if not isinstance(instance_id, str):
        raise CorpusError(f"instance_id must be a string, got {type(instance_id).__name__}")
    ident = instance_id or "<unnamed>"

    if not isinstance(tokens, (list, tuple)) or len(tokens) == 0:
        raise CorpusError(f"instance {ident!r}: tokens must be a non-empty list")
    if not all(isinstance(t, str) for t in tokens):
        raise CorpusError(f"instance {ident!r}: tokens must all be strings")
    n = len(tokens)

    if not isinstance(attributions, Mapping):
        raise CorpusError(f"instance {ident!r}: attributions must be a mapping")
    scores: dict[str, tuple[float, ...]] = {}
    for name, vec in attributions.items():
        if not isinstance(name, str) or not name:
            raise CorpusError(f"instance {ident!r}: method names must be non-empty strings")
        vals = _check_vector(vec, n, ident, f"attributions[{name!r}]")
        scores[name] = vals

    human: tuple[tuple[int, ...], ...] | None = None
    if human_selections is not None:
        rows = []
        for a, vec in enumerate(human_selections):
            vals = _check_vector(vec, n, ident, f"human[{a}]")
            row = []
            for v in vals:
                if v not in (0.0, 1.0):
                    raise CorpusError(
                        f"instance {ident!r}: human[{a}] must contain only 0 or 1, got {v!r}"
                    )
                row.append(int(v))
            rows.append(tuple(row))
        human = tuple(rows)

    for label, which in ((gold_label, "gold_label"), (predicted_label, "predicted_label")):
        if label is not None and not isinstance(label, str):
            raise CorpusError(f"instance {ident!r}: {which} must be a string")

    return AttributionInstance(
        instance_id=instance_id,
        tokens=tuple(tokens),
        attributions=scores,
        human_selections=human,
        gold_label=gold_label,
        predicted_label=predicted_label,
    )


def _check_vector(vec, n: int, ident: str, field_name: str) -> tuple[float, ...]:
    if not isinstance(vec, (list, tuple)):
        raise CorpusError(f"instance {ident!r}: {field_name} must be a list")
    if len(vec) != n:
        raise CorpusError(
            f"instance {ident!r}: {field_name} has length {len(vec)}, expected {n} tokens"
        )
    out = []
    for v in vec:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise CorpusError(f"instance {ident!r}: {field_name} has non-numeric entry {v!r}")
        f = float(v)
        if not math.isfinite(f):
            raise CorpusError(f"instance {ident!r}: {field_name} has non-finite entry {v!r}")
        out.append(f)
    return tuple(out)


def make_corpus(instances: Iterable[AttributionInstance], skipped: int = 0) -> Corpus:
    """Assemble a Corpus, enforcing unique ids and a consistent method set."""
    insts = tuple(instances)
    seen: dict[str, int] = {}
    method_set: frozenset[str] | None = None
    for pos, inst in enumerate(insts):
        if inst.instance_id in seen:
            raise CorpusError(f"duplicate instance_id {inst.instance_id!r}")
        seen[inst.instance_id] = pos
        methods = frozenset(inst.attributions)
        if method_set is None:
            method_set = methods
        elif methods != method_set:
            raise CorpusError(
                f"instance {inst.instance_id!r}: method set {sorted(methods)} differs "
                f"from corpus method set {sorted(method_set)}"
            )
    return Corpus(insts, method_set if method_set is not None else frozenset(), skipped)


def _parse_record(line: str, line_no: int) -> AttributionInstance:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise RecordError(line_no, f"invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise RecordError(line_no, "record must be a JSON object")
    unknown = set(obj) - _RECORD_FIELDS
    if unknown:
        raise RecordError(line_no, f"unexpected fields {sorted(unknown)}")
    missing = {"id", "tokens", "attributions"} - set(obj)
    if missing:
        raise RecordError(line_no, f"missing required fields {sorted(missing)}")
    try:
        return make_instance(
            instance_id=obj["id"],
            tokens=obj["tokens"],
            attributions=obj["attributions"],
            human_selections=obj.get("human"),
            gold_label=obj.get("gold_label"),
            predicted_label=obj.get("predicted_label"),
        )
    except CorpusError as exc:
        raise RecordError(line_no, str(exc)) from None


def load_corpus(path, strict: bool = True) -> Corpus:
    """Load a JSON-lines corpus file.

    In strict mode (the default) any invariant violation aborts with a
    CorpusError naming the offending line.  In lenient mode offending
    records are skipped and counted in ``Corpus.skipped``.
    """
    instances: list[AttributionInstance] = []
    skipped = 0
    seen: dict[str, int] = {}
    method_set: frozenset[str] | None = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                inst = _parse_record(line, line_no)
                if inst.instance_id in seen:
                    raise RecordError(
                        line_no,
                        f"duplicate instance_id {inst.instance_id!r} "
                        f"(first seen on line {seen[inst.instance_id]})",
                    )
                methods = frozenset(inst.attributions)
                if method_set is None:
                    method_set = methods
                elif methods != method_set:
                    raise RecordError(
                        line_no,
                        f"instance {inst.instance_id!r}: method set {sorted(methods)} "
                        f"differs from corpus method set {sorted(method_set)}",
                    )
            except CorpusError:
                if strict:
                    raise
                skipped += 1
                continue
            seen[inst.instance_id] = line_no
            instances.append(inst)
    return Corpus(tuple(instances), method_set if method_set is not None else frozenset(), skipped)


def save_corpus(corpus: Corpus, path) -> None:
    """Write a corpus in the JSON-lines format accepted by load_corpus."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for inst in corpus.instances:
            obj: dict = {
                "id": inst.instance_id,
                "tokens": list(inst.tokens),
                "attributions": {
                    name: list(inst.attributions[name]) for name in sorted(inst.attributions)
                },
            }
            if inst.human_selections is not None:
                obj["human"] = [list(row) for row in inst.human_selections]
            if inst.gold_label is not None:
                obj["gold_label"] = inst.gold_label
            if inst.predicted_label is not None:
                obj["predicted_label"] = inst.predicted_label
            fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")


def zero_punctuation(
    instance: AttributionInstance,
    punctuation: AbstractSet[str] = DEFAULT_PUNCTUATION,
) -> AttributionInstance:
    """Force annotator entries on punctuation tokens to 0.

    Attribution scores are untouched.  Instances without human annotations,
    and calls with an empty punctuation set, return the instance unchanged.
    """
    if not instance.human_selections or not punctuation:
        return instance
    positions = [i for i, tok in enumerate(instance.tokens) if tok in punctuation]
    if not positions:
        return instance
    pos = set(positions)
    zeroed = tuple(
        tuple(0 if i in pos else v for i, v in enumerate(row))
        for row in instance.human_selections
    )
    if zeroed == instance.human_selections:
        return instance
    return dataclasses.replace(instance, human_selections=zeroed)
