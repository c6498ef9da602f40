"""End-to-end acceptance gate.

Each test here is one release criterion; the conftest hook prints a
one-line PASS/FAIL verdict per criterion after the run.  Tolerances and
input sizes are part of the criteria and must not be loosened.
"""

import dataclasses
import math
import time

import numpy as np
import pytest

from topkagree import (
    KSpec,
    detect_peaks,
    dynamic_topk,
    fixed_topk,
    make_corpus,
    make_instance,
    average_difference,
    RunMatrix,
    apd_select,
    relevance,
    agreement_sentence,
    agreement_dataset,
    method_human_agreement,
    method_pair_agreement,
    save_corpus,
    synthetic_corpus,
)
from topkagree.cli import main

import _oracles


@pytest.mark.criterion("peak detection matches the per-index oracle (1000 vectors, < 1 s)")
def test_peak_detection_oracle_equivalence():
    rng = np.random.default_rng(2024)
    cases = []
    for i in range(1000):
        n = int(rng.integers(1, 51))
        if i % 2:
            scores = rng.normal(size=n)
        else:
            # lattice draws produce ties and plateaus
            scores = rng.integers(-32, 33, size=n) / 16.0
        cases.append(scores)
    start = time.perf_counter()
    for scores in cases:
        assert detect_peaks(scores) == _oracles.peak_indices(scores)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"peak sweep took {elapsed:.3f}s"


@pytest.mark.criterion("worked examples reproduce at 1e-12")
def test_worked_examples():
    assert detect_peaks([0.1, 0.5, 0.2, 0.7, 0.3]) == {1, 3}

    rel = relevance([{1, 3}, {1, 2}], 5)
    assert rel.values == (0.0, 1.0, 0.5, 0.5, 0.0)
    assert agreement_sentence(rel) == pytest.approx(2 / 3, abs=1e-12)

    # one method's top-2 {0,2} against 3 annotators with column counts [2,1,0,0]
    inst = make_instance(
        "h", ["w"] * 4,
        {"m": [0.9, 0.1, 0.8, 0.0]},
        human_selections=[[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]],
    )
    corpus = make_corpus([inst])
    entities = method_human_agreement(corpus, "m", KSpec.fixed(2), "entities")
    assert entities.mean_agreement == pytest.approx(5 / 12, abs=1e-12)
    averaged = method_human_agreement(corpus, "m", KSpec.fixed(2), "average")
    assert averaged.mean_agreement == pytest.approx(0.5, abs=1e-12)

    t1 = RunMatrix("a", np.array([[0.0, 1.0]]))
    t2 = RunMatrix("b", np.array([[1.0, 1.0]]))
    assert average_difference(t1, t2) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.criterion("selection invariance under monotone / positive-affine maps (1000 pairs)")
def test_selection_invariance_suite():
    rng = np.random.default_rng(77)
    monotone = (np.exp, lambda x: x**3, np.arctan, lambda x: 2.0 * x, lambda x: x + 3.0)
    failures = 0
    for i in range(1000):
        n = int(rng.integers(1, 40))
        # dyadic lattice keeps the transformed arithmetic exact enough that
        # ties map to ties and strict orderings survive the transform
        scores = rng.integers(-400, 401, size=n) / 16.0
        k = int(rng.integers(1, n + 1))

        f = monotone[i % len(monotone)]
        if fixed_topk(f(scores), k).indices != fixed_topk(scores, k).indices:
            failures += 1

        a = float(rng.integers(1, 17)) / 8.0
        b = float(rng.integers(-40, 41)) / 8.0
        if dynamic_topk(a * scores + b).indices != dynamic_topk(scores).indices:
            failures += 1
    assert failures == 0


@pytest.mark.criterion("fixed k at max sentence length saturates agreement to exactly 1.0")
def test_saturation_property():
    corpus = synthetic_corpus(n_instances=60, n_methods=4, seed=5)
    top = corpus.max_length()
    methods = corpus.methods_sorted()
    for i, a in enumerate(methods):
        for b in methods[i + 1:]:
            entry = method_pair_agreement(corpus, a, b, KSpec.fixed(top))
            assert entry.mean_agreement == 1.0


@pytest.mark.criterion("agreement metrics match the direct-summation oracle at 1e-12")
def test_agreement_oracle_equivalence():
    rng = np.random.default_rng(404)
    dataset_scores_impl = []
    dataset_scores_oracle = []
    for _ in range(1000):
        n = int(rng.integers(1, 11))
        m = int(rng.integers(1, 5))
        selections = [
            set(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())
            for _ in range(m)
        ]
        rel = relevance(selections, n)
        expected_values = _oracles.relevance_values(selections, n)
        assert list(rel.values) == expected_values

        impl = agreement_sentence(rel)
        oracle = _oracles.sentence_agreement(expected_values)
        assert impl == pytest.approx(oracle, abs=1e-12)
        dataset_scores_impl.append(impl)
        dataset_scores_oracle.append(oracle)
    assert agreement_dataset(dataset_scores_impl) == pytest.approx(
        _oracles.dataset_agreement(dataset_scores_oracle), abs=1e-12
    )


@pytest.mark.criterion("run selection matches the pairwise oracle; distance axioms hold")
def test_run_selection_correctness():
    rng = np.random.default_rng(808)
    runs = [RunMatrix(f"run_{i}", rng.normal(size=(40, 6))) for i in range(10)]
    scores, selected = apd_select(runs)
    expected = _oracles.apd_scores([(r.run_id, r.matrix.tolist()) for r in runs])
    for rid in expected:
        assert scores[rid] == pytest.approx(expected[rid], abs=1e-12)
    assert selected == min(expected, key=lambda r: (expected[r], r))

    for _ in range(100):
        shape = (int(rng.integers(1, 7)), int(rng.integers(1, 5)))
        a, b, c = (
            RunMatrix(name, rng.integers(-64, 65, size=shape) / 32.0)
            for name in ("a", "b", "c")
        )
        assert average_difference(a, b) == average_difference(b, a)
        assert average_difference(a, a) == 0.0
        assert average_difference(a, c) <= (
            average_difference(a, b) + average_difference(b, c) + 1e-12
        )


@pytest.fixture(scope="module")
def big_corpus_path(tmp_path_factory):
    root = tmp_path_factory.mktemp("determinism")
    path = root / "corpus.jsonl"
    save_corpus(
        synthetic_corpus(n_instances=1000, n_methods=6, seed=314, annotated_fraction=0.9),
        path,
    )
    return path


@pytest.fixture(scope="module")
def run_paths(big_corpus_path, tmp_path_factory):
    root = tmp_path_factory.mktemp("runs")
    from topkagree import load_corpus

    base = load_corpus(big_corpus_path)
    paths = []
    for r in range(3):
        rng = np.random.default_rng(1000 + r)
        insts = [
            dataclasses.replace(
                inst,
                attributions={
                    m: tuple(np.asarray(v) + rng.normal(0.0, 0.01, len(v)))
                    for m, v in inst.attributions.items()
                },
            )
            for inst in base.instances
        ]
        path = root / f"run_{r}.jsonl"
        save_corpus(make_corpus(insts), path)
        paths.append(path)
    return paths


@pytest.mark.criterion("reports are byte-identical across runs and worker counts (< 10 s)")
def test_report_determinism(big_corpus_path, run_paths, tmp_path):
    commands = {
        "agree": ["agree", "--input", str(big_corpus_path), "--k", "dynamic"],
        "delta": ["delta", "--input", str(big_corpus_path), "--ks", "1,2,3"],
        "bias": ["bias", "--input", str(big_corpus_path), "--bins", "quantile:5",
                 "--ks", "2,5"],
        "apd": ["apd"] + [arg for p in run_paths for arg in ("--input", str(p))],
    }
    start = time.perf_counter()
    for name, argv in commands.items():
        outputs = []
        for attempt, jobs in enumerate(("1", "1", "8")):
            out = tmp_path / f"{name}_{attempt}.csv"
            rc = main(argv + ["--output", str(out), "--jobs", jobs])
            assert rc == 0
            outputs.append(out.read_bytes() + out.with_suffix(".json").read_bytes())
        assert outputs[0] == outputs[1] == outputs[2], f"{name} output varies"
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"determinism sweep took {elapsed:.2f}s"


@pytest.mark.criterion("delta pipeline reproduces a hand-computed table exactly")
def test_delta_pipeline_fixture(tmp_path):
    # every selection below is small enough to enumerate by hand
    corpus = make_corpus(
        [
            make_instance("a", ["w"] * 5, {
                "m1": [0.1, 0.9, 0.2, 0.8, 0.1],   # peaks {1,3}; top1 {1}; top2 {1,3}
                "m2": [0.9, 0.1, 0.8, 0.1, 0.0],   # peak {2}; top1 {0}; top2 {0,2}
            }),
            make_instance("b", ["w"] * 4, {
                "m1": [0.2, 0.7, 0.1, 0.0],        # peak {1}; top1 {1}; top2 {0,1}
                "m2": [0.0, 0.6, 0.2, 0.1],        # peak {1}; top1 {1}; top2 {1,2}
            }),
        ]
    )
    path = tmp_path / "fixture.jsonl"
    save_corpus(corpus, path)
    out = tmp_path / "delta.csv"
    rc = main(["delta", "--input", str(path), "--output", str(out), "--ks", "1,2"])
    assert rc == 0

    # hand-computed dataset agreements:
    #   dynamic:  instance a -> 0.5, instance b -> 1.0   mean 0.75
    #   fixed:1   instance a -> 0.5, instance b -> 1.0   mean 0.75
    #   fixed:2   instance a -> 0.5, instance b -> 2/3   mean 7/12
    dyn = _oracles.dataset_agreement([0.5, 1.0])
    fixed1 = _oracles.dataset_agreement([0.5, 1.0])
    fixed2 = _oracles.dataset_agreement([0.5, 2 / 3])

    from topkagree.reports import delta_report

    rows = delta_report(corpus, [1, 2], ("all-pairs",))
    assert [(r.method, r.fixed_k) for r in rows] == [
        ("m1", 1), ("m1", 2), ("m2", 1), ("m2", 2),
    ]
    for row in rows:
        expected_fixed = fixed1 if row.fixed_k == 1 else fixed2
        assert row.mean_agreement_fixed == expected_fixed
        assert row.mean_agreement_dynamic == dyn
        assert row.delta == dyn - expected_fixed

    # the emitted file must be recomputable from its own rounded cells
    lines = out.read_text().splitlines()
    assert lines[0] == "method,fixed_k,mean_agreement_fixed,mean_agreement_dynamic,delta"
    for line in lines[1:]:
        _, _, fixed_cell, dyn_cell, delta_cell = line.split(",")
        assert f"{float(dyn_cell) - float(fixed_cell):.6f}" == delta_cell
    assert lines[1].endswith("0.000000")      # k=1 delta is exactly zero
    assert lines[2].endswith("0.166667")      # k=2 delta is 1/6
