"""Acceptance gate: ten end-to-end checks, one printed verdict line each.

Run with ``pytest -s tests/test_acceptance.py`` to see the verdict lines.
"""

import json
import time

import numpy as np
import pytest

from tsetlin import data as dm
from tsetlin.automaton import Action, TsetlinAutomaton
from tsetlin.binarizer import encode_categorical, encode_continuous
from tsetlin.clause import Clause, Mode
from tsetlin.cli import EXIT_OK, main as cli_main
from tsetlin.evaluation import holdout_evaluate
from tsetlin.explain import clause_to_rule
from tsetlin.machine import (
    type_i_activation_prob,
    type_ii_activation_prob,
    type_ii_feedback,
    _apply_type_i,
)
from tsetlin.pipeline import ModelConfig, fit_pipeline


def verdict(number: int, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"criterion {number:2d} [{name}]: {status}{suffix}")
    assert ok, f"criterion {number} failed: {name} {suffix}"


ARTIFICIAL_CONFIG = ModelConfig(
    clauses=4, states_per_action=100, threshold=1, s=8.0, epochs=25,
    categorical=("x1", "x2"),
)


def fit_artificial(seed: int):
    rng = np.random.default_rng(1000 + seed)
    train = dm.generate_artificial(rng, 250, positive_fraction=1 / 9)
    test = dm.generate_artificial(rng, 200, positive_fraction=1 / 9)
    pipeline, _ = fit_pipeline(train, ARTIFICIAL_CONFIG, seed)
    return pipeline, test


def test_criterion_1_artificial_reproduction():
    start = time.perf_counter()
    accuracies = []
    for seed in range(10):
        pipeline, test = fit_artificial(seed)
        accuracies.append(holdout_evaluate(pipeline, test)["accuracy"])
    elapsed = time.perf_counter() - start
    ok = max(accuracies) == 1.0 and np.mean(accuracies) >= 0.98 and elapsed < 10.0
    verdict(
        1, "artificial 100% accuracy", ok,
        f"best={max(accuracies):.3f} mean={np.mean(accuracies):.3f} "
        f"time={elapsed:.1f}s",
    )


def test_criterion_2_binarizer_goldens():
    thresholds = (3.834, 5.779, 10.008)
    continuous = [
        "".join(map(str, encode_continuous(v, thresholds)))
        for v in (5.779, 10.008, 5.779, 3.834)
    ]
    sample = "".join(
        map(str, np.concatenate([
            encode_categorical(3, (0, 1, 2, 3, 4)),
            encode_categorical(5, (0, 1, 2, 3, 4, 5)),
        ]))
    )
    ok = continuous == ["011", "001", "011", "111"] and sample == "00010000001"
    verdict(2, "binarizer goldens", ok, f"{continuous} {sample}")


def test_criterion_3_activation_formulas():
    ok = True
    for t in (1, 5, 15):
        for v in range(-2 * t, 2 * t + 1):
            clamped = max(-t, min(t, v))
            p1 = type_i_activation_prob(v, t)
            p2 = type_ii_activation_prob(v, t)
            ok &= abs(p1 - (t - clamped) / (2 * t)) <= 1e-12
            ok &= abs(p2 - (t + clamped) / (2 * t)) <= 1e-12
            ok &= abs(p1 + p2 - 1.0) <= 1e-12
        ok &= type_i_activation_prob(t, t) == 0.0
        ok &= type_i_activation_prob(-t, t) == 1.0
        ok &= type_ii_activation_prob(t, t) == 1.0
        ok &= type_ii_activation_prob(-t, t) == 0.0
    verdict(3, "activation probabilities", ok)


def _type_i_cell_frequencies(states_row, litb, out, draws, s=8.0, n=100):
    """Empirical (reward, penalty) frequency per TA over independent draws."""
    rng = np.random.default_rng(12345)
    states = np.tile(np.asarray(states_row, dtype=np.int32), (draws, 1))
    before = states.copy()
    _apply_type_i(
        states, np.asarray(litb, dtype=bool),
        np.full(draws, out, dtype=bool), np.ones(draws, dtype=bool),
        s, n, rng,
    )
    delta = states - before
    include = np.asarray(states_row) > n
    # Reward deepens: +1 on the include side, -1 on the exclude side.
    deeper = np.where(include, 1, -1)
    reward = (delta == deeper).mean(axis=0)
    penalty = (delta == -deeper).mean(axis=0)
    return reward, penalty


def test_criterion_4_feedback_frequency_table():
    s, draws, tol = 8.0, 100_000, 0.005
    hi, lo = (s - 1) / s, 1 / s
    ok = True
    details = []

    # Clause "x1" on X=[1,0]: output 1; literals [1, 0, 0, 1].
    reward, penalty = _type_i_cell_frequencies(
        [105, 95, 95, 95], [True, False, False, True], True, draws
    )
    for idx, (r_exp, p_exp) in enumerate(
        [(hi, 0.0), (lo, 0.0), (lo, 0.0), (0.0, hi)]
    ):
        ok &= abs(reward[idx] - r_exp) <= (tol if r_exp else 0.0)
        ok &= abs(penalty[idx] - p_exp) <= (tol if p_exp else 0.0)
    details.append(f"out=1 reward={np.round(reward, 3).tolist()}")

    # Same clause on X=[0,1]: output 0; literals [0, 1, 1, 0].
    reward, penalty = _type_i_cell_frequencies(
        [105, 95, 95, 95], [False, True, True, False], False, draws
    )
    for idx, (r_exp, p_exp) in enumerate(
        [(0.0, lo), (lo, 0.0), (lo, 0.0), (lo, 0.0)]
    ):
        ok &= abs(reward[idx] - r_exp) <= (tol if r_exp else 0.0)
        ok &= abs(penalty[idx] - p_exp) <= (tol if p_exp else 0.0)
    details.append(f"out=0 reward={np.round(reward, 3).tolist()}")

    # Type II on clause output 1: the excluded zero literal is penalized in
    # 100% of draws, everything else never moves.
    fired = 0
    for _ in range(1000):
        clause = Clause(np.array([105, 95, 95, 95], dtype=np.int32), 1, 100)
        type_ii_feedback(clause, np.array([1, 0], dtype=np.uint8))
        fired += clause.states.tolist() == [105, 96, 96, 95]
    ok &= fired == 1000
    verdict(4, "feedback frequency table", ok, "; ".join(details))


def test_criterion_5_type_ii_forcing():
    rng = np.random.default_rng(77)
    n_states = 100
    forced = 0
    for _ in range(500):
        while True:
            n = int(rng.integers(1, 6))
            x = rng.integers(0, 2, size=n).astype(np.uint8)
            states = rng.integers(1, 2 * n_states + 1, size=2 * n).astype(np.int32)
            clause = Clause(states, 1, n_states)
            lits = np.empty(2 * n, dtype=np.uint8)
            lits[0::2], lits[1::2] = x, 1 - x
            if clause.evaluate(x, Mode.LEARN) == 1 and (lits == 0).any():
                break
        for _ in range(2 * n_states):
            type_ii_feedback(clause, x)
            if clause.evaluate(x, Mode.LEARN) == 0:
                forced += 1
                break
    verdict(5, "Type II forcing", forced == 500, f"{forced}/500")


def test_criterion_6_clause_oracle_equivalence():
    rng = np.random.default_rng(99)
    mismatches = 0
    for _ in range(10_000):
        n = int(rng.integers(1, 5))
        include = rng.integers(0, 2, size=2 * n).astype(bool)
        states = np.where(include, 101, 100).astype(np.int32)
        clause = Clause(states, 1, 100)
        for bits in range(2**n):
            x = np.array([(bits >> k) & 1 for k in range(n)], dtype=np.uint8)
            expected = 1
            for k in range(n):
                if include[2 * k]:
                    expected &= int(x[k])
                if include[2 * k + 1]:
                    expected &= 1 - int(x[k])
            if not include.any():
                mismatches += clause.evaluate(x, Mode.LEARN) != 1
                mismatches += clause.evaluate(x, Mode.CLASSIFY) != 0
            else:
                mismatches += clause.evaluate(x, Mode.CLASSIFY) != expected
    verdict(6, "clause oracle equivalence", mismatches == 0, f"{mismatches} mismatches")


def test_criterion_7_ta_convergence():
    rng = np.random.default_rng(2024)
    optimal = 0
    for _ in range(100):
        ta = TsetlinAutomaton(100)
        draws = rng.random(10_000)
        for u in draws:
            p = 0.9 if ta.action() is Action.INCLUDE else 0.1
            ta.reward() if u < p else ta.penalize()
        optimal += ta.action() is Action.INCLUDE
    verdict(7, "TA convergence", optimal >= 99, f"{optimal}/100 optimal")


def test_criterion_8_planted_outbreak_pipeline(tmp_path, capsys):
    start = time.perf_counter()
    table, neighbors = dm.generate_planted_outbreak(np.random.default_rng(42))
    dataset = dm.build_lag_features(table, "A", neighbors["A"])
    last_year = max(year for year, _ in dataset.periods)
    train_idx, test_idx = dm.split_by_year(dataset, last_year)
    config = ModelConfig(clauses=200, threshold=15, s=8.0, epochs=40)
    pipeline, _ = fit_pipeline(dataset.subset(train_idx), config, 7)
    f1 = holdout_evaluate(pipeline, dataset.subset(test_idx))["f1"]

    series_path = tmp_path / "series.csv"
    neighbors_path = tmp_path / "neighbors.json"
    with open(series_path, "w", newline="\n") as fh:
        dm.write_series(table, fh)
    neighbors_path.write_text(json.dumps(neighbors))
    code = cli_main([
        "eval", "--series", str(series_path), "--target", "A",
        "--neighbors", str(neighbors_path), "--folds", "30",
        "--clauses", "200", "--threshold", "15", "--s", "8",
        "--epochs", "20", "--seed", "0", "--format", "json",
    ])
    out = capsys.readouterr().out
    report = json.loads(out)
    elapsed = time.perf_counter() - start

    structure_ok = (
        code == EXIT_OK
        and report["folds"] == 30
        and set(report["metrics"]) == {"precision", "recall", "f1", "accuracy"}
        and all(
            {"mean", "ci95_half_width", "per_fold"} <= set(m)
            for m in report["metrics"].values()
        )
    )
    ok = f1 >= 0.90 and structure_ok and elapsed < 60.0
    verdict(
        8, "planted outbreak pipeline", ok,
        f"holdout_f1={f1:.3f} folds={report['folds']} time={elapsed:.1f}s",
    )


def test_criterion_9_training_determinism(tmp_path, capsys):
    data_path = tmp_path / "train.csv"
    assert cli_main([
        "synth", "--kind", "artificial", "--n", "150",
        "--positive-fraction", "0.111", "--seed", "5", "--out", str(data_path),
    ]) == EXIT_OK
    blobs = []
    for name in ("m1.json", "m2.json"):
        model_path = tmp_path / name
        assert cli_main([
            "train", "--data", str(data_path), "--categorical", "x1,x2",
            "--epochs", "15", "--seed", "6", "--out", str(model_path),
        ]) == EXIT_OK
        blobs.append(model_path.read_bytes())
    capsys.readouterr()
    ok = blobs[0] == blobs[1]
    verdict(9, "training determinism", ok, f"{len(blobs[0])} bytes each")


def test_criterion_10_explain_soundness():
    pipeline, _ = fit_artificial(seed=0)
    cells = dm.artificial_domain()
    disagreements = 0
    checked = 0
    for bank in pipeline.machine.banks:
        for i in range(bank.n_clauses):
            clause = bank.clause(i)
            rule = clause_to_rule(clause, pipeline.encoder)
            for row in cells:
                x = pipeline.encoder.encode_row(row)
                for mode in (Mode.LEARN, Mode.CLASSIFY):
                    checked += 1
                    disagreements += rule.satisfied(row, mode) != bool(
                        clause.evaluate(x, mode)
                    )
    verdict(
        10, "explain soundness", disagreements == 0,
        f"{checked} checks, {disagreements} disagreements",
    )
