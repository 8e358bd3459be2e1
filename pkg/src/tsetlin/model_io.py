"""Model document serialization.

A model is a JSON text document: a header of hyperparameters, the fitted
binarizer, and the full TA state matrix per class bank.  Serialization
is canonical (sorted keys, fixed separators), so identical models always
produce byte-identical files, and loading round-trips bit-exactly.
"""

from __future__ import annotations

import json
import os

from .binarizer import RowEncoder
from .machine import TsetlinMachine
from .pipeline import FittedPipeline, ModelConfig

FORMAT_NAME = "tsetlin-model"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


def pipeline_to_dict(pipeline: FittedPipeline) -> dict:
    machine = pipeline.machine
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "n_bits": machine.n_bits,
        "n_classes": machine.n_classes,
        "clauses_per_class": machine.clauses_per_class,
        "states_per_action": machine.states_per_action,
        "threshold": machine.threshold,
        "s": machine.s,
        "seed": machine.seed,
        "negative_sampling": machine.negative_sampling,
        "epochs": pipeline.config.epochs,
        "encoder": pipeline.encoder.to_dict(),
        "banks": [bank.states.tolist() for bank in machine.banks],
    }


def pipeline_from_dict(doc: dict) -> FittedPipeline:
    if doc.get("format") != FORMAT_NAME:
        raise ModelFormatError(f"not a {FORMAT_NAME} document")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model version {doc.get('version')!r}")
    encoder = RowEncoder.from_dict(doc["encoder"])
    if encoder.n_bits != doc["n_bits"]:
        raise ModelFormatError(
            f"encoder width {encoder.n_bits} does not match header {doc['n_bits']}"
        )
    machine = TsetlinMachine(
        n_bits=doc["n_bits"],
        n_classes=doc["n_classes"],
        clauses_per_class=doc["clauses_per_class"],
        states_per_action=doc["states_per_action"],
        threshold=doc["threshold"],
        s=doc["s"],
        seed=doc["seed"],
        negative_sampling=doc.get("negative_sampling", "single"),
    )
    for bank, states in zip(machine.banks, doc["banks"], strict=True):
        if len(states) != bank.n_clauses or any(
            len(row) != 2 * bank.n_bits for row in states
        ):
            raise ModelFormatError("bank state matrix has the wrong shape")
        bank.states[:] = states
        if (bank.states < 1).any() or (bank.states > 2 * bank.states_per_action).any():
            raise ModelFormatError("TA state outside its valid range")
    config = ModelConfig(
        clauses=doc["clauses_per_class"] * doc["n_classes"],
        states_per_action=doc["states_per_action"],
        threshold=doc["threshold"],
        s=doc["s"],
        epochs=doc.get("epochs", 1),
        negative_sampling=doc.get("negative_sampling", "single"),
    )
    return FittedPipeline(encoder, machine, config)


def dumps(pipeline: FittedPipeline) -> str:
    return json.dumps(pipeline_to_dict(pipeline), sort_keys=True,
                      separators=(",", ":")) + "\n"


def loads(text: str) -> FittedPipeline:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"invalid model document: {exc}") from None
    return pipeline_from_dict(doc)


def save(pipeline: FittedPipeline, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(pipeline))


def load(path: str | os.PathLike) -> FittedPipeline:
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())
