"""Tsetlin Machine classifier with threshold binarization for continuous
inputs, plus an outbreak forecasting pipeline built on top of it."""

from .automaton import Action, TsetlinAutomaton
from .binarizer import (
    CategoricalFeature,
    ContinuousFeature,
    EncodingError,
    RowEncoder,
    encode_categorical,
    encode_continuous,
    fit_categories,
    fit_thresholds,
)
from .clause import Clause, Mode
from .machine import (
    ClauseBank,
    ConfigError,
    TsetlinMachine,
    clamp_sum,
    type_i_activation_prob,
    type_i_feedback,
    type_ii_activation_prob,
    type_ii_feedback,
)
from .pipeline import FittedPipeline, ModelConfig, fit_pipeline

__all__ = [
    "Action",
    "CategoricalFeature",
    "Clause",
    "ClauseBank",
    "ConfigError",
    "ContinuousFeature",
    "EncodingError",
    "FittedPipeline",
    "Mode",
    "ModelConfig",
    "RowEncoder",
    "TsetlinAutomaton",
    "TsetlinMachine",
    "clamp_sum",
    "encode_categorical",
    "encode_continuous",
    "fit_categories",
    "fit_pipeline",
    "fit_thresholds",
    "type_i_activation_prob",
    "type_i_feedback",
    "type_ii_activation_prob",
    "type_ii_feedback",
]
