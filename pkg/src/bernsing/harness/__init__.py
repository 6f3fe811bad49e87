"""Verification harness: test-function corpus, lemma/theorem sweeps,
rate estimation, and the CLI."""

from .checks import (
    an_sum,
    direct_check,
    error_decay,
    error_field,
    inverse_check,
    kendall_tau,
    lemma6_sum,
    lemma_suite,
    operator_dump,
    second_derivative_field,
    sequence_verdict,
)
from .config import DEFAULT_N_VALUES, DEFAULT_T_VALUES, FULL_N_VALUES, ExperimentConfig
from .corpus import CORPUS_NAMES, corpus
from .rates import LemmaResult, RateReport, RateRow, fit_rate
