"""Global-Local Neuron networks: models, differential-equation solves and experiment batches."""

from ._core import (
    DataError,
    EvalError,
    ExperimentSpec,
    KsResult,
    Network,
    RunRecord,
    SampleStats,
    StructuralError,
    describe,
    ees,
    init_network,
    ks_two_sample,
    parse_run_records,
    run_experiment,
    run_records_csv,
    se,
    solve,
)

__all__ = [
    "DataError",
    "EvalError",
    "ExperimentSpec",
    "KsResult",
    "Network",
    "RunRecord",
    "SampleStats",
    "StructuralError",
    "describe",
    "ees",
    "init_network",
    "ks_two_sample",
    "parse_run_records",
    "run_experiment",
    "run_records_csv",
    "se",
    "solve",
]
