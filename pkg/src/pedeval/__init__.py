"""Evaluation toolkit for pedestrian intention, action and event-risk prediction."""

from .annotation import (
    Dataset,
    FrameObservation,
    PedestrianInstance,
    VideoMeta,
    instance_duration,
    read_dataset,
    write_dataset,
)
from .metrics_core import (
    ConfusionAccumulator,
    RankedScores,
    accumulate,
    accuracy,
    auc,
    average_precision,
    balanced_accuracy,
    base_metrics,
    binary_metrics_positive,
    f1,
    macro_auc,
    mean_average_precision,
    precision,
    recall,
)
from .metrics_instance import (
    InstanceSeries,
    confidence_delta,
    group_instances,
    hard_prediction,
    instance_report,
    soft_prediction,
)
from .metrics_weighted import TteWeightConfig, normalize_weights, tte_weight_raw, weighted_report
from .predlog import EvalRow, PredictionRecord, join, read_predictions, write_predictions
from .report import EvalConfig, MetricReport, dumps_report, evaluate, evaluate_agreement
from .risk_grid import RiskGridConfig, assign_region, class_distance, fold_to_risk_class, risk_weight
from .sampler import (
    SamplerConfig,
    ScenarioContext,
    TaskSample,
    aggregate_context,
    sample_action,
    sample_dataset,
    sample_intention,
    sample_risk,
    window_starts,
)
from .scenario import AgreementCell, ScenarioBinning, agreement, scenario_slice
from .synth import SynthSpec, synthesize

__version__ = "0.1.0"
