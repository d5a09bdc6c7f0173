"""Object-centric process discovery: logs, nets, languages, metrics, experiments."""

from .discovery import TypedLog, cardinalities, discover, project
from .experiment import ExperimentRecord, SampleConfig, bin_records, gen_log, run_campaign, run_experiment, sample_language
from .inductive import dfg, inductive_miner
from .language import StateGraph, StateSpaceOverflow, language, loop_free_binding_sequences
from .metrics import (
    ComplexityProfile,
    EmptyLanguageError,
    QualityScore,
    complexity_profile,
    inter_complexity,
    intra_complexity,
    numot,
    numt,
    quadrant,
    quality,
    subnet,
    tioc,
)
from .modelgen import GenParams, SystemModel, generate_corpus, generate_model
from .netio import dumps_net, loads_net, to_dot
from .ocel import OCEL, Event, ObjectInstance, flatten, is_traditional_log, parse_ocel, process_executions, serialize_ocel
from .ocpn import AcceptingOCPN, Binding, Marking, OCPN, enabled_bindings, fire

__version__ = "0.1.0"
