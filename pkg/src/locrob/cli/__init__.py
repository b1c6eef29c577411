"""Instance file format, experiment-family generators, batch driver and
command-line entry point."""

from .formats import parse_instance, parse_instance_text, write_instance, dumps_instance
from .generators import gen_layered_steiner, gen_road_graph, gen_roadnet
from .experiment import ExperimentConfig, RunRecord, run_experiment

__all__ = [
    "parse_instance",
    "parse_instance_text",
    "write_instance",
    "dumps_instance",
    "gen_layered_steiner",
    "gen_road_graph",
    "gen_roadnet",
    "ExperimentConfig",
    "RunRecord",
    "run_experiment",
]
