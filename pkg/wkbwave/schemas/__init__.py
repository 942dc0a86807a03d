"""
Experiment configuration schemas
"""
from wkbwave.schemas.experiment import ExperimentConfig, load_config, parse_config

__all__ = ["ExperimentConfig", "load_config", "parse_config"]
