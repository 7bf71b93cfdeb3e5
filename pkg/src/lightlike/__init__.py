"""Symbolic tensor calculus and verification tools for spacetimes with light-like parallel fields."""

from .catalog import (
    PPWaveParams,
    RTParams,
    minkowski_null_chart,
    peres_metric,
    plane_wave_metric,
    pp_wave_metric,
    robinson_trautman_metric,
)
from .exprcore import CheckReport, SampleBox, diff, parse, zero_test
from .fields import VectorFieldSpec, causal_character
from .geometry import ChartMetric, CurvatureBundle
from .transport import CurveSpec, TransportResult, holonomy_deviation, transport
from .verify import Subject, run_suite

__all__ = [
    "ChartMetric",
    "CheckReport",
    "CurvatureBundle",
    "CurveSpec",
    "PPWaveParams",
    "RTParams",
    "SampleBox",
    "Subject",
    "TransportResult",
    "VectorFieldSpec",
    "causal_character",
    "diff",
    "holonomy_deviation",
    "minkowski_null_chart",
    "parse",
    "peres_metric",
    "plane_wave_metric",
    "pp_wave_metric",
    "robinson_trautman_metric",
    "run_suite",
    "transport",
    "zero_test",
]

__version__ = "0.1.0"
