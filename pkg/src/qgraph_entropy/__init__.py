"""Eigenvector entropies of quantum graphs and the entropic bounds they obey."""

__version__ = "0.1.0"

from .errors import QuantumGraphError, ParseError, ValidationError, WindowTooCoarse
from .graph import MetricGraph, build_metric_graph, complete_metric_graph, girth, star_metric_graph
from .scattering import (VertexConditions, VertexScattering, build_conditions, equi_transmitting_matrix,
                         neumann_matrix, paley_conference_matrix)
from .evolution import EigenRecord, evolution_matrix, find_spectrum, secular_gap
from .entropy import renyi, shannon, symmetrized, tsallis, variance
from .bounds import AuditOptions, BoundReport, audit, audit_records
from .star import AColumn, star_spectrum
from .ensemble import EnsembleSpec, collect_ensemble
from .kernels import BACKEND

__all__ = [
    "AColumn", "AuditOptions", "BACKEND", "BoundReport", "EigenRecord", "EnsembleSpec", "MetricGraph",
    "ParseError", "QuantumGraphError", "ValidationError", "VertexConditions", "VertexScattering",
    "WindowTooCoarse", "audit", "audit_records", "build_conditions", "build_metric_graph", "collect_ensemble",
    "complete_metric_graph", "equi_transmitting_matrix", "evolution_matrix", "find_spectrum", "girth",
    "neumann_matrix", "paley_conference_matrix", "renyi", "secular_gap", "shannon", "star_metric_graph",
    "star_spectrum", "symmetrized", "tsallis", "variance",
]
