"""
Mesures de qualité des rendus.
"""

from .distance import (
    ALL, DistanceSample, distance_sample, preservation_of_distance, correlation, format_report
)

__all__ = [
    "ALL",
    "DistanceSample",
    "distance_sample",
    "preservation_of_distance",
    "correlation",
    "format_report",
]
