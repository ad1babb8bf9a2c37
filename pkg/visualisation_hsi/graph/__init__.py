"""
Graphe spectral-spatial : noyau composite, graphe kNN et laplacien.
"""

from .kernels import (
    KernelParams, rbf_kernel, composite_kernel, spatial_features, estimate_bandwidth
)
from .knn import SparseGraph, knn_graph, laplacian_apply, write_graph, read_graph

__all__ = [
    "KernelParams",
    "rbf_kernel",
    "composite_kernel",
    "spatial_features",
    "estimate_bandwidth",
    "SparseGraph",
    "knn_graph",
    "laplacian_apply",
    "write_graph",
    "read_graph",
]
