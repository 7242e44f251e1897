"""Quasi-clique numbers of inhomogeneous random graphs."""

from .gamma import as_gamma, is_dense, required_edges
from .graph import DimacsError, Graph, VertexSet, read_dimacs, write_dimacs
from .kernels import (Block, Constant, Grid, Kernel, KernelError, MaxPoint,
                      OffDiagonalMaximum, Rank1, kernel_from_dict, load_kernel)
from .sampler import (CoupledTriple, WeightedSample, default_delta, dense_core,
                      sample, sample_coupled, sample_graph, sample_weights, stream)
from .solver import QuasiCliqueResult, brute_force, exact_bb, heuristic, qc_number
from .theory import (HypothesisViolation, TheoryEstimates, estimates, kl_bernoulli,
                     refined_estimate, typical_qcn, window)

__all__ = [
    "Block", "Constant", "CoupledTriple", "DimacsError", "Graph", "Grid",
    "HypothesisViolation", "Kernel", "KernelError", "MaxPoint", "OffDiagonalMaximum",
    "QuasiCliqueResult", "Rank1", "TheoryEstimates", "VertexSet", "WeightedSample",
    "as_gamma", "brute_force", "default_delta", "dense_core", "estimates", "exact_bb",
    "heuristic", "is_dense", "kernel_from_dict", "kl_bernoulli", "load_kernel",
    "qc_number", "read_dimacs", "refined_estimate", "required_edges", "sample",
    "sample_coupled", "sample_graph", "sample_weights", "stream", "typical_qcn",
    "window", "write_dimacs",
]
