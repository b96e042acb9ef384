from .multipoles import spinsystem, hermitianmatrix, build_basis
from .observable import physicalconstants, to_observable
from .measurement import oracle_spectrum, stoppingrule, run_experiment
from .tomography import estimate_expectations, reconstruct_state
from .pipeline import load_matrix, diagonalize_quantum, emit_report

__all__ = ["spinsystem", "hermitianmatrix", "build_basis", "physicalconstants",
           "to_observable", "oracle_spectrum", "stoppingrule", "run_experiment",
           "estimate_expectations", "reconstruct_state", "load_matrix",
           "diagonalize_quantum", "emit_report"]
