"""Chernoff-bound information geometry of XY-chain thermal states."""
from .xy_model import (CouplingPoint, GapInfo, ModeData, Region, ThermalPoint, gap,
                       mode_data, modes, quasiparticle_energies)
from .metric import (COMPONENTS, EvaluationScheme, MetricTensor, Normalization,
                     classical_metric, full_metric, max_eigenvalue, nonclassical_deficit,
                     nonclassical_metric)

__all__ = [
    "CouplingPoint", "GapInfo", "ModeData", "Region", "ThermalPoint", "gap", "mode_data",
    "modes", "quasiparticle_energies", "COMPONENTS", "EvaluationScheme", "MetricTensor",
    "Normalization", "classical_metric", "full_metric", "max_eigenvalue",
    "nonclassical_deficit", "nonclassical_metric",
]
