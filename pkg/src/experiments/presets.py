"""
Named grids for the standard depth versus imbalance studies.
"""
from typing import Callable, Dict, List, Optional

from config.settings import DEFAULT_EPOCHS
from .models import BackboneGrid, ExperimentGrid, GaussianBackboneGrid, OverlapGrid, Regimen

CV = Regimen(kind="stratified_cv")


def _fig2(seeds: List[int], epochs: int) -> List[ExperimentGrid]:
    # backbone, size 1, balanced testing
    return [BackboneGrid(s=[1], seeds=seeds, epochs=epochs)]


def _fig3(seeds: List[int], epochs: int) -> List[ExperimentGrid]:
    # backbone, size 5, balanced testing
    return [BackboneGrid(s=[5], seeds=seeds, epochs=epochs)]


def _fig4(seeds: List[int], epochs: int) -> List[ExperimentGrid]:
    return [OverlapGrid(depths=[1, 5], seeds=seeds, epochs=epochs)]


def _fig6(seeds: List[int], epochs: int) -> List[ExperimentGrid]:
    return [GaussianBackboneGrid(seeds=seeds, epochs=epochs)]


def _sup_cv(seeds: List[int], epochs: int) -> List[ExperimentGrid]:
    # stratified 10-fold CV counterparts at depths 1 and 5
    return [
        BackboneGrid(s=[1], depths=[1, 5], regimen=CV, seeds=seeds, epochs=epochs),
        BackboneGrid(s=[5], depths=[1, 5], regimen=CV, seeds=seeds, epochs=epochs),
        OverlapGrid(depths=[1, 5], regimen=CV, seeds=seeds, epochs=epochs),
    ]


PRESETS: Dict[str, Callable[[List[int], int], List[ExperimentGrid]]] = {
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": _fig4,
    "fig6": _fig6,
    "sup-cv": _sup_cv,
}


def get_preset(name: str, seeds: List[int], epochs: Optional[int] = None) -> List[ExperimentGrid]:
    """Grids of a named preset.

    Raises:
        KeyError: If the preset does not exist
    """
    if name not in PRESETS:
        raise KeyError(f"Unknown preset '{name}'. Available: {', '.join(PRESETS)}")
    return PRESETS[name](seeds, epochs or DEFAULT_EPOCHS)
