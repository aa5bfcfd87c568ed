"""Stochastic simulator of locally corrected topological memories
under heralded noise."""

from .lattice import LatticeGeometry, build_geometry

__all__ = [
    "LatticeGeometry",
    "build_geometry",
]


def __getattr__(name):
    # convenience re-exports without import cycles at package import time
    if name in ("FlagState", "RatesConfig"):
        from . import flags
        return getattr(flags, name)
    if name in ("QuasiStabilizerTableau", "tableau_init"):
        from . import tableau
        return getattr(tableau, name)
    if name in ("TrajectoryConfig", "run_trajectory"):
        from . import d4
        return getattr(d4, name)
    raise AttributeError(name)
