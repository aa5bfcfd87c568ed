"""Figure rendering for htsim CSV outputs."""

from .render import FigureSpec, render

__all__ = ["FigureSpec", "render"]
