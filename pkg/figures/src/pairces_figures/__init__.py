"""Figure rendering for pairces simulation output directories."""

__version__ = "0.1.0"

from .render import FIGURE_IDS, FigureRequest, SchemaError, render, render_to_file

__all__ = ["FIGURE_IDS", "FigureRequest", "SchemaError", "render", "render_to_file"]
