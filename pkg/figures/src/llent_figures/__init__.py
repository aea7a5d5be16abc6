"""Figure rendering for llent CSV sweep outputs."""
from .render import FIGURE_IDS, FigureSpec, render
from .schema import REQUIRED_COLUMNS, SchemaError, SweepTable, load_table

__version__ = "0.1.0"

__all__ = ["FIGURE_IDS", "FigureSpec", "render", "REQUIRED_COLUMNS",
           "SchemaError", "SweepTable", "load_table", "__version__"]
