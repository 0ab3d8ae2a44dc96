"""
gnuplot scripts for the curve CSVs: the exact curve as a line, the Monte Carlo means as
crosses with error bars.
"""
import logging
from logging import Logger
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import pandas as pd

from errors import SchemaError

logger: Logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class FigureLayout:
    """Columns and axes of one figure"""
    title: str
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    y_label: str
    series: tuple[tuple[str, str, str], ...]

class Figure(Enum):
    """
    Figure kinds; each value lists (exact column, mc column, se column) per plotted series
    """
    M1 = FigureLayout(title="density of fixed points, q < 1",
                      x_range=(0.0, 1.0), y_range=(0.0, 1.0), y_label="m_1",
                      series=(("exact_m1", "mc_mean", "mc_se"),))
    MU2 = FigureLayout(title="density of 2-cycles, q > 1",
                       x_range=(0.0, 25.0), y_range=(0.0, 0.5), y_label="mu_2",
                       series=(("exact_mu2", "mc_mean", "mc_se"),))
    CECO = FigureLayout(title="mean fixed points at even and odd n, q > 1",
                        x_range=(0.0, 25.0), y_range=(0.0, 1.0), y_label="E C_1",
                        series=(("exact_ce", "mc_even_n", "se_even_n"),
                                ("exact_co", "mc_odd_n", "se_odd_n")))

    def required_columns(self) -> list[str]:
        """Columns the CSV must carry"""
        return ["q"] + [column for series in self.value.series for column in series]

def _check_schema(csv_path: Path, figure: Figure) -> pd.DataFrame:
    try:
        frame = pd.read_csv(csv_path)
    except FileNotFoundError as e:
        raise SchemaError(str(csv_path), reason="file not found") from e
    except pd.errors.EmptyDataError as e:
        raise SchemaError(str(csv_path), reason="empty file") from e
    missing = [column for column in figure.required_columns() if column not in frame.columns]
    if missing:
        raise SchemaError(str(csv_path), missing=missing)
    if frame.empty:
        raise SchemaError(str(csv_path), reason="no data rows")
    return frame

def emit_plot_script(csv_path: Path, figure: Figure) -> Path:
    """
    Write `<csv stem>.gp` next to the CSV and return its path. Nothing is written when the
    CSV is missing, empty or lacks a column the figure needs.
    """
    csv_path = Path(csv_path)
    _check_schema(csv_path, figure)
    layout = figure.value
    plots = []
    for exact, mc, se in layout.series:
        plots.append(f'"{csv_path.name}" using "q":"{exact}" with linespoints lt 1 pt 0 '
                     f'title "{exact}"')
        plots.append(f'"{csv_path.name}" using "q":"{mc}":"{se}" with yerrorbars pt 2 '
                     f'title "{mc}"')
    lines = [
        f"# gnuplot script for {csv_path.name}; run from its folder",
        'set datafile separator ","',
        f'set title "{layout.title}"',
        'set xlabel "q"',
        f'set ylabel "{layout.y_label}"',
        f"set xrange [{layout.x_range[0]:g}:{layout.x_range[1]:g}]",
        f"set yrange [{layout.y_range[0]:g}:{layout.y_range[1]:g}]",
        "set key top right",
        "plot " + ", \\\n     ".join(plots),
        "pause -1",
    ]
    script = csv_path.with_suffix(".gp")
    script.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("wrote plot script %s", script)
    return script
