#! /usr/bin/env python
# -*- coding: utf-8 -*-

import io
import warnings
import numpy         as np
import matplotlib
from matplotlib.figure import Figure
from .tools import kwargs_update

try:
    CMAP = matplotlib.colormaps["viridis"]
except (AttributeError, KeyError):
    warnings.warn("You should update your matplotlib. viridis does not exist...")
    CMAP = matplotlib.cm.PuBu

SVG_RC = {"svg.hashsalt": "solspace", "svg.fonttype": "none"}

__all__ = ["emit_chart"]


def _get_series(points, x, y):
    """ (x, y) float arrays from a DataFrame, a list of dicts or a list of pairs """
    if hasattr(points, "columns"):
        return np.asarray(points[x], dtype=float), np.asarray(points[y], dtype=float)
    points = list(points)
    if len(points) and isinstance(points[0], dict):
        return (np.asarray([p[x] for p in points], dtype=float),
                np.asarray([p[y] for p in points], dtype=float))
    if len(points) and hasattr(points[0], "to_dict"):
        return _get_series([p.to_dict() for p in points], x, y)
    data = np.asarray(points, dtype=float).reshape(-1, 2)
    return data[:, 0], data[:, 1]

def emit_chart(points, model_overlay=None, x="n", y="conflicts", band=None,
               xlabel=None, ylabel=None, title=None, logy=None, **kwargs):
    """ self-contained SVG scatter chart.

    Parameters
    ----------
    points: [DataFrame, list of dict/records or list of (x, y)]
        at least one point.

    model_overlay: [ScalingFit/None] -optional-
        fitted curve drawn over the points (through fit.predict).
        The y axis is then logarithmic unless logy is given.

    x, y: [string] -optional-
        columns (keys) to use when points are a table.

    band: [(float, float)/None] -optional-
        horizontal band to annotate (e.g. the 0.35-0.41 inter/N band).

    **kwargs goes to the scatter.

    Returns
    -------
    string (SVG document)
    """
    xdata, ydata = _get_series(points, x, y)
    if len(xdata) == 0:
        raise ValueError("cannot chart an empty series")

    fig = Figure(figsize=[6, 4])
    ax = fig.add_axes([0.14, 0.14, 0.8, 0.76])
    prop = kwargs_update(dict(s=25, color=CMAP(0.3), zorder=3), **kwargs)
    ax.scatter(xdata, ydata, gid="data", **prop)

    if band is not None:
        low, high = band
        ax.axhspan(low, high, color=CMAP(0.8), alpha=0.3, zorder=1, gid="band")
        ax.text(0.99, high, " %.2f-%.2f" % (low, high), transform=ax.get_yaxis_transform(),
                va="bottom", ha="right", fontsize="small", color="0.4")

    if model_overlay is not None:
        xmin, xmax = xdata.min(), xdata.max()
        grid = np.linspace(xmin, xmax if xmax > xmin else xmin + 1, 100)
        ax.plot(grid, model_overlay.predict(grid), color=CMAP(0.6), lw=1.5, zorder=2, gid="fit",
                label="%s: %.3g (r$^2$=%.2f)" % (model_overlay.model, model_overlay.coefficient,
                                                 model_overlay.r_squared))
        ax.legend(loc="upper left", fontsize="small")
        logy = True if logy is None else logy

    if logy:
        ax.set_yscale("log", base=2)
    ax.set_xlabel(x if xlabel is None else xlabel)
    ax.set_ylabel(y if ylabel is None else ylabel)
    if title is not None:
        ax.set_title(title, fontsize="medium")

    buffer = io.StringIO()
    with matplotlib.rc_context(SVG_RC):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()

