"""Accuracy-curve figures rendered next to the delimited reports."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_MARKERS = ("o", "s", "^", "v", "D", "P", "X", "*")


def render_curves(curves, path, title=None):
    """One figure, one line per algorithm: mean accuracy against the
    number of retained top-ranked features. Returns the written path."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for i, curve in enumerate(curves):
        xs = range(1, len(curve.mean_accuracy) + 1)
        ax.plot(
            xs,
            curve.mean_accuracy,
            marker=_MARKERS[i % len(_MARKERS)],
            markersize=4,
            linewidth=1.2,
            label=curve.algorithm,
        )
    ax.set_xlabel("number of selected features")
    ax.set_ylabel("average accuracy")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if curves:
        ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
