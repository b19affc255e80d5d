"""Minimal independent reference implementations used as test oracles."""

import numpy as np


def ref_entropy(*cols) -> float:
    """Plug-in joint entropy in bits, straight from observed tuple counts."""
    stacked = np.column_stack([np.asarray(c) for c in cols])
    _, counts = np.unique(stacked, axis=0, return_counts=True)
    p = counts / counts.sum()
    return float(-(p * np.log2(p)).sum())


def ref_mi(a_cols, b_cols) -> float:
    return ref_entropy(*a_cols) + ref_entropy(*b_cols) - ref_entropy(*a_cols, *b_cols)


def ref_cmi(a_cols, b_cols, z_cols) -> float:
    if not z_cols:
        return ref_mi(a_cols, b_cols)
    return ref_mi(list(a_cols) + list(z_cols), b_cols) - ref_mi(z_cols, b_cols)


def columns(ds, idxs):
    """Feature columns by index, with -1 meaning the target column."""
    return [ds.target if j == -1 else ds.codes[:, j] for j in idxs]
