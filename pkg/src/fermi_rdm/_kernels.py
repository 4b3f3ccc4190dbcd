"""Kernel backend selection.

The compiled extension is used when it imports; setting
``FERMI_RDM_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _pykernels

if os.environ.get("FERMI_RDM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"
    else:
        BACKEND = "cython"

binomial_table = _impl.binomial_table
enumerate_masks = _impl.enumerate_masks
rank_masks = _impl.rank_masks
single_op_table = _impl.single_op_table
pair_table = _impl.pair_table
word_table = _impl.word_table
scatter_pairs = _impl.scatter_pairs
gather_pairs = _impl.gather_pairs

__all__ = [
    "BACKEND",
    "binomial_table",
    "enumerate_masks",
    "rank_masks",
    "single_op_table",
    "pair_table",
    "word_table",
    "scatter_pairs",
    "gather_pairs",
]
