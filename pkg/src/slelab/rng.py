"""Counter-based random streams.

Every Monte Carlo sample owns an independent Philox stream keyed by
``(master_seed, sample_index)``.  Streams are cheap to create, never share
state, and do not depend on scheduling, so ensembles are reproducible
bit-for-bit for any worker count.

Index-space convention: experiments that need several independent draws per
sample offset the index by the constants below instead of re-keying, so that
adding a sub-experiment never perturbs an existing one.
"""
import numpy as np

_MASK64 = (1 << 64) - 1

# Disjoint index offsets for derived streams (see module docstring).
BOOTSTRAP_OFFSET = 1 << 48
SHELL_OFFSET = 1 << 49
AUX_OFFSET = 1 << 50


def stream(master_seed, sample_index=0):
    """Return a ``numpy.random.Generator`` keyed by (master_seed, sample_index)."""
    key = np.array([int(master_seed) & _MASK64, int(sample_index) & _MASK64],
                   dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
