"""Counter-based random streams for reproducible parallel Monte Carlo.

Each trial owns a Philox generator keyed by (master_seed, stream_id), so the
draw sequence of a trial depends only on those two integers and never on
scheduling order or worker count.  Replacement streams for re-drawn trials
offset the stream id by 2^32 per replacement round, keeping the id space of
regular trials (< 2^32) disjoint from replacements.
"""

from __future__ import annotations

import numpy as np

REPLACEMENT_OFFSET = 2**32


def stream_id(trial_id: int, replacement_round: int = 0) -> int:
    """Derived stream id for a trial, offset per replacement round."""
    if trial_id < 0 or replacement_round < 0:
        raise ValueError("trial_id and replacement_round must be non-negative")
    return trial_id + replacement_round * REPLACEMENT_OFFSET

def trial_stream(master_seed: int, trial_id: int, replacement_round: int = 0) -> np.random.Generator:
    """Independent generator for one trial of one experiment.

    Uses SeedSequence(master_seed, stream_id) to key a counter-based Philox
    generator: identical (master_seed, trial_id, round) gives an identical
    stream on every run, machine, and worker layout.
    """
    sid = stream_id(trial_id, replacement_round)
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(sid,))
    return np.random.Generator(np.random.Philox(ss))


def stream_fingerprints(master_seed: int, n_streams: int, words: int = 2) -> np.ndarray:
    """First `words` key words of each derived stream, for collision checks.

    Returns an (n_streams, words) uint32 array.  Distinct rows certify that
    the derived streams start from distinct internal states.
    """
    out = np.empty((n_streams, words), dtype=np.uint32)
    for tid in range(n_streams):
        ss = np.random.SeedSequence(entropy=master_seed, spawn_key=(tid,))
        out[tid] = ss.generate_state(words)
    return out
