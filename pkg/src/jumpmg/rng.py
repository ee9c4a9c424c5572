"""Counter-based random streams.

Every trial gets its own Philox-4x64 generator keyed by
``(base_seed, trial_index)``.  Philox is a keyed bijection, so distinct keys
give statistically independent streams and the mapping from (seed, trial) to
draws does not depend on scheduling or on how many trials run in parallel.
"""

import numpy as np

BIT_GENERATOR = "philox4x64"
_MASK64 = (1 << 64) - 1


def stream_key(base_seed: int, trial: int) -> tuple[int, int]:
    return (base_seed & _MASK64, trial & _MASK64)


def trial_generator(base_seed: int, trial: int) -> np.random.Generator:
    key = np.array(stream_key(base_seed, trial), dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))
