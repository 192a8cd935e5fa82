"""Counter-based RNG streams for reproducible parallel Monte Carlo.

Each replica gets its own Philox stream keyed by ``(master_seed, replica
index, role)``.  Philox is a counter-based generator, so streams with distinct
keys are statistically independent and can be consumed by worker threads in
any order without changing the numbers any replica sees.  The ``role`` bit
separates the coefficient draw from the limit-path draw within one replica.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

COEFFICIENT_ROLE = 0
LIMIT_ROLE = 1


def replica_stream(master_seed: int, replica_index: int, role: int = 0) -> np.random.Generator:
    """Return the deterministic Generator for one (seed, replica, role) triple."""
    if replica_index < 0:
        raise ValueError("replica_index must be nonnegative")
    if role not in (COEFFICIENT_ROLE, LIMIT_ROLE):
        raise ValueError(f"unknown stream role {role!r}")
    key = np.array(
        [master_seed & _MASK64, ((replica_index << 1) | role) & _MASK64],
        dtype=np.uint64,
    )
    return np.random.Generator(np.random.Philox(key=key))


def coefficient_stream(master_seed: int, replica_index: int) -> np.random.Generator:
    return replica_stream(master_seed, replica_index, COEFFICIENT_ROLE)


def limit_stream(master_seed: int, replica_index: int) -> np.random.Generator:
    return replica_stream(master_seed, replica_index, LIMIT_ROLE)


def seed_path(master_seed: int, replica_index: int, role: int) -> str:
    """Stable textual descriptor of a stream, recorded in provenance fields."""
    return f"philox:{master_seed}:{replica_index}:{role}"
