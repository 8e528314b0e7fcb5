"""Named, splittable random streams for reproducible trajectories.

Every trajectory owns two independent sub-streams derived deterministically
from ``(seed, replicate)``: one consumed by Gaussian increments, one by
Poisson jump counts. Keeping the two disjoint means toggling jumps on or off
never perturbs the Brownian path, which enables common-random-number
comparisons across noise configurations.

Streams are materialized with numpy's ``SeedSequence`` spawn keys, so a
replicate's stream depends only on its index, never on how many replicates
run or in what order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["GAUSSIAN", "JUMPS", "stream"]

# purpose indices within one trajectory's stream family
GAUSSIAN = 0
JUMPS = 1


def stream(seed: int, replicate: int, purpose: int) -> np.random.Generator:
    """Generator for one (seed, replicate, purpose) triple.

    Identical triples always yield identical draw sequences; distinct
    triples yield statistically independent streams.
    """
    if replicate < 0:
        raise ValueError(f"replicate index must be >= 0, got {replicate}")
    if purpose not in (GAUSSIAN, JUMPS):
        raise ValueError(f"unknown stream purpose {purpose}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(replicate), int(purpose)))
    return np.random.Generator(np.random.PCG64(ss))
