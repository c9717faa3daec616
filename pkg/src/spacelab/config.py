"""Size caps.

Exceeding a cap raises SizeCap; it is an error, not a crash.  Defaults are
tuned for desk scale: first-order constructions stay comfortable up to
6-element posets, double powers up to 4 (the up-set lattice of the up-set
lattice grows fast beyond that).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Caps:
    max_poset: int = 6          # size of catalog / instance posets
    max_double_power: int = 4   # |X| allowed when materializing P(X)
    max_elements: int = 48      # hard bound on any constructed poset (bitmask width)
    max_upsets: int = 1 << 16   # bound on |S^X| for any lattice we materialize
    max_homset: int = 200_000   # bound on an enumerated hom-set
    max_natspace: int = 50_000  # bound on an enumerated space of lattice maps


DEFAULT_CAPS = Caps()
