from __future__ import annotations

from fractions import Fraction

import pytest

from solvlie.corpus import corpus_entries, corpus_entry
from solvlie.functionals import Functional
from solvlie.workbench import Workbench

_WB_CACHE = {}


def wb_for(entry_id: str, seed: int = 42, trials: int = 16) -> Workbench:
    key = (entry_id, seed, trials)
    if key not in _WB_CACHE:
        _WB_CACHE[key] = Workbench(corpus_entry(entry_id).spec(),
                                   seed=seed, trials=trials)
    return _WB_CACHE[key]


def point(wb: Workbench, **coords) -> Functional:
    """Exact functional from real-basis coordinates given by label."""
    vals = [Fraction(0)] * wb.spec.dim
    for lab, v in coords.items():
        vals[wb.spec.index(lab)] = Fraction(v)
    return Functional(wb.canonical_basis, vals, exact=True)


@pytest.fixture(scope="session")
def all_entries():
    return corpus_entries()


# ids of entries whose spec parses and validates (used by property suites)
VALID_IDS = [
    "anisotropic-heisenberg",
    "coupled-pairs",
    "double-heisenberg",
    "filiform-dilations-repaired",
    "five-dilations-repaired",
    "free-two-step",
    "heisenberg-2param",
    "heisenberg-complex-dilation",
    "spiral-heisenberg",
    "three-dilations-repaired",
]

# entries whose section samplers are supported (simple jump equations)
SAMPLABLE_IDS = [i for i in VALID_IDS if i != "coupled-pairs"]
