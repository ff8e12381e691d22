"""
Approximation knob tables.

Levels run from 0 (most accurate) to MAX_LEVEL (most approximate). The
controlled knobs are listed in order of importance; the hierarchical step
controller walks them in this order.
"""

MAX_LEVEL = 3

# Ordered by importance (1 = most important)
CONTROLLED_KNOBS = {
    1: {
        "name": "csr",
        "description": "Compute size ratio - depth frame downsampling factor",
        "levels": (1, 2, 4, 8),
    },
    2: {
        "name": "icp",
        "description": "ICP early-exit threshold on the squared twist norm",
        "levels": (1e-8, 1e-7, 1e-6, 1e-5),
    },
    3: {
        "name": "pd0",
        "description": "ICP iteration cap on the finest pyramid level",
        "levels": (10, 8, 6, 4),
    },
}

KNOB_ORDER = tuple(entry["name"] for _, entry in sorted(CONTROLLED_KNOBS.items()))
LEVEL_VALUES = {entry["name"]: entry["levels"] for entry in CONTROLLED_KNOBS.values()}

# pd1/pd2 are not controlled
FIXED_PD1 = 5
FIXED_PD2 = 4

# Most accurate configuration; every uncontrolled knob keeps this value
ACCURATE_KNOBS = {
    "csr": 1,
    "icp_threshold": 1e-8,
    "pd": (10, 5, 4),
    "tr": 1,
    "ir": 1,
    "vr": 64,
    "mu": 0.1,
}

VALID_CSR = (1, 2, 4, 8)

# Knobs a ranking sweep may vary
SWEEPABLE_KNOBS = ("csr", "icp", "pd0", "pd1", "pd2")


def knob_value(knob: str, level: int):
    """Value of a controlled knob at an approximation level (clamped to the table)."""
    levels = LEVEL_VALUES[knob]
    return levels[max(0, min(level, len(levels) - 1))]
