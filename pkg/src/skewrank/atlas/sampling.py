"""Seeded random GL images of normal forms."""

from __future__ import annotations

import random

from ..exterior import apply_linear_map
from .labels import TABLE, as_label, normal_form, random_invertible


def orbit_sample(label, seed=0, dim=None):
    """g . NF(label) for a seeded g with entries in [-9, 9] and det g != 0."""
    label = as_label(label)
    n = TABLE[label].ambient if dim is None else dim
    g = random_invertible(n, random.Random(f"{label}:{n}:{seed}"))
    return apply_linear_map(g, normal_form(label, n))
