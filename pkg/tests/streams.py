"""Seeded instance streams shared by the test modules."""

from __future__ import annotations

from hermlie.errors import GenerationFailed
from hermlie.generator import GenParams, gen_pair, generate

MAIN, A, B = "MainNonabelian", "JaEqualsA", "AbelianQuotient"

# (case, type, target, unimodular) combinations the generator populates quickly
FAST_KINDS = [
    (MAIN, "generic", "none", True),
    (MAIN, "generic", "none", False),
    (MAIN, "generic", "balanced", True),
    (MAIN, "half-generic", "none", True),
    (MAIN, "half-generic", "none", False),
    (MAIN, "degenerate", "none", True),
    (MAIN, "degenerate", "none", False),
    (MAIN, "degenerate", "balanced", True),
    (MAIN, "degenerate", "pluriclosed", True),
    (MAIN, "degenerate", "pluriclosed", False),
    (A, None, "none", True),
    (A, None, "none", False),
    (A, None, "balanced", True),
    (A, None, "pluriclosed", True),
    (A, None, "pluriclosed", False),
    (A, None, "kahler", True),
    (B, None, "none", True),
    (B, None, "none", False),
    (B, None, "balanced", True),
    (B, None, "pluriclosed", True),
    (B, None, "pluriclosed", False),
    (B, None, "kahler", True),
]

# populated but found by iterative refinement, about two seconds each
SLOW_KINDS = [
    (MAIN, "generic", "pluriclosed", False),
    (MAIN, "half-generic", "pluriclosed", True),
    (MAIN, "half-generic", "pluriclosed", False),
]


def mixed_instances(count, slow_every=100, dims=(2, 3, 4, 5), seed0=0):
    """``count`` generated instances cycling through kinds and dimensions.

    Every ``slow_every``-th slot draws from the refinement-based kinds.
    Combinations the generator rejects for a seed are skipped.
    """
    out, slot, seed = [], 0, seed0
    while len(out) < count:
        if slow_every and slot % slow_every == slow_every - 1:
            kind = SLOW_KINDS[(slot // slow_every) % len(SLOW_KINDS)]
        else:
            kind = FAST_KINDS[slot % len(FAST_KINDS)]
        n = dims[seed % len(dims)]
        case, jtype, target, uni = kind
        try:
            inst = generate(GenParams(n, case, jtype, target, seed=seed, unimodular=uni))
        except GenerationFailed:
            seed += 1
            continue
        out.append(((n, case, jtype, target, uni, seed), inst))
        slot += 1
        seed += 1
    return out


def case_instances(case, count, dims=(2, 3, 4, 5), seed0=0):
    kinds = [k for k in FAST_KINDS if k[0] == case]
    out, slot, seed = [], 0, seed0
    while len(out) < count:
        _, jtype, target, uni = kinds[slot % len(kinds)]
        n = dims[seed % len(dims)]
        try:
            inst = generate(GenParams(n, case, jtype, target, seed=seed, unimodular=uni))
        except GenerationFailed:
            seed += 1
            continue
        out.append(((n, case, jtype, target, uni, seed), inst))
        slot += 1
        seed += 1
    return out


def targeted(jtype, target, count, dims=(2, 3, 4), seed0=0, case=MAIN):
    """Unimodular instances of one type carrying a metric of the given class."""
    out, seed = [], seed0
    while len(out) < count:
        n = dims[seed % len(dims)]
        try:
            inst = generate(GenParams(n, case, jtype, target, seed=seed))
        except GenerationFailed:
            seed += 1
            continue
        out.append(((n, jtype, target, seed), inst))
        seed += 1
    return out


def pairs(case, count, dims=(2, 3, 4, 5), seed0=0):
    """``count`` (pluriclosed, balanced) pairs on a common ``(g, J)``; also returns the rejected seeds."""
    out, rejected, seed = [], [], seed0
    while len(out) < count:
        n = dims[seed % len(dims)]
        try:
            out.append(((n, seed), gen_pair(GenParams(n, case, seed=seed))))
        except GenerationFailed as exc:
            rejected.append((n, seed, str(exc)))
        seed += 1
    return out, rejected
