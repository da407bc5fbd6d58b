"""Alternating forms on a finite-dimensional Lie algebra.

A p-form is a dict mapping strictly increasing index tuples to coefficients,
``alpha = sum_I alpha[I] phi^{i_1} ^ ... ^ phi^{i_p}`` for the coframe
``phi`` dual to whatever basis the structure tensor refers to. The
convention for wedge products is ``(a ^ b)(x, y) = a(x) b(y) - a(y) b(x)``,
so ``alpha[I]`` is the value of ``alpha`` on the basis tuple ``I``.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def _drop_zeros(form, eps=0.0):
    return {k: v for k, v in form.items() if abs(v) > eps}


def evaluate(form, idx):
    """Value of ``form`` on an arbitrary (unsorted) basis tuple."""
    if len(set(idx)) != len(idx):
        return 0.0
    order = sorted(range(len(idx)), key=idx.__getitem__)
    key = tuple(idx[i] for i in order)
    val = form.get(key, 0.0)
    if val == 0.0:
        return 0.0
    return val * _perm_sign(order)


def _perm_sign(perm):
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def wedge(a, b):
    out = {}
    for ka, va in a.items():
        sa = set(ka)
        for kb, vb in b.items():
            if sa.intersection(kb):
                continue
            merged = ka + kb
            order = sorted(range(len(merged)), key=merged.__getitem__)
            key = tuple(merged[i] for i in order)
            out[key] = out.get(key, 0.0) + _perm_sign(order) * va * vb
    return _drop_zeros(out)


def wedge_power(a, k):
    out = {(): 1.0}
    for _ in range(k):
        out = wedge(out, a)
    return out


def differential(struct, form, degree):
    """Chevalley-Eilenberg differential.

    ``struct[c, a, b]`` are the structure constants ``[b_a, b_b] = sum_c
    struct[c, a, b] b_c``. Uses
    ``(d alpha)(x_0..x_p) = sum_{s<t} (-1)^{s+t} alpha([x_s, x_t], x_0..^s..^t..x_p)``.
    """
    struct = np.asarray(struct)
    dim = struct.shape[0]
    if not form:
        return {}
    p = degree
    out = {}
    nz = [np.nonzero(struct[:, a, b])[0] for a in range(dim) for b in range(dim)]
    for tup in combinations(range(dim), p + 1):
        total = 0.0
        for s in range(p + 1):
            for t in range(s + 1, p + 1):
                a, b = tup[s], tup[t]
                cs = nz[a * dim + b]
                if cs.size == 0:
                    continue
                rest = tup[:s] + tup[s + 1 : t] + tup[t + 1 :]
                rest_set = set(rest)
                sub = 0.0
                for c in cs:
                    if c in rest_set:
                        continue
                    pos = sum(1 for r in rest if r < c)
                    key = rest[:pos] + (int(c),) + rest[pos:]
                    val = form.get(key)
                    if val is None:
                        continue
                    sub += struct[c, a, b] * val * (-1) ** pos
                if sub != 0.0:
                    total += (-1) ** (s + t) * sub
        if total != 0.0:
            out[tup] = total
    return out


def bidegree_part(form, n, p, q):
    """Keep the terms with ``p`` indices below ``n`` and ``q`` indices at or above."""
    return {k: v for k, v in form.items() if sum(1 for i in k if i < n) == p and len(k) - p == q}


def max_abs(form) -> float:
    return max((abs(v) for v in form.values()), default=0.0)


def from_tensor(t, degree):
    """Alternating form from a full coefficient tensor (assumed alternating)."""
    dim = t.shape[0]
    return _drop_zeros({k: t[k] for k in combinations(range(dim), degree)})
