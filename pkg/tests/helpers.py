"""Shared builders for randomized module tests."""

import random
from collections import Counter

from uq_adjoint.linalg import Matrix
from uq_adjoint.modcat import GradedModule, ModuleLabel, canonical_label, direct_sum, projective, simple


def random_invertible(K, n, rng):
    while True:
        M = Matrix.from_values(K, [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if M.is_invertible():
            return M


def scramble(M: GradedModule, rng) -> GradedModule:
    """The same module in a random basis of every weight space."""
    K = M.K
    g = {w: random_invertible(K, n, rng) for w, n in M.dims.items()}
    gi = {w: m.inverse() for w, m in g.items()}
    E = {w: g[w + 2] @ m @ gi[w] for w, m in M.E.items()}
    F = {w: g[w - 2] @ m @ gi[w] for w, m in M.F.items()}
    return GradedModule(K, dict(M.dims), E, F, M.name)


def random_sum(K, rng, max_dim=60, lam_range=None):
    """Direct sum of random simples and projectives; returns (module, expected labels)."""
    l = K.l
    lo, hi = lam_range or (-l, 2 * l)
    parts, labels, total = [], Counter(), 0
    while True:
        lam = rng.randint(lo, hi)
        if rng.random() < 0.5:
            lab, M = ModuleLabel("P", lam), projective(K, lam)
        else:
            lab, M = ModuleLabel("L", lam), simple(K, lam)
        if total + M.dim > max_dim:
            break
        parts.append(M)
        labels[canonical_label(lab, l)] += 1
        total += M.dim
        if rng.random() < 0.25:
            break
    if not parts:
        parts, labels = [simple(K, 0)], Counter({ModuleLabel("L", 0): 1})
    S, _, _ = direct_sum(parts)
    return S, labels
