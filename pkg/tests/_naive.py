"""Slow loop-level re-implementations used as oracles by the test suite.

Everything here is written directly from the update formulas with explicit
nested loops and no shared code with the package, so agreement is evidence
rather than tautology.
"""

import numpy as np


def barycenters(centers, focal_sets):
    centers = np.asarray(centers, dtype=float)
    out = np.zeros((len(focal_sets), centers.shape[1]))
    for j, members in enumerate(focal_sets):
        for k in members:
            out[j] += centers[k - 1]
        out[j] /= len(members)
    return out


def masses(distances, focal_sets, alpha, beta, delta):
    d = np.asarray(distances, dtype=float)
    cards = np.array([len(a) for a in focal_sets], dtype=float)
    n, f = d.shape
    m = np.zeros((n, f))
    empty = np.zeros(n)
    expo = -1.0 / (beta - 1.0)
    for i in range(n):
        base = cards**alpha * d[i]
        if np.any(base == 0.0):
            tied = [j for j in range(f) if base[j] == 0.0]
            cmin = min(cards[j] for j in tied)
            chosen = [j for j in tied if cards[j] == cmin]
            for j in chosen:
                m[i, j] = 1.0 / len(chosen)
            continue
        weights = base**expo
        denom = weights.sum() + delta ** (2.0 * expo)
        m[i] = weights / denom
        empty[i] = 1.0 - m[i].sum()
    return m, empty


def association(source_bary, target_bary, focal_sets, alpha, gamma):
    src = np.asarray(source_bary, dtype=float)
    tgt = np.asarray(target_bary, dtype=float)
    cards = np.array([len(a) for a in focal_sets], dtype=float)
    fs, ft = src.shape[0], tgt.shape[0]
    r = np.zeros((fs, ft))
    expo = -1.0 / (gamma - 1.0)
    for k in range(fs):
        base = np.array(
            [cards[j] ** alpha * np.sum((src[k] - tgt[j]) ** 2) for j in range(ft)]
        )
        if np.any(base == 0.0):
            tied = [j for j in range(ft) if base[j] == 0.0]
            cmin = min(cards[j] for j in tied)
            chosen = [j for j in tied if cards[j] == cmin]
            for j in chosen:
                r[k, j] = 1.0 / len(chosen)
            continue
        weights = base**expo
        r[k] = weights / weights.sum()
    return r


def assembly(
    features,
    m,
    focal_sets,
    alpha,
    beta,
    lam=0.0,
    r=None,
    source_bary=None,
    gamma=2.0,
):
    """lhs/rhs of the center system straight from the printed definitions."""
    x = np.asarray(features, dtype=float)
    n, p = x.shape
    c = max(max(a) for a in focal_sets)
    cards = np.array([len(a) for a in focal_sets], dtype=float)
    lhs = np.zeros((c, c))
    rhs = np.zeros((c, p))
    for l in range(1, c + 1):
        for j, members in enumerate(focal_sets):
            if l not in members:
                continue
            for i in range(n):
                rhs[l - 1] += x[i] * cards[j] ** (alpha - 1.0) * m[i, j] ** beta
            for z in members:
                for i in range(n):
                    lhs[l - 1, z - 1] += cards[j] ** (alpha - 2.0) * m[i, j] ** beta
    if r is not None:
        src = np.asarray(source_bary, dtype=float)
        for l in range(1, c + 1):
            for j, members in enumerate(focal_sets):
                if l not in members:
                    continue
                for k in range(src.shape[0]):
                    rhs[l - 1] += (
                        lam * src[k] * cards[j] ** (alpha - 1.0) * r[k, j] ** gamma
                    )
                for z in members:
                    for k in range(src.shape[0]):
                        lhs[l - 1, z - 1] += (
                            lam * cards[j] ** (alpha - 2.0) * r[k, j] ** gamma
                        )
    return lhs, rhs


def objective(
    features,
    m,
    empty,
    centers,
    focal_sets,
    alpha,
    beta,
    delta,
    lam=0.0,
    r=None,
    source_bary=None,
    gamma=2.0,
):
    x = np.asarray(features, dtype=float)
    cards = np.array([len(a) for a in focal_sets], dtype=float)
    bary = barycenters(centers, focal_sets)
    total = 0.0
    for i in range(x.shape[0]):
        for j in range(len(focal_sets)):
            d = np.sum((x[i] - bary[j]) ** 2)
            total += cards[j] ** alpha * m[i, j] ** beta * d
    if r is not None:
        src = np.asarray(source_bary, dtype=float)
        for k in range(src.shape[0]):
            for j in range(len(focal_sets)):
                gap = np.sum((src[k] - bary[j]) ** 2)
                total += lam * cards[j] ** alpha * r[k, j] ** gamma * gap
    for i in range(x.shape[0]):
        total += delta**2 * empty[i] ** beta
    return total
