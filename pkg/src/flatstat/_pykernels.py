"""numpy implementations of the hot loops; used when the extension is absent."""

from __future__ import annotations

import math

import numpy as np


def fold_histogram(ind, bases, pivmasks, hist):
    ind = np.asarray(ind, dtype=np.uint8)
    bases = np.asarray(bases, dtype=np.int64)
    pivmasks = np.asarray(pivmasks, dtype=np.int64)
    m, d = bases.shape
    if hist.shape[0] != (1 << d) + 1:
        raise ValueError("histogram length must be 2^d + 1")
    if m == 0:
        return
    size = ind.shape[0]
    idx = np.arange(size, dtype=np.int64)
    rows = np.arange(m)[:, None]
    t = np.broadcast_to(ind.astype(np.int32), (m, size)).copy()
    for j in range(d):
        t = t + t[rows, idx[None, :] ^ bases[:, j : j + 1]]
    reps = (idx[None, :] & pivmasks[:, None]) == 0
    hist += np.bincount(t[reps], minlength=(1 << d) + 1).astype(np.int64)


def mask_profiles(masks, flats, width):
    masks = np.asarray(masks, dtype=np.uint64)
    flats = np.asarray(flats, dtype=np.uint64)
    out = np.zeros((masks.shape[0], width), dtype=np.int32)
    if masks.shape[0] == 0 or flats.shape[0] == 0:
        return out
    c = np.bitwise_count(masks[:, None] & flats[None, :]).astype(np.int64)
    keep = c < width
    rows = np.broadcast_to(np.arange(masks.shape[0])[:, None], c.shape)
    np.add.at(out, (rows[keep], c[keep]), 1)
    return out


def anneal_run(incidence, state, counts, s, proposals, uniforms, temps):
    hits = int(np.count_nonzero(counts == s))
    best = hits
    best_state = state.copy()
    trace = [(0, hits)]
    for t in range(proposals.shape[0]):
        p = int(proposals[t])
        step = -1 if state[p] else 1
        inc = incidence[p]
        c = counts[inc]
        delta = int(np.count_nonzero(c + step == s)) - int(np.count_nonzero(c == s))
        if delta < 0 and not (uniforms[t] < math.exp(delta / temps[t])):
            continue
        counts[inc] += step
        state[p] ^= 1
        hits += delta
        if hits > best:
            best = hits
            best_state[:] = state
            trace.append((t + 1, hits))
        elif hits == best:
            diff = np.flatnonzero(state != best_state)
            if diff.size and state[diff[-1]] < best_state[diff[-1]]:
                best_state[:] = state
    return best, best_state, trace
