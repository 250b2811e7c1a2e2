# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled residue-tree counting kernel (same contract as ``_count_py``)."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

from igusa.errors import BudgetExceeded

# products of two residues must fit in int64
MAX_MODULUS = 2 ** 31


cdef struct Tree:
    int nvars
    int nterms
    int m
    int64_t p
    int64_t modulus
    int64_t branching
    int64_t *coefs
    int *exps
    int64_t *point
    int64_t *counts
    int64_t *scales
    int64_t visited
    int64_t budget


cdef int64_t _evaluate(Tree *tr) nogil:
    cdef int64_t total = 0, mono
    cdef int k, i, e
    for k in range(tr.nterms):
        mono = tr.coefs[k]
        for i in range(tr.nvars):
            e = tr.exps[k * tr.nvars + i]
            while e > 0:
                mono = (mono * tr.point[i]) % tr.modulus
                e -= 1
        total = (total + mono) % tr.modulus
    return total


cdef int _descend(Tree *tr, int level) nogil:
    """Visit all children of the current node; return 1 when the budget runs out."""
    cdef int64_t j, digits, d, scale = tr.scales[level]
    cdef int64_t nxt = tr.scales[level + 1]
    cdef int i
    cdef int64_t *saved = <int64_t *> malloc(tr.nvars * sizeof(int64_t))
    for i in range(tr.nvars):
        saved[i] = tr.point[i]
    for j in range(tr.branching):
        tr.visited += 1
        if tr.visited > tr.budget:
            free(saved)
            return 1
        digits = j
        for i in range(tr.nvars):
            d = digits % tr.p
            digits = digits // tr.p
            tr.point[i] = saved[i] + d * scale
        if _evaluate(tr) % nxt == 0:
            tr.counts[level + 1] += 1
            if level + 1 < tr.m:
                if _descend(tr, level + 1):
                    free(saved)
                    return 1
    for i in range(tr.nvars):
        tr.point[i] = saved[i]
    free(saved)
    return 0


def count_tree(coefs, exps, int nvars, p, int m, budget):
    cdef Tree tr
    cdef int k, i, overflow
    p = int(p)
    counts = [0] * (m + 1)
    counts[0] = 1
    if m == 0:
        return counts
    modulus = p ** int(m)
    if modulus >= MAX_MODULUS:
        raise OverflowError("modulus too large for the compiled kernel")
    tr.nvars = nvars
    tr.nterms = len(coefs)
    tr.m = m
    tr.p = p
    tr.modulus = modulus
    tr.branching = p ** int(nvars)
    tr.visited = 0
    tr.budget = min(budget, 2 ** 62)
    tr.coefs = <int64_t *> malloc(max(tr.nterms, 1) * sizeof(int64_t))
    tr.exps = <int *> malloc(max(tr.nterms * nvars, 1) * sizeof(int))
    tr.point = <int64_t *> malloc(nvars * sizeof(int64_t))
    tr.counts = <int64_t *> malloc((m + 1) * sizeof(int64_t))
    tr.scales = <int64_t *> malloc((m + 1) * sizeof(int64_t))
    try:
        for k in range(tr.nterms):
            tr.coefs[k] = coefs[k] % modulus
            for i in range(nvars):
                tr.exps[k * nvars + i] = exps[k][i]
        for i in range(nvars):
            tr.point[i] = 0
        for k in range(m + 1):
            tr.counts[k] = 0
            tr.scales[k] = p ** int(k)
        with nogil:
            overflow = _descend(&tr, 0)
        if overflow:
            raise BudgetExceeded(
                f"residue tree for m={m}, nvars={nvars}, p={p} exceeds budget {budget}"
            )
        for k in range(1, m + 1):
            counts[k] = tr.counts[k]
    finally:
        free(tr.coefs)
        free(tr.exps)
        free(tr.point)
        free(tr.counts)
        free(tr.scales)
    return counts
