"""Pure-Python residue-tree counting kernel.

Used when the compiled ``_count`` extension is unavailable, and as the
reference side of the kernel parity tests and the benchmark.
"""

from igusa.errors import BudgetExceeded


def count_tree(coefs, exps, nvars, p, m, budget):
    """Return ``[N_0, ..., N_m]`` for the polynomial given by parallel lists.

    ``N_k`` is the number of ``x`` in ``(Z/p^k)^nvars`` with ``f(x) = 0 mod p^k``.
    Residues are built one p-adic digit at a time; a residue mod ``p^(k+1)``
    is only visited when its reduction mod ``p^k`` is already a solution.
    ``budget`` caps the number of visited tuples.
    """
    counts = [0] * (m + 1)
    counts[0] = 1
    if m == 0:
        return counts
    modulus = p ** m
    coefs = [c % modulus for c in coefs]
    terms = list(zip(coefs, [tuple(e) for e in exps]))
    branching = p ** nvars
    visited = 0
    x = [0] * nvars
    # explicit stack of (level, next_digit_index, saved_coordinates)
    stack = [(0, 0, tuple(x))]
    while stack:
        level, j, base = stack.pop()
        if j >= branching:
            continue
        stack.append((level, j + 1, base))
        visited += 1
        if visited > budget:
            raise BudgetExceeded(
                f"residue tree for m={m}, nvars={nvars}, p={p} exceeds budget {budget}"
            )
        scale = p ** level
        digits = j
        point = list(base)
        for i in range(nvars):
            digits, d = divmod(digits, p)
            point[i] += d * scale
        value = 0
        for c, e in terms:
            mono = c
            for xi, ei in zip(point, e):
                if ei:
                    mono = mono * pow(xi, ei, modulus) % modulus
            value += mono
        if value % (scale * p) == 0:
            counts[level + 1] += 1
            if level + 1 < m:
                stack.append((level + 1, 0, tuple(point)))
    return counts
