"""Exact integer linear algebra for lattice certificates.

Everything works over Python ints; matrices are lists of lists. Sizes here
are tiny (basis matrices of small instances), so clarity beats asymptotics.
"""

from __future__ import annotations


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank over the rationals, computed fraction-free."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return 0
    nr, nc = len(m), len(m[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(nc):
        pivot = None
        for r in range(row, nr):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        for r in range(row + 1, nr):
            for c in range(col + 1, nc):
                m[r][c] = (m[row][col] * m[r][c] - m[r][col] * m[row][c]) // prev
            m[r][col] = 0
        prev = m[row][col]
        row += 1
        rank += 1
        if row == nr:
            break
    return rank


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank over GF(p). A cheap cross-check for bareiss_rank."""
    m = [[x % p for x in r] for r in rows]
    if not m or not m[0]:
        return 0
    nr, nc = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(nc):
        pivot = None
        for r in range(row, nr):
            if m[r][col] % p != 0:
                pivot = r
                break
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = pow(m[row][col], p - 2, p)
        for r in range(row + 1, nr):
            if m[r][col]:
                f = (m[r][col] * inv) % p
                for c in range(col, nc):
                    m[r][c] = (m[r][c] - f * m[row][c]) % p
        row += 1
        rank += 1
        if row == nr:
            break
    return rank


def smith_normal_form(rows: list[list[int]]) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    m = [list(r) for r in rows]
    if not m or not m[0]:
        return []
    nr, nc = len(m), len(m[0])
    factors = []
    top = 0
    while top < nr and top < nc:
        # find the entry of least nonzero magnitude in the working block
        best = None
        for r in range(top, nr):
            for c in range(top, nc):
                if m[r][c] != 0 and (best is None or abs(m[r][c]) < abs(m[best[0]][best[1]])):
                    best = (r, c)
        if best is None:
            break
        r, c = best
        m[top], m[r] = m[r], m[top]
        for row_ in m:
            row_[top], row_[c] = row_[c], row_[top]
        # clear row and column top by Euclidean steps
        dirty = True
        while dirty:
            dirty = False
            for r in range(top + 1, nr):
                if m[r][top] != 0:
                    q = m[r][top] // m[top][top]
                    for cc in range(top, nc):
                        m[r][cc] -= q * m[top][cc]
                    if m[r][top] != 0:
                        m[top], m[r] = m[r], m[top]
                        dirty = True
            for c in range(top + 1, nc):
                if m[top][c] != 0:
                    q = m[top][c] // m[top][top]
                    for rr in range(top, nr):
                        m[rr][c] -= q * m[rr][top]
                    if m[top][c] != 0:
                        for row_ in m:
                            row_[top], row_[c] = row_[c], row_[top]
                        dirty = True
        # pivot must divide every remaining entry
        piv = m[top][top]
        fix = None
        for r in range(top + 1, nr):
            for c in range(top + 1, nc):
                if m[r][c] % piv != 0:
                    fix = r
                    break
            if fix is not None:
                break
        if fix is not None:
            for cc in range(top, nc):
                m[top][cc] += m[fix][cc]
            continue
        factors.append(abs(piv))
        top += 1
    return factors


def row_hermite(rows: list[list[int]]):
    """Row echelon form over Z with a unimodular transform.

    Returns (H, U, pivots) with U * rows == H, H echelon (pivots positive,
    zeros below each pivot), pivots a list of (row, col).
    """
    h = [list(r) for r in rows]
    nr = len(h)
    nc = len(h[0]) if h else 0
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    row = 0
    pivots = []
    for col in range(nc):
        # gcd out everything below `row` in this column
        pivot = None
        for r in range(row, nr):
            if h[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        h[row], h[pivot] = h[pivot], h[row]
        u[row], u[pivot] = u[pivot], u[row]
        changed = True
        while changed:
            changed = False
            for r in range(row + 1, nr):
                if h[r][col] == 0:
                    continue
                q = h[r][col] // h[row][col]
                for c in range(nc):
                    h[r][c] -= q * h[row][c]
                for c in range(nr):
                    u[r][c] -= q * u[row][c]
                if h[r][col] != 0:
                    h[row], h[r] = h[r], h[row]
                    u[row], u[r] = u[r], u[row]
                    changed = True
        if h[row][col] < 0:
            h[row] = [-x for x in h[row]]
            u[row] = [-x for x in u[row]]
        pivots.append((row, col))
        row += 1
        if row == nr:
            break
    return h, u, pivots


def solve_integral(rows: list[list[int]], target: list[int]):
    """Integer coefficients c with sum_i c[i] * rows[i] == target, or None."""
    if not rows:
        return None if any(target) else []
    h, u, pivots = row_hermite(rows)
    nc = len(target)
    resid = list(target)
    coeff = [0] * len(rows)
    for row, col in pivots:
        if resid[col] % h[row][col] != 0:
            return None
        q = resid[col] // h[row][col]
        coeff[row] = q
        if q:
            for c in range(nc):
                resid[c] -= q * h[row][c]
    if any(resid):
        return None
    # translate back through the unimodular transform
    out = [0] * len(rows)
    for r, q in enumerate(coeff):
        if q:
            for i in range(len(rows)):
                out[i] += q * u[r][i]
    return out


def extended_gcd_combination(values: list[int]):
    """(g, coeffs) with sum coeffs[i] * values[i] == g == gcd(values)."""
    g = 0
    coeffs = [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g = abs(v)
            coeffs = [0] * len(values)
            coeffs[i] = 1 if v > 0 else -1
            continue
        # extended euclid on (g, v)
        old_r, r = g, v
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r != 0:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [c * old_s for c in coeffs]
        coeffs[i] += old_t
        g = old_r
    return g, coeffs
