"""Smith normal form of small integer matrices (exact, pure Python ints)."""
from __future__ import annotations


def invariant_factors(matrix: list[list[int]]) -> list[int]:
    """Return the non-zero diagonal of the Smith normal form, ``d1 | d2 | ...``.

    The input is a list of rows and is not modified.
    """
    A = [list(map(int, row)) for row in matrix]
    if not A or not A[0]:
        return []
    m, n = len(A), len(A[0])
    diag = []
    t = 0
    while t < min(m, n):
        pivot = _smallest_nonzero(A, t)
        if pivot is None:
            break
        i, j = pivot
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // A[t][t]
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // A[t][t]
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                # the pivot must divide the remaining block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
                continue
            pivot = _smallest_nonzero_in_cross(A, t)
            i, j = pivot
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def _smallest_nonzero(A, t):
    best = None
    for i in range(t, len(A)):
        for j in range(t, len(A[0])):
            v = A[i][j]
            if v and (best is None or abs(v) < best[0]):
                best = (abs(v), i, j)
    return None if best is None else best[1:]


def _smallest_nonzero_in_cross(A, t):
    cands = [(abs(A[i][t]), i, t) for i in range(t, len(A)) if A[i][t]]
    cands += [(abs(A[t][j]), t, j) for j in range(t, len(A[0])) if A[t][j]]
    return min(cands)[1:]


def rank(matrix: list[list[int]]) -> int:
    return len(invariant_factors(matrix))
