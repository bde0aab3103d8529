"""Canonical byte codes for multibranched surfaces.

Isomorphism here means: bijections of branches and of sectors preserving the
local models ``(d, s)`` and sector types, together with

* a rotation of the orbit indexing of each branch (slot relabelling),
* an arbitrary renumbering of the boundary circles of each sector,
* reversing a branch (orbit order reflected, signs and sides at its circles
  flipped; the shift is unchanged),
* reversing the orientation of an orientable sector (signs and sides at its
  circles flipped), and a local orientation flip at any single circle of a
  non-orientable sector.

The last three are changes of bookkeeping for the same embedded object.
Only the product ``sign * side`` per circle and the signs along cycles of
orientable sectors survive them.

The code is computed by colour refinement on the branch/sector incidence
graph, individualisation of the first non-trivial cell with backtracking, and
at every discrete leaf a minimisation over the residual orientation gauge.
"""
from __future__ import annotations

from itertools import product

from .model import MultibranchedSurface


def _incidence(X: MultibranchedSurface):
    nb = len(X.branches)
    bpos = {b.id: i for i, b in enumerate(X.branches)}
    spos = {e.id: nb + i for i, e in enumerate(X.sectors)}
    n = nb + len(X.sectors)
    adj = [[] for _ in range(n)]
    entries = [[None] * b.orbit_count for b in X.branches]
    for a in X.attachments:
        bi, si = bpos[a.branch], spos[a.sector]
        orientable = X.sectors[si - nb].sig.orientable
        pi = a.sign * a.side
        adj[bi].append((si, pi))
        adj[si].append((bi, pi))
        entries[bi][a.orbit] = (si, a.sign if orientable else 0, pi)
    colours = []
    for b in X.branches:
        colours.append((0, b.degree, b.shift, 0))
    for e in X.sectors:
        colours.append((1, int(e.sig.orientable), e.sig.genus, e.sig.boundary_count))
    return n, nb, adj, entries, _rank(colours)


def _rank(keys):
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def _refine(colours, adj):
    count = len(set(colours))
    while True:
        sigs = [(colours[v], tuple(sorted((colours[u], lab) for u, lab in adj[v])))
                for v in range(len(colours))]
        new = _rank(sigs)
        new_count = len(set(new))
        if new_count == count:
            return new
        colours, count = new, new_count


def _segment(X, bi, entries, label, gb, gauge):
    seq = []
    for si, eps, pi in entries[bi]:
        if eps:
            eps = eps * gb * gauge[si]
        seq.append((label[si], eps, pi))
    if gb == -1:
        seq = [seq[0]] + seq[:0:-1]
    best = min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))
    b = X.branches[bi]
    return (b.degree, b.shift, best)


def _leaf_code(X, n, nb, entries, colours):
    order = sorted(range(n), key=lambda v: colours[v])
    border = [v for v in order if v < nb]
    sorder = [v for v in order if v >= nb]
    label = {v: i for i, v in enumerate(sorder)}
    header = (nb, len(sorder), tuple(
        (int(X.sectors[v - nb].sig.orientable), X.sectors[v - nb].sig.genus,
         X.sectors[v - nb].sig.boundary_count) for v in sorder))
    states = [{}]
    segments = []
    for bi in border:
        best, keep = None, {}
        for st in states:
            free = sorted({si for si, eps, _ in entries[bi] if eps and si not in st})
            for gb in (1, -1):
                for bits in product((1, -1), repeat=len(free)):
                    g = dict(st)
                    g.update(zip(free, bits))
                    seg = _segment(X, bi, entries, label, gb, g)
                    if best is None or seg < best:
                        best, keep = seg, {}
                    if seg == best:
                        keep[tuple(sorted(g.items()))] = g
        segments.append(best)
        states = list(keep.values())
    return (header, tuple(segments))


def canonical_code(X: MultibranchedSurface) -> bytes:
    cached = X.__dict__.get("_canonical_code")
    if cached is not None:
        return cached
    n, nb, adj, entries, colours = _incidence(X)
    best = None

    def search(colours):
        nonlocal best
        colours = _refine(colours, adj)
        cells = {}
        for v, c in enumerate(colours):
            cells.setdefault(c, []).append(v)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            code = _leaf_code(X, n, nb, entries, colours)
            if best is None or code < best:
                best = code
            return
        for v in target:
            search(_rank([(c, 0 if u == v else 1) for u, c in enumerate(colours)]))

    search(colours)
    code = repr(best).encode("ascii")
    X.__dict__["_canonical_code"] = code
    return code
