"""Pure-Python enumeration kernels.

Same signatures and results as the compiled ``_ckernels`` module.  Tables
are flat integer sequences:

* lifted composition of an ``n``-atom algebra: ``comp[(r << n) | s]``;
* lifted converse and lifted projections: ``table[r]``;
* atom-level composition of component ``c``:
  ``atom_comp[comp_off[c] + a * natoms[c] + b]`` (a bit set of atoms).
"""

from __future__ import annotations


def dissociability_scan(e0, e1, comp0, conv0, comp1, conv1, p01, p10, n0, n1, lo, hi, stop_first):
    """Check every 3-variable network over a projection-closed bi-slice.

    ``e0[i], e1[i]`` are the two parts of the i-th projection-closed,
    non-empty bi-relation; only triples whose first index lies in
    ``[lo, hi)`` are visited.  Each triple (xy, yz, xz) is closed under
    composition component by component; a result without empty parts must
    be closed under projection.  Returns ``(checked, i, j, k)`` with the
    first failing triple in lexicographic order, or ``-1`` entries.
    """
    k_count = len(e0)
    checked = 0
    first = (-1, -1, -1)
    for i in range(lo, min(hi, k_count)):
        a0 = e0[i]
        a1 = e1[i]
        for j in range(k_count):
            b0 = e0[j]
            b1 = e1[j]
            for k in range(k_count):
                checked += 1
                x0, y0, z0 = _tri_close(a0, b0, e0[k], comp0, conv0, n0)
                if not (x0 and y0 and z0):
                    continue
                x1, y1, z1 = _tri_close(a1, b1, e1[k], comp1, conv1, n1)
                if not (x1 and y1 and z1):
                    continue
                if (
                    x1 & ~p01[x0] or x0 & ~p10[x1]
                    or y1 & ~p01[y0] or y0 & ~p10[y1]
                    or z1 & ~p01[z0] or z0 & ~p10[z1]
                ):
                    if first[0] < 0:
                        first = (i, j, k)
                    if stop_first:
                        return checked, first[0], first[1], first[2]
    return checked, first[0], first[1], first[2]


def _tri_close(a, b, c, comp, conv, n):
    # a = xy, b = yz, c = xz
    while True:
        c2 = c & comp[(a << n) | b]
        a2 = a & comp[(c2 << n) | conv[b]]
        b2 = b & comp[(conv[a2] << n) | c2]
        if c2 == c and a2 == a and b2 == b:
            return a, b, c
        if not (a2 and b2 and c2):
            return a2, b2, c2
        a, b, c = a2, b2, c2


def composition_stability_scan(elems, images, comp, conv, n, stop_first):
    """Triangles over ``elems`` that are closed and non-empty, then refined.

    Returns ``(closed_triangles, i, j, k)``; the indices name the first
    closed triangle whose image under the refinement is not closed or has
    an empty edge.
    """
    size = len(elems)
    closed = 0
    first = (-1, -1, -1)
    for i in range(size):
        a = elems[i]
        if not a:
            continue
        ca = conv[a]
        for j in range(size):
            b = elems[j]
            if not b:
                continue
            ab = comp[(a << n) | b]
            cb = conv[b]
            for k in range(size):
                c = elems[k]
                if not c or c & ~ab:
                    continue
                if a & ~comp[(c << n) | cb] or b & ~comp[(ca << n) | c]:
                    continue
                closed += 1
                ha = images[i]
                hb = images[j]
                hc = images[k]
                if (
                    not (ha and hb and hc)
                    or hc & ~comp[(ha << n) | hb]
                    or ha & ~comp[(hc << n) | conv[hb]]
                    or hb & ~comp[(conv[ha] << n) | hc]
                ):
                    if first[0] < 0:
                        first = (i, j, k)
                    if stop_first:
                        return closed, i, j, k
    return closed, first[0], first[1], first[2]


def _triangle_ok(tri, t, choice, offsets, atoms, m, atom_comp, comp_off, natoms, conv, conv_off):
    exy = tri[3 * t]
    eyz = tri[3 * t + 1]
    exz = tri[3 * t + 2]
    base_xy = (offsets[exy] + choice[exy]) * m
    base_yz = (offsets[eyz] + choice[eyz]) * m
    base_xz = (offsets[exz] + choice[exz]) * m
    for c in range(m):
        a = atoms[base_xy + c]
        b = atoms[base_yz + c]
        z = atoms[base_xz + c]
        na = natoms[c]
        off = comp_off[c]
        co = conv_off[c]
        if not (atom_comp[off + a * na + b] >> z) & 1:
            return False
        if not (atom_comp[off + z * na + conv[co + b]] >> a) & 1:
            return False
        if not (atom_comp[off + conv[co + a] * na + z] >> b) & 1:
            return False
    return True


def scenario_scan(
    counts, offsets, atoms, m, tri, tri_start,
    atom_comp, comp_off, natoms, conv, conv_off,
    pruned, collect, choice_out, seen_out,
):
    """Enumerate scenarios given per-edge candidate basic multi-relations.

    Edges are numbered ``0..E-1`` in enumeration order; edge ``e`` has
    ``counts[e]`` candidates whose atoms sit at
    ``atoms[(offsets[e] + idx) * m + component]``.  ``tri`` lists triangles
    as (xy, yz, xz) edge triples.  In pruned mode the triangles must be
    grouped by the highest edge they use, ``tri_start[p]`` being the first
    triangle whose highest edge is ``p``; the pure mode checks every
    triangle of every complete scenario.

    Returns ``(checked, closed)``.  Without ``collect`` the scan stops at
    the first closed scenario and writes it to ``choice_out``; with
    ``collect`` every closed scenario is visited and ``seen_out`` marks the
    candidates occurring in one of them.
    """
    n_edges = len(counts)
    n_tri = len(tri) // 3
    args = (offsets, atoms, m, atom_comp, comp_off, natoms, conv, conv_off)
    for e in range(n_edges):
        if counts[e] == 0:
            return 0, 0
    choice = [0] * n_edges
    checked = 0
    closed = 0
    if n_edges == 0:
        return 1, 1
    if not pruned:
        while True:
            checked += 1
            ok = True
            for t in range(n_tri):
                if not _triangle_ok(tri, t, choice, *args):
                    ok = False
                    break
            if ok:
                closed += 1
                if collect:
                    for e in range(n_edges):
                        seen_out[offsets[e] + choice[e]] = 1
                else:
                    for e in range(n_edges):
                        choice_out[e] = choice[e]
                    return checked, closed
            p = n_edges - 1
            while p >= 0:
                choice[p] += 1
                if choice[p] < counts[p]:
                    break
                choice[p] = 0
                p -= 1
            if p < 0:
                return checked, closed
    # depth-first search with triangle checks as soon as a triangle is complete
    p = 0
    choice[0] = -1
    while p >= 0:
        choice[p] += 1
        if choice[p] >= counts[p]:
            p -= 1
            continue
        checked += 1
        ok = True
        for t in range(tri_start[p], tri_start[p + 1]):
            if not _triangle_ok(tri, t, choice, *args):
                ok = False
                break
        if not ok:
            continue
        if p == n_edges - 1:
            closed += 1
            if collect:
                for e in range(n_edges):
                    seen_out[offsets[e] + choice[e]] = 1
            else:
                for e in range(n_edges):
                    choice_out[e] = choice[e]
                return checked, closed
        else:
            p += 1
            choice[p] = -1
    return checked, closed
