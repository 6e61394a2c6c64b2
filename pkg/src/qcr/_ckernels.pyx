# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels; see ``_pykernels`` for the contracts."""

ctypedef unsigned long long u64
ctypedef long long i64


cdef inline bint _tri_close(u64 a, u64 b, u64 c, const u64[:] comp, const u64[:] conv, int n,
                            u64 *ra, u64 *rb, u64 *rc) nogil:
    cdef u64 a2, b2, c2
    while True:
        c2 = c & comp[(a << n) | b]
        a2 = a & comp[(c2 << n) | conv[b]]
        b2 = b & comp[(conv[a2] << n) | c2]
        if c2 == c and a2 == a and b2 == b:
            break
        a = a2
        b = b2
        c = c2
        if a == 0 or b == 0 or c == 0:
            break
    ra[0] = a
    rb[0] = b
    rc[0] = c
    return a != 0 and b != 0 and c != 0


def dissociability_scan(const u64[:] e0, const u64[:] e1,
                        const u64[:] comp0, const u64[:] conv0,
                        const u64[:] comp1, const u64[:] conv1,
                        const u64[:] p01, const u64[:] p10,
                        int n0, int n1, Py_ssize_t lo, Py_ssize_t hi, bint stop_first):
    cdef Py_ssize_t size = e0.shape[0]
    cdef Py_ssize_t i, j, k
    cdef i64 checked = 0
    cdef Py_ssize_t fi = -1, fj = -1, fk = -1
    cdef u64 x0, y0, z0, x1, y1, z1
    if hi > size:
        hi = size
    with nogil:
        for i in range(lo, hi):
            for j in range(size):
                for k in range(size):
                    checked += 1
                    if not _tri_close(e0[i], e0[j], e0[k], comp0, conv0, n0, &x0, &y0, &z0):
                        continue
                    if not _tri_close(e1[i], e1[j], e1[k], comp1, conv1, n1, &x1, &y1, &z1):
                        continue
                    if ((x1 & ~p01[x0]) or (x0 & ~p10[x1])
                            or (y1 & ~p01[y0]) or (y0 & ~p10[y1])
                            or (z1 & ~p01[z0]) or (z0 & ~p10[z1])):
                        if fi < 0:
                            fi = i
                            fj = j
                            fk = k
                        if stop_first:
                            break
                if stop_first and fi >= 0:
                    break
            if stop_first and fi >= 0:
                break
    return checked, fi, fj, fk


def composition_stability_scan(const u64[:] elems, const u64[:] images,
                               const u64[:] comp, const u64[:] conv, int n, bint stop_first):
    cdef Py_ssize_t size = elems.shape[0]
    cdef Py_ssize_t i, j, k
    cdef i64 closed = 0
    cdef Py_ssize_t fi = -1, fj = -1, fk = -1
    cdef u64 a, b, c, ab, ca, cb, ha, hb, hc
    with nogil:
        for i in range(size):
            a = elems[i]
            if a == 0:
                continue
            ca = conv[a]
            for j in range(size):
                b = elems[j]
                if b == 0:
                    continue
                ab = comp[(a << n) | b]
                cb = conv[b]
                for k in range(size):
                    c = elems[k]
                    if c == 0 or (c & ~ab):
                        continue
                    if (a & ~comp[(c << n) | cb]) or (b & ~comp[(ca << n) | c]):
                        continue
                    closed += 1
                    ha = images[i]
                    hb = images[j]
                    hc = images[k]
                    if (ha == 0 or hb == 0 or hc == 0
                            or (hc & ~comp[(ha << n) | hb])
                            or (ha & ~comp[(hc << n) | conv[hb]])
                            or (hb & ~comp[(conv[ha] << n) | hc])):
                        if fi < 0:
                            fi = i
                            fj = j
                            fk = k
                        if stop_first:
                            break
                if stop_first and fi >= 0:
                    break
            if stop_first and fi >= 0:
                break
    return closed, fi, fj, fk


cdef inline bint _triangle_ok(const int[:] tri, Py_ssize_t t, int *choice,
                              const int[:] offsets, const int[:] atoms, int m,
                              const u64[:] atom_comp, const int[:] comp_off,
                              const int[:] natoms, const int[:] conv,
                              const int[:] conv_off) nogil:
    cdef int exy = tri[3 * t], eyz = tri[3 * t + 1], exz = tri[3 * t + 2]
    cdef Py_ssize_t bxy = (offsets[exy] + choice[exy]) * m
    cdef Py_ssize_t byz = (offsets[eyz] + choice[eyz]) * m
    cdef Py_ssize_t bxz = (offsets[exz] + choice[exz]) * m
    cdef int c, a, b, z, na, off, co
    for c in range(m):
        a = atoms[bxy + c]
        b = atoms[byz + c]
        z = atoms[bxz + c]
        na = natoms[c]
        off = comp_off[c]
        co = conv_off[c]
        if not ((atom_comp[off + a * na + b] >> z) & 1):
            return False
        if not ((atom_comp[off + z * na + conv[co + b]] >> a) & 1):
            return False
        if not ((atom_comp[off + conv[co + a] * na + z] >> b) & 1):
            return False
    return True


def scenario_scan(const int[:] counts, const int[:] offsets, const int[:] atoms, int m,
                  const int[:] tri, const int[:] tri_start,
                  const u64[:] atom_comp, const int[:] comp_off, const int[:] natoms,
                  const int[:] conv, const int[:] conv_off,
                  bint pruned, bint collect, int[:] choice_out, unsigned char[:] seen_out):
    cdef Py_ssize_t n_edges = counts.shape[0]
    cdef Py_ssize_t n_tri = tri.shape[0] // 3
    cdef Py_ssize_t e, t
    cdef i64 checked = 0, closed = 0
    cdef int p
    cdef bint ok
    cdef int[256] choice_buf
    cdef int *choice = choice_buf
    if n_edges > 256:
        raise ValueError("at most 256 edges are supported")
    for e in range(n_edges):
        if counts[e] == 0:
            return 0, 0
    if n_edges == 0:
        return 1, 1
    for e in range(n_edges):
        choice[e] = 0
    with nogil:
        if not pruned:
            while True:
                checked += 1
                ok = True
                for t in range(n_tri):
                    if not _triangle_ok(tri, t, choice, offsets, atoms, m, atom_comp,
                                        comp_off, natoms, conv, conv_off):
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
                        break
                p = <int>n_edges - 1
                while p >= 0:
                    choice[p] += 1
                    if choice[p] < counts[p]:
                        break
                    choice[p] = 0
                    p -= 1
                if p < 0:
                    break
        else:
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
                    if not _triangle_ok(tri, t, choice, offsets, atoms, m, atom_comp,
                                        comp_off, natoms, conv, conv_off):
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
                        break
                else:
                    p += 1
                    choice[p] = -1
    return checked, closed
