# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled monomorphism search kernel; same contract as ``_vf2_py.search``."""

from libc.stdlib cimport malloc, free


def search(int n_p, int n_h, const int[:] order, const int[:] parent,
           const int[:] back_ptr, const int[:] back_pos, const int[:] back_lab,
           const int[:] h_ptr, const int[:] h_idx, const int[:] h_mat,
           const unsigned char[:] vcompat, const unsigned char[:] ecompat,
           int n_hlab, long max_matches, object callback):
    cdef long count = 0
    cdef int k, v, par, base, n_cand, h, found, row, hrow, t, hl, pos
    cdef bint ok
    cdef char *used
    cdef int *image
    cdef int *cursor

    if n_p == 0:
        if callback is not None:
            callback(())
        return 1
    if n_h < n_p:
        return 0

    used = <char *> malloc(n_h * sizeof(char))
    image = <int *> malloc(n_p * sizeof(int))
    cursor = <int *> malloc(n_p * sizeof(int))
    if used == NULL or image == NULL or cursor == NULL:
        free(used)
        free(image)
        free(cursor)
        raise MemoryError()
    try:
        for h in range(n_h):
            used[h] = 0
        cursor[0] = 0
        k = 0
        while True:
            v = order[k]
            par = parent[k]
            if par >= 0:
                base = h_ptr[image[par]]
                n_cand = h_ptr[image[par] + 1] - base
            else:
                base = 0
                n_cand = n_h
            row = v * n_h
            found = -1
            while cursor[k] < n_cand:
                if par >= 0:
                    h = h_idx[base + cursor[k]]
                else:
                    h = cursor[k]
                cursor[k] += 1
                if used[h] or not vcompat[row + h]:
                    continue
                ok = True
                hrow = h * n_h
                for t in range(back_ptr[k], back_ptr[k + 1]):
                    hl = h_mat[hrow + image[back_pos[t]]]
                    if hl < 0 or not ecompat[back_lab[t] * n_hlab + hl]:
                        ok = False
                        break
                if ok:
                    found = h
                    break
            if found >= 0:
                image[k] = found
                if k + 1 == n_p:
                    count += 1
                    if callback is not None:
                        mapping = [0] * n_p
                        for pos in range(n_p):
                            mapping[order[pos]] = image[pos]
                        if not callback(tuple(mapping)):
                            return count
                    if 0 <= max_matches <= count:
                        return count
                else:
                    used[found] = 1
                    k += 1
                    cursor[k] = 0
            else:
                k -= 1
                if k < 0:
                    return count
                used[image[k]] = 0
    finally:
        free(used)
        free(image)
        free(cursor)
