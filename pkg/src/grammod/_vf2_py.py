"""Pure-Python monomorphism search kernel.

Mirrors ``_vf2.pyx`` argument for argument; ``_match`` picks one at import.
All inputs are flat integer buffers prepared by ``_match.prepare``:

``order``      pattern vertices in search order
``parent``     per search position, an earlier position adjacent to it or -1
``back_ptr``   CSR offsets (per position) into ``back_pos``/``back_lab``
``back_pos``   earlier positions adjacent to the position
``back_lab``   pattern edge-label code of that adjacency
``h_ptr``      CSR offsets of the host adjacency
``h_idx``      host neighbours
``h_mat``      ``n_h * n_h`` host edge-label codes, -1 where no edge
``vcompat``    ``n_p * n_h`` flags, pattern vertex (not position) major
``ecompat``    ``n_plab * n_hlab`` flags
"""


def search(n_p, n_h, order, parent, back_ptr, back_pos, back_lab,
           h_ptr, h_idx, h_mat, vcompat, ecompat, n_hlab,
           max_matches, callback):
    """Enumerate injective, compatible, adjacency-preserving maps.

    Returns the number of maps found. ``max_matches < 0`` means unlimited.
    ``callback`` (or None) receives each map as a tuple indexed by pattern
    vertex; a falsy return value stops the search.
    """
    if n_p == 0:
        if callback is not None:
            callback(())
        return 1
    if n_h < n_p:
        return 0
    order = list(order)
    parent = list(parent)
    back_ptr = list(back_ptr)
    back_pos = list(back_pos)
    back_lab = list(back_lab)
    h_ptr = list(h_ptr)
    h_idx = list(h_idx)
    h_mat = list(h_mat)
    vcompat = list(vcompat)
    ecompat = list(ecompat)

    used = [False] * n_h
    image = [0] * n_p
    cursor = [0] * n_p
    count = 0
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
            h = h_idx[base + cursor[k]] if par >= 0 else cursor[k]
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
                used[found] = True
                k += 1
                cursor[k] = 0
        else:
            k -= 1
            if k < 0:
                return count
            used[image[k]] = False
