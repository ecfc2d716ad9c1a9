"""Combinatorics of subset strings.

A *string* is a finite tuple of nonempty subsets of {1..n}; its
*degree* is the total size of its entries.  Subsets are int bitmasks
(element e is bit e-1), strings are tuples of masks, and the empty
string () is allowed.  Products of the single-subset algebra letters
are indexed by strings, and two distinguished families of strings --
*standard* and *reduced* -- each form a linear basis, so everything
downstream (normal forms, dimension counts, rewriting termination)
rests on the functions in this module.

Positions inside a string are 1-based throughout, matching the way the
skeleton is used: ``skeleton(bs)`` returns the increasing tuple of
positions where the maximal descending-chain segmentation of ``bs``
breaks, always starting at 1 and ending at len(bs)+1.  A new segment
starts at the first position whose entry either is not contained in
the current segment head or fails to be smaller than it by exactly the
distance from the head.
"""

from __future__ import annotations

from .errors import LengthMismatch, ResourceLimit

MAX_N = 16
MAX_DEGREE = 24


def bit(e: int) -> int:
    return 1 << (e - 1)


def mask_of(elems_iter) -> int:
    m = 0
    for e in elems_iter:
        m |= bit(e)
    return m


def elems(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def mask_size(mask: int) -> int:
    return mask.bit_count()


def mask_max(mask: int) -> int:
    """Largest element of a nonempty subset."""
    return mask.bit_length()


def subsets_of(universe: int):
    """All subsets of a universe mask, ascending bitmask value."""
    for v in range(universe + 1):
        if v & universe == v:
            yield v


def subset_str(mask: int) -> str:
    return "{" + ",".join(str(e) for e in elems(mask)) + "}"


def string_degree(bs) -> int:
    return sum(mask_size(b) for b in bs)


def subset_key(mask: int) -> tuple[int, ...]:
    return elems(mask)


def string_sort_key(bs):
    return (string_degree(bs), len(bs), tuple(subset_key(b) for b in bs))


def skeleton(bs) -> tuple[int, ...]:
    l = len(bs)
    skel = [1]
    while skel[-1] <= l:
        head_pos = skel[-1]
        head = bs[head_pos - 1]
        head_size = mask_size(head)
        nxt = l + 1
        for j in range(head_pos + 1, l + 1):
            entry = bs[j - 1]
            if (entry & ~head) != 0 or mask_size(entry) != head_size + head_pos - j:
                nxt = j
                break
        skel.append(nxt)
    return tuple(skel)


def def_functions(b: int, tail) -> tuple[int, int, int]:
    """The letters (d, e, f) controlling how prepending subset ``b`` to
    the string ``tail`` interacts with the chain structure.

    d is the element whose deletion from b gives the first entry of
    tail (0 if tail is empty or its first entry is not such a
    deletion); when d is 0 so are e and f.  e is the largest element
    of b.  f agrees with e except when tail has at least two chain
    segments and the head of its second segment has exactly the size
    that would let the first chain continue through it; then f is the
    largest element of b outside that head.
    """
    if not tail:
        return (0, 0, 0)
    first = tail[0]
    diff = b & ~first
    if (first & ~b) != 0 or mask_size(diff) != 1:
        return (0, 0, 0)
    d = mask_max(diff)
    e = mask_max(b)
    skel = skeleton(tail)
    t = len(skel)
    f = e
    if t >= 3:
        second_head = tail[skel[1] - 1]
        if mask_size(second_head) == mask_size(b) - skel[1]:
            outside = b & ~second_head
            f = mask_max(outside)
    return (d, e, f)


def _is_variant(bs, use_f: bool) -> bool:
    l = len(bs)
    skel_set = set(skeleton(bs))
    for pos in range(2, l + 1):
        if pos in skel_set:
            continue
        d, e, f = def_functions(bs[pos - 2], tuple(bs[pos - 1:]))
        drop = f if use_f else e
        if drop == 0 or bs[pos - 1] != bs[pos - 2] & ~bit(drop):
            return False
    return True


def is_standard(bs) -> bool:
    """Interior entries each delete the e-letter of their predecessor."""
    return _is_variant(bs, use_f=False)


def is_reduced(bs) -> bool:
    """Interior entries each delete the f-letter of their predecessor."""
    return _is_variant(bs, use_f=True)


def _v_sequence(bs, skel, primed: bool) -> tuple[int, ...]:
    out = []
    t = len(skel)
    for seg in range(t - 1):
        start, end = skel[seg], skel[seg + 1]
        for pos in range(start, end):
            if pos == start:
                if primed and seg >= 2:
                    prev_start = skel[seg - 1]
                    qs = range(prev_start, start)
                else:
                    qs = range(0)
            else:
                qs = range(start, pos)
            for q in qs:
                out.append(mask_size(bs[pos - 1] & ~bs[q - 1]))
    return tuple(out)


def compare_strings(bs, cs, primed: bool = False):
    """Order two strings: -1 if bs < cs, 1 if bs > cs, 0 if identical,
    None if the four comparison steps all tie on distinct strings.

    Steps: degree; then (equal length required, else LengthMismatch)
    skeleton, where the lexicographically larger skeleton is the
    *smaller* string; then the entrywise chain-distance sequence
    (the primed variant additionally logs, at each segment head from
    the third segment on, the distances to the previous segment's
    entries; the boundary after the first segment contributes none,
    which keeps the order insensitive to a replaced first entry);
    then the tuple of subset element sums, lexicographically.
    """
    bs, cs = tuple(bs), tuple(cs)
    if bs == cs:
        return 0
    db, dc = string_degree(bs), string_degree(cs)
    if db != dc:
        return -1 if db < dc else 1
    if len(bs) != len(cs):
        raise LengthMismatch(
            f"cannot order equal-degree strings of lengths {len(bs)} and {len(cs)}"
        )
    sb, sc = skeleton(bs), skeleton(cs)
    if sb != sc:
        return -1 if sb > sc else 1
    vb = _v_sequence(bs, sb, primed)
    vc = _v_sequence(cs, sc, primed)
    if vb != vc:
        return -1 if vb < vc else 1
    nb = tuple(sum(elems(b)) for b in bs)
    nc = tuple(sum(elems(c)) for c in cs)
    if nb != nc:
        return -1 if nb < nc else 1
    return None


def _check_enum_guards(n: int, max_degree: int):
    if not 1 <= n <= MAX_N:
        raise ResourceLimit(f"n must be between 1 and {MAX_N}")
    if not 0 <= max_degree <= MAX_DEGREE:
        raise ResourceLimit(f"max_degree must be between 0 and {MAX_DEGREE}")


def _fill_segment(head: int, length: int, next_head: int, f_rule: bool) -> list[int]:
    """Entries of one chain segment, deleting per the e-rule (largest
    element) or, when the next segment head continues the size chain,
    per the f-rule (largest element outside that head)."""
    seg = [head]
    cur = head
    for _ in range(length - 1):
        if f_rule:
            drop = mask_max(cur & ~next_head)
        else:
            drop = mask_max(cur)
        cur &= ~bit(drop)
        seg.append(cur)
    return seg


def _breaks_chain(prev_head: int, prev_pos: int, head: int, pos: int) -> bool:
    """Would ``head`` at ``pos`` start a new skeleton segment after a
    segment headed by ``prev_head`` at ``prev_pos``?"""
    if (head & ~prev_head) != 0:
        return True
    return mask_size(head) != mask_size(prev_head) - (pos - prev_pos)


def enumerate_strings(n: int, max_degree: int, variant: str):
    """All standard (e-rule) or reduced (f-rule) strings over {1..n}
    whose segment heads have total size at most ``max_degree``, sorted
    by (degree, length, subsets).

    Strings are generated from their free data: a skeleton together
    with the subsets at the segment heads, subject to each consecutive
    pair of heads genuinely breaking the chain; the interior entries
    are then forced by the deletion rule.  The bound charges only that
    free data -- each segment costs the size of its head, the forced
    shrinking interior entries are free.  Since a segment can be no
    longer than its head is large, the bound also caps string length.
    """
    _check_enum_guards(n, max_degree)
    if variant not in ("standard", "reduced"):
        raise ValueError("variant must be 'standard' or 'reduced'")
    use_f = variant == "reduced"
    universe = (1 << n) - 1
    by_size: dict[int, list[int]] = {}
    for mask in subsets_of(universe):
        if mask:
            by_size.setdefault(mask_size(mask), []).append(mask)

    out = [()]

    def extend(skel, seg_idx, heads, weight_so_far, results):
        t = len(skel) - 1  # number of segments
        if seg_idx == t:
            results.append(tuple(heads))
            return
        start, end = skel[seg_idx], skel[seg_idx + 1]
        length = end - start
        for size in range(length, n + 1):
            if weight_so_far + size > max_degree:
                break
            for head in by_size.get(size, ()):
                if seg_idx > 0 and not _breaks_chain(
                    heads[-1], skel[seg_idx - 1], head, start
                ):
                    continue
                heads.append(head)
                extend(skel, seg_idx + 1, heads, weight_so_far + size, results)
                heads.pop()

    for l in range(1, max_degree + 1):
        interior = list(range(2, l + 1))
        for breaks_bits in range(1 << len(interior)):
            skel = (1,) + tuple(
                interior[k] for k in range(len(interior)) if breaks_bits >> k & 1
            ) + (l + 1,)
            head_lists: list[tuple[int, ...]] = []
            extend(skel, 0, [], 0, head_lists)
            for heads in head_lists:
                string: list[int] = []
                t = len(skel) - 1
                for seg_idx in range(t):
                    start, end = skel[seg_idx], skel[seg_idx + 1]
                    next_head = heads[seg_idx + 1] if seg_idx + 1 < t else 0
                    f_rule = (
                        use_f
                        and seg_idx + 1 < t
                        and mask_size(next_head)
                        == mask_size(heads[seg_idx]) - (end - start)
                    )
                    string.extend(
                        _fill_segment(heads[seg_idx], end - start, next_head, f_rule)
                    )
                out.append(tuple(string))

    out.sort(key=string_sort_key)
    return out


def enumerate_standard(n: int, max_degree: int):
    return enumerate_strings(n, max_degree, "standard")


def enumerate_reduced(n: int, max_degree: int):
    return enumerate_strings(n, max_degree, "reduced")
