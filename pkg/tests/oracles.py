"""Independent reference implementations used to cross-check the library.

None of these import the code under test; they work on plain strings,
tuples and integers, and are deliberately slow and direct.
"""

from itertools import product


def _forbidden_strings(words):
    return [w if isinstance(w, str) else "".join(w) for w in words]


def locally_ok(word, forbidden):
    return not any(f in word for f in forbidden)


def globally_admissible_word(word, alphabet, forbidden, margin=None):
    """Does ``word`` sit inside a bi-infinite point of the Z-SFT?

    A word extends to a bi-infinite point iff it extends locally by
    ``margin`` symbols on both sides, once ``margin`` exceeds the number of
    contexts (words of length ``span - 1``): a longer extension must revisit
    a context, and the loop between the two visits repeats forever.  The
    search keeps only the set of reachable contexts, so it is a sweep over
    sets of strings rather than a graph algorithm.
    """
    forbidden = _forbidden_strings(forbidden)
    if not locally_ok(word, forbidden):
        return False
    span = max((len(f) for f in forbidden), default=1)
    ctx = max(span - 1, 1)
    if margin is None:
        margin = len(alphabet) ** ctx + 1

    # right sweep: keep the first ``ctx`` symbols and the last ``ctx`` ones
    cur = {(word[:ctx], word[-ctx:] if len(word) >= ctx else word, len(word))}
    for _ in range(margin):
        nxt = set()
        for head, tail, n in cur:
            for a in alphabet:
                cand = tail + a
                if not locally_ok(cand[-span:], forbidden):
                    continue
                new_head = head if n >= ctx else (head + a)[:ctx]
                nxt.add((new_head, cand[-ctx:], n + 1))
        cur = nxt
        if not cur:
            return False
    # left sweep from each surviving head; only the front ``span`` symbols are checked
    for head, _, _ in cur:
        front = {head}
        for _ in range(margin):
            front = {(a + f)[:ctx] for f in front for a in alphabet
                     if locally_ok((a + f)[:span], forbidden)}
            if not front:
                break
        if front:
            return True
    return False


def brute_codes(alphabet, forbidden, A, B, lo, hi, margin=None):
    """Agreement on A forces agreement on B, over globally admissible words on lo..hi."""
    forbidden = _forbidden_strings(forbidden)
    n = hi - lo + 1
    seen = {}
    for w in product(alphabet, repeat=n):
        s = "".join(w)
        if not globally_admissible_word(s, alphabet, forbidden, margin):
            continue
        key = tuple(s[a - lo] for a in A)
        val = tuple(s[b - lo] for b in B)
        if seen.setdefault(key, val) != val:
            return False
    return True


def domino_torus_count(W, H):
    """Number of placements of dominoes tiling the W x H torus.

    Row transfer matrix: state = set of columns receiving a vertical domino
    from the row below.  Horizontal dominoes are anchored at their left cell
    and may wrap; the count is the trace of ``T^H``.
    """
    full = (1 << W) - 1
    T = [[0] * (1 << W) for _ in range(1 << W)]
    for inc in range(1 << W):
        free = full & ~inc
        out = free
        while True:
            rest = free & ~out
            T[inc][out] += _cyclic_matchings(rest, W)
            if out == 0:
                break
            out = (out - 1) & free
    M = [[int(i == j) for j in range(1 << W)] for i in range(1 << W)]
    for _ in range(H):
        M = [[sum(M[i][k] * T[k][j] for k in range(1 << W) if M[i][k]) for j in range(1 << W)]
             for i in range(1 << W)]
    return sum(M[i][i] for i in range(1 << W))


def _cyclic_matchings(cells, W):
    count = 0
    for anchors in range(1 << W):
        covered = 0
        ok = True
        for i in range(W):
            if anchors >> i & 1:
                pair = (1 << i) | (1 << ((i + 1) % W))
                if covered & pair or pair & ~cells or W == 1:
                    ok = False
                    break
                covered |= pair
        if ok and covered == cells:
            count += 1
    return count


def cantor_distance(x, y, radius):
    """``2^-min{|g| : x_g != y_g}`` for Z points given as callables, within ``radius``."""
    for n in range(radius + 1):
        if x(n) != y(n) or x(-n) != y(-n):
            return 2.0 ** -n
    return 0.0
