"""Small helpers for permutations stored as tuples of images (0-based)."""


def compose(p, q):
    """Return p∘q, i.e. apply q first and then p."""
    return tuple(p[i] for i in q)


def inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def identity(n):
    return tuple(range(n))


def is_perm(p):
    return sorted(p) == list(range(len(p)))


def cycles(p, include_fixed=True):
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        if include_fixed or len(cyc) > 1:
            out.append(cyc)
    return out


def cycle_type(p):
    """Map cycle length -> multiplicity."""
    ct = {}
    for c in cycles(p):
        ct[len(c)] = ct.get(len(c), 0) + 1
    return dict(sorted(ct.items()))


def cycle_index(p):
    """Return (cycle id per point, cycle lengths)."""
    cid = [-1] * len(p)
    lengths = []
    for i in range(len(p)):
        if cid[i] >= 0:
            continue
        k = len(lengths)
        n = 0
        j = i
        while cid[j] < 0:
            cid[j] = k
            n += 1
            j = p[j]
        lengths.append(n)
    return cid, lengths


def parse_cycles(text, n):
    """Parse 1-based cycle notation such as '(1 2 3)(4 5)' into a tuple of images."""
    img = list(range(n))
    text = text.replace(",", " ")
    for chunk in text.split(")"):
        chunk = chunk.strip().lstrip("(").strip()
        if not chunk:
            continue
        pts = [int(tok) - 1 for tok in chunk.split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    if not is_perm(img):
        raise ValueError("not a permutation: %r" % text)
    return tuple(img)


def format_cycles(p):
    cs = cycles(p, include_fixed=False)
    if not cs:
        return "()"
    return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cs)


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i, j):
        a, b = self.find(i), self.find(j)
        if a != b:
            if a < b:
                self.parent[b] = a
            else:
                self.parent[a] = b

    def blocks(self):
        out = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return sorted(out.values())
