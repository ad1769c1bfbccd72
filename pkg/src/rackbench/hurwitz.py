"""Hurwitz action of the braid group B3 on X³ and the quotient by Δ.

Group elements act on the left: for a word g h the action is v ↦ g(h(v)).
With x = σ₂⁻¹σ₁⁻¹ and y = σ₁σ₂σ₁ one has σ₁ = x y and σ₂ = y x, so a σ₁-cycle
projects onto an xy-cycle of the quotient and a σ₂-cycle onto a yx-cycle.
"""

from dataclasses import dataclass, field

from . import perms

ORBIT_CAP = 10**6


class HurwitzError(ValueError):
    pass


@dataclass
class B3Space:
    s1: tuple
    s2: tuple
    decoration: list = None  # point -> (x, y, z) when the space is a Hurwitz orbit
    rack: object = None
    name: str = ""

    def __post_init__(self):
        self.s1 = tuple(self.s1)
        self.s2 = tuple(self.s2)
        if len(self.s1) != len(self.s2):
            raise HurwitzError("σ₁ and σ₂ act on different point sets")
        self._cache = {}

    @property
    def n(self):
        return len(self.s1)

    def __len__(self):
        return len(self.s1)

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def s1inv(self):
        return self._memo("s1inv", lambda: perms.inverse(self.s1))

    @property
    def s2inv(self):
        return self._memo("s2inv", lambda: perms.inverse(self.s2))

    @property
    def delta(self):
        def make():
            s12 = perms.compose(self.s1, self.s2)
            return perms.compose(s12, perms.compose(s12, s12))
        return self._memo("delta", make)

    @property
    def x(self):
        """The action of σ₂⁻¹σ₁⁻¹."""
        return self._memo("x", lambda: perms.compose(self.s2inv, self.s1inv))

    @property
    def y(self):
        """The action of σ₁σ₂σ₁."""
        return self._memo("y", lambda: perms.compose(self.s1, perms.compose(self.s2, self.s1)))

    def braid_ok(self):
        a = perms.compose(self.s1, perms.compose(self.s2, self.s1))
        b = perms.compose(self.s2, perms.compose(self.s1, self.s2))
        return a == b

    def delta_central(self):
        d = self.delta
        return (perms.compose(d, self.s1) == perms.compose(self.s1, d)
                and perms.compose(d, self.s2) == perms.compose(self.s2, d))

    def is_transitive(self):
        return len(components([self.s1, self.s2], self.n)) <= 1

    def cycle_data(self):
        """(σ₁-cycle id, σ₁-cycle lengths, σ₂-cycle id, σ₂-cycle lengths)."""
        def make():
            c1, l1 = perms.cycle_index(self.s1)
            c2, l2 = perms.cycle_index(self.s2)
            return c1, l1, c2, l2
        return self._memo("cycles", make)

    def cycle_lengths_at(self, p):
        c1, l1, c2, l2 = self.cycle_data()
        return l1[c1[p]], l2[c2[p]]


@dataclass
class ModSpace:
    """A finite set with permutations px (order dividing 3) and py (order dividing 2)."""
    px: tuple
    py: tuple
    name: str = ""

    def __post_init__(self):
        self.px = tuple(self.px)
        self.py = tuple(self.py)

    @property
    def n(self):
        return len(self.px)

    def __len__(self):
        return len(self.px)

    def relations_ok(self):
        px3 = perms.compose(self.px, perms.compose(self.px, self.px))
        return px3 == perms.identity(self.n) and perms.compose(self.py, self.py) == perms.identity(self.n)

    @property
    def xy(self):
        """Apply y, then x."""
        return perms.compose(self.px, self.py)

    @property
    def yx(self):
        return perms.compose(self.py, self.px)

    def xy_cycles(self):
        return perms.cycles(self.xy)

    def yx_cycles(self):
        return perms.cycles(self.yx)

    def max_xy_cycle(self):
        return max(len(c) for c in self.xy_cycles())

    def is_transitive(self):
        return len(components([self.px, self.py], self.n)) <= 1

    def summary(self):
        xl = sum(1 for i in range(self.n) if self.px[i] == i)
        yl = sum(1 for i in range(self.n) if self.py[i] == i)
        return {"points": self.n, "x_loops": xl, "y_loops": yl,
                "xy_cycle_lengths": sorted(len(c) for c in self.xy_cycles())}


def components(gens, n):
    uf = perms.UnionFind(n)
    for g in gens:
        for i in range(n):
            uf.union(i, g[i])
    return uf.blocks()


# -- isomorphism and canonical forms for transitive actions ------------------

def transitive_iso(gens_a, gens_b, start=0):
    """Bijection f with f∘g_a = g_b∘f for every generator, or None.

    Both actions must be transitive; the map is fixed by the image of ``start``.
    """
    n = len(gens_a[0])
    if n != len(gens_b[0]) or len(gens_a) != len(gens_b):
        return None
    for target in range(n):
        f = _propagate(gens_a, gens_b, start, target, n)
        if f is not None:
            return f
    return None


def all_isos(gens_a, gens_b, start=0):
    n = len(gens_a[0])
    if n != len(gens_b[0]):
        return []
    out = []
    for target in range(n):
        f = _propagate(gens_a, gens_b, start, target, n)
        if f is not None:
            out.append(f)
    return out


def _propagate(gens_a, gens_b, start, target, n):
    f = [-1] * n
    used = [False] * n
    f[start] = target
    used[target] = True
    stack = [start]
    while stack:
        p = stack.pop()
        for ga, gb in zip(gens_a, gens_b):
            q, fq = ga[p], gb[f[p]]
            if f[q] < 0:
                if used[fq]:
                    return None
                f[q] = fq
                used[fq] = True
                stack.append(q)
            elif f[q] != fq:
                return None
    if min(f) < 0:
        return None
    return tuple(f)


def canonical_form(gens):
    """Smallest BFS relabelling over all start points (transitive actions)."""
    n = len(gens[0])
    best = None
    for s in range(n):
        order = [s]
        label = {s: 0}
        i = 0
        while i < len(order):
            p = order[i]
            i += 1
            for g in gens:
                q = g[p]
                if q not in label:
                    label[q] = len(order)
                    order.append(q)
        if len(order) != n:
            raise HurwitzError("canonical form needs a transitive action")
        code = tuple(tuple(label[g[p]] for p in order) for g in gens)
        if best is None or code < best:
            best = code
    return best


def modspace_iso(a, b):
    return transitive_iso([a.px, a.py], [b.px, b.py])


def b3_iso(a, b):
    return transitive_iso([a.s1, a.s2], [b.s1, b.s2])


# -- Hurwitz orbits -------------------------------------------------------------

def _inverse_table(t):
    inv = [[0] * t.size for _ in range(t.size)]
    for x in range(t.size):
        for y in range(t.size):
            inv[x][t.op[x][y]] = y
    return inv


def _moves(t):
    op = t.op
    inv = _inverse_table(t)

    def s1(v):
        x, y, z = v
        return (op[x][y], x, z)

    def s1i(v):
        x, y, z = v
        return (y, inv[y][x], z)

    def s2(v):
        x, y, z = v
        return (x, op[y][z], y)

    def s2i(v):
        x, y, z = v
        return (x, z, inv[z][y])

    return s1, s1i, s2, s2i


def _bfs_orbit(moves, root, cap):
    index = {root: 0}
    order = [root]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for mv in moves:
            w = mv(v)
            if w not in index:
                if len(order) >= cap:
                    raise HurwitzError("orbit exceeds %d points" % cap)
                index[w] = len(order)
                order.append(w)
    return order, index


def _space_from_orbit(t, order, index, moves):
    s1, _, s2, _ = moves
    sp = B3Space([index[s1(v)] for v in order], [index[s2(v)] for v in order],
                 decoration=list(order), rack=t)
    return sp


def orbit_of(t, triple, cap=ORBIT_CAP):
    """The Hurwitz orbit of ``triple``, numbered by BFS from its smallest triple."""
    triple = tuple(triple)
    if len(triple) != 3 or any(not 0 <= v < t.size for v in triple):
        raise HurwitzError("invalid triple %r" % (triple,))
    moves = _moves(t)
    order, _ = _bfs_orbit(moves, triple, cap)
    order, index = _bfs_orbit(moves, min(order), cap)
    return _space_from_orbit(t, order, index, moves)


def decompose_cube(t, cap=ORBIT_CAP):
    """All Hurwitz orbits on X³, ordered by their smallest triple."""
    if t.size ** 3 > cap:
        raise HurwitzError("|X|³ exceeds cap")
    moves = _moves(t)
    seen = set()
    out = []
    d = t.size
    for x in range(d):
        for y in range(d):
            for z in range(d):
                v = (x, y, z)
                if v in seen:
                    continue
                order, index = _bfs_orbit(moves, v, cap)
                seen.update(order)
                out.append(_space_from_orbit(t, order, index, moves))
    return out


def orbit_size_multiset(orbits):
    sizes = {}
    for o in orbits:
        sizes[o.n] = sizes.get(o.n, 0) + 1
    return dict(sorted(sizes.items()))


def sigma_cycles(s, which):
    return perms.cycles(s.s1 if which == 1 else s.s2)


def simply_intersecting(s):
    c1, _, c2, _ = s.cycle_data()
    pairs = set(zip(c1, c2))
    return len(pairs) == s.n


def product_invariant_check(s):
    t = s.rack
    prods = set()
    for x, y, z in s.decoration:
        prods.add(perms.compose(t.op[x], perms.compose(t.op[y], t.op[z])))
        if len(prods) > 1:
            return False
    return True


# -- quotient by Δ -------------------------------------------------------------

@dataclass
class Quotient:
    space: ModSpace
    N: int
    projection: tuple          # point -> quotient vertex
    fibers: list = field(default_factory=list)  # vertex -> [v[0], v[1], ...] with v[i+1] = Δ v[i]


def quotient_mod_delta(s):
    if not s.is_transitive():
        raise HurwitzError("quotient needs a transitive space")
    d = s.delta
    proj = [-1] * s.n
    fibers = []
    for p in range(s.n):
        if proj[p] >= 0:
            continue
        k = len(fibers)
        fib = []
        q = p
        while proj[q] < 0:
            proj[q] = k
            fib.append(q)
            q = d[q]
        fibers.append(fib)
    sizes = {len(f) for f in fibers}
    if len(sizes) != 1:
        raise HurwitzError("fibers of unequal size")
    px = [proj[s.x[f[0]]] for f in fibers]
    py = [proj[s.y[f[0]]] for f in fibers]
    m = ModSpace(px, py)
    if not m.relations_ok():
        raise HurwitzError("quotient violates x³ = y² = 1")
    return Quotient(m, sizes.pop(), tuple(proj), fibers)


def extract_covering(s):
    """Classify a transitive B3 space as a covering of a catalog graph.

    Returns a CoveringDesc, or an Unclassified value carrying the quotient.
    """
    from .catalog import classify
    return classify(s)


# -- PSL(2,Z) spaces -------------------------------------------------------------

def enumerate_psl2z_spaces(max_points, max_xy_cycle, cap=64):
    """All transitive (px, py) with px³ = py² = 1, at most ``max_points`` points
    and every xy-cycle of length ≤ ``max_xy_cycle``, up to isomorphism.

    Points are numbered in the order they are introduced, processing the
    smallest point whose x- or y-orbit is still open; this reaches every
    (space, base point) pair.  Duplicates are removed by canonical form.
    """
    if max_points > cap:
        raise HurwitzError("max_points exceeds cap %d" % cap)
    px = [-1] * max_points
    py = [-1] * max_points
    found = {}
    limit = max_xy_cycle

    def chain_ok(n):
        # follow partial xy and yx maps; any open chain longer than the
        # limit, or closed cycle longer than it, is a dead end
        for first, second in ((py, px), (px, py)):
            for p in range(n):
                q = p
                steps = 0
                while True:
                    a = first[q]
                    if a < 0:
                        break
                    b = second[a]
                    if b < 0:
                        break
                    q = b
                    steps += 1
                    if q == p:
                        break
                    if steps >= limit:
                        return False
                if q == p and steps > limit:
                    return False
        return True

    def rec(n):
        p = next((i for i in range(n) if px[i] < 0 or py[i] < 0), None)
        if p is None:
            space = ModSpace(px[:n], py[:n])
            key = canonical_form([space.px, space.py])
            if key not in found:
                found[key] = space
            return
        if px[p] < 0:
            free = [i for i in range(n) if px[i] < 0 and i != p]
            # fixed point
            px[p] = p
            if chain_ok(n):
                rec(n)
            px[p] = -1
            # 3-cycle p -> q -> r -> p
            for q in free + [n]:
                for r in free + [n if q != n else n + 1]:
                    if r == q:
                        continue
                    m = max(n, q + 1, r + 1)
                    if m > max_points:
                        continue
                    px[p], px[q], px[r] = q, r, p
                    if chain_ok(m):
                        rec(m)
                    px[p] = px[q] = px[r] = -1
        else:
            free = [i for i in range(n) if py[i] < 0 and i != p]
            py[p] = p
            if chain_ok(n):
                rec(n)
            py[p] = -1
            for q in free + [n]:
                m = max(n, q + 1)
                if m > max_points:
                    continue
                py[p], py[q] = q, p
                if chain_ok(m):
                    rec(m)
                py[p] = py[q] = -1

    if max_points >= 1:
        rec(1)
    out = sorted(found.values(), key=lambda s: (s.n, canonical_form([s.px, s.py])))
    return out
