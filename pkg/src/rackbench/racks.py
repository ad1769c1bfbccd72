"""Finite racks: construction, validation and the statistics used for filtering.

A rack is stored as an operation table ``op`` with ``op[x][y] = x ▷ y`` on
0-based element indices.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import perms
from .perms import UnionFind

INNER_GROUP_CAP = 10**6
CLASS_SIZE_CAP = 10**5


class RackError(ValueError):
    pass


@dataclass(frozen=True)
class RackTable:
    size: int
    op: tuple
    name: str = ""
    # optional labels for the elements, e.g. the group elements of a conjugacy class
    elements: tuple = None
    injective: bool = False

    def __post_init__(self):
        object.__setattr__(self, "op", tuple(tuple(r) for r in self.op))
        if len(self.op) != self.size or any(len(r) != self.size for r in self.op):
            raise RackError("table shape does not match size %d" % self.size)

    def act(self, x, y):
        return self.op[x][y]

    def phi(self, x):
        return self.op[x]

    def __repr__(self):
        return "RackTable(%s, size=%d)" % (self.name or "?", self.size)


def from_table(table, name="", base=0):
    op = [[v - base for v in row] for row in table]
    return RackTable(len(op), op, name)


def make_affine(q, alpha):
    """Aff(q, α) on ℤ_q with x ▷ y = (1-α)x + αy."""
    if q < 2:
        raise RackError("modulus must be at least 2")
    alpha %= q
    if math.gcd(alpha, q) != 1:
        raise RackError("α = %d is not invertible mod %d" % (alpha, q))
    if alpha == 1 % q:
        raise RackError("α ≡ 1 gives the trivial rack")
    op = [[((1 - alpha) * x + alpha * y) % q for y in range(q)] for x in range(q)]
    return RackTable(q, op, "Aff(%d,%d)" % (q, alpha), injective=True)


def _is_prime(n):
    return n >= 2 and all(n % p for p in range(2, math.isqrt(n) + 1))


def make_dihedral(p):
    if p % 2 == 0 or not _is_prime(p):
        raise RackError("dihedral rack needs an odd prime, got %d" % p)
    t = make_affine(p, p - 1)
    return RackTable(t.size, t.op, "D%d" % p, injective=True)


def make_trivial(n):
    return RackTable(n, [list(range(n))] * n, "T%d" % n)


def make_conjugation(gens, seed, name="", cap=CLASS_SIZE_CAP, product="left"):
    """Rack on the conjugacy class of ``seed`` in the group generated by ``gens``.

    Permutations are tuples of images and x ▷ y = x y x⁻¹. With the default
    ``product="left"`` a product xy means "apply x, then y" (the GAP
    convention); ``product="right"`` composes functions right to left.
    """
    if product not in ("left", "right"):
        raise RackError("product must be 'left' or 'right'")
    gens = [tuple(g) for g in gens]
    seed = tuple(seed)

    def conj(x, y):
        if product == "right":
            return perms.compose(perms.compose(x, y), perms.inverse(x))
        return perms.compose(perms.compose(perms.inverse(x), y), x)

    cls = [seed]
    index = {seed: 0}
    i = 0
    while i < len(cls):
        c = cls[i]
        i += 1
        for g in gens:
            d = conj(g, c)
            if d not in index:
                if len(cls) >= cap:
                    raise RackError("conjugacy class exceeds %d elements" % cap)
                index[d] = len(cls)
                cls.append(d)
    op = [[index[conj(x, y)] for y in cls] for x in cls]
    return RackTable(len(cls), op, name or "class(%s)" % perms.format_cycles(seed),
                     elements=tuple(cls), injective=True)


def disjoint_union(s, t):
    n = s.size
    op = [list(r) + list(range(n, n + t.size)) for r in s.op]
    op += [list(range(n)) + [v + n for v in r] for r in t.op]
    return RackTable(n + t.size, op, "%s+%s" % (s.name, t.name))


# -- validation ---------------------------------------------------------------

def validate(t):
    d = t.size
    op = t.op
    rows_ok = all(sorted(r) == list(range(d)) for r in op)
    is_rack = rows_ok
    if rows_ok:
        for x in range(d):
            ox = op[x]
            for y in range(d):
                oy = op[y]
                oxy = op[ox[y]]
                if any(ox[oy[z]] != oxy[ox[z]] for z in range(d)):
                    is_rack = False
                    break
            if not is_rack:
                break
    is_quandle = is_rack and all(op[x][x] == x for x in range(d))
    is_crossed = is_quandle and all(
        (op[x][y] == y) == (op[y][x] == x) for x in range(d) for y in range(d))
    return {"is_rack": is_rack, "is_quandle": is_quandle, "is_crossed_set": is_crossed}


# -- inner group --------------------------------------------------------------

@dataclass
class InnerGroup:
    generators: list
    orbits: list
    elements: list = None

    @property
    def order(self):
        return None if self.elements is None else len(self.elements)


def inner_orbits(t):
    uf = UnionFind(t.size)
    for x in range(t.size):
        for y in range(t.size):
            uf.union(y, t.op[x][y])
    return uf.blocks()


def inner_group(t, cap=INNER_GROUP_CAP, materialize=True):
    gens = sorted(set(t.op))
    orbits = inner_orbits(t)
    if not materialize:
        return InnerGroup(gens, orbits)
    ident = perms.identity(t.size)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                k = perms.compose(h, g)
                if k not in seen:
                    seen.add(k)
                    if len(seen) > cap:
                        raise RackError("inner group exceeds %d elements" % cap)
                    nxt.append(k)
        frontier = nxt
    return InnerGroup(gens, orbits, sorted(seen))


def is_indecomposable(t):
    return len(inner_orbits(t)) == 1


def is_faithful(t):
    return len(set(t.op)) == t.size


# -- profiles -----------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """Cycle type of φ_x: ``parts`` maps a cycle length j to its multiplicity a_j."""
    parts: tuple

    @classmethod
    def of(cls, mapping):
        return cls(tuple(sorted((j, a) for j, a in mapping.items() if a)))

    @property
    def d(self):
        return sum(j * a for j, a in self.parts)

    def as_dict(self):
        return dict(self.parts)

    def moved_cycles(self):
        """Nontrivial cycle lengths, with repetition, ascending."""
        return tuple(j for j, a in self.parts if j >= 2 for _ in range(a))

    def __str__(self):
        return " ".join("%d^%d" % (j, a) for j, a in self.parts) or "empty"


def profile(t, x=0):
    return Profile.of(perms.cycle_type(t.op[x]))


def shape_string(parts):
    """Profile template notation such as '1^a 2^2 4'."""
    out = ["1^a"]
    for j in sorted(set(parts)):
        m = parts.count(j)
        out.append(str(j) if m == 1 else "%d^%d" % (j, m))
    return " ".join(out)


def profile_admissible(p):
    """False when the gcd obstruction rules out an indecomposable crossed set."""
    if isinstance(p, Profile):
        moved = list(p.moved_cycles())
        d = p.d
    else:
        # a bare shape: assume at least one fixed point, as for any quandle
        moved = list(p)
        d = sum(moved) + 1
    for i, b in enumerate(moved):
        rest = moved[:i] + moved[i + 1:]
        if not rest:
            continue
        if math.gcd(math.prod(rest), b) == 1 and d >= sum(rest) + b + 1:
            return False
    return True


def _partitions_min2(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for part in range(min(n, largest), 1, -1):
        for rest in _partitions_min2(n - part, part):
            yield (part,) + rest


def all_shapes(max_moved):
    out = []
    for m in range(2, max_moved + 1):
        out.extend(tuple(sorted(p)) for p in _partitions_min2(m))
    return out


def _shape_key(parts):
    return (sum(parts), -len(parts), parts)


def survivor_profiles(max_moved=9):
    """Shapes (nontrivial cycle lengths, ascending) with at most ``max_moved``
    moved points that pass the admissibility filter."""
    keep = [s for s in all_shapes(max_moved) if profile_admissible(s)]
    return sorted(keep, key=_shape_key)


def size_bound(p, kprime2):
    """Upper bound on |X| for an indecomposable crossed set with this profile."""
    moved = p.moved_cycles() if isinstance(p, Profile) else tuple(p)
    return len(moved) * (kprime2 - 2) + kprime2 + 1


def corollary_size_bound(kprime2):
    return Fraction(kprime2 * kprime2, 2) + 1


# -- k statistics ---------------------------------------------------------------

@dataclass(frozen=True)
class KStats:
    d: int
    k: dict = field(default_factory=dict)

    def kn(self, n):
        return self.k.get(n, 0)

    def kprime(self, m):
        return sum(v for n, v in self.k.items() if n > m)

    def as_dict(self):
        return {str(n): v for n, v in sorted(self.k.items()) if v}


def alternating_period(t, x, y, limit=None):
    """Least n ≥ 1 with x ▷ (y ▷ (x ▷ ⋯)) (n letters, starting with x) equal to y."""
    if x == y:
        return 1
    limit = limit or 4 * t.size * t.size + 4
    # W_n = x ▷ W'_{n-1}, where W' is the word starting with y; track both.
    wx, wy = x, y  # one-letter words starting with x / with y
    for n in range(2, limit):
        wx, wy = t.op[x][wy], t.op[y][wx]
        if wx == y:
            return n
    raise RackError("alternating word did not return to y")


def k_stats(t, x=0, check_all=False):
    counts = {}
    for y in range(t.size):
        if y == x:
            continue
        n = alternating_period(t, x, y)
        counts[n] = counts.get(n, 0) + 1
    ks = KStats(t.size, dict(sorted(counts.items())))
    if 1 + sum(ks.k.values()) != t.size:
        raise RackError("k-stat count mismatch")
    fixed = sum(1 for y in range(t.size) if t.op[x][y] == y)
    if fixed != 1 + ks.kn(2):
        raise RackError("φ_x has %d fixed points but k_2 = %d" % (fixed, ks.kn(2)))
    if check_all:
        for x2 in range(t.size):
            if k_stats(t, x2).k != ks.k:
                raise RackError("k-stats depend on the base point")
    return ks


# -- isomorphism ----------------------------------------------------------------

def iso_racks(s, t):
    """Return a rack isomorphism s → t as a tuple, or None."""
    if s.size != t.size:
        return None
    n = s.size
    ctype_s = [tuple(sorted(perms.cycle_type(r).items())) for r in s.op]
    ctype_t = [tuple(sorted(perms.cycle_type(r).items())) for r in t.op]
    if sorted(ctype_s) != sorted(ctype_t):
        return None

    def extend(f):
        # close the partial map under the operation; None on conflict
        f = dict(f)
        inv = {v: k for k, v in f.items()}
        changed = True
        while changed:
            changed = False
            for a, fa in list(f.items()):
                for b, fb in list(f.items()):
                    c, fc = s.op[a][b], t.op[fa][fb]
                    if c in f:
                        if f[c] != fc:
                            return None
                    elif fc in inv:
                        return None
                    else:
                        f[c] = fc
                        inv[fc] = c
                        changed = True
        return f

    def search(f):
        if len(f) == n:
            return f
        x = min(i for i in range(n) if i not in f)
        used = set(f.values())
        for y in range(n):
            if y in used or ctype_s[x] != ctype_t[y]:
                continue
            g = dict(f)
            g[x] = y
            g = extend(g)
            if g is not None:
                res = search(g)
                if res is not None:
                    return res
        return None

    res = search({})
    return None if res is None else tuple(res[i] for i in range(n))


def describe(t):
    flags = validate(t)
    info = {"name": t.name, "size": t.size, **flags}
    if flags["is_rack"]:
        info["indecomposable"] = is_indecomposable(t)
        info["faithful"] = is_faithful(t)
        info["profile"] = str(profile(t))
        if flags["is_quandle"] and info["indecomposable"]:
            ks = k_stats(t)
            info["k"] = ks.as_dict()
            info["kprime2"] = ks.kprime(2)
            info["kprime3"] = ks.kprime(3)
    return info
