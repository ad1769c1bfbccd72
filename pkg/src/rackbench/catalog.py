"""The eighteen base Schreier graphs, their labelled coverings, and
classification of Hurwitz orbits as coverings.

A covering over a base graph with fibre size N has points v[k], k ∈ ℤ_N.  An
arrow u → w with label s sends u[k] to w[k + s].  Δ acts by v[k] ↦ v[k+1].
"""

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import perms
from .hurwitz import (B3Space, ModSpace, all_isos, b3_iso, canonical_form,
                      enumerate_psl2z_spaces, quotient_mod_delta, simply_intersecting)

FAMILY_IDS = ("1A", "2A", "3A", "3B", "4A", "4B", "6A", "6B", "6C", "6D",
              "7A", "8A", "9A", "12A", "12B", "12C", "18A", "24A")
EXCLUDED = ("2A", "3B", "4B", "6B", "6C")
# families drawn without labels; only the structural invariants constrain them
UNSTATED = ("8A", "12A", "24A")
N_CAP = 64


class CatalogError(ValueError):
    pass


# -- affine label expressions --------------------------------------------------

_TERM = re.compile(r"([+-]?)(\d*)([a-z]?)")


def parse_expr(text):
    """'1-a' -> {'': 1, 'a': -1}."""
    s = text.replace(" ", "")
    out = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise CatalogError("bad label expression %r" % text)
        sign, num, letter = m.groups()
        coeff = int(num) if num else 1
        if sign == "-":
            coeff = -coeff
        out[letter] = out.get(letter, 0) + coeff
        pos = m.end()
    return {k: v for k, v in out.items() if v}


def eval_expr(expr, values, N):
    return sum(c * (values[k] if k else 1) for k, c in expr.items()) % N


def format_expr(expr):
    parts = []
    for k in sorted(expr, key=lambda k: (k != "", k)):
        c = expr[k]
        body = str(abs(c)) if not k else (k if abs(c) == 1 else "%d%s" % (abs(c), k))
        parts.append(("-" if c < 0 else "+") + body)
    s = "".join(parts) or "0"
    return s[1:] if s.startswith("+") else s


# -- base graphs ----------------------------------------------------------------

@dataclass
class Arrow:
    kind: str    # 'x' or 'y'
    src: int
    dst: int
    expr: dict

    @property
    def text(self):
        return format_expr(self.expr)


@dataclass
class BaseGraph:
    id: str
    n: int
    letters: tuple
    arrows: list                       # every x-arrow and y-arrow, 0-based
    triangles: list = field(default_factory=list)
    x_loops: list = field(default_factory=list)
    y_loops: list = field(default_factory=list)
    y_edges: list = field(default_factory=list)

    def modspace(self):
        px = [None] * self.n
        py = [None] * self.n
        for a in self.arrows:
            (px if a.kind == "x" else py)[a.src] = a.dst
        return ModSpace(px, py, name=self.id)

    def arrow(self, kind, src):
        for a in self.arrows:
            if a.kind == kind and a.src == src:
                return a
        raise KeyError((kind, src))

    def xy_cycles(self):
        return self.modspace().xy_cycles()

    def yx_cycles(self):
        return self.modspace().yx_cycles()


def _load_graph(entry):
    arrows = []
    triangles = []
    for u, v, w, l1, l2, l3 in entry["x_triangles"]:
        u, v, w = u - 1, v - 1, w - 1
        triangles.append((u, v, w))
        arrows += [Arrow("x", u, v, parse_expr(l1)), Arrow("x", v, w, parse_expr(l2)),
                   Arrow("x", w, u, parse_expr(l3))]
    x_loops = []
    for v, lab in entry["x_loops"]:
        x_loops.append(v - 1)
        arrows.append(Arrow("x", v - 1, v - 1, parse_expr(lab)))
    y_loops = []
    for v, lab in entry["y_loops"]:
        y_loops.append(v - 1)
        arrows.append(Arrow("y", v - 1, v - 1, parse_expr(lab)))
    y_edges = []
    for u, v, at_u, at_v in entry["y_edges"]:
        u, v = u - 1, v - 1
        y_edges.append((u, v))
        arrows.append(Arrow("y", v, u, parse_expr(at_u)))
        arrows.append(Arrow("y", u, v, parse_expr(at_v)))
    g = BaseGraph(entry["id"], entry["vertices"], tuple(entry["letters"]), arrows,
                  triangles, x_loops, y_loops, y_edges)
    _check_graph(g)
    return g


def _check_graph(g):
    m = g.modspace()
    if None in m.px or None in m.py:
        raise CatalogError("%s: some vertex lacks an x- or y-arrow" % g.id)
    if not perms.is_perm(m.px) or not perms.is_perm(m.py) or not m.relations_ok():
        raise CatalogError("%s: arrows do not define x³ = y² = 1" % g.id)
    if not m.is_transitive():
        raise CatalogError("%s: graph is disconnected" % g.id)
    # structural label identities that must hold for every value of the letters
    for tri in g.triangles:
        total = {}
        for a in g.arrows:
            if a.kind == "x" and a.src in tri:
                for k, c in a.expr.items():
                    total[k] = total.get(k, 0) + c
        if {k: c for k, c in total.items() if c} != {"": -1}:
            raise CatalogError("%s: triangle %s does not sum to -1" % (g.id, tri))
    for u, v in g.y_edges:
        e1 = g.arrow("y", u).expr
        e2 = g.arrow("y", v).expr
        total = {k: e1.get(k, 0) + e2.get(k, 0) for k in set(e1) | set(e2)}
        if {k: c for k, c in total.items() if c} != {"": 1}:
            raise CatalogError("%s: y-edge %s does not sum to 1" % (g.id, (u, v)))
    for letter in g.letters:
        if not any(a.expr == {letter: 1} for a in g.arrows):
            raise CatalogError("%s: letter %s never appears bare" % (g.id, letter))


@lru_cache(maxsize=None)
def _graphs():
    text = resources.files("rackbench").joinpath("data/base_graphs.json").read_text()
    data = json.loads(text)
    return tuple(_load_graph(e) for e in data["graphs"])


def base_graphs():
    return list(_graphs())


def base_graph(gid):
    for g in _graphs():
        if g.id == gid:
            return g
    raise CatalogError("unknown base graph %r" % gid)


def admitting_families():
    return [g for g in FAMILY_IDS if g not in EXCLUDED]


def match_enumeration(max_points=24, max_xy_cycle=4):
    """Pair each base graph with the enumerated space it is isomorphic to.

    Returns (pairs, unmatched spaces, unmatched graphs).
    """
    spaces = enumerate_psl2z_spaces(max_points, max_xy_cycle)
    graphs = base_graphs()
    pairs = []
    left = list(range(len(spaces)))
    lost = []
    for g in graphs:
        m = g.modspace()
        hit = None
        for i in left:
            s = spaces[i]
            if s.n == m.n and all_isos([m.px, m.py], [s.px, s.py]):
                hit = i
                break
        if hit is None:
            lost.append(g.id)
        else:
            left.remove(hit)
            pairs.append((g.id, spaces[hit]))
    return pairs, [spaces[i] for i in left], lost


# -- coverings --------------------------------------------------------------------

@dataclass(frozen=True)
class CoveringDesc:
    base: str
    N: int
    labels: tuple   # ((letter, value), ...) in the graph's letter order

    @classmethod
    def make(cls, base, N, *values, **named):
        g = base_graph(base)
        if values:
            named = dict(zip(g.letters, values))
        if set(named) != set(g.letters):
            raise CatalogError("%s needs letters %s" % (base, g.letters))
        return cls(base, N, tuple((k, named[k] % N) for k in g.letters))

    @property
    def values(self):
        return dict(self.labels)

    def __getattr__(self, name):
        if len(name) == 1 and name.isalpha():
            for k, v in self.labels:
                if k == name:
                    return v
        raise AttributeError(name)

    def __str__(self):
        vals = ",".join(str(v) for _, v in self.labels)
        return "%s^{%d;%s}" % (self.base, self.N, vals)

    def as_dict(self):
        return {"base": self.base, "N": self.N, "labels": dict(self.labels)}


@dataclass
class Unclassified:
    quotient: ModSpace
    N: int
    reason: str

    def __str__(self):
        return "Unclassified(%d points, N=%d: %s)" % (self.quotient.n, self.N, self.reason)


def arrow_labels(c):
    """(kind, src, dst, label mod N) for every arrow of the base graph."""
    g = base_graph(c.base)
    vals = c.values
    return [(a.kind, a.src, a.dst, eval_expr(a.expr, vals, c.N)) for a in g.arrows]


def label_invariants_ok(c):
    g = base_graph(c.base)
    N = c.N
    vals = c.values
    lab = {(a.kind, a.src): eval_expr(a.expr, vals, N) for a in g.arrows}
    for v in g.x_loops:
        if (3 * lab["x", v] + 1) % N:
            return False
    for v in g.y_loops:
        if (2 * lab["y", v] - 1) % N:
            return False
    for u, v, w in g.triangles:
        if (lab["x", u] + lab["x", v] + lab["x", w] + 1) % N:
            return False
    for u, v in g.y_edges:
        if (lab["y", u] + lab["y", v] - 1) % N:
            return False
    return True


def point(v, k, N):
    return v * N + (k % N)


def build_covering(c, check=True):
    if check and not label_invariants_ok(c):
        raise CatalogError("label invariants fail for %s" % c)
    g = base_graph(c.base)
    N = c.N
    n = g.n * N
    xt = [0] * n
    yt = [0] * n
    for kind, src, dst, s in arrow_labels(c):
        tgt = xt if kind == "x" else yt
        for k in range(N):
            tgt[src * N + k] = dst * N + (k + s) % N
    s1 = perms.compose(xt, yt)
    s2 = perms.compose(yt, xt)
    sp = B3Space(s1, s2, name=str(c))
    if check:
        if not sp.braid_ok():
            raise CatalogError("braid relation fails for %s" % c)
        shift = tuple(v * N + (k + 1) % N for v in range(g.n) for k in range(N))
        if sp.delta != shift:
            raise CatalogError("Δ is not the fibre shift for %s" % c)
    return sp


def _loop_ok(g, vals, N):
    for a in g.arrows:
        if a.src == a.dst:
            s = eval_expr(a.expr, vals, N)
            if a.kind == "x" and (3 * s + 1) % N:
                return False
            if a.kind == "y" and (2 * s - 1) % N:
                return False
    return True


def candidate_labels(base, N):
    """All letter assignments satisfying the structural label invariants."""
    g = base_graph(base)
    for vals in itertools.product(range(N), repeat=len(g.letters)):
        named = dict(zip(g.letters, vals))
        if _loop_ok(g, named, N):
            yield CoveringDesc(base, N, tuple(zip(g.letters, vals)))


def enumerate_coverings(base, N, dedupe=True):
    """Coverings with simply intersecting cycles, one per isomorphism class."""
    if N < 1 or N > N_CAP:
        raise CatalogError("N out of range")
    out = []
    seen = set()
    for c in candidate_labels(base, N):
        sp = build_covering(c, check=False)
        if not simply_intersecting(sp):
            continue
        if dedupe:
            key = canonical_form([sp.s1, sp.s2])
            if key in seen:
                continue
            seen.add(key)
        out.append(c)
    return out


def simply_intersecting_labels(base, N):
    """Every label assignment (not deduplicated) with simply intersecting cycles."""
    return [c for c in candidate_labels(base, N)
            if simply_intersecting(build_covering(c, check=False))]


def covering_iso(a, b):
    return b3_iso(a, b)


# -- cycle labels -------------------------------------------------------------------

@dataclass
class CycleLabelData:
    xy: list    # (vertex list, label)
    yx: list


def cycle_labels(c):
    if not label_invariants_ok(c):
        raise CatalogError("inconsistent labels for %s" % c)
    g = base_graph(c.base)
    lab = {}
    for kind, src, dst, s in arrow_labels(c):
        lab[kind, src] = (dst, s)
    m = g.modspace()

    def walk(first, second):
        out = []
        perm = m.xy if first == "y" else m.yx
        for cyc in perms.cycles(perm):
            total = 0
            for v in cyc:
                w, s1 = lab[first, v]
                _, s2 = lab[second, w]
                total += s1 + s2
            out.append((cyc, total % c.N))
        return out

    return CycleLabelData(walk("y", "x"), walk("x", "y"))


def subgroup_gcd(u, N):
    return math.gcd(u % N, N)


def trivial_intersection(u, v, N):
    """⟨u⟩ ∩ ⟨v⟩ = 0 in ℤ_N."""
    g1, g2 = subgroup_gcd(u, N), subgroup_gcd(v, N)
    return (g1 * g2 // math.gcd(g1, g2)) % N == 0


def xy_yx_condition(c):
    """At every vertex the labels of its xy- and yx-cycle generate subgroups
    meeting only in 0."""
    data = cycle_labels(c)
    at_xy = {}
    for cyc, lam in data.xy:
        for v in cyc:
            at_xy[v] = lam
    for cyc, mu in data.yx:
        for v in cyc:
            if not trivial_intersection(at_xy[v], mu, c.N):
                return False
    return True


# -- published constraints per family --------------------------------------------------

def family_constraints_check(base, N, labels):
    """The congruence and subgroup conditions stated for each family.

    ``labels`` maps letters to integers.  For families drawn without labels
    (8A, 12A, 24A) no condition beyond the structural invariants is stated.
    The conditions are necessary for simply intersecting cycles; see
    constraint_agreement for where they are not sufficient.
    """
    L = {k: v % N for k, v in dict(labels).items()}
    a, b, c, d = (L.get(k, 0) for k in "abcd")
    ti = lambda u, v: trivial_intersection(u, v, N)
    zero = lambda u: u % N == 0
    if base in EXCLUDED:
        return False
    if base == "1A":
        return N == 1
    if base == "3A":
        return zero(2 * a - 1) and zero(a - b)
    if base == "4A":
        return zero(3 * a + 1) and zero(a + b) and N > 1
    if base == "6A":
        return N != 1 and zero(a + b) and not zero(2 * b - 1)
    if base == "6D":
        return ti(a + b, 1 - a) and ti(a + b, -b) and ti(1 - a, -b)
    if base == "7A":
        return N == 7 and (a, b, c) == (2, 4, 3)
    if base == "9A":
        return (N > 1 and zero(2 * a - 1) and N % 2 == 1 and zero(c - a - 1)
                and ti(b - 1, a + b))
    if base == "12B":
        g = math.gcd(subgroup_gcd(a - c, N), subgroup_gcd(b - 1, N))
        coset_empty = c % g != 0
        return (N > 1 and ti(1 - a, a - c) and ti(1 - b, a - c) and ti(1 - b, 1 - a)
                and ti(1 - b, b + c) and ti(a - c, b + c) and coset_empty)
    if base == "12C":
        return (ti(-a - c + 1, a + 1) and ti(a + 1, -b) and ti(-b, -a - c + 1)
                and ti(-b, b + c) and ti(b + c, -a - c + 1) and ti(b + c, a + 1))
    if base == "18A":
        p, q, r, s, t = -a + c + d + 1, a + 1, -c + 1, -b - d, b
        return (ti(p, q) and ti(p, r) and ti(p, s) and ti(p, t) and ti(q, r)
                and ti(q, s) and ti(q, t) and ti(r, s) and ti(s, t))
    if base in UNSTATED:
        return label_invariants_ok(CoveringDesc.make(base, N, **L))
    raise CatalogError("unknown family %r" % base)


def constraint_agreement(base, N):
    """Compare simply intersecting label assignments with the stated conditions.

    ``necessary``: every simply intersecting assignment passes the check.
    ``sufficient``: every passing assignment is simply intersecting.
    ``surplus`` lists the passing assignments that are not.
    """
    raw = {c.labels for c in simply_intersecting_labels(base, N)}
    stated = {c.labels for c in candidate_labels(base, N)
              if family_constraints_check(base, N, dict(c.labels))}
    return {"necessary": raw <= stated, "sufficient": stated <= raw,
            "missing": sorted(raw - stated), "surplus": sorted(stated - raw)}


# -- classification of transitive B3 spaces ---------------------------------------------

def _descriptors(g, quot, s, iso):
    """Read the labels of the covering through one quotient→base isomorphism."""
    N = quot.N
    fib = quot.fibers
    pos = {}
    for u, f in enumerate(fib):
        for i, p in enumerate(f):
            pos[p] = (u, i)
    inv_iso = {w: u for u, w in enumerate(iso)}
    # raw shift r of each base arrow relative to the fibres' own numbering
    raw = {}
    for a in g.arrows:
        u = inv_iso[a.src]
        act = s.x if a.kind == "x" else s.y
        u2, j = pos[act[fib[u][0]]]
        if u2 != inv_iso[a.dst]:
            return None
        raw[a.kind, a.src] = j
    # offsets from the constant-labelled arrows, then the letters
    off = {0: 0}
    changed = True
    while changed:
        changed = False
        for a in g.arrows:
            if any(k for k in a.expr):
                continue
            const = a.expr.get("", 0)
            r = raw[a.kind, a.src]
            # const = r + off[src] - off[dst]
            if a.src in off and a.dst not in off:
                off[a.dst] = (r + off[a.src] - const) % N
                changed = True
            elif a.dst in off and a.src not in off:
                off[a.src] = (const - r + off[a.dst]) % N
                changed = True
    if len(off) != g.n:
        return None
    vals = {}
    for letter in g.letters:
        a = next(a for a in g.arrows if a.expr == {letter: 1})
        vals[letter] = (raw[a.kind, a.src] + off[a.src] - off[a.dst]) % N
    for a in g.arrows:
        if (raw[a.kind, a.src] + off[a.src] - off[a.dst] - eval_expr(a.expr, vals, N)) % N:
            return None
    return CoveringDesc(g.id, N, tuple((k, vals[k]) for k in g.letters))


def classify_all(s):
    """Every descriptor of ``s`` (one per quotient→base isomorphism), or Unclassified."""
    quot = quotient_mod_delta(s)
    m = quot.space
    if m.max_xy_cycle() >= 5:
        return Unclassified(m, quot.N, "xy-cycle of length %d" % m.max_xy_cycle())
    for g in _graphs():
        gm = g.modspace()
        if gm.n != m.n:
            continue
        isos = all_isos([m.px, m.py], [gm.px, gm.py])
        if not isos:
            continue
        descs = []
        for iso in isos:
            dsc = _descriptors(g, quot, s, iso)
            if dsc is not None and dsc not in descs:
                descs.append(dsc)
        if not descs:
            raise CatalogError("quotient matches %s but no labelling fits" % g.id)
        return descs
    return Unclassified(m, quot.N, "quotient not in the catalog")


def classify(s):
    """Descriptor of ``s``; among equivalent descriptors the one with the
    lexicographically largest label tuple is returned."""
    res = classify_all(s)
    if isinstance(res, Unclassified):
        return res
    return max(res, key=lambda c: tuple(v for _, v in c.labels))


def fibre_map(s, c):
    """Isomorphism from ``s`` onto build_covering(c), as a point map (or None)."""
    return covering_iso(s, build_covering(c))
