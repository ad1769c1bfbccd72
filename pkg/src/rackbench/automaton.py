"""Monotone cellular automata on finite spaces, plagues and the weight ω.

A rule is a list of clauses; each clause is a tuple of neighbour words. A point
becomes occupied when it is occupied already or when every neighbour of some
clause is occupied. The B3 rule has the three clauses

    (σ₂, σ₁σ₂), (σ₂⁻¹σ₁⁻¹, σ₁⁻¹), (σ₂⁻¹, σ₁)

so that any two points of a triangle {w, σ₂w, σ₁σ₂w} infect the third.
"""

import itertools
import re
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import perms
from .catalog import (CoveringDesc, Unclassified, build_covering, classify_all,
                      covering_iso, point)
from .hurwitz import all_isos

EXACT_LIMIT = 30
BRUTE_LIMIT = 16
DEFAULT_BUDGET = 5_000_000
_SEED_RE = re.compile(r"v(\d+)\[([^\]]*)\]")


class AutomatonError(ValueError):
    pass


# -- spaces and rules -------------------------------------------------------------

class ZmSpace:
    """ℤₘ as a space for the translation rules."""

    def __init__(self, m):
        if m < 1:
            raise AutomatonError("modulus must be positive")
        self.m = m
        self._cache = {}

    @property
    def n(self):
        return self.m

    def __len__(self):
        return self.m

    def __repr__(self):
        return "ZmSpace(%d)" % self.m


_GENS = {"s1": lambda s: s.s1, "s2": lambda s: s.s2,
         "s1i": lambda s: s.s1inv, "s2i": lambda s: s.s2inv}


def _b3_word(space, word):
    # word is read like a braid word: the rightmost letter acts first
    p = perms.identity(space.n)
    for letter in word:
        p = perms.compose(p, _GENS[letter](space))
    return p


def _shift_word(space, a):
    m = space.m
    return tuple((x - a) % m for x in range(m))


@dataclass(frozen=True)
class CARule:
    name: str
    clauses: tuple
    resolver: object = field(compare=False, repr=False, default=None)
    space: object = field(compare=False, repr=False, default=None)

    def bind(self, space):
        key = ("rule", self.name, self.clauses)
        cache = getattr(space, "_cache", None)
        if cache is not None and key in cache:
            return cache[key]
        br = BoundRule(self, space)
        if cache is not None:
            cache[key] = br
        return br


class BoundRule:
    """A rule evaluated on a concrete space: neighbour tables and watch lists."""

    def __init__(self, rule, space):
        self.rule = rule
        self.space = space
        n = space.n
        self.n = n
        tables = [tuple(rule.resolver(space, w) for w in clause) for clause in rule.clauses]
        self.nbrs = [[tuple(t[w] for t in clause) for clause in tables] for w in range(n)]
        watch = [[] for _ in range(n)]
        for w in range(n):
            for nb in self.nbrs[w]:
                for p in set(nb):
                    watch[p].append((w, nb))
        self.watch = watch

    def step(self, occ):
        """One application of τ to a membership list."""
        return [bool(occ[w]) or any(all(occ[p] for p in nb) for nb in self.nbrs[w])
                for w in range(self.n)]

    def grow(self, occ, new):
        """Close ``occ`` in place after the points in ``new`` were added; return count added."""
        queue = list(new)
        added = 0
        watch = self.watch
        while queue:
            p = queue.pop()
            for w, nb in watch[p]:
                if not occ[w] and all(occ[q] for q in nb):
                    occ[w] = 1
                    added += 1
                    queue.append(w)
        return added

    def closure_of(self, points):
        occ = bytearray(self.n)
        for p in points:
            occ[p] = 1
        self.grow(occ, [p for p in set(points)])
        return occ


def b3_rule():
    clauses = ((("s2",), ("s1", "s2")),
               (("s2i", "s1i"), ("s1i",)),
               (("s2i",), ("s1",)))
    return CARule("b3", clauses, _b3_word)


def zm_rule(m, offsets):
    """x becomes occupied when every x − aᵢ is occupied."""
    offs = tuple(a % m for a in offsets)
    if not offs or any(a == 0 for a in offs):
        raise AutomatonError("offsets must be nonzero mod %d" % m)
    return CARule("zm", (offs,), _shift_word, ZmSpace(m))


# -- point sets ---------------------------------------------------------------------

@dataclass(frozen=True)
class PointSet:
    space: object = field(compare=False, repr=False)
    members: frozenset

    @classmethod
    def of(cls, space, points):
        pts = frozenset(points)
        if any(not 0 <= p < space.n for p in pts):
            raise AutomatonError("point index out of range")
        return cls(space, pts)

    def mask(self):
        occ = bytearray(self.space.n)
        for p in self.members:
            occ[p] = 1
        return occ

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, p):
        return p in self.members


def _space_of(rule, seed):
    if isinstance(seed, PointSet):
        return seed.space, seed.members
    if rule.space is None:
        raise AutomatonError("a bare seed needs a rule with a fixed space")
    return rule.space, frozenset(seed)


def closure(rule, seed):
    space, pts = _space_of(rule, seed)
    occ = rule.bind(space).closure_of(pts)
    return PointSet(space, frozenset(i for i, v in enumerate(occ) if v))


def is_plague(rule, seed):
    space, _ = _space_of(rule, seed)
    return len(closure(rule, seed)) == space.n


def is_quarantine(rule, seed):
    space, pts = _space_of(rule, seed)
    br = rule.bind(space)
    occ = [p in pts for p in range(space.n)]
    return br.step(occ) == occ


def tau(rule, seed):
    space, pts = _space_of(rule, seed)
    occ = rule.bind(space).step([p in pts for p in range(space.n)])
    return PointSet(space, frozenset(i for i, v in enumerate(occ) if v))


# -- fibre syntax -------------------------------------------------------------------

def parse_seed(text, N):
    """Points of a built covering from text such as 'v3[*],v1[0 2]' (1-based vertices)."""
    pts = set()
    body = _SEED_RE.sub("", text).strip(" ,")
    if body:
        raise AutomatonError("cannot parse seed near %r" % body)
    for vert, res in _SEED_RE.findall(text):
        res = res.strip()
        ks = range(N) if res in ("*", "") else [int(k) for k in re.split(r"[\s,]+", res)]
        for k in ks:
            pts.add(point(int(vert) - 1, k, N))
    return pts


def fibre_points(N, spec):
    """Points from a mapping {vertex (1-based): residues or '*'}."""
    pts = set()
    for v, ks in spec.items():
        ks = range(N) if ks == "*" else ks
        for k in ks:
            pts.add(point(v - 1, k, N))
    return pts


# -- plague search ------------------------------------------------------------------

@dataclass
class PlagueResult:
    upper: int
    lower: int
    witness: tuple
    exact: bool
    method: str = ""

    @property
    def size(self):
        return self.upper if self.exact else None


def _full(occ):
    return all(occ)


def _prune(br, chosen):
    chosen = list(chosen)
    for p in sorted(chosen, reverse=True):
        rest = [q for q in chosen if q != p]
        if all(br.closure_of(rest)):
            chosen = rest
    return chosen


def _local_search(br, chosen, max_rounds=20):
    """Trade two seeds for one while the result stays a plague."""
    chosen = sorted(chosen)
    for _ in range(max_rounds):
        improved = False
        for p, q in itertools.combinations(chosen, 2):
            rest = [r for r in chosen if r not in (p, q)]
            base = br.closure_of(rest)
            for r in range(br.n):
                if base[r]:
                    continue
                occ = bytearray(base)
                occ[r] = 1
                br.grow(occ, [r])
                if all(occ):
                    chosen = sorted(rest + [r])
                    improved = True
                    break
            if improved:
                break
        if not improved:
            return chosen
    return chosen


def greedy_plague(rule, space, local_search=None):
    """Greedy by closure gain (ties by index), then redundancy pruning and
    optional two-for-one local search."""
    br = rule.bind(space)
    n = br.n
    occ = bytearray(n)
    chosen = []
    while not all(occ):
        best, best_gain = None, -1
        for p in range(n):
            if occ[p]:
                continue
            trial = bytearray(occ)
            trial[p] = 1
            gain = br.grow(trial, [p])
            if gain > best_gain:
                best, best_gain = p, gain
        chosen.append(best)
        occ[best] = 1
        br.grow(occ, [best])
    chosen = _prune(br, chosen)
    if local_search is None:
        local_search = n <= 64
    if local_search:
        chosen = _local_search(br, chosen)
    return sorted(chosen)


def automorphism_reps(space):
    """One point from each orbit of the automorphism group of a transitive B3-space."""
    if isinstance(space, ZmSpace):
        return [0]
    gens = [space.s1, space.s2]
    auts = all_isos(gens, gens)
    seen = set()
    reps = []
    for p in range(space.n):
        if p in seen:
            continue
        reps.append(p)
        seen.update(f[p] for f in auts)
    return reps


class _Budget(Exception):
    pass


def _search_level(br, k, reps, budget):
    """Is there a plague of size ≤ k? Returns a witness or None."""
    n = br.n
    counter = [0]

    def rec(chosen, occ, start, skip):
        counter[0] += 1
        if counter[0] > budget:
            raise _Budget()
        if all(occ):
            return list(chosen)
        if len(chosen) == k:
            return None
        for p in range(start, n):
            if occ[p] or p == skip:
                continue
            nxt = bytearray(occ)
            nxt[p] = 1
            br.grow(nxt, [p])
            res = rec(chosen + [p], nxt, p + 1, skip)
            if res is not None:
                return res
        return None

    for r in reps:
        occ = bytearray(n)
        occ[r] = 1
        br.grow(occ, [r])
        res = rec([r], occ, 0, r)
        if res is not None:
            return res, counter[0]
    return None, counter[0]


def minimal_plague(rule, space, budget=DEFAULT_BUDGET, exact_limit=EXACT_LIMIT):
    """Smallest plague size.

    Exact by iterative deepening when |Ω| ≤ exact_limit (first point up to
    automorphism, later points in increasing order, points already in the
    closure skipped). Otherwise, or when the node budget runs out, the greedy
    upper bound and the last fully searched level give a bounds-only result.
    """
    br = rule.bind(space)
    n = br.n
    if n == 0:
        return PlagueResult(0, 0, (), True, "empty")
    witness = greedy_plague(rule, space)
    upper = len(witness)
    lower = 1
    if n > exact_limit:
        # levels 1 and 2 are cheap without symmetry reduction and raise the lower bound
        for k in range(1, min(3, upper)):
            try:
                res, _ = _search_level(br, k, range(n), budget)
            except _Budget:
                break
            if res is not None:
                return PlagueResult(len(res), len(res), tuple(sorted(res)), True, "search")
            lower = k + 1
        return PlagueResult(upper, lower, tuple(witness), False, "greedy")
    reps = automorphism_reps(space)
    left = budget
    for k in range(1, upper):
        try:
            res, used = _search_level(br, k, reps, left)
        except _Budget:
            return PlagueResult(upper, lower, tuple(witness), False, "budget")
        left -= used
        if res is not None:
            return PlagueResult(len(res), len(res), tuple(sorted(res)), True, "search")
        lower = k + 1
    return PlagueResult(upper, upper, tuple(witness), True, "search")


def brute_force_min_plague(rule, space, limit=BRUTE_LIMIT):
    """Independent oracle: vectorised τ iteration over every subset, by size."""
    import numpy as np

    n = space.n
    if n > limit:
        raise AutomatonError("brute force limited to %d points" % limit)
    br = rule.bind(space)
    clauses = [np.array([[br.nbrs[w][c][j] for w in range(n)]
                         for j in range(len(br.nbrs[0][c]))])
               for c in range(len(br.nbrs[0]))] if n else []
    for k in range(0, n + 1):
        combs = list(itertools.combinations(range(n), k))
        S = np.zeros((len(combs), n), dtype=bool)
        for i, c in enumerate(combs):
            S[i, list(c)] = True
        while True:
            T = S.copy()
            for tab in clauses:
                acc = np.ones_like(S)
                for row in tab:
                    acc &= S[:, row]
                T |= acc
            if (T == S).all():
                break
            S = T
        hit = np.nonzero(S.all(axis=1))[0]
        if len(hit):
            return k, combs[hit[0]]
    return None


# -- weights ----------------------------------------------------------------------------

_F = Fraction
OMEGA_TABLE = (
    (_F(1), _F(1, 3), _F(11, 24), _F(1, 2)),
    (_F(1, 3), _F(1, 3), _F(1, 3), _F(1, 3)),
    (_F(11, 24), _F(1, 3), _F(7, 24), _F(7, 24)),
    (_F(1, 2), _F(1, 3), _F(7, 24), _F(1, 4)),
)

EXCEPTIONS = (
    # (reference covering, exceptional vertex or None for all, adjustment)
    (CoveringDesc.make("4A", 5, 3, 2), 1, _F(1, 30)),
    (CoveringDesc.make("6A", 4, 2, 2), 3, _F(1, 12)),
    (CoveringDesc.make("12C", 1, 0, 0, 0), None, _F(1, 24)),
)


def omega_prime(i, j):
    if i < 1 or j < 1:
        raise AutomatonError("cycle lengths must be positive")
    return OMEGA_TABLE[min(i, 4) - 1][min(j, 4) - 1]


@lru_cache(maxsize=None)
def _reference(c):
    return build_covering(c)


def exceptional_points(space):
    """(reference descriptor, exceptional point set, adjustment) or None."""
    for ref, vert, adj in EXCEPTIONS:
        rs = _reference(ref)
        if rs.n != space.n:
            continue
        f = covering_iso(space, rs)
        if f is None:
            continue
        if vert is None:
            pts = frozenset(range(space.n))
        else:
            inv = {v: k for k, v in enumerate(f)}
            pts = frozenset(inv[point(vert - 1, k, ref.N)] for k in range(ref.N))
        return ref, pts, adj
    return None


def omega_values(space, classification=None):
    c1 = perms.cycle_index(space.s1)
    c2 = perms.cycle_index(space.s2)
    vals = [omega_prime(c1[1][c1[0][p]], c2[1][c2[0][p]]) for p in range(space.n)]
    if isinstance(classification, CoveringDesc):
        exc = exceptional_points(space)
        if exc is not None:
            _, pts, adj = exc
            for p in pts:
                vals[p] += adj
    return vals


def omega_space(space, classification=None):
    """ω(Σ): mean of ω′ over the points, with the three exceptional adjustments
    applied when the classified space is isomorphic to one of the exceptions."""
    if classification is None:
        exc = exceptional_points(space)
        if exc is not None:
            raise AutomatonError("space is exceptional; pass its classification")
    vals = omega_values(space, classification)
    return sum(vals, Fraction(0)) / space.n


# -- constructed plagues -------------------------------------------------------------------

def _g(u, N):
    return math.gcd(u % N, N)


def reps_mod(u, N):
    """Representatives of ℤ_N/⟨u⟩."""
    return list(range(_g(u, N)))


def subgroup(u, N):
    return list(range(0, N, _g(u, N)))


def _recipes(c):
    """Candidate seeds from the family's immunity argument, as vertex → residues maps."""
    N = c.N
    v = dict(c.labels)
    a, b, cc = v.get("a", 0), v.get("b", 0), v.get("c", 0)
    A = "*"
    base = c.base
    out = []
    if base == "1A":
        out.append({1: A})
    elif base == "3A":
        out.append({2: A})
    elif base == "4A":
        out.append({3: A, 1: [0]})
    elif base == "6A":
        out.append({1: A, 5: A})
        out.append({1: A, 2: reps_mod(-a, N), 5: reps_mod(a + 1, N)})
        out.append({1: A, 5: sorted(set(reps_mod(1 + a, N)) | set(subgroup(1 + a, N)))})
    elif base == "6D":
        out.append({1: A, 5: sorted(set(subgroup(b, N)) | set(reps_mod(b, N)))})
    elif base == "7A":
        out.append({1: list(range(6)), 3: A})
    elif base == "8A":
        out.append({1: A, 3: A})
    elif base == "9A":
        out.append({1: [0, 1], 2: A, 5: A})
        out.append({1: A, 2: A, 5: reps_mod(b - 1, N)})
        out.append({4: A, 8: A, 2: reps_mod(a + b, N)})
    elif base == "12A":
        out.append({1: A, 2: A, 5: A})
    elif base == "12B":
        for i in range(N):
            out.append({2: A, 5: A, 9: A, 10: [i]})
        out.append({3: reps_mod(a - 1, N), 8: reps_mod(b + cc, N), 1: A, 2: A})
    elif base == "12C":
        J = reps_mod(b + cc, N)
        out.append({1: A, 2: A, 3: A, 5: J})
        n = N // _g(b + cc, N)
        if n:
            h = N // n
            I = sorted(set(J) | {i + t for i in range((h - 1) // 2 + 1)
                                 for t in subgroup(b + cc, N)})
            out.append({1: A, 2: A, 3: [i % N for i in I], 5: J})
    elif base == "18A":
        out.append({1: A, 2: A, 3: A, 5: A, 11: reps_mod(b, N)})
    elif base == "24A":
        out.append({1: A, 2: A, 3: A, 4: A, 7: A, 13: A})
    return out


def constructed_plague(c, space=None, rule=None):
    """Smallest verified seed among the family constructions.

    The constructions are tried for every descriptor of the isomorphism class
    (the immunity arguments normalise the labels first) and carried back to
    ``space`` (default: build_covering(c)). Falls back to the greedy plague
    when no construction verifies.
    """
    rule = rule or b3_rule()
    target = space if space is not None else build_covering(c)
    descs = classify_all(target)
    if isinstance(descs, Unclassified):
        raise AutomatonError("space is not a covering of a catalogued graph")
    best = None
    for dsc in descs:
        built = build_covering(dsc)
        f = covering_iso(built, target)
        if f is None:
            continue
        for spec in _recipes(dsc):
            pts = {f[p] for p in fibre_points(dsc.N, spec)}
            if best is not None and len(pts) >= len(best):
                continue
            if is_plague(rule, PointSet(target, frozenset(pts))):
                best = pts
    if best is None:
        return PointSet(target, frozenset(greedy_plague(rule, target))), "greedy"
    return PointSet(target, frozenset(best)), "construction"


# -- immunity ----------------------------------------------------------------------------------

def immunity_report(space, classification=None, exact_limit=EXACT_LIMIT, budget=DEFAULT_BUDGET):
    rule = b3_rule()
    res = minimal_plague(rule, space, budget=budget, exact_limit=exact_limit)
    upper, witness, method = res.upper, res.witness, res.method
    if isinstance(classification, CoveringDesc) and not res.exact:
        ps, how = constructed_plague(classification, space, rule)
        if len(ps) < upper:
            upper, witness, method = len(ps), tuple(ps), how
    n = space.n
    return {
        "points": n,
        "upper": Fraction(upper, n),
        "lower": Fraction(res.lower, n) if n else Fraction(0),
        "exact": Fraction(upper, n) if res.exact else None,
        "plague_size": upper,
        "witness": tuple(witness),
        "method": method,
    }


def verify_immunity_theorem(space, classification, exact_limit=EXACT_LIMIT, budget=DEFAULT_BUDGET):
    """Compare the best immunity bound with ω(Σ). ``passed`` is False when the
    bound exceeds ω, which would contradict the percolation theorem."""
    rep = immunity_report(space, classification, exact_limit, budget)
    w = omega_space(space, classification)
    rep = dict(rep)
    rep["omega"] = w
    rep["classification"] = str(classification)
    rep["passed"] = rep["upper"] <= w
    return rep


# -- ℤₘ constructions -------------------------------------------------------------------------

def plague_9A(m, lam):
    return PointSet.of(ZmSpace(m), reps_mod(lam, m))


def plague_6D(m, lam):
    return PointSet.of(ZmSpace(m), set(subgroup(lam, m)) | set(reps_mod(lam, m)))


def plague_game12C(m, lam):
    top = (m - 1) // 2 if m % 2 else m // 2 - 1
    return PointSet.of(ZmSpace(m), range(top + 1))


def zm_examples(m):
    """Check the three ℤₘ constructions for every admissible λ; returns failures."""
    bad = []
    for lam in range(m):
        if lam % m:
            r = zm_rule(m, [lam])
            if not is_plague(r, set(plague_9A(m, lam))):
                bad.append(("9A", m, lam))
        offs = [1, lam + 1, -lam]
        if lam % m and all(o % m for o in offs):
            r = zm_rule(m, offs)
            if not is_plague(r, set(plague_6D(m, lam))):
                bad.append(("6D", m, lam))
        if m >= 2 and lam % m not in (0, 1 % m):
            r = zm_rule(m, [lam, lam - 1])
            if not is_plague(r, set(plague_game12C(m, lam))):
                bad.append(("12C", m, lam))
    return bad


# -- exception predicates ------------------------------------------------------------------------

def _fibre_triples(orbit, ref, vert):
    f = covering_iso(orbit, _reference(ref))
    if f is None:
        return None
    inv = {v: k for k, v in enumerate(f)}
    return [orbit.decoration[inv[point(vert - 1, k, ref.N)]] for k in range(ref.N)]


def exception_predicates(orbit, classification=None):
    """Check the rack identities that hold on the exceptional fibres.

    Returns a report with ``applicable`` (the orbit is isomorphic to one of the
    three exceptional coverings) and ``holds``.
    """
    from .racks import k_stats, profile

    t = orbit.rack
    if t is None or orbit.decoration is None:
        raise AutomatonError("orbit must be decorated over a rack")
    op = t.op
    exc = exceptional_points(orbit)
    rep = {"applicable": exc is not None, "classification": str(classification)}
    if exc is None:
        rep["holds"] = None
        return rep
    ref = exc[0]
    checks = {}
    if ref.base == "4A":
        trip = _fibre_triples(orbit, ref, 1)
        checks["(x▷y)▷y=z on v1[*]"] = all(op[op[x][y]][y] == z for x, y, z in trip)
    elif ref.base == "6A":
        trip = _fibre_triples(orbit, ref, 3)

        def ok(x, y, z):
            w = op[x][y]
            return op[w][op[op[w][x]][x]] == z
        checks["w▷((w▷x)▷x)=z on v3[*]"] = all(ok(*tr) for tr in trip)
        checks["φ_x has a 4-cycle"] = 4 in profile(t).as_dict()
        checks["k4 ≥ 4"] = k_stats(t).kn(4) >= 4
    else:
        checks["x▷(x▷y)=z everywhere"] = all(op[x][op[x][y]] == z
                                             for x, y, z in orbit.decoration)
    rep["reference"] = str(ref)
    rep["checks"] = checks
    rep["holds"] = all(checks.values())
    return rep
