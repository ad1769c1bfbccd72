"""Scalar 2-cocycles on racks and the cubic operator 1 + c₁₂ + c₁₂c₂₃.

A cocycle with values in the n-th roots of unity is stored by exponents:
``q[x][y] = k`` stands for ζₙᵏ. The braiding on basis vectors is
c(x ⊗ y) = q(x, y)·(x▷y) ⊗ x.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import perms
from .cyclotomic import (CycScalar, prime_for, primitive_root_of_unity,
                         rank_exact, rank_mod_p)
from .hurwitz import decompose_cube
from .racks import (RackError, RackTable, k_stats, profile, size_bound,
                    survivor_profiles, validate, is_indecomposable)

GROUP_CAP = 10**5


class NicholsError(ValueError):
    pass


@dataclass
class CocycleModule:
    rack: RackTable
    n: int
    q: tuple
    provenance: str = "constant"

    def __post_init__(self):
        self.q = tuple(tuple(v % self.n for v in row) for row in self.q)

    def value(self, x, y):
        return CycScalar.zeta(self.n, self.q[x][y])


def _root_exponent(value):
    """(n, k) with value = ζₙᵏ for a root of unity given as ±1, (n, k) or CycScalar."""
    if isinstance(value, tuple):
        n, k = value
        return n, k % n
    if isinstance(value, int):
        if value == 1:
            return 1, 0
        if value == -1:
            return 2, 1
        raise NicholsError("integer cocycle values must be ±1")
    if isinstance(value, CycScalar):
        for k in range(value.n):
            if CycScalar.zeta(value.n, k) == value:
                return value.n, k
    raise NicholsError("value is not a root of unity of the stated order")


def constant_cocycle(t, value):
    n, k = _root_exponent(value)
    return CocycleModule(t, n, [[k] * t.size for _ in range(t.size)], "constant")


def validate_cocycle(c):
    """q(x, y▷z)·q(y, z) = q(x▷y, x▷z)·q(x, z) for all x, y, z."""
    op, q, n = c.rack.op, c.q, c.n
    d = c.rack.size
    for x in range(d):
        ox, qx = op[x], q[x]
        for y in range(d):
            oy, qy = op[y], q[y]
            qxy = q[ox[y]]
            for z in range(d):
                if (qx[oy[z]] + qy[z] - qxy[ox[z]] - qx[z]) % n:
                    return False
    return True


# -- group models --------------------------------------------------------------------

@dataclass
class GroupModel:
    """A finite group Γ of permutations with the rack realised as the class of x₁.

    Maps compose right to left and the rack operation is z ▷ y = z y z⁻¹.
    ``reps[y]`` conjugates x₁ to the class element with rack index y.
    """
    elements: list
    x1: tuple
    cls: list
    reps: list
    n0: int
    rack: RackTable = None
    powers: dict = field(default_factory=dict)

    def exponent(self, h):
        try:
            return self.powers[h]
        except KeyError:
            raise NicholsError("element is not a power of x₁") from None


def _closure(gens, cap=GROUP_CAP):
    ident = perms.identity(len(gens[0]))
    seen = {ident: None}
    order = [ident]
    i = 0
    while i < len(order):
        g = order[i]
        i += 1
        for h in gens:
            k = perms.compose(h, g)
            if k not in seen:
                if len(order) >= cap:
                    raise NicholsError("group exceeds %d elements" % cap)
                seen[k] = None
                order.append(k)
    return order


def group_model(gens, x1, class_order=None, name=""):
    """Build the model; ``class_order`` optionally fixes the order of the class."""
    gens = [tuple(g) for g in gens]
    x1 = tuple(x1)
    elements = _closure(gens)

    def conj(g, h):
        return perms.compose(perms.compose(g, h), perms.inverse(g))

    reps_by = {}
    for g in elements:
        y = conj(g, x1)
        if y not in reps_by:
            reps_by[y] = g
    cls = list(class_order) if class_order is not None else sorted(reps_by)
    if set(cls) != set(reps_by):
        raise NicholsError("class order does not list the class of x₁")
    index = {y: i for i, y in enumerate(cls)}
    op = [[index[conj(z, y)] for y in cls] for z in cls]
    rack = RackTable(len(cls), op, name or "class of x1", elements=tuple(cls), injective=True)
    powers = {}
    p = perms.identity(len(x1))
    k = 0
    while p not in powers:
        powers[p] = k
        p = perms.compose(x1, p)
        k += 1
    n0 = len(powers)
    cent = [g for g in elements if perms.compose(g, x1) == perms.compose(x1, g)]
    if len(cent) != n0 or any(g not in powers for g in cent):
        raise NicholsError("centralizer of x₁ is not generated by x₁")
    return GroupModel(elements, x1, cls, [reps_by[y] for y in cls], n0, rack, powers)


def affine_group_model(q, alpha, m=None):
    """Γ = {x ↦ αᵏx + b} acting on 𝔽_q × ℤ_m (k read mod m); the class of
    x₁ = (x ↦ αx) is Aff(q, α) with element y the scaling about y."""
    alpha %= q
    o = 1
    while pow(alpha, o, q) != 1:
        o += 1
    m = m or o
    if m % o:
        raise NicholsError("m must be a multiple of ord(α) = %d" % o)

    def elem(k, b):
        a = pow(alpha, k, q)
        return tuple(((a * x + b) % q) * m + (j + k) % m for x in range(q) for j in range(m))

    x1 = elem(1, 0)
    trans = elem(0, 1)
    # scaling about y is t_y x1 t_y⁻¹ with t_y the translation by y
    cls = [elem(1, (1 - alpha) * y % q) for y in range(q)]
    gm = group_model([x1, trans], x1, class_order=cls, name="Aff(%d,%d)" % (q, alpha))
    # canonical representatives: translations
    gm.reps = [elem(0, y) for y in range(q)]
    return gm


def induced_cocycle(m, k):
    """q(z, y) = ρ(x₁)^e with g_{z▷y}⁻¹ γ_z g_y = x₁^e and ρ(x₁) = ζ_{n₀}^k."""
    t = m.rack
    d = t.size
    q = []
    for z in range(d):
        gz = m.cls[z]
        row = []
        for y in range(d):
            w = t.op[z][y]
            h = perms.compose(perms.inverse(m.reps[w]), perms.compose(gz, m.reps[y]))
            row.append(k * m.exponent(h))
        q.append(row)
    c = CocycleModule(t, m.n0, q, "induced k=%d" % k)
    if not validate_cocycle(c):
        raise NicholsError("induced table fails the cocycle condition")
    return c


# -- the cubic operator -------------------------------------------------------------------

def _block_entries(c, orbit):
    """Columns of 1 + c₁₂ + c₁₂c₂₃ on the orbit: (row index, exponent) triples."""
    t = c.rack
    op, q, n = t.op, c.q, c.n
    trip = orbit.decoration
    index = {v: i for i, v in enumerate(trip)}
    cols = []
    for (x, y, z) in trip:
        s1 = (op[x][y], x, z)
        yz = op[y][z]
        s12 = (op[x][yz], x, y)
        cols.append(((index[(x, y, z)], 0),
                     (index[s1], q[x][y] % n),
                     (index[s12], (q[y][z] + q[x][yz]) % n)))
    return cols


def cubic_matrix_exact(c, orbit):
    m = len(orbit.decoration)
    zero = CycScalar(c.n)
    M = [[zero] * m for _ in range(m)]
    for j, col in enumerate(_block_entries(c, orbit)):
        for i, e in col:
            M[i][j] = M[i][j] + CycScalar.zeta(c.n, e)
    return M


def cubic_matrix_mod_p(c, orbit, p=None):
    p = p or prime_for(c.n)
    r = primitive_root_of_unity(c.n, p)
    m = len(orbit.decoration)
    M = [[0] * m for _ in range(m)]
    for j, col in enumerate(_block_entries(c, orbit)):
        for i, e in col:
            M[i][j] = (M[i][j] + pow(r, e, p)) % p
    return M, p


def cubic_kernel_block(c, orbit, cross_check=True):
    """Exact kernel dimension of 1 + c₁₂ + c₁₂c₂₃ on the span of the orbit."""
    if orbit.decoration is None:
        raise NicholsError("orbit must carry its triples")
    m = len(orbit.decoration)
    exact = m - rank_exact(cubic_matrix_exact(c, orbit))
    if cross_check:
        M, p = cubic_matrix_mod_p(c, orbit)
        modular = m - rank_mod_p(M, p)
        if modular != exact:
            raise NicholsError("ℚ(ζ%d) rank and 𝔽_%d rank disagree" % (c.n, p))
    return exact


def braid_equation_ok(c, orbit):
    """c₁₂c₂₃c₁₂ = c₂₃c₁₂c₂₃ on every basis triple of the orbit."""
    op, q, n = c.rack.op, c.q, c.n

    def c12(v, e):
        x, y, z = v
        return (op[x][y], x, z), e + q[x][y]

    def c23(v, e):
        x, y, z = v
        return (x, op[y][z], y), e + q[y][z]

    for v in orbit.decoration:
        a = c12(*c23(*c12(v, 0)))
        b = c23(*c12(*c23(v, 0)))
        if a[0] != b[0] or (a[1] - b[1]) % n:
            return False
    return True


def full_cubic_kernel(c, p=None):
    """Kernel dimension of the operator on all of V^{⊗3}, computed modulo p."""
    from .hurwitz import B3Space

    d = c.rack.size
    trip = [(x, y, z) for x in range(d) for y in range(d) for z in range(d)]
    fake = B3Space(list(range(len(trip))), list(range(len(trip))), decoration=trip)
    M, p = cubic_matrix_mod_p(c, fake, p)
    return len(trip) - rank_mod_p(M, p)


def threshold(d, e=1):
    return Fraction(d * e * ((d * e) ** 2 - 1), 3)


def many_cubic_report(c, orbits=None, workers=1):
    """Blocks are independent; ``workers`` > 1 spreads them over processes."""
    t = c.rack
    orbits = orbits if orbits is not None else decompose_cube(t)
    if workers and workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as ex:
            blocks = list(ex.map(cubic_kernel_block, [c] * len(orbits), orbits))
    else:
        blocks = [cubic_kernel_block(c, o) for o in orbits]
    total = sum(blocks)
    th = threshold(t.size)
    return {"rack": t.name, "cocycle": c.provenance, "n": c.n,
            "blocks": [(o.n, b) for o, b in zip(orbits, blocks)],
            "kernel_total": total, "threshold": th, "holds": total >= th}


# -- counting arguments ----------------------------------------------------------------------

def immunity_necessary_condition(t, bounds, orbits=None):
    """lhs = Σ imm(𝒪)·|𝒪| against rhs = d(d²−1)/3.

    ``bounds`` is a list aligned with ``orbits`` (default decompose_cube(t)),
    or a mapping from orbit size to bound.
    """
    orbits = orbits if orbits is not None else decompose_cube(t)
    if isinstance(bounds, dict):
        vals = [Fraction(bounds[o.n]) for o in orbits]
    else:
        vals = [Fraction(b) for b in bounds]
        if len(vals) != len(orbits):
            raise NicholsError("one bound per orbit expected")
    lhs = sum((v * o.n for v, o in zip(vals, orbits)), Fraction(0))
    rhs = threshold(t.size)
    return {"lhs": lhs, "rhs": rhs, "passes": lhs >= rhs}


def computed_immunity_bounds(orbits, exact_limit=30):
    from .automaton import immunity_report
    from .catalog import CoveringDesc, classify

    out = []
    for o in orbits:
        if o.n == 1:
            out.append(Fraction(1))
            continue
        cl = classify(o)
        rep = immunity_report(o, cl if isinstance(cl, CoveringDesc) else None, exact_limit)
        out.append(rep["upper"])
    return out


def _kpair(k):
    if isinstance(k, tuple):
        return k
    return k.kn(3), k.kprime(3)


def k_inequality_value(k3, k3p, has_6A_exception):
    if has_6A_exception:
        return (k3 + k3p - 5) ** 2 + Fraction(11, 5) * k3 + k3p ** 2, 49
    return (k3 + k3p - 4) ** 2 + Fraction(1, 5) * k3 + k3p ** 2, 40


def k_inequality_report(k, has_6A_exception):
    k3, k3p = _kpair(k)
    value, bound = k_inequality_value(k3, k3p, has_6A_exception)
    return {"k3": k3, "k3prime": k3p, "value": Fraction(value), "bound": bound,
            "satisfied": value <= bound}


def k_solution_enumeration(variant="with", limit=20):
    """Pairs (k₃, k₃′) with k₃ ≠ 1, k₃′ ≥ 2 satisfying the inequality.

    In the "with" variant the exceptional bound applies only when k₃′ ≥ 4,
    since the exceptional covering forces k₄ ≥ 4 and k₄ ≤ k₃′.
    """
    if variant not in ("with", "without"):
        raise NicholsError("variant must be 'with' or 'without'")
    out = set()
    for k3p in range(2, limit):
        for k3 in range(0, limit):
            if k3 == 1:
                continue
            exc = variant == "with" and k3p >= 4
            v, b = k_inequality_value(k3, k3p, exc)
            if v <= b:
                out.add((k3, k3p))
    return out


# -- pipeline --------------------------------------------------------------------------------

def _shape(t):
    return tuple(sorted(j for j, a in profile(t).parts if j >= 2 for _ in range(a)))


def classification_pipeline(racks, exact_limit=30, models=None):
    """Filter racks through the structural, counting and kernel stages.

    ``models`` maps a rack name to a GroupModel for the character sweep;
    affine racks get one automatically. Other racks are tested with the
    constant cocycles ±1.
    """
    shapes = set(survivor_profiles(9))
    sols = k_solution_enumeration("with")
    report = []
    for t in racks:
        entry = {"rack": t.name, "size": t.size, "stage": None}
        report.append(entry)
        try:
            flags = validate(t)
        except RackError as exc:
            entry["stage"] = "malformed: %s" % exc
            continue
        if not flags["is_crossed_set"]:
            entry["stage"] = "not a crossed set"
            continue
        if not is_indecomposable(t):
            entry["stage"] = "decomposable"
            continue
        ks = k_stats(t)
        entry["k"] = ks.as_dict()
        if ks.kprime(3) == 0:
            entry["stage"] = "braided"
            continue
        if _shape(t) not in shapes:
            entry["stage"] = "profile"
            continue
        if t.size > max(size_bound(s, sum(s)) for s in shapes):
            entry["stage"] = "size"
            continue
        if _kpair(ks) not in sols:
            entry["stage"] = "k-inequality"
            continue
        orbits = decompose_cube(t)
        bounds = computed_immunity_bounds(orbits, exact_limit)
        imm = immunity_necessary_condition(t, bounds, orbits)
        entry["orbits"] = sorted(o.n for o in orbits)
        entry["immunity"] = {"lhs": imm["lhs"], "rhs": imm["rhs"]}
        if not imm["passes"]:
            entry["stage"] = "immunity"
            continue
        model = (models or {}).get(t.name)
        if model is None:
            model = affine_model_for(t)
        if model is not None:
            cocycles = [induced_cocycle(model, k) for k in range(model.n0)]
        else:
            cocycles = [constant_cocycle(t, 1), constant_cocycle(t, -1)]
        kernels = []
        for c in cocycles:
            r = many_cubic_report(c, orbits)
            kernels.append({"cocycle": c.provenance, "rho": "zeta_%d^%d" % (c.n, c.q[0][0]),
                            "kernel_total": r["kernel_total"], "holds": r["holds"]})
        entry["kernels"] = kernels
        entry["stage"] = "survivor" if any(k["holds"] for k in kernels) else "kernel"
    return report


def affine_model_for(t):
    """Group model when ``t`` is isomorphic to some Aff(p, α) of prime order."""
    from .racks import iso_racks, make_affine

    d = t.size
    if d < 3 or any(d % r == 0 for r in range(2, math.isqrt(d) + 1)):
        return None
    for alpha in range(2, d):
        a = make_affine(d, alpha)
        f = iso_racks(a, t)
        if f is not None:
            gm = affine_group_model(d, alpha)
            # transport to t's element numbering
            inv = [0] * d
            for i, j in enumerate(f):
                inv[j] = i
            cls = [gm.cls[inv[j]] for j in range(d)]
            reps = [gm.reps[inv[j]] for j in range(d)]
            op = [[t.op[z][y] for y in range(d)] for z in range(d)]
            return GroupModel(gm.elements, gm.x1, cls, reps, gm.n0,
                              RackTable(d, op, t.name, injective=True), gm.powers)
    return None
