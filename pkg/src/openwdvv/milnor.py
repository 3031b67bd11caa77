"""Universal unfoldings of the A/D/E singularities and their Milnor-type
quotient algebras.

The closed algebra of an unfolding L(x, y, v) is C[x, y, v]/(dL/dx, dL/dy),
a free module over the parameter ring with the classical monomial basis.
The extended algebras adjoin a generator w subject to

    A_N:  w = dL/dx,             dL/dy = 0,  w*x = v_{N+1}*w
    D_N:  w = v_{N+1}*dL/dx,     dL/dy = 0,  2*w*x = v_{N+1}^2*w

over C[v] resp. C[v, v_{N+1}^{-1}]; both stay free of rank N+1.

Reduction to the basis uses a small hand-oriented rewrite system per
algebra rather than generic Groebner machinery: each rule replaces one
generator monomial by lower terms, normal forms are exactly the basis
monomials, and confluence plus associativity are asserted exhaustively on
basis products by the test-suite (and by check_confluence below).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactalg import MPoly, PolyError, VarTable, rat
from .report import Report

__all__ = [
    "Unfolding",
    "QuotientAlgebra",
    "StructureTensor",
    "build_unfolding",
    "build_closed_algebra",
    "build_extended_algebra",
    "structure_constants",
    "ideal_quotient_consistency",
    "check_confluence",
    "check_associativity",
]

_E_BASIS = {
    6: ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (2, 1)),
    7: ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (4, 0)),
    8: ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (2, 1), (3, 1)),
}

_E_MONOMIALS = {
    6: ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (2, 1)),
    7: ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (4, 0)),
    8: ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (2, 1), (3, 1)),
}


@dataclass(frozen=True)
class Unfolding:
    """A versal deformation L(x, y, v_1..v_N) with its quasi-homogeneous data.

    l is the distinguished basis index: the Saito pairing of two basis
    vectors is the coefficient of phi_l in their product.
    """

    family: str  # 'A' | 'D' | 'E'
    n: int  # subscript: A_n, D_n, E_n
    rank: int  # number of deformation parameters
    table: VarTable  # x, y, v1..vN with weights
    poly: MPoly
    basis: tuple  # gen-exponent pairs (a, b) meaning x^a*y^b
    l: int  # 1-based

    @property
    def weights(self) -> tuple:
        """Weights q_1..q_N of the deformation parameters."""
        return self.table.weights[2:]

    @property
    def delta(self) -> Fraction:
        return 1 - self.weights[self.l - 1]

    def label(self) -> str:
        return f"{self.family}{self.n}"


def _vnames(rank: int) -> tuple:
    return tuple(f"v{k}" for k in range(1, rank + 1))


def parameter_table(u: Unfolding) -> VarTable:
    """The deformation-parameter ring v_1..v_N with its weights."""
    return VarTable(u.table.names[2:], u.table.weights[2:])


def build_unfolding(family: str, n: int) -> Unfolding:
    """Universal unfolding of A_n, D_n (n >= 3), or E_n (n in {6, 7, 8})."""
    if family == "A":
        if n < 1:
            raise PolyError("A_n needs n >= 1")
        qx = Fraction(1, n + 1)
        qv = tuple(Fraction(n + 2 - k, n + 1) for k in range(1, n + 1))
        tab = VarTable(("x", "y") + _vnames(n), (qx, Fraction(1, 2)) + qv)
        x = MPoly.variable(tab, "x")
        y = MPoly.variable(tab, "y")
        lam = x ** (n + 1) / (n + 1) + y * y
        for k in range(1, n + 1):
            lam = lam + MPoly.variable(tab, f"v{k}") * x ** (k - 1)
        basis = tuple((k, 0) for k in range(n))
        l = n
    elif family == "D":
        if n < 3:
            raise PolyError("D_n needs n >= 3")
        qx = Fraction(1, n - 1)
        qv = tuple(Fraction(n - k, n - 1) for k in range(1, n)) + (
            Fraction(n, 2 * (n - 1)),
        )
        tab = VarTable(
            ("x", "y") + _vnames(n), (qx, Fraction(n - 2, 2 * (n - 1))) + qv
        )
        x = MPoly.variable(tab, "x")
        y = MPoly.variable(tab, "y")
        lam = x ** (n - 1) / (n - 1) + x * y * y
        for k in range(1, n):
            lam = lam + MPoly.variable(tab, f"v{k}") * x ** (k - 1)
        lam = lam + MPoly.variable(tab, f"v{n}") * y
        basis = tuple((k, 0) for k in range(n - 1)) + ((0, 1),)
        l = n - 1
    elif family == "E":
        if n not in (6, 7, 8):
            raise PolyError("E_n needs n in {6, 7, 8}")
        germ = {6: ((4, 0), (0, 3)), 7: ((3, 1), (0, 3)), 8: ((5, 0), (0, 3))}[n]
        (ax, ay), (bx, by) = germ
        # Germ weights solve q_x*ax + q_y*ay = 1 = q_x*bx + q_y*by.
        qy = Fraction(1, 3)
        qx = {6: Fraction(1, 4), 7: Fraction(2, 9), 8: Fraction(1, 5)}[n]
        mons = _E_MONOMIALS[n]
        qv = tuple(1 - qx * a - qy * b for (a, b) in mons)
        tab = VarTable(("x", "y") + _vnames(n), (qx, qy) + qv)
        x = MPoly.variable(tab, "x")
        y = MPoly.variable(tab, "y")
        lam = x ** ax * y ** ay + x ** bx * y ** by
        for k, (a, b) in enumerate(mons, start=1):
            lam = lam + MPoly.variable(tab, f"v{k}") * x ** a * y ** b
        basis = _E_BASIS[n]
        l = n
    else:
        raise PolyError(f"unknown family {family!r}")

    u = Unfolding(family, n, n, tab, lam, basis, l)
    if lam.euler() != lam:
        raise PolyError(f"Euler identity fails for {u.label()}")
    return u


class QuotientAlgebra:
    """A free quotient of C[x, y(, w), v] presented by oriented rewrite rules.

    gens lists which table slots are generators; basis and rule left-hand
    sides are exponent tuples over those slots.  Normal forms are memoized
    per rule-scan order, so repeated products (structure constants,
    associativity sweeps) stay cheap.
    """

    def __init__(self, unfolding, table, gens, basis, rules, extended):
        self.unfolding = unfolding
        self.table = table
        self.gens = tuple(gens)
        self.gen_slots = tuple(table.index(g) for g in gens)
        self.basis = tuple(tuple(b) for b in basis)
        self.rules = tuple(rules)  # (lhs gen-exponents, rhs MPoly over table)
        self.extended = extended
        vslots = [j for j in range(table.arity) if j not in self.gen_slots]
        self.coeff_table = VarTable(
            tuple(table.names[j] for j in vslots),
            tuple(table.weights[j] for j in vslots),
            table.laurent,
        )
        self._vslots = tuple(vslots)
        self._memo = {"first": {}, "last": {}}
        self._active = set()

    @property
    def rank(self) -> int:
        return len(self.basis)

    def label(self) -> str:
        kind = "ext" if self.extended else "closed"
        return f"{self.unfolding.label()} {kind}"

    def phi(self, k: int) -> MPoly:
        """k-th basis monomial (1-based) as a polynomial."""
        return self._gen_monomial(self.basis[k - 1])

    def _gen_monomial(self, g) -> MPoly:
        exp = [0] * self.table.arity
        for slot, e in zip(self.gen_slots, g):
            exp[slot] = e
        return MPoly.monomial(self.table, 1, dict(zip(self.table.names, exp)))

    def _split(self, exp):
        g = tuple(exp[j] for j in self.gen_slots)
        rest = list(exp)
        for j in self.gen_slots:
            rest[j] = 0
        return g, tuple(rest)

    def _match(self, g, order: str):
        rules = self.rules if order == "first" else self.rules[::-1]
        for lhs, rhs in rules:
            if all(ge >= le for ge, le in zip(g, lhs)):
                return lhs, rhs
        return None

    def _nf_gen(self, g, order: str) -> MPoly:
        memo = self._memo[order]
        got = memo.get(g)
        if got is not None:
            return got
        hit = self._match(g, order)
        if hit is None:
            res = self._gen_monomial(g)
            memo[g] = res
            return res
        if g in self._active:
            raise PolyError(f"rewrite cycle at {g} in {self.label()}")
        self._active.add(g)
        lhs, rhs = hit
        residual = tuple(ge - le for ge, le in zip(g, lhs))
        acc = MPoly.zero(self.table)
        for rexp, c in rhs.terms.items():
            rg, rv = self._split(rexp)
            g2 = tuple(a + b for a, b in zip(residual, rg))
            tail = self._nf_gen(g2, order)
            vmono = MPoly._make(self.table, {rv: c})
            acc = acc + vmono * tail
        self._active.discard(g)
        memo[g] = acc
        return acc

    def normal_form(self, p: MPoly, order: str = "first") -> MPoly:
        """Reduce to the basis; order picks the rule-scan direction and must
        not change the result (checked by check_confluence)."""
        if p.table != self.table:
            raise PolyError("polynomial is over a foreign table")
        acc = MPoly.zero(self.table)
        for exp, c in p.terms.items():
            g, v = self._split(exp)
            vmono = MPoly._make(self.table, {v: c})
            acc = acc + vmono * self._nf_gen(g, order)
        return acc

    def coeffs(self, p: MPoly) -> list:
        """Basis coefficients of normal_form(p), over the parameter ring."""
        nf = self.normal_form(p)
        index = {b: k for k, b in enumerate(self.basis)}
        out = [dict() for _ in self.basis]
        for exp, c in nf.terms.items():
            g, _ = self._split(exp)
            k = index.get(g)
            if k is None:
                raise PolyError(f"normal form leaves the basis span: {g}")
            vexp = tuple(exp[j] for j in self._vslots)
            out[k][vexp] = c
        return [MPoly(self.coeff_table, t) for t in out]

    def multiply(self, j: int, k: int) -> MPoly:
        """Normal form of phi_j*phi_k (1-based)."""
        return self.normal_form(self.phi(j) * self.phi(k))


@dataclass(frozen=True)
class StructureTensor:
    """Structure constants c[a][i][j] over the parameter ring; the metric
    row is c[l]: eta(d/dv_i, d/dv_j) = c^l_{ij}."""

    table: VarTable
    entries: tuple
    l: int

    @property
    def rank(self) -> int:
        return len(self.entries)

    def c(self, a: int, i: int, j: int) -> MPoly:
        """Entry c^a_{ij}, all indices 1-based."""
        return self.entries[a - 1][i - 1][j - 1]


def _dx(u: Unfolding) -> MPoly:
    return u.poly.diff("x")


def _dy(u: Unfolding) -> MPoly:
    return u.poly.diff("y")


def _v(tab: VarTable, k: int) -> MPoly:
    return MPoly.variable(tab, f"v{k}")


def build_closed_algebra(u: Unfolding) -> QuotientAlgebra:
    """C[x, y, v]/(dL/dx, dL/dy) with the classical basis."""
    tab = u.table
    x = MPoly.variable(tab, "x")
    y = MPoly.variable(tab, "y")
    n = u.n
    if u.family == "A":
        rules = [
            ((0, 1), MPoly.zero(tab)),  # y = 0
            ((n, 0), x ** n - _dx(u)),  # x^n -> -sum (k-1) v_k x^(k-2)
        ]
    elif u.family == "D":
        xy_rhs = -_v(tab, n) / 2  # from dL/dy = 2xy + v_n
        y2_rhs = y * y - _dx(u)  # y^2 -> -x^(n-2) - sum (k-1) v_k x^(k-2)
        xn_rhs = _v(tab, n) / 2 * y
        for k in range(2, n):
            xn_rhs = xn_rhs - (k - 1) * _v(tab, k) * x ** (k - 1)
        rules = [
            ((1, 1), xy_rhs),
            ((0, 2), y2_rhs),
            ((n - 1, 0), xn_rhs),
        ]
    elif u.family == "E":
        dx, dy = _dx(u), _dy(u)
        if n == 6:
            rules = [
                ((3, 0), x ** 3 - dx / 4),
                ((0, 2), y * y - dy / 3),
            ]
        elif n == 8:
            rules = [
                ((4, 0), x ** 4 - dx / 5),
                ((0, 2), y * y - dy / 3),
            ]
        else:  # E7: x^2*y and y^2 from the partials, x^5 bootstrapped
            r1 = ((2, 1), x * x * y - dx / 3)
            r2 = ((0, 2), y * y - dy / 3)
            partial = QuotientAlgebra(u, tab, ("x", "y"), u.basis, [r1, r2], False)
            x5_rhs = partial.normal_form(x ** 2 * (x ** 3 - dy))
            rules = [r1, r2, ((5, 0), x5_rhs)]
    else:  # pragma: no cover
        raise PolyError(f"unknown family {u.family!r}")
    return QuotientAlgebra(u, tab, ("x", "y"), u.basis, rules, False)


def _extended_table(u: Unfolding, laurent: bool) -> VarTable:
    n = u.n
    if u.family == "A":
        qv1 = Fraction(1, n + 1)
        qw = Fraction(n, n + 1)
    else:
        qv1 = Fraction(1, 2 * (n - 1))
        qw = 1 - Fraction(1, 2 * (n - 1))
    names = ("x", "y", "w") + _vnames(n) + (f"v{n + 1}",)
    weights = (
        (u.table.weights[0], u.table.weights[1], qw) + u.weights + (qv1,)
    )
    return VarTable(names, weights, f"v{n + 1}" if laurent else None)


def build_extended_algebra(u: Unfolding) -> QuotientAlgebra:
    """Rank N+1 extension with the extra generator w; A and D only."""
    n = u.n
    if u.family == "A":
        tab = _extended_table(u, laurent=False)
        x = MPoly.variable(tab, "x")
        w = MPoly.variable(tab, "w")
        s = MPoly.variable(tab, f"v{n + 1}")
        xn_rhs = w
        w2 = s ** n
        for k in range(2, n + 1):
            xn_rhs = xn_rhs - (k - 1) * _v(tab, k) * x ** (k - 2)
            w2 = w2 + (k - 1) * _v(tab, k) * s ** (k - 2)
        rules = [
            ((0, 1, 0), MPoly.zero(tab)),  # y = 0
            ((1, 0, 1), s * w),  # w*x = v_{n+1}*w
            ((n, 0, 0), xn_rhs),  # x^n = w - sum (k-1) v_k x^(k-2)
            ((0, 0, 2), w2 * w),
        ]
        basis = tuple((k, 0, 0) for k in range(n)) + ((0, 0, 1),)
    elif u.family == "D":
        tab = _extended_table(u, laurent=True)
        x = MPoly.variable(tab, "x")
        y = MPoly.variable(tab, "y")
        w = MPoly.variable(tab, "w")
        s = MPoly.variable(tab, f"v{n + 1}")
        vn = _v(tab, n)
        y2_rhs = s ** -1 * w - x ** (n - 2)
        xn_rhs = s / 2 * w + vn / 2 * y
        w2 = s ** (2 * n - 3) / 2 ** (n - 2) + vn * vn * s ** -3
        for k in range(2, n):
            vk = _v(tab, k)
            y2_rhs = y2_rhs - (k - 1) * vk * x ** (k - 2)
            xn_rhs = xn_rhs - (k - 1) * vk * x ** (k - 1)
            w2 = w2 + (k - 1) * vk * s ** (2 * k - 3) / 2 ** (k - 2)
        rules = [
            ((1, 1, 0), -vn / 2),  # x*y = -v_n/2
            ((1, 0, 1), s * s / 2 * w),  # w*x = v_{n+1}^2/2 * w
            ((0, 1, 1), -vn * s ** -2 * w),  # w*y = -v_n/v_{n+1}^2 * w
            ((0, 2, 0), y2_rhs),
            ((n - 1, 0, 0), xn_rhs),
            ((0, 0, 2), w2 * w),
        ]
        basis = tuple((k, 0, 0) for k in range(n - 1)) + ((0, 1, 0), (0, 0, 1))
    else:
        raise PolyError("extended algebra is defined for A and D only")
    return QuotientAlgebra(u, tab, ("x", "y", "w"), basis, rules, True)


def structure_constants(alg: QuotientAlgebra) -> StructureTensor:
    """All products phi_i*phi_j expanded over the basis."""
    n = alg.rank
    entries = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            cs = alg.coeffs(alg.phi(i) * alg.phi(j))
            for a in range(n):
                entries[a][i - 1][j - 1] = cs[a]
                entries[a][j - 1][i - 1] = cs[a]
    frozen = tuple(tuple(tuple(row) for row in mat) for mat in entries)
    return StructureTensor(alg.coeff_table, frozen, alg.unfolding.l)


def ideal_quotient_consistency(ext: QuotientAlgebra, closed: QuotientAlgebra) -> bool:
    """True when the extension restricts to the closed algebra: closed-index
    products agree, and w never feeds back into the closed block."""
    if ext.unfolding is not closed.unfolding and ext.unfolding != closed.unfolding:
        raise PolyError("algebras come from different unfoldings")
    n = closed.rank
    ce = structure_constants(ext)
    cc = structure_constants(closed)
    embed = {nm: MPoly.variable(ext.coeff_table, nm) for nm in cc.table.names}
    for a in range(1, n + 1):
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                if cc.c(a, i, j).substitute(embed, ext.coeff_table) != ce.c(a, i, j):
                    return False
            if ce.c(a, i, n + 1):
                return False
    return True


def check_confluence(alg: QuotientAlgebra) -> Report:
    """Normal forms of all basis pair products agree under both rule-scan
    orders."""
    failures = []
    checked = 0
    for i in range(1, alg.rank + 1):
        for j in range(i, alg.rank + 1):
            checked += 1
            p = alg.phi(i) * alg.phi(j)
            if alg.normal_form(p, "first") != alg.normal_form(p, "last"):
                failures.append(f"phi_{i}*phi_{j}")
    return Report(f"confluence({alg.label()})", checked, tuple(failures))


def check_associativity(alg: QuotientAlgebra) -> Report:
    """(phi_a*phi_b)*phi_c = phi_a*(phi_b*phi_c) after reduction, all triples."""
    failures = []
    checked = 0
    nf = alg.normal_form
    for a in range(1, alg.rank + 1):
        for b in range(a, alg.rank + 1):
            ab = alg.multiply(a, b)
            for c in range(b, alg.rank + 1):
                checked += 1
                left = nf(ab * alg.phi(c))
                right = nf(alg.phi(a) * nf(alg.phi(b) * alg.phi(c)))
                if left != right:
                    failures.append(f"({a},{b},{c})")
    return Report(f"associativity({alg.label()})", checked, tuple(failures))
