"""Flat coordinates, the Saito metric, and Frobenius potentials for the A
and D singularities, plus exact WDVV and homogeneity verifiers.

Flat coordinates come from closed-form sums over exponent tuples; the
coordinate change is inverted exactly as a graded fixed point.  The
potential is rebuilt from the flat structure constants by inverting the
Euler operator one weighted-homogeneous component at a time, which is
well-posed because every component has positive weighted degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactalg import GaussianRational, MPoly, PolyError, VarTable, rat
from .milnor import (
    StructureTensor,
    Unfolding,
    build_closed_algebra,
    build_unfolding,
    parameter_table,
    structure_constants,
)
from .report import Report

__all__ = [
    "FrobeniusStructure",
    "flat_coords_A",
    "flat_coords_D",
    "invert_coords",
    "metric_and_potential",
    "frobenius_structure",
    "verify_wdvv",
    "verify_homogeneity",
    "t_table",
    "from_potential",
    "invert_matrix",
]


def t_table(weights, laurent_s: bool = False) -> VarTable:
    """Flat-coordinate table t1..tN, optionally extended by the Laurent s."""
    names = tuple(f"t{k}" for k in range(1, len(weights) + 1))
    if not laurent_s:
        return VarTable(names, tuple(Fraction(w) for w in weights))
    raise PolyError("use openext.extended_table for the s slot")


@dataclass(frozen=True)
class FrobeniusStructure:
    """A potential in flat coordinates with its constant metric and grading.

    t_of_v / v_of_t are the exact coordinate changes when the structure
    comes from a singularity; they are None for the Coxeter potentials
    obtained by substitution.
    """

    label: str
    rank: int
    table: VarTable  # t1..tN with weights
    delta: Fraction
    eta: tuple  # rank x rank GaussianRational
    eta_inv: tuple
    potential: MPoly
    v_table: VarTable | None = None
    t_of_v: tuple | None = None
    v_of_t: tuple | None = None

    @property
    def weights(self) -> tuple:
        return self.table.weights

    def t_var(self, a: int) -> str:
        return self.table.names[a - 1]


# ---------- exact linear algebra ----------


def invert_matrix(rows) -> tuple:
    """Exact inverse of a square GaussianRational matrix (Gauss-Jordan)."""
    n = len(rows)
    aug = [
        [GaussianRational(x.re, x.im) for x in row]
        + [GaussianRational(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise PolyError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = GaussianRational(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# ---------- flat coordinates ----------


def _weighted_tuples(weights, total):
    """All nonnegative integer tuples a with sum weights[i]*a[i] == total."""
    out = []

    def rec(i, rem, acc):
        if i == len(weights):
            if rem == 0:
                out.append(tuple(acc))
            return
        w = weights[i]
        top = rem // w
        for a in range(top + 1):
            acc.append(a)
            rec(i + 1, rem - w * a, acc)
            acc.pop()

    rec(0, total, [])
    return out


def flat_coords_A(n: int) -> list:
    """Flat coordinates t^1..t^n of A_n as polynomials in v_1..v_n."""
    u = build_unfolding("A", n)
    vtab = parameter_table(u)
    wts = [n + 2 - i for i in range(1, n + 1)]
    coords = []
    for g in range(1, n + 1):
        terms = {}
        for alpha in _weighted_tuples(wts, n + 2 - g):
            m = sum(alpha)
            c = rat(1, n + 1 - g)
            for k in range(m):
                c = c * (n + 1 - g - k * (n + 1))
            for a in alpha:
                c = c / math.factorial(a)
            terms[alpha] = GaussianRational(c)
        coords.append(MPoly(vtab, terms))
    _check_flat_homogeneity(coords, u)
    return coords


def flat_coords_D(n: int) -> list:
    """Flat coordinates of D_n; t^n = v_n, the rest are sums over tuples in
    v_1..v_{n-1}."""
    u = build_unfolding("D", n)
    vtab = parameter_table(u)
    wts = [n - i for i in range(1, n)]
    coords = []
    for g in range(1, n):
        terms = {}
        for alpha in _weighted_tuples(wts, n - g):
            m = sum(alpha)
            c = rat(-1, 2) ** (m - 1)
            for k in range(m - 1):
                c = c * (2 * g - 1 + 2 * k * (n - 1))
            for a in alpha:
                c = c / math.factorial(a)
            terms[alpha + (0,)] = GaussianRational(c)
        coords.append(MPoly(vtab, terms))
    coords.append(MPoly.variable(vtab, f"v{n}"))
    _check_flat_homogeneity(coords, u)
    return coords


def _check_flat_homogeneity(coords, u: Unfolding):
    for g, t in enumerate(coords, start=1):
        if t.weighted_degree() != u.weights[g - 1]:
            raise PolyError(f"t^{g} of {u.label()} is not homogeneous of q_{g}")


def invert_coords(t_of_v, ttab: VarTable):
    """Exact inverse v_a(t) of a graded triangular coordinate change.

    Iterates v <- t - h(v) where h collects the nonlinear terms; the weight
    grading makes this a nilpotent fixed-point problem, and the result is
    checked by exact back-substitution.
    """
    vtab = t_of_v[0].table
    n = len(t_of_v)
    hs = []
    for a, t in enumerate(t_of_v, start=1):
        h = t - MPoly.variable(vtab, vtab.names[a - 1])
        hs.append(h)
    current = {
        nm: MPoly.variable(ttab, ttab.names[k]) for k, nm in enumerate(vtab.names)
    }
    for _ in range(n + 1):
        nxt = {}
        for a, nm in enumerate(vtab.names):
            img = MPoly.variable(ttab, ttab.names[a]) - hs[a].substitute(
                current, ttab
            )
            nxt[nm] = img
        if nxt == current:
            break
        current = nxt
    else:
        raise PolyError("coordinate inversion did not stabilize")
    back = {
        ttab.names[k]: t.substitute(current, ttab) for k, t in enumerate(t_of_v)
    }
    for k, nm in enumerate(ttab.names):
        if back[nm] != MPoly.variable(ttab, nm):
            raise PolyError("inverse fails exact back-substitution")
    return [current[nm] for nm in vtab.names]


# ---------- metric and potential ----------


def _euler_primitive(p: MPoly) -> MPoly:
    """G with Euler(G) = p, one weighted component at a time; p must have no
    weight-zero part."""
    out = MPoly.zero(p.table)
    for d, part in p.weighted_degree_decompose():
        if d == 0:
            raise PolyError("weight-zero component is not integrable")
        out = out + part / rat(d.numerator, d.denominator)
    return out


def metric_and_potential(
    u: Unfolding, tensor: StructureTensor, t_of_v
) -> FrobeniusStructure:
    """Flat metric, structure constants in flat coordinates, and the
    potential they integrate to.

    The fully lowered tensor is the phi_l-coefficient of triple products;
    pulling it through the inverse Jacobian gives d3F/dt.dt.dt directly,
    whose t1 slice must be a constant nondegenerate matrix.
    """
    n = u.rank
    q = u.weights
    delta = u.delta
    ttab = t_table(q)
    v_of_t = invert_coords(t_of_v, ttab)
    jac = [
        [v_of_t[a].diff(ttab.names[b]) for b in range(n)] for a in range(n)
    ]

    # c_{abc} = sum_d c^d_{ab} * c^l_{dc}, then v -> v(t).
    vmap = dict(zip(tensor.table.names, v_of_t))
    low = {}
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            for c in range(b, n + 1):
                s = MPoly.zero(tensor.table)
                for d in range(1, n + 1):
                    s = s + tensor.c(d, a, b) * tensor.c(tensor.l, d, c)
                low[(a, b, c)] = s.substitute(vmap, ttab)

    def lget(tbl, key):
        return tbl[tuple(sorted(key))]

    t1 = {}
    for al in range(1, n + 1):
        for b in range(1, n + 1):
            for c in range(b, n + 1):
                s = MPoly.zero(ttab)
                for a in range(1, n + 1):
                    s = s + jac[a - 1][al - 1] * lget(low, (a, b, c))
                t1[(al, b, c)] = s
    t2 = {}
    for al in range(1, n + 1):
        for be in range(al, n + 1):
            for c in range(1, n + 1):
                s = MPoly.zero(ttab)
                for b in range(1, n + 1):
                    s = s + jac[b - 1][be - 1] * t1[(al,) + tuple(sorted((b, c)))]
                t2[(al, be, c)] = s
    cflat = {}
    for al in range(1, n + 1):
        for be in range(al, n + 1):
            for ga in range(be, n + 1):
                s = MPoly.zero(ttab)
                for c in range(1, n + 1):
                    s = s + jac[c - 1][ga - 1] * t2[(al, be, c)]
                cflat[(al, be, ga)] = s

    eta_rows = []
    for b in range(1, n + 1):
        row = []
        for c in range(1, n + 1):
            e = lget(cflat, (1, b, c))
            if e.total_degree() > 0:
                raise PolyError(f"metric entry ({b},{c}) is not constant: {e.text()}")
            row.append(e.constant_term())
        eta_rows.append(row)
    eta = tuple(tuple(row) for row in eta_rows)
    eta_inv = invert_matrix(eta_rows)

    tnames = ttab.names
    f2 = {}
    for al in range(1, n + 1):
        for be in range(al, n + 1):
            s = MPoly.zero(ttab)
            for ga in range(1, n + 1):
                s = s + MPoly.variable(ttab, tnames[ga - 1]) * rat(
                    q[ga - 1].numerator, q[ga - 1].denominator
                ) * lget(cflat, (al, be, ga))
            f2[(al, be)] = _euler_primitive(s)
    f1 = {}
    for al in range(1, n + 1):
        s = MPoly.zero(ttab)
        for be in range(1, n + 1):
            s = s + MPoly.variable(ttab, tnames[be - 1]) * rat(
                q[be - 1].numerator, q[be - 1].denominator
            ) * f2[tuple(sorted((al, be)))]
        f1[al] = _euler_primitive(s)
    s = MPoly.zero(ttab)
    for al in range(1, n + 1):
        s = s + MPoly.variable(ttab, tnames[al - 1]) * rat(
            q[al - 1].numerator, q[al - 1].denominator
        ) * f1[al]
    potential = _euler_primitive(s)

    for (al, be, ga), want in cflat.items():
        got = potential.diff_many(tnames[al - 1], tnames[be - 1], tnames[ga - 1])
        if got != want:
            raise PolyError(
                f"integrability failure at ({al},{be},{ga}) for {u.label()}"
            )

    return FrobeniusStructure(
        label=u.label(),
        rank=n,
        table=ttab,
        delta=delta,
        eta=eta,
        eta_inv=eta_inv,
        potential=potential,
        v_table=tensor.table,
        t_of_v=tuple(t_of_v),
        v_of_t=tuple(v_of_t),
    )


@lru_cache(maxsize=None)
def frobenius_structure(family: str, n: int) -> FrobeniusStructure:
    """Cached full pipeline for A_n or D_n."""
    u = build_unfolding(family, n)
    alg = build_closed_algebra(u)
    tensor = structure_constants(alg)
    coords = flat_coords_A(n) if family == "A" else flat_coords_D(n)
    return metric_and_potential(u, tensor, coords)


def from_potential(label: str, potential: MPoly) -> FrobeniusStructure:
    """Frobenius data read off a flat potential: the metric is the constant
    t1 slice of the third derivatives, the grading comes from the table."""
    tab = potential.table
    if tab.weights is None:
        raise PolyError("potential table needs weights")
    n = tab.arity
    d = potential.weighted_degree()
    delta = 3 - d
    rows = []
    for b in range(n):
        row = []
        for c in range(n):
            e = potential.diff_many(tab.names[0], tab.names[b], tab.names[c])
            if e.total_degree() > 0:
                raise PolyError(f"metric entry ({b + 1},{c + 1}) is not constant")
            row.append(e.constant_term())
        rows.append(row)
    eta = tuple(tuple(r) for r in rows)
    return FrobeniusStructure(
        label=label,
        rank=n,
        table=tab,
        delta=delta,
        eta=eta,
        eta_inv=invert_matrix(rows),
        potential=potential,
    )


# ---------- verifiers ----------


def _first_monomial(p: MPoly) -> str:
    exp, c = p.sorted_terms()[0]
    from .exactalg import _render_term  # canonical rendering

    body, neg = _render_term(p.table, exp, c)
    return ("-" if neg else "") + body


def verify_wdvv(fs: FrobeniusStructure) -> Report:
    """Exact associativity check of the flat structure constants.

    Sweeps the unit condition d3F/dt1.dta.dtb = eta_ab and the quadruple
    identities for alpha < delta, beta < gamma; the residual is skew under
    either swap, so the restricted sweep is exhaustive.
    """
    n = fs.rank
    tab = fs.table
    nm = tab.names
    F = fs.potential
    d2 = {}
    for a in range(1, n + 1):
        da = F.diff(nm[a - 1])
        for b in range(a, n + 1):
            d2[(a, b)] = da.diff(nm[b - 1])
    d3 = {}
    for (a, b), p in d2.items():
        for c in range(b, n + 1):
            d3[(a, b, c)] = p.diff(nm[c - 1])

    def c3(a, b, c):
        return d3[tuple(sorted((a, b, c)))]

    failures = []
    checked = 0
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            checked += 1
            want = MPoly.constant(tab, fs.eta[a - 1][b - 1])
            if c3(1, a, b) != want:
                failures.append(f"unit({a},{b})")

    raised = {}
    for g in range(1, n + 1):
        for d in range(g, n + 1):
            raised[(g, d)] = [
                sum(
                    (c3(m, g, d) * fs.eta_inv[m - 1][v - 1] for m in range(1, n + 1)),
                    MPoly.zero(tab),
                )
                for v in range(1, n + 1)
            ]

    def craised(g, d):
        return raised[(g, d) if g <= d else (d, g)]

    for al in range(1, n + 1):
        for de in range(al + 1, n + 1):
            for be in range(1, n + 1):
                for ga in range(be + 1, n + 1):
                    checked += 1
                    r = MPoly.zero(tab)
                    lhs = craised(ga, de)
                    rhs = craised(ga, al)
                    for v in range(1, n + 1):
                        r = r + c3(al, be, v) * lhs[v - 1]
                        r = r - c3(de, be, v) * rhs[v - 1]
                    if r:
                        failures.append(
                            f"({al},{be},{ga},{de}): {_first_monomial(r)}"
                        )
    return Report(f"wdvv({fs.label})", checked, tuple(failures))


def verify_homogeneity(fs: FrobeniusStructure) -> Report:
    """Euler(F) = (3 - delta) F, and E t^i = q_i t^i when maps are present."""
    failures = []
    d = 3 - fs.delta
    checked = 1
    if fs.potential.euler() != fs.potential * rat(d.numerator, d.denominator):
        failures.append("potential")
    if fs.t_of_v is not None:
        for g, t in enumerate(fs.t_of_v, start=1):
            checked += 1
            qg = fs.weights[g - 1]
            if t.euler() != t * rat(qg.numerator, qg.denominator):
                failures.append(f"t^{g}")
    return Report(f"homogeneity({fs.label})", checked, tuple(failures))
