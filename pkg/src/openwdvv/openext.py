"""Open extensions of the A and D Frobenius structures.

The extension adds one variable s of weight (1 - delta)/2 and a function
F°(t, s) solving the open WDVV system attached to the closed potential.
For A the potential comes from a closed correlator formula; for D it is
an explicit s-series whose coefficients are the coordinate changes
v_k(t), with a single simple pole t_n^2/(2s).

Verifiers in this module treat every statement as an exact polynomial
(or Laurent polynomial) identity: the open WDVV equations themselves,
the flat F-manifold axioms for the vector potential, the matching of the
extended multiplication tensor with (F, F°), and the combinatorial
omega-identities that drive the D-case proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactalg import (
    GaussianRational,
    MPoly,
    PolyError,
    VarTable,
    rat,
    sqrt_coefficient,
)
from .milnor import (
    build_extended_algebra,
    build_unfolding,
    structure_constants,
)
from .report import Report
from .saito import (
    FrobeniusStructure,
    _first_monomial,
    _weighted_tuples,
    frobenius_structure,
)

__all__ = [
    "OpenExtension",
    "OmegaSequence",
    "extended_table",
    "open_extension",
    "open_potential_A",
    "open_potential_D",
    "check_foan_relation",
    "extract_v_from_open_D",
    "verify_open_wdvv",
    "verify_vector_potential",
    "verify_extension_theorems",
    "omega_sequence",
    "check_coefw_lemma",
    "check_dn_second_derivative_identity",
    "rspin_convention_rescale",
]


def extended_table(fs: FrobeniusStructure) -> VarTable:
    """t1..tN plus the Laurent slot s of weight (1 - delta)/2."""
    return VarTable(
        fs.table.names + ("s",),
        fs.table.weights + ((1 - fs.delta) / 2,),
        "s",
    )


@dataclass(frozen=True)
class OpenExtension:
    """A closed Frobenius structure with a solution F° of its open WDVV
    system; unit and homogeneity conditions hold by construction."""

    base: FrobeniusStructure
    table: VarTable  # t1..tN, s
    potential: MPoly  # F°

    @property
    def label(self) -> str:
        return self.base.label

    def vector_potential(self) -> tuple:
        """(eta^{1mu} dF/dt^mu, ..., eta^{Nmu} dF/dt^mu, F°) over the
        extended table."""
        tab = self.table
        F = self.base.potential.substitute({}, tab)
        grads = [F.diff(nm) for nm in self.base.table.names]
        out = []
        for a in range(self.base.rank):
            comp = MPoly.zero(tab)
            for m in range(self.base.rank):
                e = self.base.eta_inv[a][m]
                if e:
                    comp = comp + grads[m] * e
            out.append(comp)
        out.append(self.potential)
        return tuple(out)


def open_extension(base: FrobeniusStructure, fo: MPoly) -> OpenExtension:
    """Wrap F° after checking the unit and homogeneity conditions exactly.

    dF°/dt1 = s pins both unit conditions at once (no linear terms are
    admitted, so the integration constant is zero)."""
    tab = fo.table
    if fo.diff(base.table.names[0]) != MPoly.variable(tab, "s"):
        raise PolyError(f"unit condition fails for {base.label}")
    if fo.euler() != fo * rat((3 - base.delta) / 2):
        raise PolyError(f"homogeneity fails for {base.label}")
    return OpenExtension(base, tab, fo)


def _multiplicity_vectors(n: int) -> list:
    """All (m_1..m_n, k) with sum m_a*(n+2-a) + k = n+2; k is the leftover
    s-power."""
    out = []

    def rec(a, rem, acc):
        if a > n:
            out.append((tuple(acc), rem))
            return
        w = n + 2 - a
        for m in range(rem // w + 1):
            acc.append(m)
            rec(a + 1, rem - m * w, acc)
            acc.pop()

    rec(1, n + 2, [])
    return out


@lru_cache(maxsize=None)
def open_potential_A(n: int) -> OpenExtension:
    """F° of the A extension from the closed correlator formula.

    The coefficient of prod (t^a)^{m_a} * s^k is (n_pts + k - 2)! divided
    by the automorphisms prod m_a! * k!, summed over the admissible
    multiplicity vectors of _multiplicity_vectors."""
    base = frobenius_structure("A", n)
    tab = extended_table(base)
    terms = {}
    for mult, k in _multiplicity_vectors(n):
        pts = sum(mult)
        c = rat(math.factorial(pts + k - 2), math.factorial(k))
        for m in mult:
            c = c / math.factorial(m)
        terms[mult + (k,)] = GaussianRational(c)
    return open_extension(base, MPoly(tab, terms))


@lru_cache(maxsize=None)
def open_potential_D(n: int) -> OpenExtension:
    """F° of the D extension: the closed s-series evaluated on v_k(t)."""
    base = frobenius_structure("D", n)
    tab = extended_table(base)
    s = MPoly.variable(tab, "s")
    fo = s ** (2 * n - 1) / (2 ** (n - 2) * (2 * n - 1) * (2 * n - 2))
    for k in range(1, n):
        vk = base.v_of_t[k - 1].substitute({}, tab)
        fo = fo + vk * s ** (2 * k - 1) / (2 ** (k - 1) * (2 * k - 1))
    vn = base.v_of_t[n - 1].substitute({}, tab)
    fo = fo + vn * vn * s ** -1 / 2
    return open_extension(base, fo)


def check_foan_relation(ext: OpenExtension) -> bool:
    """dF°/ds = s^{n+1}/(n+1) + sum_k s^{k-1} v_k(t) for an A extension:
    the s-derivative of F° carries the full coordinate change v(t)."""
    base = ext.base
    n = base.rank
    tab = ext.table
    s = MPoly.variable(tab, "s")
    rhs = s ** (n + 1) / (n + 1)
    for k in range(1, n + 1):
        rhs = rhs + base.v_of_t[k - 1].substitute({}, tab) * s ** (k - 1)
    return ext.potential.diff("s") == rhs


def extract_v_from_open_D(ext: OpenExtension) -> list:
    """Read the coordinate change back off the s-expansion of a D-type F°:
    v_k = 2^{k-1}(2k-1) Coef_{s^{2k-1}} for k < n, and v_n is the square
    root of twice the pole coefficient (a perfect-square monomial)."""
    base = ext.base
    n = base.rank
    ttab = base.table
    out = []
    for k in range(1, n):
        c = ext.potential.coefficient_of("s", 2 * k - 1)
        out.append((c * (2 ** (k - 1) * (2 * k - 1))).substitute({}, ttab))
    pole = ext.potential.coefficient_of("s", -1) * 2
    if len(pole) != 1:
        raise PolyError("pole coefficient is not a monomial")
    ((exp, c),) = pole.terms.items()
    if any(e % 2 for e in exp):
        raise PolyError("pole coefficient is not a perfect square")
    root = {nm: e // 2 for nm, e in zip(ext.table.names, exp) if e}
    out.append(MPoly.monomial(ttab, sqrt_coefficient(c), root))
    return out


def verify_open_wdvv(ext: OpenExtension) -> Report:
    """Both open WDVV families plus the unit and homogeneity conditions.

    The first family is skew under the alpha/gamma swap and the second is
    symmetric in (alpha, beta), so alpha < gamma resp. alpha <= beta is an
    exhaustive sweep.  D-type residuals pass through poles down to s^-4
    and must still cancel identically.
    """
    base = ext.base
    n = base.rank
    tab = ext.table
    nm = tab.names
    fo = ext.potential
    F = base.potential.substitute({}, tab)

    d2o = {}
    for a in range(1, n + 2):
        da = fo.diff(nm[a - 1])
        for b in range(a, n + 2):
            d2o[(a, b)] = da.diff(nm[b - 1])

    def o2(a, b):
        return d2o[(a, b) if a <= b else (b, a)]

    d3 = {}
    for a in range(1, n + 1):
        da = F.diff(nm[a - 1])
        for b in range(a, n + 1):
            dab = da.diff(nm[b - 1])
            for c in range(b, n + 1):
                d3[(a, b, c)] = dab.diff(nm[c - 1])

    def c3(a, b, c):
        return d3[tuple(sorted((a, b, c)))]

    raised = {}
    for a in range(1, n + 1):
        for b in range(a, n + 1):
            raised[(a, b)] = [
                sum(
                    (
                        c3(a, b, m) * base.eta_inv[m - 1][v - 1]
                        for m in range(1, n + 1)
                        if base.eta_inv[m - 1][v - 1]
                    ),
                    MPoly.zero(tab),
                )
                for v in range(1, n + 1)
            ]

    def cr(a, b):
        return raised[(a, b) if a <= b else (b, a)]

    failures = []
    checked = 0
    s_ix = n + 1
    for al in range(1, n + 1):
        checked += 1
        if o2(1, al):
            failures.append(f"unit(1,{al})")
    checked += 1
    if o2(1, s_ix) != MPoly.constant(tab, 1):
        failures.append("unit(1,s)")
    checked += 1
    if fo.euler() != fo * rat((3 - base.delta) / 2):
        failures.append("homogeneity")

    for be in range(1, n + 1):
        for al in range(1, n + 1):
            for ga in range(al + 1, n + 1):
                checked += 1
                r = MPoly.zero(tab)
                lab = cr(al, be)
                lgb = cr(ga, be)
                for v in range(1, n + 1):
                    r = r + lab[v - 1] * o2(v, ga) - lgb[v - 1] * o2(v, al)
                r = r + o2(al, be) * o2(s_ix, ga) - o2(ga, be) * o2(s_ix, al)
                if r:
                    failures.append(f"eq1({al},{be},{ga}): {_first_monomial(r)}")
    for al in range(1, n + 1):
        for be in range(al, n + 1):
            checked += 1
            r = o2(al, be) * o2(s_ix, s_ix) - o2(s_ix, al) * o2(s_ix, be)
            lab = cr(al, be)
            for v in range(1, n + 1):
                r = r + lab[v - 1] * o2(v, s_ix)
            if r:
                failures.append(f"eq2({al},{be}): {_first_monomial(r)}")
    return Report(f"open-wdvv({base.label})", checked, tuple(failures))


def verify_vector_potential(funcs, label: str) -> Report:
    """Flat F-manifold axioms for one function per coordinate: the unit
    condition d2F^a/dt1 dt^b = delta^a_b, the quadratic compatibility, and
    (when the table is weighted) the conformal condition
    E(F^a) = (1 + q_a) F^a."""
    funcs = tuple(funcs)
    tab = funcs[0].table
    if len(funcs) != tab.arity:
        raise PolyError("need one component per coordinate")
    n = tab.arity
    nm = tab.names
    d2 = []
    for f in funcs:
        if f.table != tab:
            raise PolyError("components are over different tables")
        row = {}
        for a in range(1, n + 1):
            da = f.diff(nm[a - 1])
            for b in range(a, n + 1):
                row[(a, b)] = da.diff(nm[b - 1])
        d2.append(row)

    def g(a, b, c):
        return d2[a - 1][(b, c) if b <= c else (c, b)]

    failures = []
    checked = 0
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            checked += 1
            want = MPoly.constant(tab, 1 if a == b else 0)
            if g(a, 1, b) != want:
                failures.append(f"unit({a},{b})")
    for be in range(1, n + 1):
        for ga in range(be + 1, n + 1):
            for al in range(1, n + 1):
                for de in range(1, n + 1):
                    checked += 1
                    r = MPoly.zero(tab)
                    for mu in range(1, n + 1):
                        r = r + g(al, be, mu) * g(mu, ga, de)
                        r = r - g(al, ga, mu) * g(mu, be, de)
                    if r:
                        failures.append(
                            f"({al},{be},{ga},{de}): {_first_monomial(r)}"
                        )
    if tab.weights is not None:
        for a in range(1, n + 1):
            checked += 1
            if funcs[a - 1].euler() != funcs[a - 1] * rat(1 + tab.weights[a - 1]):
                failures.append(f"conformal({a})")
    return Report(f"vector-potential({label})", checked, tuple(failures))


def verify_extension_theorems(family: str, n: int) -> Report:
    """The extended multiplication tensor, rewritten in the flat
    coordinates (t^1..t^N, s = v_{N+1}), must equal eta^{a mu} F_{mu b c}
    on the first N slots and d2F°/dt^b dt^c on the last one."""
    ext = open_potential_A(n) if family == "A" else open_potential_D(n)
    base = ext.base
    tab = ext.table
    nm = tab.names
    m = n + 1
    alg = build_extended_algebra(build_unfolding(family, n))
    tensor = structure_constants(alg)

    vmap = {f"v{k}": base.v_of_t[k - 1].substitute({}, tab) for k in range(1, n + 1)}
    vmap[f"v{m}"] = MPoly.variable(tab, "s")
    cv = {}
    for a in range(1, m + 1):
        for i in range(1, m + 1):
            for j in range(i, m + 1):
                cv[(a, i, j)] = tensor.c(a, i, j).substitute(vmap, tab)

    zero = MPoly.zero(tab)
    one = MPoly.constant(tab, 1)
    jac = [[zero] * m for _ in range(m)]  # jac[b][be] = dv_b/dt^be
    for b in range(1, n + 1):
        for be in range(1, n + 1):
            jac[b - 1][be - 1] = vmap[f"v{b}"].diff(nm[be - 1])
    jac[m - 1][m - 1] = one
    inv = [[zero] * m for _ in range(m)]  # inv[al][a] = dt^al/dv_a at v(t)
    vnames = base.v_table.names
    sub = {k: v for k, v in vmap.items() if k != f"v{m}"}
    for al in range(1, n + 1):
        for a in range(1, n + 1):
            inv[al - 1][a - 1] = (
                base.t_of_v[al - 1].diff(vnames[a - 1]).substitute(sub, tab)
            )
    inv[m - 1][m - 1] = one

    u1 = {}
    for al in range(1, m + 1):
        for i in range(1, m + 1):
            for j in range(i, m + 1):
                acc = MPoly.zero(tab)
                for a in range(1, m + 1):
                    f = inv[al - 1][a - 1]
                    if f:
                        acc = acc + f * cv[(a, i, j)]
                u1[(al, i, j)] = acc
    u2 = {}
    for al in range(1, m + 1):
        for be in range(1, m + 1):
            for j in range(1, m + 1):
                acc = MPoly.zero(tab)
                for i in range(1, m + 1):
                    f = jac[i - 1][be - 1]
                    if f:
                        key = (al, i, j) if i <= j else (al, j, i)
                        acc = acc + f * u1[key]
                u2[(al, be, j)] = acc

    F = base.potential.substitute({}, tab)
    fo = ext.potential
    failures = []
    checked = 0
    for al in range(1, m + 1):
        for be in range(1, m + 1):
            for ga in range(be, m + 1):
                got = MPoly.zero(tab)
                for j in range(1, m + 1):
                    f = jac[j - 1][ga - 1]
                    if f:
                        got = got + f * u2[(al, be, j)]
                if al <= n:
                    want = MPoly.zero(tab)
                    if be <= n and ga <= n:
                        for mu in range(1, n + 1):
                            e = base.eta_inv[al - 1][mu - 1]
                            if e:
                                want = want + F.diff_many(
                                    nm[mu - 1], nm[be - 1], nm[ga - 1]
                                ) * e
                else:
                    want = fo.diff_many(nm[be - 1], nm[ga - 1])
                checked += 1
                if got != want:
                    failures.append(f"c^{al}_({be},{ga})")
    return Report(f"extension({family}{n})", checked, tuple(failures))


@dataclass(frozen=True)
class OmegaSequence:
    """omega_0..omega_kmax over v_1..v_{n-1}, the w-coefficient generating
    polynomials of the extended D algebra in the shifted variables
    sbar_i = (1 - i) v_i."""

    n: int
    table: VarTable
    omegas: tuple


def omega_sequence(n: int, kmax: int) -> OmegaSequence:
    """Closed multinomial form of every omega_k up to kmax, cross-checked
    against the recursion omega_{k+1} = sum_i sbar_{n-i} omega_{k+1-i}."""
    u = build_unfolding("D", n)
    vtab = VarTable(u.table.names[2 : n + 1], u.table.weights[2 : n + 1])
    wts = [n - i for i in range(1, n)]
    closed = []
    for k in range(kmax + 1):
        p = MPoly.zero(vtab)
        for alpha in _weighted_tuples(wts, k):
            c = rat(math.factorial(sum(alpha)))
            for i, a in enumerate(alpha, start=1):
                c = c * rat(1 - i) ** a / math.factorial(a)
            p = p + MPoly(vtab, {tuple(alpha): c})
        closed.append(p)
    sbar = [
        (1 - i) * MPoly.variable(vtab, f"v{i}") for i in range(1, n)
    ]
    for k in range(kmax):
        rec = MPoly.zero(vtab)
        for i in range(1, n):
            if k + 1 - i >= 0:
                rec = rec + sbar[n - i - 1] * closed[k + 1 - i]
        if rec != closed[k + 1]:
            raise PolyError(f"omega recursion fails at k={k + 1} for D{n}")
    return OmegaSequence(n, vtab, tuple(closed))


def check_coefw_lemma(n: int) -> bool:
    """The w-component of [x^{a+b-2}] in the extended D algebra equals the
    omega expansion for all 1 <= a, b <= n-1 (zero when a + b <= n)."""
    alg = build_extended_algebra(build_unfolding("D", n))
    ctab = alg.coeff_table
    omegas = omega_sequence(n, max(n - 3, 0)).omegas
    lifted = [w.substitute({}, ctab) for w in omegas]
    s = MPoly.variable(ctab, f"v{n + 1}")
    for p in range(2, 2 * n - 1):
        xs = MPoly.monomial(alg.table, 1, {"x": p - 2})
        got = alg.coeffs(xs)[alg.rank - 1]
        want = MPoly.zero(ctab)
        for k in range(p - n):
            want = want + lifted[k] * s ** (2 * p - 2 * n - 1 - 2 * k) / 2 ** (
                p - n - k
            )
        if got != want:
            return False
    return True


def check_dn_second_derivative_identity(n: int) -> bool:
    """The telescoped second-derivative identity of the flat coordinates:
    d2t/dv_a dv_b minus the sbar-shifted tail collapses to
    -(2(a+b-n)-1)/2 * dt/dv_{a+b-n}, and both sides vanish for a+b <= n."""
    base = frobenius_structure("D", n)
    vtab = base.v_table
    vn = vtab.names
    sbar = [(1 - i) * MPoly.variable(vtab, f"v{i}") for i in range(1, n)]
    for g in range(1, n):
        t = base.t_of_v[g - 1]
        for a in range(1, n):
            for b in range(1, n):
                lhs = t.diff_many(vn[a - 1], vn[b - 1])
                for i in range(1, a):
                    lhs = lhs - sbar[n - i - 1] * t.diff_many(
                        vn[a - i - 1], vn[b - 1]
                    )
                if a + b >= n + 1:
                    rhs = t.diff(vn[a + b - n - 1]) * rat(
                        -(2 * (a + b - n) - 1), 2
                    )
                else:
                    rhs = MPoly.zero(vtab)
                if lhs != rhs:
                    return False
    return True


def rspin_convention_rescale(p: MPoly, direction: str) -> MPoly:
    """Move between the singularity and r-spin normalizations.

    Every variable is scaled by -r with r = (number of t-slots) + 1, and
    the whole function by (-r)^-3 (closed) or (-r)^-2 (open, detected by
    the s slot); 'to_rspin' and 'from_rspin' are mutually inverse."""
    tab = p.table
    is_open = tab.laurent_index is not None
    base_power = 2 if is_open else 3
    r = tab.arity if is_open else tab.arity + 1
    minus_r = GaussianRational(-r)
    if direction == "to_rspin":
        sign = 1
    elif direction == "from_rspin":
        sign = -1
    else:
        raise PolyError(f"unknown direction {direction!r}")
    out = {}
    for exp, c in p.terms.items():
        out[exp] = c * minus_r ** (sign * (base_power - sum(exp)))
    return MPoly._make(tab, out)
