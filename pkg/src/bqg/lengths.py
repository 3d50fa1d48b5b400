"""Length functions, invariance and averaging, matched length data on
bicrossed classes, growth profiles, and finite-instance rapid-decay shell
brackets.

Length values are kept as exact fractions whenever the inputs are rational
(word lengths, finite averages, weighted direct-sum lengths), so shell
membership with the half-open convention [k, k+1) is never
tolerance-dependent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bicrossed import BicrossedInstance, QuantumFourier
from .groups import FiniteGroup, GroupError
from .reps import RepError


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    if isinstance(x, str):
        return Fraction(x)
    raise GroupError(f"cannot interpret {x!r} as an exact length value")


class LengthFunction:
    """A length assignment on group elements ('group') or class ids ('dual')."""

    def __init__(self, kind: str, fn, label: str = "l"):
        if kind not in ("group", "dual"):
            raise GroupError("kind must be 'group' or 'dual'")
        self.kind = kind
        self.fn = fn
        self.label = label

    def __call__(self, key) -> Fraction:
        return _frac(self.fn(key))

    @staticmethod
    def from_table(kind: str, table: dict, label: str = "l") -> "LengthFunction":
        vals = {k: _frac(v) for k, v in table.items()}
        return LengthFunction(kind, lambda k: vals[k], label)


def word_length_function(G: FiniteGroup, generators) -> LengthFunction:
    """BFS word length for a symmetric generating set (inverses added)."""
    gens = sorted({int(g) for g in generators} | {G.invert(int(g)) for g in generators})
    dist = {G.identity: Fraction(0)}
    frontier = [G.identity]
    k = 0
    while frontier:
        k += 1
        new = []
        for x in frontier:
            for s in gens:
                y = G.multiply(x, s)
                if y not in dist:
                    dist[y] = Fraction(k)
                    new.append(y)
        frontier = new
    if len(dist) != G.order:
        raise GroupError("generators do not generate the group")
    return LengthFunction("group", lambda a: dist[a], label="word")


def free_word_length(fp) -> LengthFunction:
    return LengthFunction("group", lambda w: Fraction(fp.word_length(w)),
                          label="word")


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class AxiomReport:
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_group_length_axioms(l: LengthFunction, ops, scope) -> AxiomReport:
    """Unit value, inverse symmetry and subadditivity over a finite scope.

    ``ops`` provides identity/mul/inv (a FiniteGroup or GammaOps-like
    object); products of scope elements are evaluated even when they leave
    the scope.  Violations are report content, not exceptions.
    """
    ident = ops.identity
    mul = ops.multiply if hasattr(ops, "multiply") else ops.mul
    inv = ops.invert if hasattr(ops, "invert") else ops.inv
    violations = []
    checked = 1
    if l(ident) != 0:
        violations.append(("unit", ident, l(ident)))
    for a in scope:
        checked += 1
        if l(a) != l(inv(a)):
            violations.append(("symmetry", a, l(a), l(inv(a))))
    for a in scope:
        la = l(a)
        for b in scope:
            checked += 1
            if l(mul(a, b)) > la + l(b):
                violations.append(("subadditive", a, b))
    return AxiomReport(checked, violations)


def check_dual_length_axioms(l: LengthFunction, class_ids, eps_id, conj_fn,
                             fusion_fn) -> AxiomReport:
    """Dual axioms: l(eps) = 0, l(x) = l(conj x), and l(z) <= l(x) + l(y)
    whenever z occurs in x (x) y (fusion_fn(x, y, z) nonzero)."""
    violations = []
    checked = 1
    if l(eps_id) != 0:
        violations.append(("unit", eps_id, l(eps_id)))
    for x in class_ids:
        checked += 1
        if l(x) != l(conj_fn(x)):
            violations.append(("conjugate-symmetry", x))
    for x in class_ids:
        for y in class_ids:
            lxy = l(x) + l(y)
            for z in class_ids:
                checked += 1
                if fusion_fn(x, y, z) != 0 and l(z) > lxy:
                    violations.append(("fusion-subadditive", x, y, z))
    return AxiomReport(checked, violations)


# ---------------------------------------------------------------------------
# invariance and averaging


def _closed_under_composition(maps, sample) -> bool:
    tables = [tuple(m(x) for x in sample) for m in maps]
    for m1 in maps:
        for m2 in maps:
            comp = tuple(m1(m2(x)) for x in sample)
            if comp not in tables:
                return False
    return True


def average_length(l: LengthFunction, autos, sample, label=None) -> LengthFunction:
    """Average l over a finite closed family of carrier automorphisms.

    ``autos`` are callables on the carrier; closure under composition is
    checked on ``sample``.  The average of exact values is exact, so the
    output is invariant by construction (value equality, not approximate).
    """
    autos = list(autos)
    if not _closed_under_composition(autos, sample):
        raise GroupError("automorphism family is not closed under composition")
    n = len(autos)

    def fn(x):
        return sum((l(a(x)) for a in autos), Fraction(0)) / n

    return LengthFunction(l.kind, fn, label or f"avg[{l.label}]")


def invariance_check(l: LengthFunction, autos, scope) -> bool:
    """True iff l is constant on every orbit of the family over the scope."""
    for x in scope:
        v = l(x)
        for a in autos:
            if l(a(x)) != v:
                return False
    return True


def irr_pullback_permutation(irr_classes, perm) -> list[int]:
    """Permutation i -> [u_i o phi] of Irr indices induced by an
    automorphism phi of G (given as its permutation table)."""
    chars = np.stack([c.character for c in irr_classes])
    out = []
    for i, c in enumerate(irr_classes):
        moved = c.character[np.asarray(perm)]
        hits = np.nonzero(np.abs(chars - moved).max(axis=1) < 1e-6)[0]
        if len(hits) != 1:
            raise RepError("automorphism does not permute Irr classes")
        out.append(int(hits[0]))
    return out


# ---------------------------------------------------------------------------
# dual lengths for semidirect products and the bicrossed affording family


def dual_length_semidirect(ctx, classes, l_irr_g: dict) -> LengthFunction:
    """Length on Irr(G x| L) sending a class to the value of its u-label.

    Requires l_irr_g (Irr(G)-index -> value) to be invariant under the
    L-action on Irr(G); well-definedness across parameter translates is
    exactly that invariance, audited here.
    """
    vals = {int(i): _frac(v) for i, v in l_irr_g.items()}
    for r in ctx.L.elements():
        for i in vals:
            if vals[ctx.act_on_class(r, i)] != vals[i]:
                raise GroupError("dual base length is not Lambda-invariant")
    table = {c.index: vals[c.drp.u_class.index] for c in classes}
    return LengthFunction.from_table("dual", table, label="dual-semidirect")


@dataclass
class AffordingFamily:
    """Per-class length values l_O(class) = l_Ghat([u]) + l_Gamma(base)."""

    values: dict              # bicrossed class index -> Fraction
    orbit_values: dict        # orbit fingerprint -> Fraction (the l_Gamma part)
    label: str = "affording"

    def __call__(self, class_index: int) -> Fraction:
        return self.values[class_index]

    def as_length(self) -> LengthFunction:
        return LengthFunction.from_table("dual", self.values, self.label)


def gamma_invariance_scope(inst: BicrossedInstance):
    """Automorphism permutations of G generating the Gamma-action on Irr(G)."""
    mp = inst.mp
    if mp._tau_gamma is None:
        return [np.arange(mp.G.order)]
    if mp.gamma.finite:
        return [mp.tau_gamma_perm(g) for g in mp.gamma.raw.elements()]
    return [mp.tau_gamma_perm(mp.gamma.raw.generator(i))
            for i in range(len(mp.gamma.raw.orders))]


def build_affording_family(inst: BicrossedInstance, classes,
                           l_gamma: LengthFunction, l_irr_g: dict) -> AffordingFamily:
    """The matched per-orbit family: class -> l_Ghat([u]) + l_Gamma(base).

    Preconditions: l_irr_g is Gamma-invariant on Irr(G) (checked on the
    tau-image generators) and l_gamma is beta-invariant (constant on every
    classified orbit); violations raise.
    """
    base_ctx = inst.isotropy_context(_full_lambda_ids(inst))
    vals = {int(i): _frac(v) for i, v in l_irr_g.items()}
    if set(vals) != set(range(len(base_ctx.irr_g))):
        raise GroupError("dual base length must cover Irr(G)")
    for perm in gamma_invariance_scope(inst):
        pi = irr_pullback_permutation(base_ctx.irr_g, perm)
        for i in vals:
            if vals[pi[i]] != vals[i]:
                raise GroupError("dual base length is not Gamma-invariant")
    orbit_vals = {}
    values = {}
    for c in classes:
        fp = c.orbit.fingerprint
        if fp not in orbit_vals:
            vs = {l_gamma(x) for x in c.orbit.elements}
            if len(vs) != 1:
                raise GroupError("l_Gamma is not beta-invariant (orbit not constant)")
            orbit_vals[fp] = vs.pop()
        values[c.index] = vals[c.isotype.drp.u_class.index] + orbit_vals[fp]
    return AffordingFamily(values, orbit_vals)


def _full_lambda_ids(inst: BicrossedInstance):
    return tuple(inst.mp.lam.elements())


def affording_family_check(inst: BicrossedInstance, classes,
                           fam: AffordingFamily, l_gamma: LengthFunction,
                           l_irr_g: dict) -> AxiomReport:
    """Audit of the matched-family conditions.

    Checks: zero at the trivial class, conjugation symmetry, the fusion
    triangle inequality over every supported triple, agreement with the
    u-label length over the trivial orbit, and orbit-constancy of l_Gamma
    with the trivial-isotype value equal to it.
    """
    violations = []
    checked = 0
    ident = inst.mp.gamma.identity
    vals = {int(i): _frac(v) for i, v in l_irr_g.items()}
    for c in classes:
        checked += 1
        if c.orbit.base == ident and c.isotype.index == 0 and fam(c.index) != 0:
            violations.append(("unit", c.index))
        conj = inst.conjugate_class(c)
        if fam(c.index) != fam(conj.index):
            violations.append(("conjugation", c.index, conj.index))
        if c.orbit.base == ident:
            if fam(c.index) != vals[c.isotype.drp.u_class.index]:
                violations.append(("trivial-orbit-restriction", c.index))
        if c.isotype.index == 0:
            if fam(c.index) != l_gamma(c.orbit.base):
                violations.append(("orbit-unit-value", c.index))
        lv = {l_gamma(x) for x in c.orbit.elements}
        if len(lv) != 1:
            violations.append(("orbit-constancy", c.index))
    for x1 in classes:
        for x2 in classes:
            bound = fam(x1.index) + fam(x2.index)
            for x3 in classes:
                checked += 1
                if inst.fusion(x1, x2, x3) != 0 and fam(x3.index) > bound:
                    violations.append(("triangle", x1.index, x2.index, x3.index))
    return AxiomReport(checked, violations)


# ---------------------------------------------------------------------------
# growth profiles


@dataclass
class GrowthProfile:
    kmax: int
    shells: list          # shells[k] = exact shell sum for [k, k+1)
    cumulative: list

    def csv(self) -> str:
        lines = ["k,shell_sum,cumulative"]
        for k in range(self.kmax + 1):
            lines.append(f"{k},{self.shells[k]},{self.cumulative[k]}")
        return "\n".join(lines) + "\n"


def growth_profile(pairs, kmax: int) -> GrowthProfile:
    """Shell sums over [k, k+1) from (length, weight) pairs, exact."""
    shells = [0] * (kmax + 1)
    for length, weight in pairs:
        length = _frac(length)
        if length < 0:
            raise GroupError("negative length")
        k = length.numerator // length.denominator
        if 0 <= k <= kmax:
            shells[k] += weight
    cum = list(itertools.accumulate(shells))
    return GrowthProfile(kmax, shells, cum)


def group_growth(ops, l: LengthFunction, kmax: int, scope) -> GrowthProfile:
    return growth_profile([(l(x), 1) for x in scope if l(x) < kmax + 1], kmax)


def dual_growth(classes, l, kmax: int) -> GrowthProfile:
    pairs = []
    for c in classes:
        v = l(c.index)
        if v < kmax + 1:
            pairs.append((v, c.dim ** 2))
    return growth_profile(pairs, kmax)


# ---------------------------------------------------------------------------
# weighted length on (lazy) direct sums


class DirectSumLength:
    """The weighted length on an infinite direct sum of finite groups.

    ``orders(i)`` gives |Xi_i| for i >= 1; an element is a finitely
    supported map {i: nonidentity id}.  The value is the sum of the weights
    M_i = N_1 ... N_i over the support, so it is invariant under every
    coordinatewise automorphism.  Only factors with weight below the query
    bound are ever materialized.
    """

    def __init__(self, orders):
        self.orders = orders if callable(orders) else (lambda i, _o=list(orders): _o[i - 1])
        self._weights = {}

    def weight(self, i: int) -> int:
        if i not in self._weights:
            w = 1
            for j in range(1, i + 1):
                w *= int(self.orders(j))
            self._weights[i] = w
        return self._weights[i]

    def value(self, support) -> int:
        idx = support.keys() if isinstance(support, dict) else support
        return sum(self.weight(int(i)) for i in idx)

    def as_length(self) -> LengthFunction:
        return LengthFunction("group", lambda s: Fraction(self.value(s)),
                              label="weighted-direct-sum")

    def factor_bound(self, n: int) -> int:
        """Least k with M_k > n; elements of length < n live in factors < k."""
        k = 1
        while self.weight(k) <= n:
            k += 1
        return k

    def count_below(self, n: int) -> int:
        """|{xi : l(xi) < n}| by exact enumeration of the admissible factors."""
        if n <= 0:
            return 0
        k = self.factor_bound(n)
        idx = list(range(1, k))
        count = 0
        for mask in itertools.product(*[[0, 1]] * len(idx)):
            support = [i for i, m in zip(idx, mask) if m]
            if sum(self.weight(i) for i in support) < n:
                extra = 1
                for i in support:
                    extra *= int(self.orders(i)) - 1
                count += extra
        return count


# ---------------------------------------------------------------------------
# rapid-decay shell brackets


@dataclass
class RDReport:
    k: int
    shell: list
    lower: float
    upper: float
    cumulative_upper: float
    argmax: str
    seed: int

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "shell": list(self.shell),
            "lower": round(self.lower, 12),
            "upper": round(self.upper, 12),
            "cumulative_upper": round(self.cumulative_upper, 12),
            "argmax": self.argmax,
            "seed": self.seed,
        }


def rd_shell_ratio(qf: QuantumFourier, lengths, k: int, seed: int = 0,
                   iters: int = 30, restarts: int = 4) -> RDReport:
    """Bracket sup { ||F(a)|| / ||a||_0 : a supported on the shell [k, k+1) }.

    The certified lower bound comes from the best element found by
    alternating maximization (top singular pair against the best linear
    response) with seeded restarts; the upper bound is the Cauchy-Schwarz
    dimension estimate sqrt(sum over the shell of dim^2).  The cumulative
    variant uses all classes with l(x) < k+1.
    """
    lfn = lengths if callable(lengths) else (lambda i: lengths[i])
    shell = [x for x in qf.classes if k <= _frac(lfn(x.index)) < k + 1]
    cum = [x for x in qf.classes if _frac(lfn(x.index)) < k + 1]
    cum_upper = float(np.sqrt(sum(x.dim ** 2 for x in cum)))
    if not shell:
        return RDReport(k, [], 0.0, 0.0, cum_upper, "empty", seed)
    upper = float(np.sqrt(sum(x.dim ** 2 for x in shell)))
    reg = {}
    for x in shell:
        W = qf.realized(x)
        reg[x.index] = np.stack([
            np.stack([qf.alg.regular(W[i, j]) for j in range(W.shape[0])])
            for i in range(W.shape[0])
        ])  # (D, D, N, N)

    def sobolev(blocks):
        return np.sqrt(sum(x.dim * np.sum(np.abs(blocks[x.index]) ** 2)
                           for x in shell))

    def fourier_matrix(blocks):
        N = qf.alg.ng * qf.alg.nh
        M = np.zeros((N, N), dtype=np.complex128)
        for x in shell:
            M += x.dim * np.einsum("ki,ikab->ab", blocks[x.index], reg[x.index])
        return M

    best = 0.0
    best_desc = "none"
    rng = np.random.default_rng(seed)
    starts = []
    for x in shell:
        unit = {y.index: np.zeros((y.dim, y.dim), dtype=np.complex128) for y in shell}
        unit[x.index] = np.eye(x.dim, dtype=np.complex128)
        starts.append((f"p_{x.index}", unit))
    for t in range(restarts):
        rnd = {x.index: rng.standard_normal((x.dim, x.dim))
               + 1j * rng.standard_normal((x.dim, x.dim)) for x in shell}
        starts.append((f"random_{t}", rnd))
    for desc, blocks in starts:
        s = sobolev(blocks)
        blocks = {i: b / s for i, b in blocks.items()}
        for it in range(iters):
            M = fourier_matrix(blocks)
            U, sv, Vh = np.linalg.svd(M)
            ratio = float(sv[0])
            if ratio > best:
                best = ratio
                best_desc = f"{desc}/iter{it}"
            u1 = U[:, 0]
            v1 = Vh[0].conj()
            new = {}
            for x in shell:
                C = np.einsum("a,ikab,b->ik", u1.conj(), reg[x.index], v1)
                new[x.index] = C.conj().T
            s = sobolev(new)
            if s < 1e-14:
                break
            nx = {i: b / s for i, b in new.items()}
            if all(np.abs(nx[i] - blocks[i]).max() < 1e-12 for i in nx):
                blocks = nx
                M = fourier_matrix(blocks)
                ratio = float(np.linalg.norm(M, 2))
                if ratio > best:
                    best = ratio
                    best_desc = f"{desc}/fixed"
                break
            blocks = nx
    return RDReport(k, [x.index for x in shell], best, upper, cum_upper,
                    best_desc, seed)
