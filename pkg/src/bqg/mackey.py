"""Representation theory of finite semidirect products G x| L.

Irreducibles are indexed by distinguished representation parameters
(u, V, v): an orbit representative u of the L-action on Irr(G), the linking
projective representation V of the stabilizer, and an opposite-cocycle
projective irreducible v.  Fusion is computed by the triple-coset sum over
incidence numbers, with exact rational accumulation, and is differentially
tested against the character oracle on the explicit product group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groups import AutAction, FiniteGroup, SemidirectGroup, Subgroup, semidirect_product
from .projective import (
    Cocycle,
    ProjectiveRep,
    linking_rep,
    proj_irreps_for_cocycle,
    proj_mor_dim,
    tensor_projective,
)
from .reps import (
    ROUND_TOL,
    IrrClass,
    RepError,
    UnitaryRep,
    _round_int,
    character_norm_sq,
    induce,
    intertwiner_basis,
    irreps,
    mor_dim,
    pullback,
    tensor,
)


def _perm_inverse(perm: np.ndarray) -> np.ndarray:
    out = np.empty_like(perm)
    out[perm] = np.arange(len(perm))
    return out


@dataclass
class DRP:
    """Distinguished representation parameter (u, V, v) for G x| L.

    ``lambda0`` is the stabilizer of [u] in L as a Subgroup; V links u over
    lambda0 and v has the opposite cocycle.
    """

    u_class: IrrClass
    lambda0: Subgroup
    V: ProjectiveRep
    v: ProjectiveRep

    def check(self):
        if not self.V.cocycle.opposite().equal(self.v.cocycle):
            raise RepError("cocycle of v is not opposite to that of V")


@dataclass
class SemidirectIrrClass:
    """One irreducible class of G x| L with its parameter and realized rep."""

    index: int
    drp: DRP
    realized: UnitaryRep
    dim: int
    character: np.ndarray


class SemidirectContext:
    """Bundles G, L, tau, the explicit product group and the Irr(G) action.

    The L-action on Irr(G) is lambda . [u] = [u o tau_lambda^{-1}].
    """

    def __init__(self, G: FiniteGroup, L: FiniteGroup, tau: AutAction, seed: int = 0):
        self.G = G
        self.L = L
        self.tau = tau
        self.seed = seed
        self.product: SemidirectGroup = semidirect_product(G, L, tau)
        self.irr_g = irreps(G, seed=seed)
        self._irr_action = self._build_irr_action()
        self._little_subgroups: dict = {}

    def _build_irr_action(self) -> np.ndarray:
        """(|L|, #classes) table of the action on Irr(G) class indices."""
        chars = np.stack([c.character for c in self.irr_g])
        table = np.zeros((self.L.order, len(self.irr_g)), dtype=np.int64)
        for r in self.L.elements():
            perm_inv = _perm_inverse(self.tau.table[r])
            moved = chars[:, perm_inv]  # chi(tau_{r^-1} g)
            for i in range(len(self.irr_g)):
                hits = np.nonzero(np.abs(chars - moved[i]).max(axis=1) < 1e-6)[0]
                if len(hits) != 1:
                    raise RepError("class action is not well defined")
                table[r, i] = hits[0]
        return table

    def act_on_class(self, r: int, class_index: int) -> int:
        return int(self._irr_action[r, class_index])

    def class_stabilizer(self, class_index: int) -> list[int]:
        return [r for r in self.L.elements()
                if self._irr_action[r, class_index] == class_index]

    def class_orbits(self) -> list[list[int]]:
        seen, orbits = set(), []
        for i in range(len(self.irr_g)):
            if i in seen:
                continue
            orb = sorted(set(self._irr_action[:, i].tolist()))
            orbits.append(orb)
            seen.update(orb)
        return orbits

    def little_rep(self, drp: DRP) -> UnitaryRep:
        """R_{L0}(u, V, v): (g, r) -> u(g) V(r) (x) v(r) on the subgroup
        G x| L0 of the product group."""
        sub = self.little_subgroup(drp.lambda0)
        dU, dV = drp.u_class.dim, drp.v.dim
        mats = np.zeros((sub.group.order, dU * dV, dU * dV), dtype=np.complex128)
        for i in range(sub.group.order):
            big_id = int(sub.embed[i])
            g, r = self.product.unpair(big_id)
            r0 = drp.lambda0.index_of(r)
            mats[i] = np.kron(drp.u_class.rep.matrices[g] @ drp.V.matrices[r0],
                              drp.v.matrices[r0])
        return UnitaryRep(sub.group, mats)

    def little_subgroup(self, lambda0: Subgroup) -> Subgroup:
        key = tuple(int(r) for r in lambda0.embed)
        if key not in self._little_subgroups:
            ids = [self.product.pair_id(g, r)
                   for g in self.G.elements() for r in key]
            self._little_subgroups[key] = self.product.subgroup(ids)
        return self._little_subgroups[key]


def classify_semidirect(ctx: SemidirectContext) -> list[SemidirectIrrClass]:
    """All irreducible classes of G x| L via distinguished parameters.

    One class per (orbit representative of L on Irr(G), opposite-cocycle
    projective irreducible of the stabilizer); verified complete and
    irreducible.
    """
    G, L = ctx.G, ctx.L
    entries = []
    for orbit in ctx.class_orbits():
        x = orbit[0]
        u_class = ctx.irr_g[x]
        lam0 = L.subgroup(ctx.class_stabilizer(x))
        V = linking_rep(u_class, lam0, ctx.tau.table, seed=ctx.seed)
        vs = proj_irreps_for_cocycle(lam0.group, V.cocycle.opposite(), seed=ctx.seed)
        for v in vs:
            drp = DRP(u_class, lam0, V, v)
            drp.check()
            little = ctx.little_rep(drp)
            sub = ctx.little_subgroup(lam0)
            realized = induce(ctx.product, sub, little)
            expected_dim = (L.order // lam0.group.order) * u_class.dim * v.dim
            if realized.dim != expected_dim:
                raise RepError("induced dimension mismatch")
            if abs(character_norm_sq(realized) - 1.0) > ROUND_TOL:
                raise RepError("realized parameter representation is not irreducible")
            entries.append((drp, realized))
    def key(entry):
        drp, realized = entry
        chi = realized.character()
        trivial = bool(np.abs(chi - 1).max() < 1e-6)
        return (not trivial, realized.dim,
                tuple((round(z.real, 6), round(z.imag, 6)) for z in chi))
    entries.sort(key=key)
    classes = [SemidirectIrrClass(i, drp, realized, realized.dim, realized.character())
               for i, (drp, realized) in enumerate(entries)]
    total = sum(c.dim ** 2 for c in classes)
    if total != G.order * L.order:
        raise RepError(f"classification incomplete: {total} != {G.order * L.order}")
    return classes


def class_of_character(classes, chi, tol: float = 1e-6) -> SemidirectIrrClass:
    hits = [c for c in classes if np.abs(c.character - chi).max() < tol]
    if len(hits) != 1:
        raise RepError("character does not match a unique class")
    return hits[0]


# ---------------------------------------------------------------------------
# DRP-level operations


@dataclass
class RepParam:
    """A (possibly translated) representation parameter for the incidence
    computation: u on G, projective V and v on a subgroup of L."""

    u: UnitaryRep
    lambda0_ids: tuple
    V_mats: dict      # L-id -> matrix
    v_mats: dict
    V_cocycle: dict   # (L-id, L-id) -> phase
    v_cocycle: dict


def param_from_drp(ctx: SemidirectContext, drp: DRP) -> RepParam:
    ids = tuple(int(x) for x in drp.lambda0.embed)
    Vm = {ids[i]: drp.V.matrices[i] for i in range(len(ids))}
    vm = {ids[i]: drp.v.matrices[i] for i in range(len(ids))}
    Vc, vc = {}, {}
    for i, a in enumerate(ids):
        for j, b in enumerate(ids):
            Vc[(a, b)] = drp.V.cocycle.values[i, j]
            vc[(a, b)] = drp.v.cocycle.values[i, j]
    return RepParam(drp.u_class.rep, ids, Vm, vm, Vc, vc)


def translate_param(ctx: SemidirectContext, p: RepParam, r: int) -> RepParam:
    """r . (u, V, v) = (u o tau_r^{-1}, V o Ad_r^{-1}, v o Ad_r^{-1}) on
    r Lambda0 r^{-1}."""
    L = ctx.L
    perm_inv = _perm_inverse(ctx.tau.table[r])
    u = pullback(p.u, perm_inv)
    conj = {a: L.conjugate(r, a) for a in p.lambda0_ids}
    ids = tuple(sorted(conj.values()))
    Vm = {conj[a]: p.V_mats[a] for a in p.lambda0_ids}
    vm = {conj[a]: p.v_mats[a] for a in p.lambda0_ids}
    Vc = {(conj[a], conj[b]): z for (a, b), z in p.V_cocycle.items()}
    vc = {(conj[a], conj[b]): z for (a, b), z in p.v_cocycle.items()}
    return RepParam(u, ids, Vm, vm, Vc, vc)


def _restrict_param_projective(ctx, p: RepParam, ids, which: str) -> ProjectiveRep:
    sub = ctx.L.subgroup(list(ids))
    mats_dict = p.V_mats if which == "V" else p.v_mats
    coc_dict = p.V_cocycle if which == "V" else p.v_cocycle
    d = next(iter(mats_dict.values())).shape[0]
    m = sub.group.order
    mats = np.zeros((m, d, d), dtype=np.complex128)
    vals = np.ones((m, m), dtype=np.complex128)
    for i in range(m):
        mats[i] = mats_dict[int(sub.embed[i])]
        for j in range(m):
            vals[i, j] = coc_dict[(int(sub.embed[i]), int(sub.embed[j]))]
    return ProjectiveRep(sub.group, mats, Cocycle(sub.group, vals, validate=False),
                         validate=False)


def incidence_number(ctx: SemidirectContext, p1: RepParam, p2: RepParam,
                     p3: RepParam) -> int:
    """Incidence number of a translated DRP triple.

    Restricts all parameters to the intersection of the three stabilizers,
    builds the multiplicity-space projective representation V'_p on
    Mor_G(u1, u2 x u3), and returns dim Mor(v1, V'_p x v2 x v3).
    """
    ids0 = tuple(sorted(set(p1.lambda0_ids) & set(p2.lambda0_ids)
                        & set(p3.lambda0_ids)))
    u23 = tensor(p2.u, p3.u)
    n = mor_dim(p1.u, u23)
    if n == 0:
        return 0
    basis = intertwiner_basis(p1.u, u23)
    if len(basis) != n:
        raise RepError("intertwiner basis does not match the multiplicity")
    V1 = _restrict_param_projective(ctx, p1, ids0, "V")
    V2 = _restrict_param_projective(ctx, p2, ids0, "V")
    V3 = _restrict_param_projective(ctx, p3, ids0, "V")
    v1 = _restrict_param_projective(ctx, p1, ids0, "v")
    v2 = _restrict_param_projective(ctx, p2, ids0, "v")
    v3 = _restrict_param_projective(ctx, p3, ids0, "v")
    sub = V1.group
    d1 = p1.u.dim
    Vp = np.zeros((sub.order, n, n), dtype=np.complex128)
    for k in range(sub.order):
        W = np.kron(V2.matrices[k], V3.matrices[k])
        for j, Tj in enumerate(basis):
            img = W @ Tj @ V1.matrices[k].conj().T
            for i, Ti in enumerate(basis):
                Vp[k, i, j] = np.trace(Ti.conj().T @ img) / d1
    expected = Cocycle(
        sub,
        V2.cocycle.values * V3.cocycle.values * V1.cocycle.values.conj(),
        validate=False,
    )
    Vp_rep = ProjectiveRep(sub, Vp, expected, validate=True)
    rhs = tensor_projective(tensor_projective(Vp_rep, v2), v3)
    if not rhs.cocycle.equal(v1.cocycle, tol=1e-8):
        raise RepError("incidence cocycles do not match (V'_p x v2 x v3 vs v1)")
    # gauge cocycle tables equal pointwise up to numerical noise; align exactly
    rhs = ProjectiveRep(sub, rhs.matrices, v1.cocycle, validate=False)
    return proj_mor_dim(v1, rhs)


def coset_representatives(L: FiniteGroup, subgroup_ids) -> list[int]:
    """Canonical left-coset representatives of L / L0 (least id per coset)."""
    sub = set(int(x) for x in subgroup_ids)
    reps, assigned = [], set()
    for a in L.elements():
        if a not in assigned:
            reps.append(a)
            assigned.update(int(L.mul[a, h]) for h in sub)
    return reps


def fusion_semidirect(ctx: SemidirectContext, c1: SemidirectIrrClass,
                      c2: SemidirectIrrClass, c3: SemidirectIrrClass) -> int:
    """dim Mor(W1, W2 x W3) by the triple-coset incidence sum.

    Every summand m / [L : L(z1,z2,z3)] is accumulated as an exact rational;
    a non-integral total is a hard error.
    """
    L = ctx.L
    params = [param_from_drp(ctx, c.drp) for c in (c1, c2, c3)]
    translated = [
        [translate_param(ctx, p, r)
         for r in coset_representatives(L, p.lambda0_ids)]
        for p in params
    ]
    total = Fraction(0)
    for q1 in translated[0]:
        s1 = set(q1.lambda0_ids)
        for q2 in translated[1]:
            s12 = s1 & set(q2.lambda0_ids)
            for q3 in translated[2]:
                m = incidence_number(ctx, q1, q2, q3)
                if m:
                    inter = len(s12 & set(q3.lambda0_ids))
                    total += Fraction(m * inter, L.order)
    if total.denominator != 1:
        raise RepError(f"fusion sum is not an integer: {total}")
    return int(total)


def fusion_oracle(ctx: SemidirectContext, c1: SemidirectIrrClass,
                  c2: SemidirectIrrClass, c3: SemidirectIrrClass) -> int:
    """Brute-force character inner product (1/|K|) sum conj(chi1) chi2 chi3."""
    K = ctx.product
    val = np.sum(c1.character.conj() * c2.character * c3.character) / K.order
    return _round_int(val, ROUND_TOL, "fusion_oracle")


def contragredient_drp(ctx: SemidirectContext, drp: DRP) -> DRP:
    """Componentwise contragredient (conj u, conj V, conj v)."""
    uc = UnitaryRep(ctx.G, drp.u_class.rep.matrices.conj())
    chars = np.stack([c.character for c in ctx.irr_g])
    hits = np.nonzero(np.abs(chars - uc.character()).max(axis=1) < 1e-6)[0]
    u_class = ctx.irr_g[int(hits[0])]
    u_class = IrrClass(u_class.index, uc, uc.character(), uc.dim)
    Vc = ProjectiveRep(drp.V.group, drp.V.matrices.conj(),
                       drp.V.cocycle.opposite(), validate=False)
    vc = ProjectiveRep(drp.v.group, drp.v.matrices.conj(),
                       drp.v.cocycle.opposite(), validate=False)
    out = DRP(u_class, drp.lambda0, Vc, vc)
    out.check()
    return out


def contragredient_class(ctx: SemidirectContext, classes,
                         c: SemidirectIrrClass) -> SemidirectIrrClass:
    """The conjugate class, located by its conjugated character."""
    return class_of_character(classes, c.character.conj())


def drp_equivalent(ctx: SemidirectContext, d1: DRP, d2: DRP,
                   gauge_search: bool = False) -> bool:
    """Equivalence of DRPs over the same stabilizer.

    The realized little-representation characters are a complete invariant
    and give the authoritative answer.  With ``gauge_search`` the structural
    condition is also evaluated: some character b of Lambda0 aligns the
    cocycles with Mor_G(u1,u2) cap Mor(bV1, V2) and Mor(v1, v2) nonzero; a
    disagreement raises.
    """
    if tuple(d1.lambda0.embed) != tuple(d2.lambda0.embed):
        raise RepError("drp_equivalent needs a common stabilizer")
    r1 = ctx.little_rep(d1)
    r2 = ctx.little_rep(d2)
    verdict = bool(np.abs(r1.character() - r2.character()).max() < 1e-6)
    if gauge_search:
        structural = _gauge_search_equivalent(d1, d2)
        if structural is not None and structural != verdict:
            raise RepError("gauge search disagrees with the character criterion")
    return verdict


def _gauge_search_equivalent(d1: DRP, d2: DRP):
    """b-search over characters of Lambda0; None when no candidate b aligns
    the cocycles (the search is then inconclusive by design)."""
    from .projective import characters_table, gauge
    L0 = d1.lambda0.group
    if mor_dim(d1.u_class.rep, d2.u_class.rep) == 0:
        return False
    if not d1.v.cocycle.equal(d2.v.cocycle):
        return None
    if proj_mor_dim(d1.v, d2.v) == 0:
        return False
    tried = False
    for b in characters_table(L0):
        bV1 = gauge(d1.V, b / b[L0.identity])
        if not bV1.cocycle.equal(d2.V.cocycle):
            continue
        tried = True
        bV1 = ProjectiveRep(L0, bV1.matrices, d2.V.cocycle, validate=False)
        # Mor_G(u1,u2) cap Mor_{L0}(bV1, V2) for irreducible u's is spanned by
        # the single G-intertwiner; membership reduces to it intertwining bV1, V2
        T = intertwiner_basis(d1.u_class.rep, d2.u_class.rep)
        if len(T) != 1:
            return None
        T = T[0]
        ok = all(
            np.abs(d2.V.matrices[i] @ T - T @ bV1.matrices[i]).max() < 1e-6
            for i in range(L0.order)
        )
        if ok:
            return True
    return False if tried else None
