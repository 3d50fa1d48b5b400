"""Complex unitary representations of finite groups.

Irreducibles are computed numerically: abelian groups get explicit
characters (simultaneous Fourier projectors over a generating set), the
general case splits the regular representation with randomized symmetrized
operators.  Multiplicities are always integer-rounded character sums with a
hard error on residuals above ROUND_TOL.  This module is the brute-force
oracle everything downstream is tested against.
"""

from __future__ import annotations

import cmath
import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .groups import FiniteGroup, Subgroup

UNITARY_TOL = 1e-9
ROUND_TOL = 1e-6
ORTHO_TOL = 1e-8
EIG_GAP = 1e-7


class RepError(ValueError):
    """Numerical or structural failure in representation arithmetic."""


class UnitaryRep:
    """A unitary representation: one d x d complex matrix per group element."""

    def __init__(self, group: FiniteGroup, matrices, validate: bool = False,
                 tol: float = UNITARY_TOL):
        self.group = group
        self.matrices = np.ascontiguousarray(matrices, dtype=np.complex128)
        if self.matrices.shape[0] != group.order or self.matrices.ndim != 3 \
                or self.matrices.shape[1] != self.matrices.shape[2]:
            raise RepError("matrices must have shape (|G|, d, d)")
        self.dim = self.matrices.shape[1]
        self.tol = tol
        if validate:
            self.validate()

    def validate(self, mult_tol: float = 1e-8):
        g = self.group
        eye = np.eye(self.dim)
        if np.abs(self.matrices[g.identity] - eye).max() > self.tol:
            raise RepError("rho(e) is not the identity")
        for a in g.elements():
            m = self.matrices[a]
            if np.abs(m.conj().T @ m - eye).max() > self.tol * self.dim:
                raise RepError(f"rho({a}) is not unitary")
        for a in g.elements():
            for b in g.elements():
                err = np.abs(self.matrices[g.mul[a, b]]
                             - self.matrices[a] @ self.matrices[b]).max()
                if err > mult_tol:
                    raise RepError(f"multiplicativity fails at ({a},{b}): {err:.2e}")

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    def __call__(self, a: int) -> np.ndarray:
        return self.matrices[a]

    def to_json(self) -> dict:
        mats = {
            str(a): [[[float(z.real), float(z.imag)] for z in row] for row in self.matrices[a]]
            for a in self.group.elements()
        }
        return {"dim": self.dim, "matrices": mats}

    @staticmethod
    def from_json(group: FiniteGroup, data: dict) -> "UnitaryRep":
        d = data["dim"]
        mats = np.zeros((group.order, d, d), dtype=np.complex128)
        for key, rows in data["matrices"].items():
            mats[int(key)] = np.array([[complex(re, im) for re, im in row] for row in rows])
        return UnitaryRep(group, mats)


@dataclass
class IrrClass:
    """An irreducible class: canonical index, representative, character."""

    index: int
    rep: UnitaryRep
    character: np.ndarray
    dim: int

    def __repr__(self):
        return f"IrrClass({self.index}, dim={self.dim})"


def trivial_rep(G: FiniteGroup) -> UnitaryRep:
    return UnitaryRep(G, np.ones((G.order, 1, 1), dtype=np.complex128))


def regular_rep(G: FiniteGroup) -> UnitaryRep:
    mats = np.zeros((G.order, G.order, G.order), dtype=np.complex128)
    for g in G.elements():
        mats[g, G.mul[g], np.arange(G.order)] = 1.0
    return UnitaryRep(G, mats)


def tensor(u: UnitaryRep, v: UnitaryRep) -> UnitaryRep:
    if u.group is not v.group:
        raise RepError("tensor needs representations of the same group")
    mats = np.einsum("gij,gkl->gikjl", u.matrices, v.matrices).reshape(
        u.group.order, u.dim * v.dim, u.dim * v.dim
    )
    return UnitaryRep(u.group, mats)


def conjugate(u: UnitaryRep) -> UnitaryRep:
    return UnitaryRep(u.group, u.matrices.conj())


def direct_sum(reps) -> UnitaryRep:
    reps = list(reps)
    G = reps[0].group
    d = sum(r.dim for r in reps)
    mats = np.zeros((G.order, d, d), dtype=np.complex128)
    off = 0
    for r in reps:
        mats[:, off:off + r.dim, off:off + r.dim] = r.matrices
        off += r.dim
    return UnitaryRep(G, mats)


def restrict(u: UnitaryRep, sub: Subgroup) -> UnitaryRep:
    return UnitaryRep(sub.group, u.matrices[sub.embed])


def pullback(u: UnitaryRep, perm) -> UnitaryRep:
    """u o phi for an automorphism given by its permutation table."""
    return UnitaryRep(u.group, u.matrices[np.asarray(perm)])


def mor_dim(u: UnitaryRep, v: UnitaryRep, tol: float = ROUND_TOL) -> int:
    """dim Mor(u, v) = (1/|G|) sum conj(chi_u) chi_v, integer-rounded."""
    if u.group is not v.group and u.group.order != v.group.order:
        raise RepError("mor_dim needs representations of the same group")
    val = np.vdot(u.character(), v.character()) / u.group.order
    return _round_int(val, tol, "mor_dim")


def _round_int(val: complex, tol: float, what: str) -> int:
    n = int(round(val.real))
    if abs(val - n) > tol:
        raise RepError(f"{what} rounding residual {abs(val - n):.2e} exceeds {tol}")
    return n


def character_norm_sq(u: UnitaryRep) -> float:
    chi = u.character()
    return float(np.vdot(chi, chi).real / u.group.order)


def is_irreducible(u: UnitaryRep, tol: float = ROUND_TOL) -> bool:
    return abs(character_norm_sq(u) - 1.0) <= tol


def equivalent(u: UnitaryRep, v: UnitaryRep, tol: float = 1e-6) -> bool:
    """Character equality decides equivalence for finite groups."""
    if u.dim != v.dim:
        return False
    return bool(np.abs(u.character() - v.character()).max() <= tol)


def intertwiner_basis(u: UnitaryRep, v: UnitaryRep, tol: float = 1e-8):
    """Orthonormal basis of Mor(u, v) = {T : v(g) T = T u(g)}.

    When u is irreducible the basis is normalized to isometries,
    T_i^* T_j = delta_ij * id.
    """
    n = u.group.order
    du, dv = u.dim, v.dim
    # row-major vec: the map X -> v(g) X u(g)^* has matrix v(g) (x) conj(u(g))
    P = np.zeros((dv * du, dv * du), dtype=np.complex128)
    for g in u.group.elements():
        P += np.kron(v.matrices[g], u.matrices[g].conj())
    P /= n
    w, vecs = np.linalg.eigh((P + P.conj().T) / 2)
    basis = [vecs[:, i].reshape(dv, du) for i in range(len(w)) if w[i] > 1 - 1e-6]
    for i, T in enumerate(basis):
        if np.abs(v.matrices @ T - np.einsum("ij,gjk->gik", T, u.matrices)).max() > 1e-6:
            raise RepError("averaged intertwiner fails the intertwining relation")
    if basis and is_irreducible(u):
        ortho = []
        for T in basis:
            for S in ortho:
                T = T - np.trace(S.conj().T @ T) / np.trace(S.conj().T @ S) * S
            if np.abs(T).max() > tol:
                ortho.append(T)
        basis = []
        for T in ortho:
            c = np.trace(T.conj().T @ T).real / du
            basis.append(T / np.sqrt(c))
    return basis


def induce(G: FiniteGroup, sub: Subgroup, u: UnitaryRep) -> UnitaryRep:
    """Induced representation Ind_H^G(u); dim = [G:H] dim(u).

    Left-coset section chosen canonically (least unassigned id, ascending).
    """
    if u.group is not sub.group:
        raise RepError("u must be a representation of the subgroup")
    H = set(int(x) for x in sub.embed)
    reps = []
    assigned = set()
    for a in G.elements():
        if a not in assigned:
            reps.append(a)
            assigned.update(int(G.mul[a, h]) for h in H)
    k, d = len(reps), u.dim
    mats = np.zeros((G.order, k * d, k * d), dtype=np.complex128)
    inv_reps = [G.invert(t) for t in reps]
    for g in G.elements():
        for j, tj in enumerate(reps):
            gtj = G.multiply(g, tj)
            for i, ti_inv in enumerate(inv_reps):
                h = G.multiply(ti_inv, gtj)
                if h in H:
                    mats[g, i * d:(i + 1) * d, j * d:(j + 1) * d] = \
                        u.matrices[sub.index_of(h)]
                    break
    return UnitaryRep(G, mats)


# ---------------------------------------------------------------------------
# irreducibles


def irreps(G: FiniteGroup, seed: int = 0, max_order: int = 4096) -> list[IrrClass]:
    """Complete list of irreducible classes, canonically ordered.

    Canonical order: ascending dimension, then lexicographic rounded
    character.  Deterministic for a fixed seed.
    """
    if G.order > max_order:
        raise RepError(f"group order {G.order} exceeds configured bound {max_order}")
    if G.is_abelian():
        reps = _abelian_characters(G)
    else:
        reps = _regular_split(G, seed)
    classes = _canonicalize(G, reps)
    total = sum(c.dim ** 2 for c in classes)
    if total != G.order:
        raise RepError(f"Peter-Weyl count failed: {total} != {G.order}")
    _check_orthogonality(G, classes)
    return classes


def _canonicalize(G: FiniteGroup, reps) -> list[IrrClass]:
    seen = []
    for r in reps:
        chi = r.character()
        if any(np.abs(chi - c).max() < 1e-6 for _, c in seen):
            continue
        seen.append((r, chi))
    def key(item):
        r, chi = item
        trivial = bool(np.abs(chi - 1).max() < 1e-6)
        return (not trivial, r.dim,
                tuple((round(z.real, 6), round(z.imag, 6)) for z in chi))
    seen.sort(key=key)
    return [IrrClass(i, r, chi, r.dim) for i, (r, chi) in enumerate(seen)]


def _check_orthogonality(G: FiniteGroup, classes):
    n = len(classes)
    for i in range(n):
        for j in range(n):
            val = np.vdot(classes[i].character, classes[j].character) / G.order
            if abs(val - (1.0 if i == j else 0.0)) > ORTHO_TOL:
                raise RepError(f"character orthogonality fails at ({i},{j}): {val}")


def _abelian_characters(G: FiniteGroup) -> list[UnitaryRep]:
    """All 1-dim characters via Fourier projectors over a generating set."""
    n = G.order
    gens = G.generating_set() or [G.identity]
    spaces = [np.eye(n, dtype=np.complex128)]
    for s in gens:
        m = G.element_order(s)
        left = G.mul[s]           # permutation h -> s h
        refined = []
        for Q in spaces:
            # restriction of the regular action of s to span(Q)
            powers = [Q]
            for _ in range(1, m):
                powers.append(powers[-1][left])  # (P_s x)(h) = x(s^-1 h); row gather
            for k in range(m):
                zeta = cmath.exp(-2j * cmath.pi * k / m)
                proj = sum(powers[j] * zeta ** j for j in range(m)) / m
                # columns of proj span the eigenspace; orthonormalize
                q, r = np.linalg.qr(proj)
                keep = q[:, np.abs(np.diag(r)) > 1e-8]
                if keep.shape[1]:
                    refined.append(keep)
        spaces = refined
    reps = []
    for Q in spaces:
        v = Q[:, 0]
        chi = np.zeros(n, dtype=np.complex128)
        for g in G.elements():
            chi[g] = np.vdot(v, v[G.mul[G.invert(g)]])
        chi = _snap_roots(G, chi)
        reps.append(UnitaryRep(G, chi.reshape(n, 1, 1)))
    return reps


def _snap_roots(G: FiniteGroup, chi: np.ndarray) -> np.ndarray:
    """Snap 1-dim character values to exact roots of unity."""
    out = np.empty_like(chi)
    for g in G.elements():
        m = G.element_order(g)
        ang = cmath.phase(chi[g])
        k = round(ang * m / (2 * cmath.pi)) % m
        out[g] = cmath.exp(2j * cmath.pi * k / m)
        if abs(out[g] - chi[g]) > 1e-8:
            raise RepError("abelian character does not snap to a root of unity")
    return out


def _regular_split(G: FiniteGroup, seed: int) -> list[UnitaryRep]:
    n = G.order
    rng = np.random.default_rng(seed)
    linv = np.stack([G.mul[G.invert(g)] for g in G.elements()])  # linv[g][h] = g^-1 h

    def sub_matrices(Q):
        # rho_sub(g) = Q^* P_g Q with (P_g Q)[i] = Q[g^-1 i]
        return np.einsum("ik,gil->gkl", Q.conj(), Q[linv])

    out = []
    # first split: permutation form, cost O(n^3)
    for attempt in range(20):
        H = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = (H + H.conj().T) / 2
        T = np.zeros((n, n), dtype=np.complex128)
        for g in G.elements():
            idx = linv[g]
            T += H[np.ix_(idx, idx)]
        T /= n
        blocks = _eig_blocks(T)
        if len(blocks) > 1 or n == 1:
            break
    else:
        raise RepError("failed to split the regular representation")

    queue = list(blocks)
    while queue:
        Q = queue.pop()
        mats = sub_matrices(Q)
        rep = UnitaryRep(G, mats)
        if is_irreducible(rep):
            out.append(rep)
            continue
        for attempt in range(40):
            sub_blocks = _split_once(rep, rng)
            if len(sub_blocks) > 1:
                queue.extend(Q @ B for B in sub_blocks)
                break
        else:
            raise RepError(
                f"isotypic splitting failed to converge, |chi|^2 = "
                f"{character_norm_sq(rep):.6f}"
            )
    return out


def _split_once(rep: UnitaryRep, rng):
    d = rep.dim
    H = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    H = (H + H.conj().T) / 2
    T = np.einsum("gij,jk,glk->il", rep.matrices, H, rep.matrices.conj())
    T /= rep.group.order
    return _eig_blocks(T)


def _eig_blocks(T: np.ndarray, gap: float = EIG_GAP):
    """Eigenspaces of a Hermitian matrix, grouped by eigenvalue gaps."""
    w, v = np.linalg.eigh((T + T.conj().T) / 2)
    blocks = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > gap:
            blocks.append(v[:, start:i])
            start = i
    return blocks


def decompose(w: UnitaryRep, classes: list[IrrClass] | None = None,
              tol: float = ROUND_TOL):
    """Multiset of (IrrClass, multiplicity); audits the dimension count and
    the character rebuild."""
    if classes is None:
        classes = irreps(w.group)
    chi = w.character()
    out = []
    for c in classes:
        m = _round_int(np.vdot(c.character, chi) / w.group.order, tol, "decompose")
        if m < 0:
            raise RepError("negative multiplicity")
        if m:
            out.append((c, m))
    if sum(m * c.dim for c, m in out) != w.dim:
        raise RepError("decomposition does not account for the full dimension")
    rebuilt = sum(m * c.character for c, m in out)
    if np.abs(rebuilt - chi).max() > 1e-6:
        raise RepError("character rebuild mismatch after decomposition")
    return out


def character_csv(u: UnitaryRep) -> str:
    """CSV export: element-id, re, im."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["element", "re", "im"])
    for g, z in enumerate(u.character()):
        writer.writerow([g, f"{z.real:.12g}", f"{z.imag:.12g}"])
    return buf.getvalue()


def rep_json(u: UnitaryRep) -> str:
    return json.dumps(u.to_json(), sort_keys=True)
