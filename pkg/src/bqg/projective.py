"""2-cocycles and projective unitary representations of finite groups.

Conventions: V(a) V(b) = omega(a, b) V(a b) with V(e) = id and omega
normalized (omega(e, .) = omega(., e) = 1).  The linking representation of
a fixed irreducible class is gauge-normalized deterministically: first
nonzero entry (row-major) of each V(lambda) real positive.
"""

from __future__ import annotations

import cmath

import numpy as np

from .groups import FiniteGroup
from .reps import (
    ROUND_TOL,
    IrrClass,
    RepError,
    UnitaryRep,
    _eig_blocks,
    _round_int,
    intertwiner_basis,
    pullback,
)

COCYCLE_TOL = 1e-9


class Cocycle:
    """A unit-modulus 2-cocycle on a finite group."""

    def __init__(self, group: FiniteGroup, values, validate: bool = True):
        self.group = group
        self.values = np.ascontiguousarray(values, dtype=np.complex128)
        if self.values.shape != (group.order, group.order):
            raise RepError("cocycle table must be |G| x |G|")
        if validate:
            self.check()

    def check(self, tol: float = COCYCLE_TOL):
        g, w = self.group, self.values
        if np.abs(np.abs(w) - 1).max() > tol:
            raise RepError("cocycle values must have modulus one")
        e = g.identity
        if np.abs(w[e, :] - 1).max() > tol or np.abs(w[:, e] - 1).max() > tol:
            raise RepError("cocycle is not normalized at the identity")
        # omega(a,b) omega(ab,c) = omega(b,c) omega(a,bc)
        n = g.order
        for a in range(n):
            lhs = w[a, :, None] * w[g.mul[a], :]
            rhs = w[None, :, :] * w[a, g.mul]
            if np.abs(lhs - rhs.reshape(n, n)).max() > tol:
                raise RepError(f"cocycle identity fails with first argument {a}")

    def opposite(self) -> "Cocycle":
        return Cocycle(self.group, self.values.conj(), validate=False)

    def product(self, other: "Cocycle") -> "Cocycle":
        return Cocycle(self.group, self.values * other.values, validate=False)

    def equal(self, other: "Cocycle", tol: float = COCYCLE_TOL) -> bool:
        return bool(np.abs(self.values - other.values).max() <= tol)

    def is_trivial(self, tol: float = COCYCLE_TOL) -> bool:
        return bool(np.abs(self.values - 1).max() <= tol)

    def to_json(self) -> list:
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.values]

    @staticmethod
    def trivial(group: FiniteGroup) -> "Cocycle":
        return Cocycle(group, np.ones((group.order, group.order)), validate=False)


def coboundary(group: FiniteGroup, b) -> Cocycle:
    """d b (a1, a2) = b(a1) b(a2) / b(a1 a2)."""
    b = np.asarray(b, dtype=np.complex128)
    vals = b[:, None] * b[None, :] / b[group.mul]
    return Cocycle(group, vals, validate=False)


class ProjectiveRep:
    """A projective unitary representation with its cocycle."""

    def __init__(self, group: FiniteGroup, matrices, cocycle: Cocycle,
                 validate: bool = True, tol: float = 1e-8):
        self.group = group
        self.matrices = np.ascontiguousarray(matrices, dtype=np.complex128)
        self.cocycle = cocycle
        self.dim = self.matrices.shape[1]
        if validate:
            self.check(tol)

    def check(self, tol: float = 1e-8):
        g, m, w = self.group, self.matrices, self.cocycle.values
        if np.abs(m[g.identity] - np.eye(self.dim)).max() > tol:
            raise RepError("V(e) is not the identity")
        for a in g.elements():
            u = m[a]
            if np.abs(u.conj().T @ u - np.eye(self.dim)).max() > tol * self.dim:
                raise RepError(f"V({a}) is not unitary")
            for b in g.elements():
                err = np.abs(u @ m[b] - w[a, b] * m[g.mul[a, b]]).max()
                if err > tol:
                    raise RepError(f"projectivity fails at ({a},{b}): {err:.2e}")

    def character(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)

    def __call__(self, a: int) -> np.ndarray:
        return self.matrices[a]


def gauge(V: ProjectiveRep, b) -> ProjectiveRep:
    """Multiply by a phase function b (with b(e) = 1); the cocycle changes by
    the coboundary of b."""
    b = np.asarray(b, dtype=np.complex128)
    if abs(b[V.group.identity] - 1) > 1e-12:
        raise RepError("gauge function must send the identity to 1")
    mats = b[:, None, None] * V.matrices
    return ProjectiveRep(V.group, mats, V.cocycle.product(coboundary(V.group, b)),
                         validate=False)


def tensor_projective(V1: ProjectiveRep, V2: ProjectiveRep) -> ProjectiveRep:
    mats = np.einsum("gij,gkl->gikjl", V1.matrices, V2.matrices).reshape(
        V1.group.order, V1.dim * V2.dim, V1.dim * V2.dim
    )
    return ProjectiveRep(V1.group, mats, V1.cocycle.product(V2.cocycle), validate=False)


def trivial_projective(group: FiniteGroup) -> ProjectiveRep:
    return ProjectiveRep(group, np.ones((group.order, 1, 1)), Cocycle.trivial(group),
                         validate=False)


def from_ordinary(u: UnitaryRep) -> ProjectiveRep:
    return ProjectiveRep(u.group, u.matrices, Cocycle.trivial(u.group), validate=False)


def proj_mor_dim(V1: ProjectiveRep, V2: ProjectiveRep, tol: float = ROUND_TOL) -> int:
    """dim {X : V2(a) X = X V1(a)} for same-cocycle projective reps.

    Computed as the trace of the averaging projection on the matrix space,
    which reduces to the twisted character sum.
    """
    if not V1.cocycle.equal(V2.cocycle):
        raise RepError("proj_mor_dim requires pointwise equal cocycles")
    val = np.vdot(V1.character(), V2.character()) / V1.group.order
    return _round_int(val, tol, "proj_mor_dim")


def extract_cocycle(group: FiniteGroup, matrices, tol: float = 1e-8) -> Cocycle:
    """Recover omega from V(a) V(b) V(ab)^* = omega(a,b) id."""
    n = group.order
    d = matrices.shape[1]
    vals = np.zeros((n, n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            M = matrices[a] @ matrices[b] @ matrices[group.mul[a, b]].conj().T
            z = np.trace(M) / d
            if np.abs(M - z * np.eye(d)).max() > tol:
                raise RepError(f"defect at ({a},{b}) is not scalar")
            vals[a, b] = z / abs(z)
    return Cocycle(group, vals)


def _phase_normalize(T: np.ndarray) -> np.ndarray:
    """Deterministic gauge: first nonzero entry (row-major) real positive."""
    flat = T.reshape(-1)
    idx = int(np.argmax(np.abs(flat) > 1e-10))
    z = flat[idx]
    return T * (abs(z) / z)


def linking_rep(u, lam_sub, tau_table, seed: int = 0) -> ProjectiveRep:
    """The projective representation linking a fixed irreducible class.

    ``u`` is an irreducible UnitaryRep (or IrrClass) of G, ``lam_sub`` a
    Subgroup of the acting group whose elements all fix [u] under
    lambda . [u] = [u o tau_lambda^{-1}], and ``tau_table`` the (|L|, |G|)
    action table of the full acting group.  Every V(lambda) is a unitary
    intertwiner in Mor(lambda . u, u), gauge-normalized deterministically.

    Raises RepError if some lambda does not fix [u] or if u is reducible.
    """
    if isinstance(u, IrrClass):
        u = u.rep
    from .reps import is_irreducible  # local to avoid cycle at import time
    if not is_irreducible(u):
        raise RepError("linking representation needs an irreducible input")
    L0 = lam_sub.group
    mats = np.zeros((L0.order, u.dim, u.dim), dtype=np.complex128)
    chi = u.character()
    for i in range(L0.order):
        if i == L0.identity:
            mats[i] = np.eye(u.dim)
            continue
        r = int(lam_sub.embed[i])
        perm_inv = _perm_inverse(tau_table[r])
        pulled = pullback(u, perm_inv)  # (lambda . u)(g) = u(tau_{lambda^-1} g)
        if np.abs(pulled.character() - chi).max() > 1e-6:
            raise RepError(f"lambda id {r} does not fix the class of u")
        basis = intertwiner_basis(pulled, u)
        if len(basis) != 1:
            raise RepError("intertwiner space is not one-dimensional")
        T = basis[0]
        # scale to unitary: T^* T is a positive scalar for irreducible u
        c = np.trace(T.conj().T @ T).real / u.dim
        mats[i] = _phase_normalize(T / np.sqrt(c))
    omega = extract_cocycle(L0, mats)
    return ProjectiveRep(L0, mats, omega, validate=True)


def _perm_inverse(perm: np.ndarray) -> np.ndarray:
    out = np.empty_like(perm)
    out[perm] = np.arange(len(perm))
    return out


def twisted_regular_rep(group: FiniteGroup, omega: Cocycle) -> ProjectiveRep:
    """L(a) delta_b = omega(a, b) delta_{ab}."""
    n = group.order
    mats = np.zeros((n, n, n), dtype=np.complex128)
    for a in range(n):
        mats[a, group.mul[a], np.arange(n)] = omega.values[a]
    return ProjectiveRep(group, mats, omega, validate=False)


def proj_irreps_for_cocycle(group: FiniteGroup, omega: Cocycle,
                            seed: int = 0) -> list[ProjectiveRep]:
    """All omega-projective irreducibles, by splitting the omega-twisted
    regular representation; sum of squared dimensions is |group|."""
    reg = twisted_regular_rep(group, omega)
    rng = np.random.default_rng(seed)
    out = []
    queue = [np.eye(group.order, dtype=np.complex128)]
    guard = 0
    while queue:
        Q = queue.pop()
        mats = np.einsum("ik,gij,jl->gkl", Q.conj(), reg.matrices, Q)
        sub = ProjectiveRep(group, mats, omega, validate=False)
        m = _self_mor(sub)
        if m == 1:
            out.append(sub)
            continue
        guard += 1
        if guard > 50 * group.order:
            raise RepError("twisted splitting failed to converge")
        d = sub.dim
        H = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        H = (H + H.conj().T) / 2
        T = np.einsum("gij,jk,glk->il", sub.matrices, H, sub.matrices.conj())
        T /= group.order
        blocks = _eig_blocks(T)
        if len(blocks) == 1:
            queue.append(Q)  # retry with fresh randomness
        else:
            queue.extend(Q @ B for B in blocks)
    out = _dedupe_projective(out)
    total = sum(v.dim ** 2 for v in out)
    if total != group.order:
        raise RepError(f"twisted Peter-Weyl count failed: {total} != {group.order}")
    for v in out:
        v.check()
    return out


def _self_mor(V: ProjectiveRep) -> int:
    chi = V.character()
    return _round_int(np.vdot(chi, chi) / V.group.order, ROUND_TOL, "self_mor")


def _dedupe_projective(reps):
    kept = []
    for v in reps:
        if any(w.dim == v.dim and proj_mor_dim(v, w) > 0 for w in kept):
            continue
        kept.append(v)
    def key(v):
        chi = v.character()
        return (v.dim, tuple((round(z.real, 6), round(z.imag, 6)) for z in chi))
    kept.sort(key=key)
    return kept


def characters_table(group: FiniteGroup) -> list[np.ndarray]:
    """All 1-dimensional ordinary characters (gauge candidates for the
    equivalence search)."""
    from .reps import irreps
    return [c.character.copy() for c in irreps(group) if c.dim == 1]


def trivialize_cyclic(omega: Cocycle, generator: int = 1) -> np.ndarray:
    """For a cyclic group, construct b with coboundary(b) = omega.

    Works by the standard recursion along powers of the generator plus an
    n-th root correction; raises if the group is not cyclic on ``generator``.
    """
    g = omega.group
    n = g.order
    if n == 1:
        return np.ones(1, dtype=np.complex128)
    if g.element_order(generator) != n:
        raise RepError("trivialize_cyclic needs a cyclic group with the given generator")
    w = omega.values
    b = np.ones(n, dtype=np.complex128)
    powers = [g.identity]
    for _ in range(n - 1):
        powers.append(g.multiply(generator, powers[-1]))
    # recursion: b(a^{k+1}) = b(a) b(a^k) / omega(a, a^k), then fix the wrap
    vals = {g.identity: 1.0 + 0j, generator: 1.0 + 0j}
    for k in range(1, n - 1):
        vals[powers[k + 1]] = vals[generator] * vals[powers[k]] / w[generator, powers[k]]
    defect = vals[generator] * vals[powers[n - 1]] / w[generator, powers[n - 1]]
    zeta = cmath.exp(-cmath.phase(defect) * 1j / n) * abs(defect) ** (-1 / n)
    for k in range(n):
        b[powers[k]] = vals[powers[k]] * zeta ** k
    db = coboundary(g, b)
    if not db.equal(omega, tol=1e-8):
        raise RepError("cyclic trivialization failed")
    return b
