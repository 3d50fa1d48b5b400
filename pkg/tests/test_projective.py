import numpy as np
import pytest

import bqg.groups as G
import bqg.projective as P
import bqg.reps as R


def klein_four():
    z2 = G.cyclic_group(2)
    return G.direct_product([z2, z2])


def heisenberg_cocycle(v4):
    """omega((a1,a2),(b1,b2)) = (-1)^{a2 b1}: a nontrivial class on Z2 x Z2."""
    vals = np.ones((4, 4), dtype=np.complex128)
    for i, a in enumerate(v4.tuples):
        for j, b in enumerate(v4.tuples):
            vals[i, j] = (-1.0) ** (a[1] * b[0])
    return P.Cocycle(v4, vals)


def test_cocycle_audit_and_opposite():
    v4 = klein_four()
    w = heisenberg_cocycle(v4)
    assert not w.is_trivial()
    assert w.opposite().equal(P.Cocycle(v4, w.values.conj(), validate=False))
    assert w.product(w.opposite()).is_trivial()
    triv = P.Cocycle.trivial(v4)
    assert triv.opposite().is_trivial()
    bad = w.values.copy()
    bad[1, 2] = -bad[1, 2]
    with pytest.raises(R.RepError):
        P.Cocycle(v4, bad)


def test_gauge_trivia():
    v4 = klein_four()
    w = heisenberg_cocycle(v4)
    reps = P.proj_irreps_for_cocycle(v4, w)
    V = reps[0]
    same = P.gauge(V, np.ones(4))
    assert np.allclose(same.matrices, V.matrices)
    b = np.array([1, 1j, -1, -1j])
    gauged = P.gauge(V, b)
    gauged.check()
    expected = w.product(P.coboundary(v4, b))
    assert gauged.cocycle.equal(expected)


def test_proj_irreps_nontrivial_cocycle():
    v4 = klein_four()
    w = heisenberg_cocycle(v4)
    reps = P.proj_irreps_for_cocycle(v4, w)
    assert [v.dim for v in reps] == [2]  # single projective irreducible
    assert P.proj_mor_dim(reps[0], reps[0]) == 1


def test_proj_irreps_trivial_cocycle_match_ordinary():
    s3 = G.symmetric_group(3)
    reps = P.proj_irreps_for_cocycle(s3, P.Cocycle.trivial(s3))
    assert sorted(v.dim for v in reps) == [1, 1, 2]
    ordinary = R.irreps(s3)
    for v in reps:
        assert any(np.abs(v.character() - c.character).max() < 1e-6
                   for c in ordinary)
    # proj_mor_dim agrees with mor_dim on all pairs of ordinary irreducibles
    for a in ordinary:
        for b in ordinary:
            pa, pb = P.from_ordinary(a.rep), P.from_ordinary(b.rep)
            assert P.proj_mor_dim(pa, pb) == R.mor_dim(a.rep, b.rep)


def test_proj_mor_dim_direct_sum():
    v4 = klein_four()
    w = heisenberg_cocycle(v4)
    V = P.proj_irreps_for_cocycle(v4, w)[0]
    mats = np.zeros((4, 4, 4), dtype=np.complex128)
    mats[:, :2, :2] = V.matrices
    mats[:, 2:, 2:] = V.matrices
    VV = P.ProjectiveRep(v4, mats, w)
    assert P.proj_mor_dim(V, VV) == 2
    # pointwise cocycle mismatch is an error (caller must gauge first)
    other = P.gauge(V, np.array([1, 1j, 1, 1]))
    assert not other.cocycle.equal(V.cocycle)
    with pytest.raises(R.RepError):
        P.proj_mor_dim(V, other)


def test_cyclic_cocycles_are_coboundaries():
    rng = np.random.default_rng(3)
    for n in (2, 3, 4, 6):
        zn = G.cyclic_group(n)
        phases = np.exp(2j * np.pi * rng.random(n))
        phases[zn.identity] = 1.0
        omega = P.coboundary(zn, phases)
        omega.check()
        b = P.trivialize_cyclic(omega)
        assert P.coboundary(zn, b).equal(omega, tol=1e-8)
        # twisted irreducibles are then all 1-dimensional
        reps = P.proj_irreps_for_cocycle(zn, omega)
        assert [v.dim for v in reps] == [1] * n


def test_linking_rep_trivial_and_error():
    z3 = G.cyclic_group(3)
    z2 = G.cyclic_group(2)
    tau = G.AutAction.inversion(z2, z3)
    full = z2.subgroup([0, 1])
    classes = R.irreps(z3)
    trivial = classes[0]
    V = P.linking_rep(trivial, full, tau.table)
    assert np.allclose(V.matrices, 1.0)
    assert V.cocycle.is_trivial()
    omega_char = classes[1]
    with pytest.raises(R.RepError):
        P.linking_rep(omega_char, full, tau.table)  # inversion moves omega


def test_linking_rep_swap_fixed_character():
    """Lambda0 = Z2 swapping the factors of Z2 x Z2; the diagonal characters
    are fixed and link with a removable (cyclic) cocycle."""
    v4 = klein_four()
    z2 = G.cyclic_group(2)
    swap = np.array([v4.tuple_index[(b, a)] for (a, b) in v4.tuples])
    tau = G.AutAction.from_generator_images(z2, v4, {1: swap})
    full = z2.subgroup([0, 1])
    for c in R.irreps(v4):
        moved = c.character[swap]
        if np.abs(moved - c.character).max() < 1e-9:
            V = P.linking_rep(c, full, tau.table)
            V.check()
            sq = V.matrices[1] @ V.matrices[1]
            assert np.allclose(sq, sq[0, 0] * np.eye(1))  # V(s)^2 scalar
            b = P.trivialize_cyclic(V.cocycle)
            assert P.coboundary(full.group, b).equal(V.cocycle, tol=1e-8)


def test_linking_rep_reducible_rejected():
    s3 = G.symmetric_group(3)
    full = s3.subgroup(list(s3.elements()))
    reg = R.regular_rep(s3)
    with pytest.raises(R.RepError):
        P.linking_rep(reg, full, np.tile(np.arange(6), (6, 1)))


def test_extracted_cocycles_pass_identity():
    v4 = klein_four()
    w = heisenberg_cocycle(v4)
    V = P.proj_irreps_for_cocycle(v4, w)[0]
    again = P.extract_cocycle(v4, V.matrices)
    assert again.equal(w)
    again.check()
