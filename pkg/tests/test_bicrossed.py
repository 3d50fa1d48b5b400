import itertools

import numpy as np
import pytest

import bqg.groups as G
from bqg.bicrossed import (
    BicrossedInstance,
    matched_pair_from_twist,
    matched_pair_plain,
    verify_matched_pair,
)


def test_twist_nontriviality_flags(s3_twist, psl2z_twist):
    assert not s3_twist.alpha_trivial()
    assert not s3_twist.beta_trivial()
    assert not psl2z_twist.alpha_trivial()
    assert not psl2z_twist.beta_trivial()


def test_twist_trivial_flags():
    z4 = G.cyclic_group(4)
    z3 = G.cyclic_group(3)
    tau = G.AutAction.trivial(z4, z3)
    mp = matched_pair_from_twist(z4, z3, tau, [0, 2])
    # abelian Gamma: Lambda central, tau trivial
    assert mp.alpha_trivial() and mp.beta_trivial()
    rep = verify_matched_pair(mp)
    assert rep.ok


def test_lambda_not_subgroup_rejected(s3_twist):
    S3 = s3_twist.gamma.raw
    tau = s3_twist._tau_gamma
    with pytest.raises(G.GroupError):
        matched_pair_from_twist(S3, s3_twist.G, tau, [0, 2, 5])


def test_matched_pair_axioms_clean(s3_twist, psl2z_twist):
    assert verify_matched_pair(s3_twist).ok
    assert verify_matched_pair(psl2z_twist, ball=3).ok


def test_matched_pair_negative_control(s3_twist):
    class Mutated:
        def __init__(self, mp):
            self.mp = mp
            self.h = mp.h
            self.gamma = mp.gamma

        def alpha(self, g, h):
            return self.mp.alpha(g, h)

        def beta(self, g, h):
            out = self.mp.beta(g, h)
            if g == 2 and h == 1:  # hand-mutated entry
                return self.mp.gamma.mul(out, 2) if out != 2 else 0
            return out

    rep = verify_matched_pair(Mutated(s3_twist))
    assert not rep.ok


def test_beta_orbits_s3(s3_instance, s3_twist):
    S3 = s3_twist.gamma.raw
    e_orbit = s3_instance.beta_orbit(S3.identity)
    assert e_orbit.elements == (S3.identity,)
    assert len(e_orbit.lambda_ids) == s3_twist.lam.order
    g13 = G.perm_id(S3, (2, 1, 0))
    orb = s3_instance.beta_orbit(g13)
    assert sorted(orb.names) == ["(13)", "(23)"]
    assert orb.lambda_ids == (s3_twist.lam.identity,)
    # sections move the base where required
    for mu in orb.elements:
        sig = orb.sections[mu]
        assert s3_twist.beta(orb.base, sig) == mu
    assert orb.sections[orb.base] == s3_twist.h.identity
    # orbit of the inverse is the inverse of the orbit
    inv_orb = s3_instance.beta_orbit(S3.invert(g13))
    assert set(inv_orb.elements) == {S3.invert(x) for x in orb.elements}


def test_classification_s3_twist(s3_instance):
    classes = s3_instance.classify()
    assert len(classes) == 12
    dims = sorted(c.dim for c in classes)
    assert dims == [1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2]
    assert sum(c.dim ** 2 for c in classes) == 36
    by_orbit = {}
    for c in classes:
        by_orbit.setdefault(c.orbit.fingerprint, []).append(c.dim)
    assert sorted(map(sorted, by_orbit.values())) == \
        [[1, 1, 2], [1, 1, 2], [2, 2, 2], [2, 2, 2]]


def test_trivial_twist_is_product_theory():
    z4 = G.cyclic_group(4)
    z3 = G.cyclic_group(3)
    mp = matched_pair_from_twist(z4, z3, G.AutAction.trivial(z4, z3), [0, 2])
    inst = BicrossedInstance(mp)
    classes = inst.classify()
    # Irr(Gamma) x Irr(G x| Lambda) sizes: all 1-dimensional here
    assert len(classes) == 4 * 6
    assert all(c.dim == 1 for c in classes)
    assert sum(c.dim ** 2 for c in classes) == 4 * 6


def test_enumerable_classification_per_orbit_complete(psl2z_twist):
    inst = BicrossedInstance(psl2z_twist)
    classes = inst.classify(ball=2)
    orbits = {c.orbit.fingerprint: c.orbit for c in classes}
    for fp, orb in orbits.items():
        mine = [c for c in classes if c.orbit.fingerprint == fp]
        expect = orb.size ** 2 * 9 * len(orb.lambda_ids)
        assert sum(c.dim ** 2 for c in mine) == expect


def test_fusion_unit_and_bookkeeping(s3_instance):
    classes = s3_instance.classify()
    eps = s3_instance.trivial_class()
    for x in classes:
        for z in classes:
            assert s3_instance.fusion(x, eps, z) == (1 if x.index == z.index else 0)
            assert s3_instance.fusion(eps, x, z) == (1 if x.index == z.index else 0)
    dims = {c.index: c.dim for c in classes}
    for x, y in itertools.product(classes, repeat=2):
        total = sum(s3_instance.fusion(x, y, z) * dims[z.index] for z in classes)
        assert total == x.dim * y.dim


def test_fusion_product_set_short_circuit(s3_instance, s3_twist):
    classes = s3_instance.classify()
    S3 = s3_twist.gamma.raw
    two_orbit = [c for c in classes if c.orbit.size == 2
                 and "(13)" in c.orbit.names]
    trans = two_orbit[0]
    # {(13),(23)} . {(13),(23)} = {e, (123), (132)}: classes over {(12)} get 0
    over_12 = [c for c in classes if c.orbit.names == ("(12)",)]
    for z in over_12:
        assert s3_instance.fusion(trans, trans, z) == 0


def test_fusion_agrees_with_quantum_character_oracle(s3_instance, s3_fourier):
    alg = s3_fourier.alg
    classes = s3_instance.classify()
    chars = {c.index: s3_fourier.character(c) for c in classes}
    for x, y, z in itertools.product(classes, repeat=3):
        formula = s3_instance.fusion(x, y, z)
        oracle = alg.haar(alg.mul(alg.star(chars[z.index]),
                                  alg.mul(chars[x.index], chars[y.index])))
        assert abs(formula - oracle) < 1e-6


def test_conjugation_involution_and_symmetry(s3_instance):
    classes = s3_instance.classify()
    conj = {c.index: s3_instance.conjugate_class(c).index for c in classes}
    for i, j in conj.items():
        assert conj[j] == i
        assert classes[i].dim == classes[j].dim
    for x, y, z in itertools.product(classes, repeat=3):
        lhs = s3_instance.fusion(x, y, z)
        rhs = s3_instance.fusion(classes[conj[y.index]], classes[conj[x.index]],
                                 classes[conj[z.index]])
        assert lhs == rhs


def test_conjugation_trivial_orbit_is_ordinary(s3_instance, s3_twist):
    classes = [c for c in s3_instance.classify() if c.orbit.size == 1
               and c.orbit.base == s3_twist.gamma.raw.identity]
    for c in classes:
        cc = s3_instance.conjugate_class(c)
        assert np.abs(cc.isotype.character - c.isotype.character.conj()).max() < 1e-6


def test_self_inverse_orbit_stays(s3_instance, s3_twist):
    S3 = s3_twist.gamma.raw
    g13 = G.perm_id(S3, (2, 1, 0))
    cls = [c for c in s3_instance.classify()
           if c.orbit.fingerprint == s3_instance.beta_orbit(g13).fingerprint]
    for c in cls:
        assert s3_instance.conjugate_class(c).orbit.fingerprint \
            == c.orbit.fingerprint


def test_section_independence(s3_instance, s3_twist):
    """Rebuilding diagonal blocks with different sections keeps characters."""
    classes = s3_instance.classify()
    mp = s3_twist
    for c in classes:
        if c.orbit.size == 1:
            continue
        orbit = c.orbit
        alt = {}
        for mu in orbit.elements:
            cands = [h for h in range(mp.h.order) if mp.beta(orbit.base, h) == mu]
            alt[mu] = mp.h.identity if mu == orbit.base else max(cands)
        base_sections = {s3_instance._ekey(k): v for k, v in alt.items()}
        for mu in orbit.elements:
            a = s3_instance.orep_block(c, mu, mu)
            b = s3_instance.orep_block(c, mu, mu, sections=base_sections)
            assert np.abs(np.trace(a, axis1=1, axis2=2)
                          - np.trace(b, axis1=1, axis2=2)).max() < 1e-8


def test_orep_blocks_partial_unitarity(s3_instance):
    """u_{r,s}(h) is unitary exactly on G_{r,s} and zero elsewhere."""
    classes = s3_instance.classify()
    mp = s3_instance.mp
    for c in classes[:6]:
        for r in c.orbit.elements:
            for s in c.orbit.elements:
                block = s3_instance.orep_block(c, r, s)
                support = set(s3_instance.g_rs(r, s))
                for h in range(mp.h.order):
                    m = block[h]
                    if h in support:
                        assert np.abs(m.conj().T @ m - np.eye(m.shape[0])).max() < 1e-9
                    else:
                        assert np.abs(m).max() == 0


def test_plain_pair_matches_mackey():
    z3, z2 = G.cyclic_group(3), G.cyclic_group(2)
    tau = G.AutAction.inversion(z2, z3)
    mp = matched_pair_plain(z3, z2, tau)
    inst = BicrossedInstance(mp)
    classes = inst.classify()
    assert [c.dim for c in classes] == [1, 1, 2]
    assert all(c.orbit.size == 1 for c in classes)
