import numpy as np
import pytest

import bqg.groups as G
from bqg.bicrossed import BicrossedInstance, QuantumFourier, matched_pair_from_twist
from bqg.mackey import SemidirectContext, classify_semidirect


def s3_twist_pair():
    S3 = G.symmetric_group(3)
    Z3 = G.cyclic_group(3)
    tab = np.empty((6, 3), dtype=np.int64)
    for a in S3.elements():
        tab[a] = np.arange(3) if G.permutation_parity(S3, a) == 0 else Z3.inv
    tau = G.AutAction(S3, Z3, tab)
    g12 = G.perm_id(S3, (1, 0, 2))
    lam = S3.subgroup_closure([g12])
    return matched_pair_from_twist(S3, Z3, tau, lam, label="s3-twist")


@pytest.fixture(scope="session")
def s3_twist():
    return s3_twist_pair()


@pytest.fixture(scope="session")
def s3_instance(s3_twist):
    inst = BicrossedInstance(s3_twist)
    inst.classify()
    return inst


@pytest.fixture(scope="session")
def s3_fourier(s3_instance):
    return QuantumFourier(s3_instance)


def semidirect_corpus() -> dict:
    """The five acceptance instances, |G x| L| <= 200."""
    out = {}
    out["z3xz2"] = (G.cyclic_group(3), G.cyclic_group(2), "inv", None)
    out["z5xz4"] = (G.cyclic_group(5), G.cyclic_group(4), "power", 2)
    out["z3sq-shift"] = (None, G.cyclic_group(2), "shift", None)
    out["d4"] = (G.cyclic_group(4), G.cyclic_group(2), "inv", None)
    out["z7xz3"] = (G.cyclic_group(7), G.cyclic_group(3), "power", 2)
    return out


def build_semidirect(name) -> SemidirectContext:
    g, lam, kind, k = semidirect_corpus()[name]
    if kind == "inv":
        tau = G.AutAction.inversion(lam, g)
    elif kind == "power":
        perm = np.array([g.power(x, k) for x in g.elements()])
        tau = G.AutAction.from_generator_images(lam, g, {1: perm})
    else:
        g, tau = G.cyclic_shift_embedding(lam, G.cyclic_group(3))
    return SemidirectContext(g, lam, tau)


@pytest.fixture(scope="session")
def corpus_contexts():
    return {name: build_semidirect(name) for name in semidirect_corpus()}


@pytest.fixture(scope="session")
def corpus_classes(corpus_contexts):
    return {name: classify_semidirect(ctx) for name, ctx in corpus_contexts.items()}


def psl2z_twist_pair():
    fp = G.FreeProduct([2, 3])
    B, shift = G.cyclic_shift_embedding(G.cyclic_group(2), G.cyclic_group(3))
    tau = G.FreeProductAut(fp, B, [shift.table[1], np.arange(B.order)])
    return matched_pair_from_twist(fp, B, tau, [(), ((0, 1),)], label="psl2z-twist")


@pytest.fixture(scope="session")
def psl2z_twist():
    return psl2z_twist_pair()
