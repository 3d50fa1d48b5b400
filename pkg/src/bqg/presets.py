"""Ready-made instance documents.

z3-semidirect and friends pin the Mackey corpus, s3-twist the finite
bicrossed machinery, psl2z-twist the enumerable side, and lemma146b-z2 the
weighted direct-sum length.
"""

from __future__ import annotations

from . import groups as G


def _shift_images():
    _, tau = G.cyclic_shift_embedding(G.cyclic_group(2), G.cyclic_group(3))
    return tau.table[1].tolist()


def preset_documents() -> dict:
    swap = _shift_images()
    nine = list(range(9))
    return {
        "z3-semidirect": {
            "kind": "semidirect",
            "label": "z3-semidirect",
            "g": {"kind": "cyclic", "n": 3},
            "lambda": {"kind": "cyclic", "n": 2},
            "tau": {"kind": "inversion"},
            "lengths": {"dual_base": {"0": 0, "1": 1, "2": 1}},
            "kmax": 2,
        },
        "z5z4-semidirect": {
            "kind": "semidirect",
            "label": "z5z4-semidirect",
            "g": {"kind": "cyclic", "n": 5},
            "lambda": {"kind": "cyclic", "n": 4},
            "tau": {"kind": "power", "k": 2},
            "lengths": {"dual_base": {"0": 0, "1": 1, "2": 1, "3": 1, "4": 1}},
            "kmax": 2,
        },
        "z3sq-semidirect": {
            "kind": "semidirect",
            "label": "z3sq-semidirect",
            "g": {"kind": "direct_sum",
                  "factors": [{"kind": "cyclic", "n": 3}, {"kind": "cyclic", "n": 3}]},
            "lambda": {"kind": "cyclic", "n": 2},
            "tau": {"kind": "images", "images": {"1": swap}},
            "lengths": {"dual_base": {str(i): (0 if i == 0 else 1) for i in nine}},
            "kmax": 2,
        },
        "d4-semidirect": {
            "kind": "semidirect",
            "label": "d4-semidirect",
            "g": {"kind": "cyclic", "n": 4},
            "lambda": {"kind": "cyclic", "n": 2},
            "tau": {"kind": "inversion"},
            "lengths": {"dual_base": {"0": 0, "1": 1, "2": 1, "3": 1}},
            "kmax": 2,
        },
        "z7z3-semidirect": {
            "kind": "semidirect",
            "label": "z7z3-semidirect",
            "g": {"kind": "cyclic", "n": 7},
            "lambda": {"kind": "cyclic", "n": 3},
            "tau": {"kind": "power", "k": 2},
            "lengths": {"dual_base": {str(i): (0 if i == 0 else 1) for i in range(7)}},
            "kmax": 2,
        },
        "s3-twist": {
            "kind": "bicrossed",
            "label": "s3-twist",
            "gamma": {"kind": "symmetric", "n": 3},
            "g": {"kind": "cyclic", "n": 3},
            "lambda": {"generators": [2]},          # (12)
            "tau": {"kind": "parity-inversion"},
            "lengths": {
                "gamma_generators": [2, 5],         # (12), (13)
                "dual_base": {"0": 0, "1": 1, "2": 1},
            },
            "kmax": 4,
        },
        "psl2z-twist": {
            "kind": "bicrossed",
            "label": "psl2z-twist",
            "gamma": {"kind": "free_product",
                      "factors": [{"kind": "cyclic", "n": 2},
                                  {"kind": "cyclic", "n": 3}]},
            "g": {"kind": "direct_sum",
                  "factors": [{"kind": "cyclic", "n": 3}, {"kind": "cyclic", "n": 3}]},
            "lambda": {"generators": ["s"]},
            "tau": {"kind": "factor-images",
                    "images": [swap, list(range(9))]},
            "lengths": {"dual_base": {str(i): (0 if i == 0 else 1) for i in nine}},
            "kmax": 8,
            "ball": 4,
        },
        "lemma146b-z2": {
            "kind": "direct-sum-length",
            "label": "lemma146b-z2",
            "factor_order": 2,
            "kmax": 16,
            "nmax": 1024,
        },
    }


def preset(name: str) -> dict:
    docs = preset_documents()
    if name not in docs:
        raise KeyError(f"unknown preset {name!r}; have {sorted(docs)}")
    return docs[name]
