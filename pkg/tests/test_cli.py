import csv
import json
import os

import pytest

from bqg.cli import main
from bqg.config import ConfigError, load_instance
from bqg.presets import preset, preset_documents


def run(args, tmp_path, sub="out"):
    out = tmp_path / sub
    code = main(args + ["--out", str(out)])
    return code, out


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def test_all_presets_parse():
    for name, doc in preset_documents().items():
        inst = load_instance(doc)
        assert inst.label == name


def test_irr_s3_twist(tmp_path):
    code, out = run(["irr", "--preset", "s3-twist"], tmp_path)
    assert code == 0
    data = json.loads(read(out / "irr.json"))
    assert len(data["classes"]) == 12
    assert data["audit"] == {"sum_dim_sq": 36, "expected": 36, "ok": True}
    dims = sorted(c["dim"] for c in data["classes"])
    assert dims == [1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2]


def test_irr_z3_semidirect(tmp_path):
    code, out = run(["irr", "--preset", "z3-semidirect"], tmp_path)
    assert code == 0
    data = json.loads(read(out / "irr.json"))
    assert sorted(c["dim"] for c in data["classes"]) == [1, 1, 2]


def test_fuse_oracle_diff_empty(tmp_path):
    code, out = run(["fuse", "--preset", "z3-semidirect"], tmp_path)
    assert code == 0
    with open(out / "fusion_diff.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows == [["class1", "class2", "class3", "formula", "oracle"]]


def test_fuse_s3_twist_audit(tmp_path):
    code, out = run(["fuse", "--preset", "s3-twist"], tmp_path)
    assert code == 0
    audit = json.loads(read(out / "fusion.json"))["audit"]
    assert audit["unit"] and audit["associativity"]
    assert audit["dimension_bookkeeping"] and audit["conjugation_symmetry"]


def test_fuse_trivial_instance_identity_table(tmp_path):
    doc = {
        "kind": "semidirect",
        "g": {"kind": "cyclic", "n": 1},
        "lambda": {"kind": "cyclic", "n": 1},
        "tau": {"kind": "trivial"},
    }
    path = tmp_path / "trivial.json"
    path.write_text(json.dumps(doc))
    code, out = run(["fuse", "--instance", str(path)], tmp_path)
    assert code == 0
    table = json.loads(read(out / "fusion.json"))["table"]
    assert table == {"0,0,0": 1}


def test_growth_lemma146b(tmp_path):
    code, out = run(["growth", "--preset", "lemma146b-z2", "--kmax", "16"],
                    tmp_path)
    assert code == 0
    with open(out / "growth_group.csv") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows[1:]:
        n = int(row["k"]) + 1
        assert int(row["cumulative"]) <= n


def test_growth_psl2z(tmp_path):
    code, out = run(["growth", "--preset", "psl2z-twist", "--kmax", "8"],
                    tmp_path)
    assert code == 0
    with open(out / "growth_group.csv") as fh:
        rows = list(csv.DictReader(fh))
    shells = [int(r["shell_sum"]) for r in rows]
    assert shells == [1, 3, 4, 6, 8, 12, 16, 24, 32]


def test_rd_report_shape(tmp_path):
    code, out = run(["rd", "--preset", "s3-twist", "--kmax", "3"], tmp_path)
    assert code == 0
    data = json.loads(read(out / "rd.json"))
    assert len(data["shells"]) == 4
    for shell in data["shells"]:
        assert shell["lower"] <= shell["upper"] + 1e-9
        assert shell["lower"] <= shell["cumulative_upper"] + 1e-9


def test_rd_semidirect_instance(tmp_path):
    code, out = run(["rd", "--preset", "z3-semidirect", "--kmax", "1"], tmp_path)
    assert code == 0
    data = json.loads(read(out / "rd.json"))
    assert data["shells"][0]["shell"] == [0, 1]


def test_malformed_tau_exit_2(tmp_path):
    doc = {
        "kind": "semidirect",
        "g": {"kind": "cyclic", "n": 3},
        "lambda": {"kind": "cyclic", "n": 2},
        "tau": {"kind": "images", "images": {"1": [0, 1, 1]}},
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _ = run(["irr", "--instance", str(path)], tmp_path)
    assert code == 2


def test_missing_instance_exit_2(tmp_path):
    code, _ = run(["irr"], tmp_path)
    assert code == 2
    code, _ = run(["irr", "--preset", "nope"], tmp_path)
    assert code == 2


def test_determinism_byte_identical(tmp_path):
    jobs = [
        ["irr", "--preset", "s3-twist"],
        ["fuse", "--preset", "z3-semidirect"],
        ["rd", "--preset", "s3-twist", "--kmax", "2", "--seed", "5"],
        ["growth", "--preset", "psl2z-twist", "--kmax", "6"],
    ]
    for i, job in enumerate(jobs):
        c1, out1 = run(job, tmp_path, f"a{i}")
        c2, out2 = run(job, tmp_path, f"b{i}")
        assert c1 == c2 == 0
        files1 = sorted(os.listdir(out1))
        assert files1 == sorted(os.listdir(out2))
        for name in files1:
            assert read(out1 / name) == read(out2 / name), (job, name)


def test_config_error_paths():
    with pytest.raises(ConfigError):
        load_instance({"kind": "nope"})
    with pytest.raises(ConfigError):
        load_instance({"kind": "semidirect", "g": {"kind": "cyclic", "n": 3}})
    with pytest.raises(ConfigError):
        load_instance(preset("s3-twist") | {"tau": {"kind": "unknown"}})
