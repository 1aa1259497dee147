# Copyright 2026 The Sentinel Authors
# SPDX-License-Identifier: Apache-2.0

import json
import os
import random

import numpy as np
import pytest

import sentinel

DATA_DIR = os.environ.get("SENTINEL_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def octet_oracle(hexstr, hex_dic, mal_dic, benign_dic):
    body = hexstr[2:].lower()
    chunks = [body[i:i + 8] for i in range(0, len(body), 8)]
    valid = benign = mal = 0
    for c in chunks:
        sig = hex_dic.get("0x" + c)
        if sig is None:
            continue
        valid += 1
        if sig in mal_dic:
            mal += 1
        elif sig in benign_dic:
            benign += 1
    return {"n_octets": len(chunks), "valid_octet": valid, "benign_octet": benign, "mal_octet": mal}


def make_directory():
    d = sentinel.SignatureDirectory()
    d.add("0xa9059cbb", "transfer(address,uint256)", "benign")
    d.add("0x2e1a7d4d", "withdraw(uint256)", "malicious")
    d.add("0x2e1a7d4d", "withdraw(uint256)", "benign")
    d.add("0xdeadbeef", "sweep(address)", "malicious")
    d.add("0x00000000", "zero()", "unknown")
    return d


def test_disassemble_and_normalize():
    assert sentinel.disassemble("0x6001600201") == "0000 PUSH1 0x01\n0002 PUSH1 0x02\n0004 ADD\n"
    assert sentinel.normalize("0x6001600201", max_len=4) == ["PUSH1", "PUSH1", "ADD", "PAD"]
    assert len(sentinel.normalize("0x" + "01" * 700)) == 600
    assert sentinel.opcode_table_csv().startswith("byte_value,mnemonic,immediate_len\n")


def test_roundtrip_random_bytes():
    rng = random.Random(3)
    for _ in range(200):
        code = bytes(rng.randrange(256) for _ in range(rng.randrange(200)))
        assert sentinel.roundtrip(code) == code


def test_octets_match_python_oracle():
    d = make_directory()
    rng = random.Random(11)
    pieces = ["a9059cbb", "2e1a7d4d", "deadbeef", "00000000", "12345678", "abc"]
    for _ in range(300):
        body = "".join(rng.choice(pieces) for _ in range(rng.randrange(6)))
        h = "0x" + body
        assert sentinel.octet_features(h, d) == octet_oracle(h, d.hex_dic, d.mal_dic, d.benign_dic)
    # a signature in both sets counts as malicious
    assert sentinel.octet_features("0x2e1a7d4d", d)["mal_octet"] == 1


def test_directory_file_and_errors():
    d = sentinel.load_directory(os.path.join(DATA_DIR, "selectors.csv"))
    assert len(d.hex_dic) > 0
    with pytest.raises(sentinel.SentinelError, match="InvalidCalldata"):
        sentinel.octet_features("0xzz", d)
    with pytest.raises(sentinel.SentinelError):
        sentinel.parse_directory("0x123,f(),benign\n")


def test_auc_matches_pairwise():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randrange(2, 60)
        s = [rng.randrange(5) / 5 for _ in range(n)]
        y = [rng.randrange(2) for _ in range(n)]
        y[0], y[1] = 1, 0
        pos = [a for a, b in zip(s, y) if b == 1]
        neg = [a for a, b in zip(s, y) if b == 0]
        pairwise = sum((p > q) + 0.5 * (p == q) for p in pos for q in neg) / (len(pos) * len(neg))
        assert abs(sentinel.auc(s, y) - pairwise) <= 1e-12
    with pytest.raises(sentinel.SentinelError, match="DegenerateLabels"):
        sentinel.auc([0.1, 0.2], [1, 1])


def test_gbdt_train_predict_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    x = rng.normal(size=(300, 3))
    y = (x[:, 0] + 0.1 * rng.normal(size=300) > 0).astype(int).tolist()
    model = sentinel.train_gbdt(x, y, schema=["a", "b", "c"], n_trees=20, seed=1)
    p = np.asarray(model.predict_proba(x))
    assert sentinel.auc(p.tolist(), y) > 0.95
    imp = dict(model.feature_importance())
    assert max(imp, key=imp.get) == "a"
    model.save(tmp_path / "m.json")
    again = sentinel.load_gbdt(tmp_path / "m.json")
    assert np.array_equal(np.asarray(again.predict_proba(x)), p)
    assert sentinel.train_gbdt(x, y, schema=["a", "b", "c"], n_trees=20, seed=1).to_json() == model.to_json()
    with pytest.raises(sentinel.SentinelError, match="DimensionError"):
        model.predict_proba(x[:, :2])


def test_bayesnet_copy_pair():
    rng = np.random.default_rng(2)
    a = rng.integers(0, 2, size=500)
    x = np.stack([a, a], axis=1).astype(np.uint8)
    arcs = sentinel.learn_structure(x, ["A", "B"])
    assert len(arcs) == 1
    assert sentinel.bic_score(x, ["A", "B"], arcs) > sentinel.bic_score(x, ["A", "B"], [])


def test_pca_and_autoencoder():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(200, 5)) * np.arange(1, 6)
    pca = sentinel.pca_fit(x, 3)
    c = np.asarray(pca.components)
    assert np.allclose(c @ c.T, np.eye(3), atol=1e-8)
    assert np.all(np.diff(np.asarray(pca.explained_variance)) <= 0)
    assert np.asarray(pca.project(x)).shape == (200, 3)

    ae = sentinel.fit_autoencoder(x, hidden_dims=[4, 2], epochs=5, seed=3)
    assert ae.layer_dims == [5, 4, 2, 4, 5]
    assert np.asarray(ae.score(x)).shape == (200,)
    assert np.asarray(ae.encode(x)).shape == (200, 2)
    assert json.loads(ae.to_json())["layer_dims"] == [5, 4, 2, 4, 5]


def test_feature_schema_and_signature_stats():
    schema = sentinel.feature_schema()
    assert len(schema) == 22
    assert sum(sentinel.is_gas_feature(n) for n in schema) == 10
    rows = [("0xa9059cbb", 0), ("0xa9059cbb", 1), ("0xdeadbeef00", 1), ("0x12", 1)]
    assert sentinel.malicious_only_selectors(rows) == {"0xdeadbeef"}
