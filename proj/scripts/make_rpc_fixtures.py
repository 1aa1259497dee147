#!/usr/bin/env python3
# Copyright 2026 The Sentinel Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the JSON-RPC replay fixtures used by the ingest tests.

responses.json holds node-shaped replies keyed by (method, params). golden.json holds the
expected decoded records, computed here with Python integers.
"""

import hashlib
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "fixtures" / "rpc"
CONTRACTS = ROOT / "tests" / "fixtures" / "contracts"


def h32(tag):
    return "0x" + hashlib.sha256(tag.encode()).hexdigest()


def addr(tag):
    return "0x" + hashlib.sha256(tag.encode()).hexdigest()[:40]


def q(n):
    return hex(n)


GWEI = 10**9
BLOCK = 18_000_000
EMPTY_BLOCK = BLOCK + 1

token = json.loads((CONTRACTS / "UniswapV2ERC20.getCode.json").read_text())["result"]
token_addr = addr("token")
eoa = addr("eoa-recipient")

transfer_args = "000000000000000000000000" + eoa[2:] + format(5 * 10**18, "064x")

txs = []
# EIP-1559 plain ETH transfer
txs.append(dict(label="transfer", type=2, gas=21000, gasPrice=31 * GWEI, maxFee=45 * GWEI, maxPrio=2 * GWEI,
                value=15 * 10**17, input="0x", to=eoa, nonce=42))
# legacy ERC-20 transfer to a contract
txs.append(dict(label="erc20", type=0, gas=65000, gasPrice=28 * GWEI, maxFee=None, maxPrio=None,
                value=0, input="0xa9059cbb" + transfer_args, to=token_addr, nonce=7))
# contract creation carrying a value above 2^64
txs.append(dict(label="create", type=2, gas=3_000_000, gasPrice=40 * GWEI, maxFee=120 * GWEI, maxPrio=3 * GWEI,
                value=100 * 10**18, input="0x6080604052", to=None, nonce=0))
# pending transaction, no receipt yet
txs.append(dict(label="pending", type=2, gas=21000, gasPrice=30 * GWEI, maxFee=30 * GWEI, maxPrio=1 * GWEI,
                value=1, input="0x", to=eoa, nonce=43, pending=True))
# filler transactions for the sampling block
for i in range(7):
    txs.append(dict(label=f"filler{i}", type=2, gas=21000 + i, gasPrice=(20 + i) * GWEI, maxFee=50 * GWEI,
                    maxPrio=GWEI, value=i * 10**15, input="0x", to=eoa, nonce=100 + i))

responses = []
golden = {"transactions": {}, "receipts": {}, "codes": {}, "blocks": {}, "missing": []}

cumulative = 0
block_txs = []
for idx, t in enumerate(txs):
    t["hash"] = h32("tx-" + t["label"])
    t["from"] = addr("sender-" + t["label"])
    pending = t.get("pending", False)
    wire = {
        "blockHash": None if pending else h32("block-hash"),
        "blockNumber": None if pending else q(BLOCK),
        "from": t["from"],
        "gas": q(t["gas"]),
        "gasPrice": q(t["gasPrice"]),
        "hash": t["hash"],
        "input": t["input"],
        "nonce": q(t["nonce"]),
        "to": t["to"],
        "transactionIndex": None if pending else q(idx),
        "value": q(t["value"]),
        "type": q(t["type"]),
        "chainId": "0x1",
        "v": "0x1",
        "r": h32("r" + t["label"]),
        "s": h32("s" + t["label"]),
    }
    if t["maxFee"] is not None:
        wire["maxFeePerGas"] = q(t["maxFee"])
        wire["maxPriorityFeePerGas"] = q(t["maxPrio"])
        wire["accessList"] = []
    responses.append({"method": "eth_getTransactionByHash", "params": [t["hash"]], "result": wire})
    golden["transactions"][t["hash"]] = {
        "from": t["from"],
        "to": t["to"],
        "gas": str(t["gas"]),
        "gas_price": str(t["gasPrice"]),
        "max_fee_per_gas": None if t["maxFee"] is None else str(t["maxFee"]),
        "max_priority_fee_per_gas": None if t["maxPrio"] is None else str(t["maxPrio"]),
        "value": str(t["value"]),
        "input": t["input"],
        "tx_type": t["type"],
        "block_number": 0 if pending else BLOCK,
        "nonce": t["nonce"],
    }

    if pending:
        responses.append({"method": "eth_getTransactionReceipt", "params": [t["hash"]], "result": None})
        golden["missing"].append({"method": "receipt", "hash": t["hash"]})
        continue
    block_txs.append(wire)

    gas_used = t["gas"] if t["label"] != "erc20" else 51_234
    if t["label"] == "create":
        gas_used = 1_234_567
    cumulative += gas_used
    effective = t["gasPrice"]
    n_logs = 2 if t["label"] == "erc20" else 0
    status = 0 if t["label"] == "create" else 1
    logs = [
        {"address": token_addr, "topics": [h32(f"topic{k}")], "data": "0x" + format(k, "064x"),
         "logIndex": q(k), "transactionHash": t["hash"], "blockNumber": q(BLOCK), "removed": False}
        for k in range(n_logs)
    ]
    receipt = {
        "blockHash": h32("block-hash"),
        "blockNumber": q(BLOCK),
        "contractAddress": addr("created") if t["to"] is None else None,
        "cumulativeGasUsed": q(cumulative),
        "effectiveGasPrice": q(effective),
        "from": t["from"],
        "gasUsed": q(gas_used),
        "logs": logs,
        "logsBloom": "0x" + "00" * 256,
        "status": q(status),
        "to": t["to"],
        "transactionHash": t["hash"],
        "transactionIndex": q(idx),
        "type": q(t["type"]),
    }
    responses.append({"method": "eth_getTransactionReceipt", "params": [t["hash"]], "result": receipt})
    golden["receipts"][t["hash"]] = {
        "gas_used": str(gas_used),
        "effective_gas_price": str(effective),
        "cumulative_gas_used": str(cumulative),
        "log_count": n_logs,
        "status": status,
        "to_is_contract": t["to"] == token_addr,
    }

responses.append({"method": "eth_getCode", "params": [eoa, "latest"], "result": "0x"})
responses.append({"method": "eth_getCode", "params": [token_addr, "latest"], "result": token})
golden["codes"][eoa] = "0x"
golden["codes"][token_addr] = token

block = {
    "number": q(BLOCK),
    "hash": h32("block-hash"),
    "parentHash": h32("parent"),
    "timestamp": q(1_693_000_000),
    "transactions": block_txs,
}
responses.append({"method": "eth_getBlockByNumber", "params": [q(BLOCK), True], "result": block})
responses.append({"method": "eth_getBlockByNumber", "params": [q(EMPTY_BLOCK), True],
                  "result": {"number": q(EMPTY_BLOCK), "hash": h32("empty"), "transactions": []}})
golden["blocks"][str(BLOCK)] = [t["hash"] for t in block_txs]
golden["blocks"][str(EMPTY_BLOCK)] = []
golden["missing"].append({"method": "transaction", "hash": h32("never-mined")})

OUT.mkdir(parents=True, exist_ok=True)
(OUT / "responses.json").write_text(json.dumps(responses, indent=1) + "\n")
(OUT / "golden.json").write_text(json.dumps(golden, indent=1, sort_keys=True) + "\n")
print(f"{len(responses)} responses, {len(block_txs)} transactions in block {BLOCK}")
