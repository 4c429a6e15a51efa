#!/usr/bin/env python3
"""Regenerates oracle.json from independent reference implementations.

Requires: pycryptodome, eth-abi, py-cid, py-multihash.
"""
import hashlib
import json
import os

import cid
import eth_abi
import multihash
from Crypto.Hash import keccak


def keccak256(data: bytes) -> bytes:
    h = keccak.new(digest_bits=256)
    h.update(data)
    return h.digest()


def bmt_root(chunk: bytes) -> bytes:
    buf = chunk + b"\x00" * (4096 - len(chunk))
    level = [buf[i : i + 32] for i in range(0, 4096, 32)]
    while len(level) > 1:
        level = [keccak256(level[i] + level[i + 1]) for i in range(0, len(level), 2)]
    return level[0]


def bmt_address(chunk: bytes, span: int) -> bytes:
    return keccak256(span.to_bytes(8, "little") + bmt_root(chunk))


def cid_v0(digest: bytes) -> cid.CIDv0:
    return cid.make_cid(0, "dag-pb", multihash.encode(digest, "sha2-256"))


def cid_v1(digest: bytes) -> cid.CIDv1:
    return cid.make_cid(1, "raw", multihash.encode(digest, "sha2-256"))


def main():
    out = {}

    sigs = [
        "transfer(address,uint256)",
        "store(string)",
        "retrieve()",
        "reset()",
        "data()",
        "anchor(bytes)",
        "store(uint256,bool,address,string,bytes)",
    ]
    out["selectors"] = [{"signature": s, "selector": keccak256(s.encode())[:4].hex()} for s in sigs]

    out["event_topics"] = [
        {"signature": s, "topic": keccak256(s.encode()).hex()}
        for s in ["DataStored(uint256,string)", "Transfer(address,address,uint256)"]
    ]

    abi_cases = [
        (["bool"], [True]),
        (["string"], ["abc"]),
        (["uint256", "string"], [7, "x" * 32]),
        (["uint256", "bool", "address", "string", "bytes"],
         [2**256 - 1, False, "0x" + "11" * 20, "hello world", bytes(range(40))]),
        (["bytes", "string"], [b"", ""]),
        (["string"], ["a" * 33]),
    ]
    out["abi"] = []
    for types, values in abi_cases:
        enc = eth_abi.encode(types, values)
        shown = [v.hex() if isinstance(v, bytes) else (str(v) if isinstance(v, int) and not isinstance(v, bool) else v) for v in values]
        out["abi"].append({"types": types, "values": shown, "encoded": enc.hex()})

    bmt_cases = [
        ("empty", b"", 0),
        ("single_byte", b"\x01", 1),
        ("zeros_4096", b"\x00" * 4096, 4096),
        ("ascii_hello", b"hello world", 11),
        ("counting_4096", bytes(i % 256 for i in range(4096)), 4096),
        ("counting_1000", bytes((7 * i + 3) % 256 for i in range(1000)), 1000),
        ("span_larger_than_chunk", b"\xff" * 64, 8192),
    ]
    out["bmt"] = [
        {"name": n, "chunk": c.hex(), "span": s, "address": bmt_address(c, s).hex()}
        for n, c, s in bmt_cases
    ]

    cid_inputs = [
        ("sha256_empty", hashlib.sha256(b"").digest()),
        ("sha256_single_byte", hashlib.sha256(b"\x01").digest()),
        ("unixfs_empty_file", hashlib.sha256(bytes.fromhex("0a0408021800")).digest()),
        ("sha256_hello", hashlib.sha256(b"hello world").digest()),
        ("zero_digest", b"\x00" * 32),
        ("ff_digest", b"\xff" * 32),
    ]
    out["cid"] = []
    for n, d in cid_inputs:
        v0 = cid_v0(d)
        v1 = cid_v1(d)
        out["cid"].append({
            "name": n,
            "digest": d.hex(),
            "v0_text": str(v0),
            "v0_binary": v0.buffer.hex(),
            "v1_text": v1.encode("base32").decode(),
            "v1_binary": v1.buffer.hex(),
        })

    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "oracle.json")
    with open(path, "w") as f:
        json.dump(out, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
