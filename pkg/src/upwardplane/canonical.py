"""Canonical byte form and digest of embedding signatures."""

from __future__ import annotations

import hashlib
import json

from .embedding import EmbeddingSignature

FORMAT_VERSION = 1


def signature_to_obj(sig: EmbeddingSignature) -> dict:
    comps = []
    for c in sig.components:
        comps.append({
            "key": c.key,
            "rotations": {v: list(cyc) for v, cyc in c.rotations},
            "outer_face": [list(h) for h in c.outer_face],
            "parent": None if c.parent is None else {
                "component": c.parent[0],
                "face": [list(h) for h in c.parent[1]],
            },
        })
    return {"format_version": FORMAT_VERSION, "components": comps}


def signature_bytes(sig: EmbeddingSignature) -> bytes:
    return json.dumps(signature_to_obj(sig), sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode("ascii")


def signature_digest(sig: EmbeddingSignature) -> str:
    return hashlib.sha256(signature_bytes(sig)).hexdigest()


def signature_document(sig: EmbeddingSignature) -> dict:
    doc = signature_to_obj(sig)
    doc["digest"] = signature_digest(sig)
    return doc
