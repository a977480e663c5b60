"""Capture real backend responses as JSON fixtures for the frontend tests.

Run from the repository root:

    python3 frontend/scripts/generate_fixtures.py
"""

import json
import os

import numpy as np
from fastapi.testclient import TestClient

from symbolrec.server import create_app
from symbolrec.snapshot import ModelSnapshot
from symbolrec.synthgen import SynthConfig, generate

OUT = os.path.join(os.path.dirname(__file__), "..", "test", "fixtures")


def dump(name, obj):
    with open(os.path.join(OUT, name), "w") as f:
        json.dump(obj, f, indent=2)


def main():
    cfg = SynthConfig(
        users=3000, base_symbol_count=30, archetype_count=5, career_count=4, seed=7
    )
    corpus = generate(cfg)
    snap = ModelSnapshot(store=corpus.store, lexicon=corpus.lexicon)

    # the modal answer pattern of archetype 0
    pattern = {
        q.id: q.options[int(np.argmax(corpus.truth.answer_dists[0, i]))]
        for i, q in enumerate(corpus.schema.questions)
    }
    reference_user = {
        q.id: q.options[i % 3] for i, q in enumerate(corpus.schema.questions)
    }

    client = TestClient(create_app(snap, seed=0, users=[reference_user]))

    dump("schema.json", client.get("/schema").json())
    dump("symbols.json", client.get("/symbols").json())
    rank_all = client.post("/rank", json={"answers": pattern}).json()
    dump("rank_archetype.json", rank_all)
    rank_area = client.post(
        "/rank", json={"answers": pattern, "focus": ["area"]}
    ).json()
    dump("rank_archetype_area.json", rank_area)
    emb = client.get("/embedding").json()
    dump("embedding.json", emb)
    place = client.post("/place", json={"answers": reference_user}).json()
    dump("place_user.json", place)
    dump(
        "meta.json",
        {
            "archetype_area": "area:0",
            "archetype_answers": pattern,
            "reference_user_answers": reference_user,
            "reference_user_id": "user:0",
        },
    )

    top_area = rank_area["entries"][0]["id"]
    if top_area != "area:0":
        raise SystemExit(f"expected area:0 on top of the area ranking, got {top_area}")
    ref = next(p for p in emb["points"] if p["id"] == "user:0")
    d = np.hypot(
        place["coords"][0] - ref["coords"][0], place["coords"][1] - ref["coords"][1]
    )
    if d >= 1e-6:
        raise SystemExit(f"placed marker is {d} away from the embedded reference user")
    print("fixtures written to", os.path.abspath(OUT))


if __name__ == "__main__":
    main()
