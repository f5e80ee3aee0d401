"""Record a real service session as a request/response fixture for the UI tests.

Usage (from the repository root, with the navex package installed):

    python3 frontend/scripts/record_fixture.py frontend/test/fixtures/session.json
"""
import json
import sys

from fastapi.testclient import TestClient

from navex.config import SimConfig
from navex.service import create_app
from navex.world import Pose, load_world

WORLD_PATH = "worlds/office.world"


def main(out_path: str) -> None:
    with open(WORLD_PATH, "r", encoding="utf-8") as fh:
        world = load_world(fh.read(), name="office")
    app = create_app(world, SimConfig(), seed=0, start=Pose(5.0, 5.0, 0.0))
    client = TestClient(app)
    exchanges = []

    def record(method: str, path: str, body=None):
        if method == "GET":
            resp = client.get(path)
        else:
            resp = client.post(path, json=body)
        exchanges.append({"method": method, "path": path, "body": body,
                          "status": resp.status_code, "response": resp.json()})
        return resp.json()

    record("GET", "/world")
    record("GET", "/state")
    record("POST", "/target", {"x": 16.0, "y": 4.0})
    # run until arrival so the model holds regions, doors, a trail, conveyors
    while True:
        step = record("POST", "/step", {"steps": 10})
        if step["arrived"]:
            break
    record("POST", "/target", {"x": 4.0, "y": 16.0})
    record("POST", "/step", {"steps": 8})
    record("GET", "/model")
    record("GET", "/records")

    state = record("GET", "/state")
    last = state["last_record"]
    alt_index = next(i for i, _ in enumerate(last["candidates"])
                     if i != last["chosen"])
    alt = last["candidates"][alt_index]
    record("POST", "/ask", {"kind": "why"})
    record("POST", "/ask", {"kind": "confidence"})
    record("POST", "/ask", {"kind": "why_not",
                            "alternative": {"kind": alt["kind"],
                                            "index": alt["index"]}})
    record("POST", "/ask", {"kind": "hypothetical", "pose": [8.0, 8.0, 0.5]})
    record("GET", "/state")

    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump({"exchanges": exchanges}, fh, indent=1, sort_keys=True)
    print(f"recorded {len(exchanges)} exchanges to {out_path}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else
         "frontend/test/fixtures/session.json")
