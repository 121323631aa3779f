"""The shipped ``.abc`` corpus and the generators that produce it.

Every corpus file is generated from the builders, so the CLI and the test
suite run exactly the text the builders emit.  ``python -m abcalc.catalog``
rewrites the corpus directory.
"""

from __future__ import annotations

import sys
from pathlib import Path

from . import encodings
from .casestudies import allocation, colouring, conference, swarm

CORPUS_DIR = Path(__file__).with_name("corpus")


def corpus_sources() -> dict:
    """File name -> program text for every shipped program."""
    return {
        "nil.abc": "# A single idle component.\ncomponent idle {} : {} = 0;\n",
        "empty.abc": "# A system without components.\n",
        "channel.abc": encodings.channel_demo_source(),
        "group.abc": encodings.group_demo_source(),
        "pubsub.abc": encodings.pubsub_demo_source(),
        "colouring_k1.abc": colouring.colouring_source(colouring.complete_graph(1)),
        "colouring_k2.abc": colouring.colouring_source(colouring.complete_graph(2)),
        "colouring_k3.abc": colouring.colouring_source(colouring.complete_graph(3)),
        "colouring_c4.abc": colouring.colouring_source(colouring.GRAPHS["c4"]()),
        "alloc_2x2.abc": allocation.allocation_source(allocation.example_spec()),
        "alloc_late.abc": allocation.allocation_source(allocation.AllocationSpec(
            [("m0", "H"), ("m1", "L")], [("c0", "L"), ("c1", "L"), ("c2", "H")],
            late={"c2": 150})),
        "conference.abc": conference.conference_source(conference.default_spec(relocate_at=40)),
        "swarm.abc": swarm.swarm_source(swarm.victim_scenario()),
        "swarm_battery.abc": swarm.swarm_source(swarm.battery_scenario()),
    }


def corpus_path(name: str) -> Path:
    return CORPUS_DIR / name


def write_corpus(directory=CORPUS_DIR) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in corpus_sources().items():
        (directory / name).write_text(text, encoding="utf-8")
        written.append(directory / name)
    return written


if __name__ == "__main__":
    for p in write_corpus(sys.argv[1] if len(sys.argv) > 1 else CORPUS_DIR):
        print(p)
