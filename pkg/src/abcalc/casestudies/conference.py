"""Smart conference: rooms steer participants to the session they follow.

Rooms run ``Service | Relocation | Updating``; a participant announces its
interest, waits for the room holding that session and then follows updates.
Relocation is started from outside by setting a room's ``newSession`` and
``relocate`` attributes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..model import System
from ..parser import load_program

CONFERENCE_DEFS = '''\
def Service = (x = "request" && interest = this.session)(x, y).
                (("interestRply", name)@(id = y).0 | Service);

def Relocation = <relocate = tt>
    ("update", this.session, this.newSession, name)
    @(interest = this.newSession || session = this.newSession).
    [prevSession := session, session := newSession, relocate := ff]Relocation;

def Updating = (x = "update" && z = this.session)(x, y, z, l).
    [prevSession := session, session := y]
    (("update", this.prevSession, this.session, this.name)
       @(interest = this.session || session = this.session).0
     | Updating);

def Upd = (x = "update" && z = this.interest)(x, y, z, l).[dest := l]Upd;
'''


@dataclass
class Room:
    id: str
    name: str
    session: str


@dataclass
class Participant:
    id: int
    topic: str


@dataclass
class ConferenceSpec:
    rooms: list
    participants: list
    relocations: list = field(default_factory=list)  # (step, room id, new session)

    def __post_init__(self):
        names = [r.name for r in self.rooms]
        if len(set(names)) != len(names):
            raise ValueError(f"room names must be unique: {names}")
        ids = [r.id for r in self.rooms] + [f"p{p.id}" for p in self.participants]
        if len(set(ids)) != len(ids):
            raise ValueError(f"component ids must be unique: {ids}")
        room_ids = {r.id for r in self.rooms}
        for _, rid, _ in self.relocations:
            if rid not in room_ids:
                raise ValueError(f"relocation names unknown room {rid!r}")


def default_spec(relocate_at: Optional[int] = None, participants: int = 6) -> ConferenceSpec:
    """Three rooms, participants spread over their sessions; optionally swap r1 and r2."""
    rooms = [Room("r1", "1st Floor, Room.101", "Theory"),
             Room("r2", "1st Floor, Room.102", "Systems"),
             Room("r3", "2nd Floor, Room.201", "Languages")]
    topics = [r.session for r in rooms]
    people = [Participant(i + 1, topics[i % len(topics)]) for i in range(participants)]
    reloc = [] if relocate_at is None else [(relocate_at, "r1", "Systems")]
    return ConferenceSpec(rooms, people, reloc)


def conference_source(spec: ConferenceSpec) -> str:
    lines = ["# Smart conference rooms and participants.", "", CONFERENCE_DEFS]
    for r in spec.rooms:
        lines.append(
            f'component {r.id} {{role = "Provider", session = {json.dumps(r.session)}, '
            f"name = {json.dumps(r.name)}, prevSession = undef, newSession = undef, "
            f"relocate = ff}} : {{role, session}} = Service | Relocation | Updating;")
    for p in spec.participants:
        lines.append(
            f"component p{p.id} {{id = {p.id}, interest = undef, dest = undef}} : "
            f"{{id, interest}} = let v = {json.dumps(p.topic)} in set(interest, v) "
            f'("request", this.id)@(role = "Provider").'
            f'(session = this.interest && x = "interestRply")(x, y).[dest := y]Upd;')
    for step, rid, new in spec.relocations:
        lines.append(f"inject {step} {rid} newSession = {json.dumps(new)};")
        lines.append(f"inject {step} {rid} relocate = tt;")
    return "\n".join(lines) + "\n"


def build_conference(spec: ConferenceSpec) -> System:
    system, _ = load_program(conference_source(spec))
    return system


def conference_scenario(spec: ConferenceSpec):
    return load_program(conference_source(spec))


def _rooms_and_participants(system: System):
    rooms, people = {}, []
    for c in system.components:
        if c.env.lookup("role") == "Provider":
            rooms[c.env["name"]] = c.env
        elif "dest" in c.env and "interest" in c.env:
            people.append(c)
        else:
            raise ValueError(f"component {c.id} is neither a room nor a participant")
    return rooms, people


def dest_inconsistencies(system: System) -> list:
    """Participants whose dest is not the room currently holding their interest."""
    rooms, people = _rooms_and_participants(system)
    bad = []
    for p in people:
        room = rooms.get(p.env["dest"]) if isinstance(p.env["dest"], str) else None
        if room is None or room["session"] != p.env["interest"]:
            bad.append(p.id)
    return bad


def check_dest_consistency(system: System) -> bool:
    return not dest_inconsistencies(system)
