"""Swarm of rescue robots: ``(Rescuer + Explorer) | RandWalk | IsMoving``.

Sensor readings (victimPerceived, vPosition, count, collision, batteryLevel,
position) are never computed by the robots; scenarios set them through
scripted injections.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..model import System
from ..parser import load_program
from ..values import format_value

# Helper's body is inlined where an explorer accepts an ack, since it reads the
# received victim position and count.
SWARM_DEFS = '''\
def Rescuer = <this.victimPerceived = tt>
    ()@ff.[this.state := "stop", this.role := "rescuer"]
    (x = "qry" && role = "explorer")(x, y).
    ("ack", this.vPosition, this.count)@(id = y).0;

def Explorer = ("qry", this.id)@(role = "rescuer" || role = "helper").
    (((role = "rescuer" || role = "helper") && x = "ack")(x, vpos, c).[this.role := "helper"]
        ()@ff.[this.vPosition := vpos, this.target := vpos]
        (<this.position = this.target> set(this.role, "rescuer") 0
         | <c > 1>(x = "qry" && role = "explorer")(x, y).
             ("ack", this.vPosition, c - 1)@(id = y).0)
     + Rescuer
     + Explorer);

def RandWalk = ()@ff.[this.direction := angle(this.rng), this.rng := nextrand(this.rng)]
    <this.collision = tt> RandWalk;

def IsMoving = <this.state = "move" && this.batteryLevel <= 20>
    set(this.state, "stop")
    <this.batteryLevel >= 90>
    set(this.state, "move") IsMoving;
'''

LOW_BATTERY = 20
RECHARGED = 90


@dataclass
class SwarmSpec:
    robots: int = 4
    seed: int = 0
    injections: list = field(default_factory=list)  # (step, robot index, attr, value)

    def __post_init__(self):
        if self.robots < 1:
            raise ValueError("need at least one robot")


def victim_scenario(robots: int = 4, count: int = 2, victim=(3, 4), found_at: int = 4,
                    arrive_at: int = 200, seed: int = 0) -> SwarmSpec:
    """Robot 1 perceives a victim; later every other robot reaches the victim's position."""
    inj = [(found_at, 1, "vPosition", tuple(victim)), (found_at, 1, "count", count),
           (found_at, 1, "victimPerceived", True)]
    inj += [(arrive_at, r, "position", tuple(victim)) for r in range(2, robots + 1)]
    return SwarmSpec(robots, seed, inj)


def battery_scenario(low_at=3, mid_at=30, high_at=60, seed: int = 0) -> SwarmSpec:
    return SwarmSpec(1, seed, [(low_at, 1, "batteryLevel", 15), (mid_at, 1, "batteryLevel", 50),
                               (high_at, 1, "batteryLevel", 95)])


def swarm_source(spec: SwarmSpec) -> str:
    rng = random.Random(spec.seed)
    lines = ["# Rescue robot swarm.", "", SWARM_DEFS]
    for r in range(1, spec.robots + 1):
        lines.append(
            f'component r{r} {{id = {r}, role = "explorer", state = "move", victimPerceived = ff, '
            f"vPosition = undef, count = undef, target = undef, direction = undef, "
            f"collision = ff, batteryLevel = 100, position = <0, 0>, "
            f"rng = {rng.randrange(2 ** 31)}}} : {{id, role}} "
            f"= (Rescuer + Explorer) | RandWalk | IsMoving;")
    for step, r, attr, value in spec.injections:
        lines.append(f"inject {step} r{r} {attr} = {format_value(value)};")
    return "\n".join(lines) + "\n"


def build_swarm(robot_count: int, seed: int = 0) -> System:
    system, _ = load_program(swarm_source(SwarmSpec(robot_count, seed)))
    return system


def swarm_scenario(spec: SwarmSpec):
    return load_program(swarm_source(spec))


def roles(system: System) -> dict:
    return {c.id: c.env["role"] for c in system.components}


def rescuer_count(system: System) -> int:
    return sum(1 for r in roles(system).values() if r == "rescuer")
