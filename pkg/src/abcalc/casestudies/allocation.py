"""Stable allocation of map units to server clusters.

Units (``I | T | M | N``) propose to clusters by rating; clusters
(``A | R | D``) accept units that improve their current match.  Units rank
cluster ratings H before L; clusters rank unit demands L before H.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from ..model import System
from ..parser import load_program

# Process P' of the proposal handler is spelled Ip; the reception handler body
# is inlined into R so that each proposal spawns its own substituted copy.
ALLOCATION_DEFS = '''\
def I = <ref = 0>("propose", this.demand, this.id_i, 0)@(rating = "H").
            [timer := 0, dissolve := ff{count}]Ip
      + <ref = 1>("propose", this.demand, this.id_i, 1)@(rating = "L").
            [timer := 0, dissolve := ff{count}]Ip;

def T = <timer < time_out>()@ff.[timer := timer + 1]T
      + <timer = time_out>()@ff.[timer := timer + 1, ref := (ref + 1) % 2, success := ff]T;

def Ip = <lock = 0 && !success && timer > time_out>I
       + <lock = 0 && dissolve>I
       + <lock = 0 && arrival && (bof <= rank - 1)>
            ("dissolve")@(id_r = this.partner).
            [arrival := ff, success := ff, ref := bof, bof := 2, rank := 2,
             exPartner := partner, partner := -1]I;

def N = (x = "accept" && ((z != this.ref) || this.success))(x, y, z).
            (("ack", -1)@(id_r = y).0 | N);

def M = <!success>(x = "accept" && z = this.ref)(x, y, z).
            [lock := 1, success := tt, rank := ref, exPartner := partner,
             timer := time_out + 1]
            ("ack", y)@tt.[lock := 0, partner := y]M
      + (x = "dissolve" && id_r = this.partner)(x).
            [dissolve := tt, success := ff, ref := 0, rank := 2, partner := -1]M
      + <partner != -1>(x = "arrived" && rating = "H")(x).[arrival := tt, bof := 0]M
      + <bof != 0 && partner != -1>(x = "arrived" && rating = "L")(x).
            [arrival := tt, bof := 1]M;

def A = ("arrived")@tt.0;

def R = (x = "propose")(x, y, z, n).(
          <lock = 0>(
            if rank(y) < rank then
              ("accept", id_r, n)@(id_i = z).[lock := 1](
                (if partner != -1 then
                   (e = "ack" && f = this.id_r && id_i = z)(e, f).
                     [exPartner := partner, partner := z, rank := rank(y)]
                     ("dissolve")@(id_i = this.exPartner).[lock := 0]0
                 else
                   (e = "ack" && f = this.id_r && id_i = z)(e, f).
                     [partner := z, rank := rank(y), lock := 0]0)
                + (e = "ack" && f != this.id_r && id_i = z)(e, f).[lock := 0]0)
            else 0)
          | R);

def D = (x = "dissolve" && id_i = this.partner)(x).
            [rank := 2, exPartner := partner, partner := -1]D;
'''

RATING_PREF = {"H": 0, "L": 1}   # unit side: lower is better
DEMAND_RANK = {"L": 0, "H": 1}   # cluster side: lower is better, as rank()
UNPAIRED = 2


@dataclass
class AllocationSpec:
    units: list                      # [(id, demand)]
    clusters: list                   # [(id, rating)]
    time_out: Optional[int] = None   # default 3 * number of components
    late: dict = field(default_factory=dict)  # cluster id -> step it appears
    count_proposals: bool = False

    def __post_init__(self):
        ids = [u for u, _ in self.units] + [c for c, _ in self.clusters]
        if len(set(ids)) != len(ids):
            raise ValueError(f"ids must be unique: {ids}")
        for _, d in self.units + self.clusters:
            if d not in ("H", "L"):
                raise ValueError(f"demand/rating must be 'H' or 'L', got {d!r}")
        for c in self.late:
            if c not in dict(self.clusters):
                raise ValueError(f"late arrival names unknown cluster {c!r}")

    @property
    def effective_time_out(self) -> int:
        if self.time_out is not None:
            return self.time_out
        return 3 * (len(self.units) + len(self.clusters))


def example_spec(**kw) -> AllocationSpec:
    """Two units and two clusters: m0 H, m1 L; c0 H, c1 L."""
    return AllocationSpec([("m0", "H"), ("m1", "L")], [("c0", "H"), ("c1", "L")], **kw)


def random_spec(n_units: int, n_clusters: int, seed: int, **kw) -> AllocationSpec:
    rng = random.Random(seed)
    return AllocationSpec([(f"m{i}", rng.choice("HL")) for i in range(n_units)],
                          [(f"c{j}", rng.choice("HL")) for j in range(n_clusters)], **kw)


def allocation_source(spec: AllocationSpec) -> str:
    count = ", proposals := proposals + 1" if spec.count_proposals else ""
    t = spec.effective_time_out
    lines = ["# Stable allocation of map units to clusters.", "",
             f"const time_out = {t};", "", ALLOCATION_DEFS.replace("{count}", count)]
    for uid, demand in spec.units:
        extra = ", proposals = 0" if spec.count_proposals else ""
        lines.append(
            f'component {uid} {{demand = "{demand}", id_i = "{uid}", partner = -1, '
            f"exPartner = -1, ref = 0, success = ff, arrival = ff, ack = tt, dissolve = ff, "
            f"rank = 2, bof = 2, lock = 0, timer = {t + 1}{extra}}} : {{demand, id_i}} "
            f"= I | T | M | N;")
    for cid, rating in spec.clusters:
        body = "A | R | D"
        present = ""
        if cid in spec.late:
            body = "<present>(A | R | D)"
            present = ", present = ff"
        lines.append(
            f'component {cid} {{rating = "{rating}", id_r = "{cid}", partner = -1, '
            f"exPartner = -1, rank = 2, lock = 0{present}}} : {{rating, id_r}} = {body};")
    for cid, step in sorted(spec.late.items()):
        lines.append(f"inject {step} {cid} present = tt;")
    return "\n".join(lines) + "\n"


def build_stable_allocation(spec: AllocationSpec) -> System:
    system, _ = load_program(allocation_source(spec))
    return system


def allocation_scenario(spec: AllocationSpec):
    """The system together with its scripted late-arrival injections."""
    return load_program(allocation_source(spec))


# ------------------------------------------------------------------ oracles


class InconsistentPartners(ValueError):
    """Partner attributes of units and clusters do not agree."""


def _sides(system: System):
    units, clusters = {}, {}
    for c in system.components:
        if "id_i" in c.env:
            units[c.env["id_i"]] = c.env
        elif "id_r" in c.env:
            clusters[c.env["id_r"]] = c.env
        else:
            raise ValueError(f"component {c.id} is neither a unit nor a cluster")
    return units, clusters


def matching(system: System) -> dict:
    """Unit id -> cluster id, after checking partner attributes agree."""
    units, clusters = _sides(system)
    pairs = {}
    for u, env in units.items():
        p = env["partner"]
        if p == -1:
            continue
        if p not in clusters:
            raise InconsistentPartners(f"unit {u} names unknown cluster {p!r}")
        if clusters[p]["partner"] != u:
            raise InconsistentPartners(
                f"unit {u} names {p} but {p} names {clusters[p]['partner']!r}")
        pairs[u] = p
    for c, env in clusters.items():
        p = env["partner"]
        if p != -1 and pairs.get(p) != c:
            raise InconsistentPartners(f"cluster {c} names {p!r} which does not name it back")
    return pairs


def blocking_pairs(system: System) -> list:
    """All (unit, cluster) pairs that would both rather be matched to each other."""
    units, clusters = _sides(system)
    pairs = matching(system)
    owner = {c: u for u, c in pairs.items()}
    result = []
    for u, uenv in units.items():
        mine = pairs.get(u)
        u_now = RATING_PREF[clusters[mine]["rating"]] if mine is not None else UNPAIRED
        for c, cenv in clusters.items():
            if c == mine:
                continue
            theirs = owner.get(c)
            c_now = DEMAND_RANK[units[theirs]["demand"]] if theirs is not None else UNPAIRED
            if RATING_PREF[cenv["rating"]] < u_now and DEMAND_RANK[uenv["demand"]] < c_now:
                result.append((u, c))
    return result


def check_stable_matching(system: System) -> bool:
    """Partners agree and no blocking pair exists; raises on inconsistent partners."""
    return not blocking_pairs(system)


def proposal_counts(events, spec_or_units=None) -> dict:
    """Propose messages sent by each unit, read off a trace."""
    counts = {}
    if spec_or_units is not None:
        units = spec_or_units.units if isinstance(spec_or_units, AllocationSpec) else spec_or_units
        counts = {u: 0 for u, *_ in units}
    for ev in events:
        if ev.kind == "send" and ev.values and ev.values[0] == "propose":
            counts[ev.sender] = counts.get(ev.sender, 0) + 1
    return counts


def proposal_bound(n_clusters: int, branches: int = 2) -> int:
    return branches * (2 * n_clusters - 1)
