"""Builders rendering channel, group and publish/subscribe interaction in AbC.

These are shallow embeddings: the channel name travels as the first message
field, group membership is an exposed attribute, and subscribers filter on the
publisher's exposed topic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .model import (
    FF, NIL, TT, Atom, Attr, Component, Const, Env, Input, Op, Output, ThisAttr, Var,
)


def _expr(x):
    return x if isinstance(x, (Const, Var, Attr, ThisAttr, Op)) else Const(x)


@dataclass(frozen=True)
class EncodingTemplate:
    name: str  # channel | group | pubsub
    parameters: dict = field(default_factory=dict)
    roles: dict = field(default_factory=dict)  # role name -> core process


def bare_component(cid: str, process) -> Component:
    """A component with empty environment and interface."""
    return Component(cid, Env(), frozenset(), process)


# ---------------------------------------------------------------- channels


class ChannelPair(NamedTuple):
    sender: object
    receiver: object


def channel_pair(chan: str, payload, cont=NIL, sender_cont=NIL) -> ChannelPair:
    """``(chan, payload)@tt.Q`` and ``(x = chan)(x, y).P``."""
    sender = Output((Const(chan), _expr(payload)), TT, (), sender_cont)
    return ChannelPair(sender, channel_receiver(chan, cont))


def channel_receiver(chan: str, cont=NIL):
    return Input(Atom("=", (Var("x"), Const(chan))), ("x", "y"), (), cont)


# ------------------------------------------------------------------ groups


class GroupOps(NamedTuple):
    join: object
    leave_to: object
    send: object
    receive: object


def group_ops(group_attr: str = "group") -> GroupOps:
    """Builders over a group attribute that every member exposes."""

    def join(g, cont=NIL):
        return Output((), FF, ((group_attr, _expr(g)),), cont)

    def leave_to(g, cont=NIL):
        # leaving is moving to another group value, possibly undef
        return Output((), FF, ((group_attr, _expr(g)),), cont)

    def send(g, msg, cont=NIL):
        return Output((_expr(msg),), Atom("=", (Attr(group_attr), _expr(g))), (), cont)

    def receive(cont=NIL, sender_group=None, binder="x"):
        pred = TT if sender_group is None else Atom("=", (Attr(group_attr), _expr(sender_group)))
        return Input(pred, (binder,), (), cont)

    return GroupOps(join, leave_to, send, receive)


def group_member(cid, group, process, group_attr="group") -> Component:
    return Component(cid, Env({group_attr: group}), frozenset({group_attr}), process)


# ---------------------------------------------------------- publish/subscribe


class PubSub(NamedTuple):
    publish: object
    subscribe: object


def pubsub_pair(topic_attr: str = "topic", subscription_attr: str = "subscription") -> PubSub:
    """Publishers broadcast under ``tt``; subscribers match the exposed topic."""

    def publish(msg, cont=NIL):
        return Output((_expr(msg),), TT, (), cont)

    def subscribe(cont=NIL, binder="x"):
        pred = Atom("=", (Attr(topic_attr), ThisAttr(subscription_attr)))
        return Input(pred, (binder,), (), cont)

    return PubSub(publish, subscribe)


def publisher(cid, topic, process, topic_attr="topic") -> Component:
    return Component(cid, Env({topic_attr: topic}), frozenset({topic_attr}), process)


def subscriber(cid, subscription, process, subscription_attr="subscription") -> Component:
    return Component(cid, Env({subscription_attr: subscription}),
                     frozenset({subscription_attr}), process)


# --------------------------------------------------------------- templates


def channel_template(chan="a", payload="msg") -> EncodingTemplate:
    pair = channel_pair(chan, payload)
    return EncodingTemplate("channel", {"channel": chan},
                            {"sender": pair.sender, "receiver": pair.receiver})


def group_template(group_attr="group", group="a", msg="msg") -> EncodingTemplate:
    ops = group_ops(group_attr)
    return EncodingTemplate("group", {"group_attr": group_attr}, {
        "join": ops.join(group), "leave_to": ops.leave_to("c"),
        "send": ops.send(group, msg), "receive": ops.receive()})


def pubsub_template(topic_attr="topic", subscription_attr="subscription",
                    msg="msg") -> EncodingTemplate:
    ps = pubsub_pair(topic_attr, subscription_attr)
    return EncodingTemplate("pubsub", {"topic_attr": topic_attr,
                                       "subscription_attr": subscription_attr},
                            {"publisher": ps.publish(msg), "subscriber": ps.subscribe()})


# ------------------------------------------------------------ demo programs


def _program(title, components) -> str:
    from .printer import pp_component
    lines = [f"# {title}"] + [f"component {pp_component(c)};" for c in components]
    return "\n".join(lines) + "\n"


def channel_demo_components():
    pair = channel_pair("a", "msg")
    return [bare_component("sender", pair.sender),
            bare_component("recv_a", pair.receiver),
            bare_component("recv_b", channel_receiver("b"))]


def group_demo_components():
    """Component 1 sends to group a; 2 may move to c, 7 may join a first."""
    ops = group_ops("group")
    from .model import Par
    return [group_member("g1", "b", ops.send("a", "msg")),
            group_member("g2", "a", Par(ops.receive(sender_group="b"), ops.leave_to("c"))),
            group_member("g7", "c", Par(ops.receive(sender_group="b"), ops.join("a")))]


def pubsub_demo_components(subscriptions=("news", "sports", "news")):
    ps = pubsub_pair()
    comps = [publisher("pub", "news", ps.publish("msg"))]
    comps += [subscriber(f"sub{k}", s, ps.subscribe()) for k, s in enumerate(subscriptions, 1)]
    return comps


def channel_demo_source() -> str:
    return _program("Channel-based interaction: the channel name is the first field.",
                    channel_demo_components())


def group_demo_source() -> str:
    return _program("Group-based interaction: membership is the exposed group attribute.",
                    group_demo_components())


def pubsub_demo_source() -> str:
    return _program("Topic-based publish/subscribe.", pubsub_demo_components())
