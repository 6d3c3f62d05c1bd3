"""Online input sequences and their file format.

Files are JSON documents with every rational written as a ``"p/q"`` string,
so a save/load round trip is bit-exact.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .. import problems as P
from ..delay import DelayFunction
from ..errors import InputError
from ..graph import Graph
from ..rational import fmt, frac

FORMAT_VERSION = 1
DEADLINE = "deadline"
DELAY = "delay"


@dataclass
class RequestSpec:
    rid: int
    payload: object
    release: Fraction
    deadline: Optional[Fraction] = None
    delay: Optional[DelayFunction] = None


@dataclass
class InstanceSpec:
    instance: P.ProblemInstance
    requests: List[RequestSpec]
    mode: str = DEADLINE
    name: str = "instance"
    seed: Optional[int] = None
    meta: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.requests)

    def violations(self) -> List[str]:
        out = list(P.validate_instance(self.instance, [r.payload for r in self.requests]))
        if self.mode not in (DEADLINE, DELAY):
            out.append(f"unknown mode {self.mode!r}")
        ids = [r.rid for r in self.requests]
        if len(set(ids)) != len(ids):
            out.append("request ids must be unique")
        for a, b in zip(self.requests, self.requests[1:]):
            if b.release < a.release:
                out.append(f"releases must be nondecreasing (request {b.rid})")
        for r in self.requests:
            if self.mode == DEADLINE:
                if r.deadline is None:
                    out.append(f"request {r.rid} has no deadline")
                elif r.deadline < r.release:
                    out.append(f"request {r.rid}: deadline before release")
            elif self.mode == DELAY:
                if r.delay is None:
                    out.append(f"request {r.rid} has no delay function")
                elif r.delay.release != r.release:
                    out.append(f"request {r.rid}: delay starts at {r.delay.release}, release is {r.release}")
        return out

    def validate(self) -> None:
        probs = self.violations()
        if probs:
            raise InputError("; ".join(probs))


def _opt(values):
    return None if values is None else [fmt(values[i]) for i in sorted(values)]


def spec_to_dict(spec: InstanceSpec) -> dict:
    g = spec.instance.graph
    reqs = []
    for r in spec.requests:
        d = {"id": r.rid, "payload": P.payload_to_dict(r.payload), "release": fmt(r.release)}
        if r.deadline is not None:
            d["deadline"] = fmt(r.deadline)
        if r.delay is not None:
            d["delay"] = r.delay.to_dict()
        reqs.append(d)
    return {
        "format_version": FORMAT_VERSION,
        "name": spec.name,
        "seed": spec.seed,
        "mode": spec.mode,
        "kind": spec.instance.kind,
        "root": spec.instance.root,
        "graph": {
            "nodes": g.node_count,
            "directed": g.directed,
            "edges": [[e.tail, e.head, fmt(e.cost)] for e in g.edges],
            "node_costs": _opt(g.node_costs),
            "edge_weights": _opt(g.edge_weights),
        },
        "requests": reqs,
        "meta": spec.meta,
    }


def spec_from_dict(d: dict) -> InstanceSpec:
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise InputError(f"unsupported instance format_version {version!r}")
    gd = d["graph"]
    g = Graph.build(gd["nodes"], [(u, v, frac(c)) for u, v, c in gd["edges"]], gd["directed"],
                    gd.get("node_costs"), gd.get("edge_weights"))
    inst = P.ProblemInstance(d["kind"], g, d.get("root"))
    reqs = []
    for r in d["requests"]:
        reqs.append(RequestSpec(
            int(r["id"]), P.payload_from_dict(r["payload"]), frac(r["release"]),
            frac(r["deadline"]) if r.get("deadline") is not None else None,
            DelayFunction.from_dict(r["delay"]) if r.get("delay") is not None else None))
    return InstanceSpec(inst, reqs, d["mode"], d.get("name", "instance"), d.get("seed"), d.get("meta", {}))


def dumps(spec: InstanceSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=1, sort_keys=False)


def loads(text: str) -> InstanceSpec:
    return spec_from_dict(json.loads(text))


def save(spec: InstanceSpec, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(spec))
        fh.write("\n")


def load(path) -> InstanceSpec:
    with open(path) as fh:
        return loads(fh.read())
