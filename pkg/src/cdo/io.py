"""JSON instance/outcome files and the edge-list graph format.

Instance files::

    {"format": "cdo/1",
     "agenda": [{"id": "a1", "weight": 3}, ...],
     "feasibility": {"constraints": [{"terms": {"a1": 3, "a2": 1}, "sense": "<=", "rhs": 4}],
                     "aux": {"y": [0, 5]}},
     "rationality": {"constraints": [], "aux": {}},
     "profile": [[1, 0], [0, 1]]}

``feasibility`` and ``rationality`` may also be given as a bare list of
constraints.  Outcome files are ``{"format": "cdo/1", "outcomes":
[{"bits": [...], "score": 5}, ...]}`` with optional rule metadata.

Graph files start with the node count (nodes are labelled ``1..N``),
followed by one ``i j cost`` line per edge; ``#`` starts a comment.
"""

from __future__ import annotations

import json
from pathlib import Path

from cdo.core import (
    Agenda,
    CdoInstance,
    ConstraintSet,
    LinearConstraint,
    Outcome,
    Profile,
    StructuralError,
)
from cdo.domains import Graph, ScheduleSpec

FORMAT = "cdo/1"


def _check_format(doc: dict, what: str) -> None:
    if not isinstance(doc, dict):
        raise StructuralError(f"{what} must be a JSON object")
    fmt = doc.get("format")
    if fmt != FORMAT:
        raise StructuralError(f"{what} has format {fmt!r}, expected {FORMAT!r}")


def constraint_set_to_dict(cs: ConstraintSet) -> dict:
    return {
        "constraints": [
            {"terms": dict(con.terms), "sense": con.sense, "rhs": con.rhs}
            for con in cs.constraints
        ],
        "aux": {v: [lo, hi] for v, (lo, hi) in cs.aux.items()},
    }


def constraint_set_from_dict(doc) -> ConstraintSet:
    if doc is None:
        return ConstraintSet()
    if isinstance(doc, list):
        doc = {"constraints": doc}
    rows = []
    for row in doc.get("constraints", []):
        try:
            rows.append(LinearConstraint(row["terms"], row["sense"], row["rhs"]))
        except KeyError as exc:
            raise StructuralError(f"constraint is missing field {exc}") from None
    aux = {v: tuple(b) for v, b in doc.get("aux", {}).items()}
    return ConstraintSet(rows, aux)


def instance_to_dict(instance: CdoInstance) -> dict:
    return {
        "format": FORMAT,
        "agenda": [{"id": a, "weight": w} for a, w in zip(instance.agenda.items, instance.agenda.weights)],
        "feasibility": constraint_set_to_dict(instance.feasibility),
        "rationality": constraint_set_to_dict(instance.rationality),
        "profile": [list(b) for b in instance.profile.ballots],
    }


def instance_from_dict(doc: dict) -> CdoInstance:
    _check_format(doc, "instance file")
    try:
        entries = doc["agenda"]
        agenda = Agenda([e["id"] for e in entries], [e.get("weight", 1) for e in entries])
    except (KeyError, TypeError):
        raise StructuralError("agenda must be a list of {id, weight} objects") from None
    profile = Profile(doc.get("profile", []), num_items=agenda.m)
    return CdoInstance(
        agenda,
        profile,
        constraint_set_from_dict(doc.get("feasibility")),
        constraint_set_from_dict(doc.get("rationality")),
    )


def load_instance(path) -> CdoInstance:
    return instance_from_dict(json.loads(Path(path).read_text()))


def save_instance(instance: CdoInstance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=1) + "\n")


def outcomes_to_dict(outcomes, **meta) -> dict:
    doc = {"format": FORMAT}
    doc.update(meta)
    doc["outcomes"] = [
        {"bits": list(o.bits), **({} if o.score is None else {"score": o.score})}
        for o in outcomes
    ]
    return doc


def outcomes_from_dict(doc: dict) -> list[Outcome]:
    _check_format(doc, "outcome file")
    out = []
    for entry in doc.get("outcomes", []):
        if isinstance(entry, list):
            out.append(Outcome(tuple(entry)))
        else:
            out.append(Outcome(tuple(entry["bits"]), entry.get("score")))
    return out


def load_outcomes(path) -> list[Outcome]:
    return outcomes_from_dict(json.loads(Path(path).read_text()))


def format_graph(graph: Graph) -> str:
    labels = {v: k for k, v in enumerate(graph.nodes, 1)}
    lines = [str(graph.num_nodes)]
    lines += [f"{labels[u]} {labels[v]} {c}" for (u, v), c in zip(graph.edges, graph.costs)]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise StructuralError("graph file is empty")
    try:
        n = int(lines[0])
        edges, costs = [], []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) not in (2, 3):
                raise ValueError(ln)
            edges.append((int(parts[0]), int(parts[1])))
            costs.append(int(parts[2]) if len(parts) == 3 else 1)
    except ValueError as exc:
        raise StructuralError(f"bad graph line: {exc}") from None
    return Graph(range(1, n + 1), edges, costs)


def read_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(graph: Graph, path) -> None:
    Path(path).write_text(format_graph(graph))


def load_schedule(path) -> tuple[ScheduleSpec, list[dict]]:
    """Schedule file: ``{"jobs": [...], "durations": [...], "voters":
    [{"before": [[x, y], ...], "first": [x]}, ...]}``."""
    doc = json.loads(Path(path).read_text())
    try:
        spec = ScheduleSpec(doc["jobs"], doc["durations"])
    except KeyError as exc:
        raise StructuralError(f"schedule file is missing {exc}") from None
    return spec, list(doc.get("voters", []))
