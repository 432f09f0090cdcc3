# quiver documents: JSON text with vertices and arrows or an adjacency matrix

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from quiverstab.config.report import JSON_INDENT
from quiverstab.core.errors import InputError
from quiverstab.core.quiver import Quiver

KNOWN_KEYS = {"vertices", "arrows", "adjacency", "dimension_vectors", "framings", "allow_loops"}


@dataclass(frozen=True)
class QuiverDocument:
    vertices: tuple[str, ...]
    arrows: Optional[tuple[tuple[str, str], ...]] = None
    adjacency: Optional[tuple[tuple[int, ...], ...]] = None
    dimension_vectors: dict = field(default_factory=dict)
    framings: dict = field(default_factory=dict)
    allow_loops: bool = False

    def __post_init__(self):
        labels = tuple(str(v) for v in self.vertices)
        if not labels:
            raise InputError("a quiver document needs at least one vertex")
        if len(set(labels)) != len(labels):
            raise InputError("vertex labels must be unique")
        object.__setattr__(self, "vertices", labels)

        if (self.arrows is None) == (self.adjacency is None):
            raise InputError("a quiver document needs exactly one of 'arrows' and 'adjacency'")
        if self.arrows is not None:
            arrows = []
            for arrow in self.arrows:
                if len(arrow) != 2:
                    raise InputError(f"arrow {arrow} must be a [from, to] pair")
                source, target = str(arrow[0]), str(arrow[1])
                for label in (source, target):
                    if label not in labels:
                        raise InputError(f"arrow {source}->{target} references unknown vertex '{label}'")
                arrows.append((source, target))
            object.__setattr__(self, "arrows", tuple(arrows))
        else:
            matrix = tuple(tuple(int(x) for x in row) for row in self.adjacency)
            if len(matrix) != len(labels) or any(len(row) != len(labels) for row in matrix):
                raise InputError("adjacency must be a square matrix matching the vertex list")
            object.__setattr__(self, "adjacency", matrix)

        for name, table in (("dimension vector", self.dimension_vectors), ("framing", self.framings)):
            for key, vec in table.items():
                if len(vec) != len(labels):
                    raise InputError(f"{name} '{key}' has {len(vec)} entries for {len(labels)} vertices")

    def to_quiver(self) -> Quiver:
        if self.adjacency is not None:
            return Quiver(self.adjacency, self.vertices, self.allow_loops)
        index = {label: i for i, label in enumerate(self.vertices)}
        return Quiver.from_arrows(
            len(self.vertices),
            [(index[s], index[t]) for s, t in self.arrows],
            self.vertices,
            self.allow_loops,
        )

    @classmethod
    def from_quiver(
        cls,
        quiver: Quiver,
        dimension_vectors: Optional[dict] = None,
        framings: Optional[dict] = None,
    ) -> "QuiverDocument":
        labels = quiver.labels
        return cls(
            vertices=labels,
            arrows=tuple((labels[i], labels[j]) for i, j in quiver.arrow_list()),
            dimension_vectors=dict(dimension_vectors or {}),
            framings=dict(framings or {}),
            allow_loops=quiver.allow_loops,
        )

    def to_dict(self) -> dict:
        out = {"vertices": list(self.vertices)}
        if self.arrows is not None:
            out["arrows"] = [list(a) for a in self.arrows]
        else:
            out["adjacency"] = [list(r) for r in self.adjacency]
        if self.dimension_vectors:
            out["dimension_vectors"] = {k: list(v) for k, v in self.dimension_vectors.items()}
        if self.framings:
            out["framings"] = {k: list(v) for k, v in self.framings.items()}
        if self.allow_loops:
            out["allow_loops"] = True
        return out


def parse_document(text: str) -> QuiverDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed quiver document: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("a quiver document must be a JSON object")
    unknown = set(data) - KNOWN_KEYS
    if unknown:
        raise InputError(f"unknown quiver document fields: {', '.join(sorted(unknown))}")
    if "vertices" not in data:
        raise InputError("a quiver document needs 'vertices'")
    return QuiverDocument(
        vertices=tuple(data["vertices"]),
        arrows=tuple(tuple(a) for a in data["arrows"]) if "arrows" in data else None,
        adjacency=tuple(tuple(r) for r in data["adjacency"]) if "adjacency" in data else None,
        dimension_vectors={k: tuple(int(x) for x in v) for k, v in data.get("dimension_vectors", {}).items()},
        framings={k: tuple(int(x) for x in v) for k, v in data.get("framings", {}).items()},
        allow_loops=bool(data.get("allow_loops", False)),
    )


def load_document(path: str | Path) -> QuiverDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read quiver document {path}: {exc}") from exc
    return parse_document(text)


def dump_document(doc: QuiverDocument) -> str:
    return json.dumps(doc.to_dict(), indent=JSON_INDENT, ensure_ascii=False)


def parse_vector(text: str, named: Optional[dict] = None) -> tuple[int, ...]:
    """Comma-separated integers, or the name of a vector stored in the document."""
    if named and text in named:
        return tuple(named[text])
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"cannot read '{text}' as a comma-separated vector") from exc


def same_quiver(first: Quiver, second: Quiver) -> bool:
    """Label-preserving isomorphism."""
    if sorted(first.labels) != sorted(second.labels):
        return False
    index = {label: i for i, label in enumerate(second.labels)}
    perm = [index[label] for label in first.labels]
    return all(first.arrows[i][j] == second.arrows[perm[i]][perm[j]]
               for i in range(first.n_vertices) for j in range(first.n_vertices))

