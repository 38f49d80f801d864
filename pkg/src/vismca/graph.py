"""Bipartite people-objects network and its subgroup queries.

Edges connect a person to an object appearing in their images, weighted by
image multiplicity (and instance multiplicity when built from detections).
The totem heuristic looks for an object shared by exactly a target-size
subgroup where every member holds at least a minimum number of images of it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .corrections import CorrectionStore
from .errors import UnknownObject, WrongSource
from .model import Dataset


class GraphSource(str, Enum):
    DETECTED = "detected"
    CORRECTED = "corrected"


class ShareMode(str, Enum):
    EXACTLY = "exact"
    AT_LEAST = "at_least"


@dataclass(frozen=True)
class GraphEdge:
    person: str
    object: str
    weight_images: int
    weight_instances: int


@dataclass(frozen=True)
class OwnershipGraph:
    people_nodes: tuple[str, ...]
    object_nodes: tuple[str, ...]
    edges: tuple[GraphEdge, ...]
    source: GraphSource
    reference_image: dict[str, str]  # object -> smallest qualifying image id

    def owners_of(self, object_name: str) -> set[str]:
        return {e.person for e in self.edges if e.object == object_name}


@dataclass(frozen=True)
class EgoNetwork:
    focus: str
    owners: frozenset[str]
    edges: tuple[GraphEdge, ...]


def build_graph(dataset: Dataset, store: CorrectionStore, source: GraphSource) -> OwnershipGraph:
    """Construct the bipartite graph from detections or corrected labels.

    All people and all classes become nodes; an edge exists only where the
    chosen source places the object in at least one of the person's images.
    Each object's reference image is the smallest qualifying image id.
    """
    source = GraphSource(source)
    images_with: dict[tuple[str, str], set[str]] = {}
    instances: dict[tuple[str, str], int] = {}
    reference: dict[str, str] = {}

    if source is GraphSource.DETECTED:
        for det in dataset.detections:
            person = dataset.image_by_id[det.image].person
            key = (person, det.class_name)
            images_with.setdefault(key, set()).add(det.image)
            instances[key] = instances.get(key, 0) + 1
            current = reference.get(det.class_name)
            if current is None or det.image < current:
                reference[det.class_name] = det.image
    else:
        for record in store.records.values():
            person = dataset.image_by_id[record.image].person
            for label in record.labels:
                key = (person, label)
                images_with.setdefault(key, set()).add(record.image)
                current = reference.get(label)
                if current is None or record.image < current:
                    reference[label] = record.image

    edges = []
    for (person, obj) in sorted(images_with):
        n_images = len(images_with[(person, obj)])
        n_instances = instances.get((person, obj), n_images)
        edges.append(
            GraphEdge(person=person, object=obj, weight_images=n_images, weight_instances=n_instances)
        )

    return OwnershipGraph(
        people_nodes=tuple(dataset.people),
        object_nodes=tuple(dataset.classes),
        edges=tuple(edges),
        source=source,
        reference_image=reference,
    )


def ego_network(
    graph: OwnershipGraph, object_name: str, include_neighbor_objects: bool = False
) -> EgoNetwork:
    """The subgraph around one object: its owners, optionally all their objects."""
    if object_name not in graph.object_nodes:
        raise UnknownObject(f"no object '{object_name}'")
    owners = frozenset(e.person for e in graph.edges if e.object == object_name)
    if include_neighbor_objects:
        edges = tuple(e for e in graph.edges if e.person in owners)
    else:
        edges = tuple(e for e in graph.edges if e.object == object_name)
    return EgoNetwork(focus=object_name, owners=owners, edges=edges)


def objects_shared_by(
    graph: OwnershipGraph, k: int, mode: ShareMode
) -> list[tuple[str, int]]:
    """Objects whose distinct owner count is exactly / at least k."""
    mode = ShareMode(mode)
    counts: dict[str, set[str]] = {}
    for edge in graph.edges:
        counts.setdefault(edge.object, set()).add(edge.person)
    result = []
    for obj, owners in counts.items():
        n = len(owners)
        if (mode is ShareMode.EXACTLY and n == k) or (mode is ShareMode.AT_LEAST and n >= k):
            result.append((obj, n))
    result.sort(key=lambda item: (-item[1], item[0]))
    return result


def totem_candidates(graph: OwnershipGraph, group_size: int = 8, min_images: int = 2) -> list[str]:
    """Objects owned by exactly group_size people, each with >= min_images images.

    Only meaningful over corrected ownership; a detected-source graph is
    rejected because detector output cannot witness true ownership.
    """
    if graph.source is not GraphSource.CORRECTED:
        raise WrongSource("totem heuristic requires a graph built from corrected labels")
    by_object: dict[str, list[GraphEdge]] = {}
    for edge in graph.edges:
        by_object.setdefault(edge.object, []).append(edge)
    candidates = []
    for obj, edges in by_object.items():
        if len({e.person for e in edges}) != group_size:
            continue
        if all(e.weight_images >= min_images for e in edges):
            candidates.append(obj)
    return sorted(candidates)


def graph_to_dict(graph: OwnershipGraph) -> dict:
    return {
        "source": graph.source.value,
        "people": list(graph.people_nodes),
        "objects": list(graph.object_nodes),
        "edges": [
            {
                "person": e.person,
                "object": e.object,
                "images": e.weight_images,
                "instances": e.weight_instances,
            }
            for e in graph.edges
        ],
        "reference_images": dict(sorted(graph.reference_image.items())),
    }


def ego_to_dict(ego: EgoNetwork) -> dict:
    return {
        "focus": ego.focus,
        "owners": sorted(ego.owners),
        "edges": [
            {
                "person": e.person,
                "object": e.object,
                "images": e.weight_images,
                "instances": e.weight_instances,
            }
            for e in ego.edges
        ],
    }
