"""Synthetic challenge-style dataset generator.

Builds a corpus whose corrected/detected statistics hold exactly by
construction: 900 images over 40 people and 43 classes, detections in only
22 classes, 53% of corrected (image, label) pairs missed by the detector,
nine objects shared by at least eight people, four by exactly eight, and a
single object (canadaPencil) whose eight owners all hold two or more images
of it. Person19-Person24 carry gClamp with no detection, and Person33 has
exactly one detected-and-corrected cell.

The seed only perturbs confidences, boxes, and placement noise; every
statistic above is seed-independent and re-verified on each call.
"""

from __future__ import annotations

import random

TOTAL_PAIRS = 2000
MISSED_PAIRS = 1060  # 53% of TOTAL_PAIRS, exactly
COVERED_PAIRS = TOTAL_PAIRS - MISSED_PAIRS

IMAGE_COUNT = 900
PERSON_COUNT = 40
IMAGE_WIDTH = 1024
IMAGE_HEIGHT = 768

TOTEM = "canadaPencil"

# Owner rosters for the shared objects: (person number, images with the label).
# canadaPencil is the only exactly-eight-owner object where everyone holds >= 2.
SHARED_SPEC: dict[str, list[tuple[int, int]]] = {
    "canadaPencil": [(1, 2), (2, 2), (3, 2), (4, 2), (5, 2), (6, 2), (7, 2), (8, 2)],
    "rainbowPens": [(5, 2), (6, 2), (7, 2), (8, 2), (9, 2), (10, 2), (11, 2), (12, 1)],
    "noisemaker": [(9, 2), (10, 2), (11, 2), (12, 2), (13, 2), (14, 2), (15, 1), (16, 1)],
    "rubiksCube": [(13, 3), (14, 2), (15, 2), (16, 2), (17, 2), (18, 2), (19, 2), (20, 1)],
    "pinkEraser": [(1, 2), (2, 2), (3, 2), (4, 2), (5, 1), (6, 1), (7, 1), (8, 1), (9, 1)],
    "blueSunglasses": [(10, 2), (11, 2), (12, 1), (13, 1), (14, 1), (15, 1), (16, 1), (17, 1), (18, 1), (19, 1)],
    "lavenderDie": [(20, 1), (21, 1), (22, 1), (23, 1), (24, 1), (25, 1), (26, 1), (27, 1), (28, 1)],
    "metalKey": [(25, 1), (26, 1), (27, 1), (28, 1), (29, 1), (30, 1), (31, 1), (32, 1), (33, 2), (34, 1), (35, 1)],
    "miniCards": [(29, 1), (30, 1), (31, 1), (32, 1), (33, 1), (34, 1), (35, 1), (36, 1), (37, 1), (38, 1), (39, 1), (40, 1)],
    "gClamp": [(19, 2), (20, 1), (21, 1), (22, 1), (23, 1), (24, 1)],
}

SHARED_DETECTED = [
    "canadaPencil",
    "rainbowPens",
    "noisemaker",
    "rubiksCube",
    "pinkEraser",
    "blueSunglasses",
    "lavenderDie",
    "metalKey",
    "miniCards",
]

# 13 filler classes the detector knows (12 images per owner, 6 owners each).
DETECTED_FILLERS = [
    "blackStapler",
    "blueNotebook",
    "brassWhistle",
    "checkeredScarf",
    "chessPawn",
    "copperCoin",
    "deskBell",
    "featherPen",
    "glassMarble",
    "greenFlask",
    "leatherWallet",
    "orangeMug",
    "plasticRuler",
]

# 20 filler classes the detector never fires on (7 owners each).
UNDETECTED_FILLERS = [
    "paperFan",
    "pinkShoelace",
    "pocketMirror",
    "purpleYoyo",
    "redBalloon",
    "rubberStamp",
    "seashellOrnament",
    "silverSpoon",
    "snowGlobe",
    "spiralCandle",
    "steelTongs",
    "stripedSock",
    "tinyTrophy",
    "toyCompass",
    "walnutShell",
    "waxCrayon",
    "wickerBasket",
    "woodenDuck",
    "woolGlove",
    "yellowKazoo",
]

DETECTED_FILLER_OWNERS = 6
DETECTED_FILLER_IMAGES = 12
EXTRA_FALSE_POSITIVES = 180
PERSON33_FALSE_POSITIVES = 3


def _person(n: int) -> str:
    return f"Person{n}"


def generate_fixture(seed: int = 0) -> dict:
    """Build the synthetic dataset document (schema of ``parse_dataset``)."""
    rng = random.Random(seed)

    people = [_person(n) for n in range(1, PERSON_COUNT + 1)]
    image_ids = [f"img_{i:03d}" for i in range(IMAGE_COUNT)]
    person_of = {img: people[i % PERSON_COUNT] for i, img in enumerate(image_ids)}
    person_images: dict[str, list[str]] = {p: [] for p in people}
    for img in image_ids:
        person_images[person_of[img]].append(img)

    labels: dict[str, set[str]] = {img: set() for img in image_ids}
    class_pairs: dict[str, list[str]] = {}
    load = {p: 0 for p in people}

    def assign(class_name: str, person: str, count: int) -> None:
        # Spread a person's labels over their least-loaded images.
        candidates = sorted(
            (img for img in person_images[person] if class_name not in labels[img]),
            key=lambda img: (len(labels[img]), img),
        )
        assert len(candidates) >= count, (class_name, person, count)
        for img in candidates[:count]:
            labels[img].add(class_name)
            class_pairs.setdefault(class_name, []).append(img)
        load[person] += count

    for class_name, roster in SHARED_SPEC.items():
        for person_no, count in roster:
            assign(class_name, _person(person_no), count)

    # Person33's only detected-and-corrected object must stay metalKey, so
    # they own none of the detector-visible filler classes.
    for class_name in DETECTED_FILLERS:
        eligible = [p for p in people if p != _person(33)]
        owners = sorted(eligible, key=lambda p: (load[p], people.index(p)))[:DETECTED_FILLER_OWNERS]
        for person in owners:
            assign(class_name, person, DETECTED_FILLER_IMAGES)

    remaining = TOTAL_PAIRS - sum(len(v) for v in class_pairs.values())
    plans = [[7, 7, 7, 7, 7, 6, 6]] * 18 + [[7, 7, 7, 7, 6, 6, 6]] * 2
    assert remaining == sum(sum(p) for p in plans)
    for class_name, plan in zip(UNDETECTED_FILLERS, plans):
        owners = sorted(people, key=lambda p: (load[p], people.index(p)))[: len(plan)]
        for person, count in zip(owners, plan):
            assign(class_name, person, count)

    total_pairs = sum(len(v) for v in class_pairs.values())
    assert total_pairs == TOTAL_PAIRS, total_pairs

    # Choose which corrected pairs the detector "found". Every shared-object
    # pair is covered except Person33's miniCards (their single overlap must
    # be metalKey); the detector-visible fillers make up the remainder.
    p33_images = set(person_images[_person(33)])
    covered: set[tuple[str, str]] = set()
    for class_name in SHARED_DETECTED:
        for img in class_pairs[class_name]:
            if class_name == "miniCards" and img in p33_images:
                continue
            covered.add((img, class_name))

    filler_quota = COVERED_PAIRS - len(covered)
    base, extra = divmod(filler_quota, len(DETECTED_FILLERS))
    for i, class_name in enumerate(DETECTED_FILLERS):
        take = base + (1 if i < extra else 0)
        for img in class_pairs[class_name][:take]:
            covered.add((img, class_name))
    assert len(covered) == COVERED_PAIRS, len(covered)

    detections: list[dict] = []

    def add_detection(img: str, class_name: str, confidence: float) -> None:
        w = rng.randint(40, 200)
        h = rng.randint(40, 200)
        x = rng.randint(0, IMAGE_WIDTH - w)
        y = rng.randint(0, IMAGE_HEIGHT - h)
        detections.append(
            {
                "id": f"det_{len(detections):05d}",
                "image": img,
                "class": class_name,
                "bbox": [x, y, w, h],
                "confidence": confidence,
            }
        )

    for img, class_name in sorted(covered):
        for _ in range(rng.choice((1, 1, 2))):
            add_detection(img, class_name, round(rng.uniform(0.3, 0.99), 4))

    detected_classes = SHARED_DETECTED + DETECTED_FILLERS
    p33_corrected = {c for img in p33_images for c in labels[img]}
    allowed_p33 = [c for c in detected_classes if c not in p33_corrected]

    placed = 0
    while placed < EXTRA_FALSE_POSITIVES:
        img = image_ids[rng.randrange(IMAGE_COUNT)]
        class_name = detected_classes[rng.randrange(len(detected_classes))]
        if img in p33_images or class_name in labels[img]:
            continue
        add_detection(img, class_name, round(rng.uniform(0.05, 0.9), 4))
        placed += 1
    p33_list = sorted(p33_images)
    for _ in range(PERSON33_FALSE_POSITIVES):
        img = p33_list[rng.randrange(len(p33_list))]
        class_name = allowed_p33[rng.randrange(len(allowed_p33))]
        add_detection(img, class_name, round(rng.uniform(0.05, 0.9), 4))

    doc = {
        "classes": sorted(SHARED_SPEC.keys() | set(DETECTED_FILLERS) | set(UNDETECTED_FILLERS)),
        "people": people,
        "images": [
            {"id": img, "person": person_of[img], "width": IMAGE_WIDTH, "height": IMAGE_HEIGHT}
            for img in image_ids
        ],
        "detections": detections,
        "ground_truth": [
            {"image": img, "labels": sorted(labels[img])} for img in image_ids if labels[img]
        ],
    }
    _self_check(doc)
    return doc


def _self_check(doc: dict) -> None:
    """Re-derive every pinned statistic with plain counting; fail loudly."""
    person_of = {img["id"]: img["person"] for img in doc["images"]}
    assert len(doc["images"]) == IMAGE_COUNT
    assert len(doc["people"]) == PERSON_COUNT
    assert len(doc["classes"]) == 43

    detected_by_image: dict[str, set[str]] = {}
    detected_classes: set[str] = set()
    for det in doc["detections"]:
        detected_by_image.setdefault(det["image"], set()).add(det["class"])
        detected_classes.add(det["class"])
    assert len(detected_classes) == 22, len(detected_classes)

    pairs = [(gt["image"], label) for gt in doc["ground_truth"] for label in gt["labels"]]
    assert len(pairs) == TOTAL_PAIRS
    missed = sum(1 for img, label in pairs if label not in detected_by_image.get(img, ()))
    assert missed == MISSED_PAIRS, missed

    owners: dict[str, dict[str, int]] = {}
    for img, label in pairs:
        owners.setdefault(label, {}).setdefault(person_of[img], 0)
        owners[label][person_of[img]] += 1
    at_least_8 = {c for c, o in owners.items() if len(o) >= 8}
    exactly_8 = {c for c, o in owners.items() if len(o) == 8}
    assert len(at_least_8) == 9, sorted(at_least_8)
    assert len(exactly_8) == 4, sorted(exactly_8)
    totems = {c for c in exactly_8 if all(n >= 2 for n in owners[c].values())}
    assert totems == {TOTEM}, sorted(totems)

    for n in range(19, 25):
        assert owners["gClamp"].get(_person(n), 0) >= 1
    assert "gClamp" not in detected_classes

    p33 = _person(33)
    detected_cells = {det["class"] for det in doc["detections"] if person_of[det["image"]] == p33}
    corrected_cells = {label for img, label in pairs if person_of[img] == p33}
    assert len(detected_cells & corrected_cells) == 1, detected_cells & corrected_cells
