"""
Seeded net generators for tests, benchmarks and the generate command.
"""

import logging
import os
import random
from typing import Dict, List, Optional, Tuple

from app.formats.pnml import write_pnml
from app.models.net import Arc, MarkedPetriNet, Marking, NodeId, make_net

logger = logging.getLogger(__name__)


def _ids(prefix: str, count: int) -> List[NodeId]:
    width = len(str(max(count - 1, 0)))
    return [f"{prefix}{i:0{width}d}" for i in range(count)]


def random_marked_net(rng: random.Random, max_places: int = 8, max_transitions: int = 8,
                      weights: Tuple[int, ...] = (1, 2), max_tokens: int = 3,
                      ordinary: bool = False, density: float = 0.3,
                      name: str = "") -> MarkedPetriNet:
    """
    Random marked net drawn only from rng.

    Args:
        rng: Source of randomness; the same seed yields the same net
        max_places: Upper bound on places (at least one is drawn)
        max_transitions: Upper bound on transitions (at least one is drawn)
        weights: Arc weights to draw from
        max_tokens: Upper bound on the initial tokens of a place
        ordinary: Draw every arc with weight 1
        density: Probability of each possible arc
        name: Net label

    Returns:
        MarkedPetriNet
    """
    places = _ids('p', rng.randint(1, max_places))
    transitions = _ids('t', rng.randint(1, max_transitions))
    arcs: List[Arc] = []
    for p in places:
        for t in transitions:
            if rng.random() < density:
                arcs.append(Arc(p, t, 1 if ordinary else rng.choice(weights)))
            if rng.random() < density:
                arcs.append(Arc(t, p, 1 if ordinary else rng.choice(weights)))
    tokens: Dict[NodeId, int] = {}
    for p in places:
        if rng.random() < 0.5:
            tokens[p] = rng.randint(1, max_tokens)
    net = make_net(places, transitions, arcs, name=name)
    return MarkedPetriNet(net, Marking(tokens))


def chain_net(n: int, name: str = "chain") -> MarkedPetriNet:
    """
    p0 -> t0 -> p1 -> t1 -> ... with n nodes in total and one token on p0.
    The last place is the natural criterion.
    """
    if n < 1:
        raise ValueError("a chain needs at least one node")
    place_count, transition_count = (n + 1) // 2, n // 2
    places = _ids('p', place_count)
    transitions = _ids('t', transition_count)
    arcs = []
    for i, t in enumerate(transitions):
        arcs.append(Arc(places[i], t))
        if i + 1 < place_count:
            arcs.append(Arc(t, places[i + 1]))
    net = make_net(places, transitions, arcs, name=name)
    logger.debug(f"Built chain net with {place_count} places and {transition_count} transitions")
    return MarkedPetriNet(net, Marking({places[0]: 1}))


def write_random_corpus(directory: str, count: int, seed: int, max_places: int = 8,
                        max_transitions: int = 8, ordinary: bool = False,
                        prefix: Optional[str] = None) -> List[str]:
    """
    Write count seeded random nets as PNML files into directory.

    Returns:
        List of written paths, in generation order
    """
    os.makedirs(directory, exist_ok=True)
    rng = random.Random(seed)
    stem = prefix or f"random_{seed}"
    width = len(str(max(count - 1, 0)))
    paths = []
    for i in range(count):
        name = f"{stem}_{i:0{width}d}"
        s = random_marked_net(rng, max_places, max_transitions, ordinary=ordinary, name=name)
        path = os.path.join(directory, f"{name}.pnml")
        with open(path, 'wb') as f:
            f.write(write_pnml(s))
        paths.append(path)
    logger.info(f"Wrote {count} random nets to {directory} (seed {seed})")
    return paths
