"""
Brute-force reference checks for slices.

Nothing here calls the slicers or the semantics module: firing is implemented
again from the arc list so that a bug in one cannot hide the same bug in the
other. These checks are exponential and meant for nets of a dozen nodes.

A transition of a candidate subnet may only fire when all of its input places
in the original net were kept; a transition that lost an input is dead.
"""

import itertools
import logging
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple, Union

from app.config import BRUTE_FORCE_CEILING, ORACLE_DEPTH, ORACLE_NODE_BUDGET
from app.models.exceptions import ExplosionCap, TooLarge
from app.models.net import MarkedPetriNet, PetriNet, is_subnet, subnet

logger = logging.getLogger(__name__)

Tokens = Tuple[Tuple[str, int], ...]
Steps = Tuple[str, ...]


class _Game:
    """Arc-list based token game over a chosen set of live transitions"""

    def __init__(self, net: PetriNet, places: FrozenSet[str], transitions: FrozenSet[str]):
        self.consume: Dict[str, Dict[str, int]] = {t: {} for t in net.transitions}
        self.produce: Dict[str, Dict[str, int]] = {t: {} for t in net.transitions}
        for source, target, weight in net.arcs:
            if source in net.places:
                self.consume[target][source] = weight
            else:
                self.produce[source][target] = weight
        self.places = places
        self.live = frozenset(t for t in transitions
                              if set(self.consume[t]) <= places)

    def can_fire(self, tokens: Dict[str, int], t: str) -> bool:
        return t in self.live and all(tokens.get(p, 0) >= w for p, w in self.consume[t].items())

    def fire(self, tokens: Dict[str, int], t: str) -> Dict[str, int]:
        after = dict(tokens)
        for p, w in self.consume[t].items():
            after[p] = after.get(p, 0) - w
        for p, w in self.produce[t].items():
            if p in self.places:
                after[p] = after.get(p, 0) + w
        return after

    def raises(self, t: str, q: FrozenSet[str]) -> bool:
        return any(self.produce[t].get(p, 0) > self.consume[t].get(p, 0)
                   for p in q & self.places)


def _freeze(tokens: Dict[str, int]) -> Tokens:
    return tuple(sorted((p, n) for p, n in tokens.items() if n))


def _as_net(cand: Union[PetriNet, MarkedPetriNet]) -> PetriNet:
    return cand.net if isinstance(cand, MarkedPetriNet) else cand


def increasing_sequences(s: MarkedPetriNet, q: Iterable[str], depth: int,
                         node_budget: int = ORACLE_NODE_BUDGET) -> List[Steps]:
    """Every increasing firing sequence of s of length <= depth, breadth-first"""
    q = frozenset(q)
    game = _Game(s.net, s.net.places, s.net.transitions)
    order = sorted(game.live)
    found = []
    layer = [((), dict(s.marking.nonzero()))]
    visited = 0
    for _ in range(depth):
        next_layer = []
        for seq, tokens in layer:
            for t in order:
                if not game.can_fire(tokens, t):
                    continue
                visited += 1
                if visited > node_budget:
                    raise ExplosionCap(node_budget)
                extended = seq + (t,)
                if game.raises(t, q):
                    found.append(extended)
                next_layer.append((extended, game.fire(tokens, t)))
        layer = next_layer
    return sorted(found)


def _has_increasing_subsequence(game: _Game, m0: Dict[str, int], seq: Steps,
                                q: FrozenSet[str]) -> bool:
    """Some subsequence of seq fires in the candidate and ends with a step raising q"""
    steps = [t for t in seq if t in game.live]
    failed: Set[Tuple[int, Tokens]] = set()

    def search(i: int, tokens: Dict[str, int]) -> bool:
        if i == len(steps):
            return False
        key = (i, _freeze(tokens))
        if key in failed:
            return False
        t = steps[i]
        if game.can_fire(tokens, t):
            if game.raises(t, q):
                return True
            if search(i + 1, game.fire(tokens, t)):
                return True
        if search(i + 1, tokens):
            return True
        failed.add(key)
        return False

    return search(0, m0)


def _restricted_tokens(s: MarkedPetriNet, places: FrozenSet[str]) -> Dict[str, int]:
    return {p: n for p, n in s.marking.nonzero().items() if p in places}


def _check_against(s: MarkedPetriNet, q: FrozenSet[str], cand: PetriNet,
                   sequences: List[Steps], every: bool) -> bool:
    if not sequences:
        return True
    game = _Game(s.net, cand.places, cand.transitions)
    if not any(game.raises(t, q) for t in game.live):
        return False
    m0 = _restricted_tokens(s, cand.places)
    verdicts: Dict[Steps, bool] = {}
    for seq in sequences:
        projected = tuple(t for t in seq if t in game.live)
        if projected not in verdicts:
            verdicts[projected] = _has_increasing_subsequence(game, m0, projected, q)
        if every and not verdicts[projected]:
            logger.debug(f"No increasing subsequence of {list(seq)} survives in the candidate")
            return False
        if not every and verdicts[projected]:
            return True
    return every


def is_valid_slice(s: MarkedPetriNet, q: Iterable[str], cand: Union[PetriNet, MarkedPetriNet],
                   depth: int = ORACLE_DEPTH, node_budget: int = ORACLE_NODE_BUDGET) -> bool:
    """
    cand is a subnet of s, and either s has no increasing firing sequence within
    depth, or some subsequence of one of them is an increasing firing sequence
    of cand under the restricted initial marking.

    Raises:
        ExplosionCap: Enumerating the sequences of s exceeded node_budget
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    q, cand = frozenset(q), _as_net(cand)
    if not is_subnet(cand, s.net):
        return False
    return _check_against(s, q, cand, increasing_sequences(s, q, depth, node_budget), every=False)


def is_maximal_slice(s: MarkedPetriNet, q: Iterable[str], cand: Union[PetriNet, MarkedPetriNet],
                     depth: int = ORACLE_DEPTH, node_budget: int = ORACLE_NODE_BUDGET) -> bool:
    """
    cand is a subnet of s and every increasing firing sequence of s within depth
    has a subsequence that is an increasing firing sequence of cand.

    Raises:
        ExplosionCap: Enumerating the sequences of s exceeded node_budget
    """
    q, cand = frozenset(q), _as_net(cand)
    if not is_subnet(cand, s.net):
        return False
    return _check_against(s, q, cand, increasing_sequences(s, q, depth, node_budget), every=True)


def brute_force_min_slice(s: MarkedPetriNet, q: Iterable[str], depth: int = ORACLE_DEPTH,
                          ceiling: int = BRUTE_FORCE_CEILING,
                          node_budget: int = ORACLE_NODE_BUDGET) -> Tuple[int, PetriNet]:
    """
    Smallest valid slice, found by trying every induced subnet in increasing
    size order (ties broken by the sorted id list).

    Returns:
        (size, witness subnet)

    Raises:
        TooLarge: The net has more than ceiling nodes
        ExplosionCap: Enumerating the sequences of s exceeded node_budget
    """
    q = frozenset(q)
    nodes = sorted(s.net.places | s.net.transitions)
    if len(nodes) > ceiling:
        raise TooLarge(len(nodes), ceiling)
    empty = subnet(s.net, (), ())
    sequences = increasing_sequences(s, q, depth, node_budget)
    if not sequences:
        return 0, empty

    tried = 0
    for k in range(1, len(nodes) + 1):
        for combo in itertools.combinations(nodes, k):
            chosen = frozenset(combo)
            cand = subnet(s.net, chosen & s.net.places, chosen & s.net.transitions)
            tried += 1
            if _check_against(s, q, cand, sequences, every=False):
                logger.debug(f"Brute-force minimum found after {tried} subnets: {sorted(chosen)}")
                return k, cand
    raise AssertionError("the whole net is a valid slice whenever a sequence exists")
