"""
Exception hierarchy for the slicing workbench.

Library code raises these; only the CLI layer turns them into exit codes.
"""

from typing import Iterable, Optional


class PetriNetError(Exception):
    """Base class for every error raised by the workbench"""


# Net validation

class NetValidationError(PetriNetError):
    """A net violates the place/transition net definition"""


class OverlappingIds(NetValidationError):
    def __init__(self, ids: Iterable[str]):
        self.ids = sorted(ids)
        super().__init__(f"Identifiers used as both place and transition: {', '.join(self.ids)}")


class DanglingArc(NetValidationError):
    def __init__(self, source: str, target: str):
        self.source = source
        self.target = target
        super().__init__(f"Arc {source} -> {target} has an undeclared endpoint")


class BadArcDirection(NetValidationError):
    def __init__(self, source: str, target: str):
        self.source = source
        self.target = target
        super().__init__(f"Arc {source} -> {target} must connect a place and a transition")


class ZeroWeight(NetValidationError):
    def __init__(self, source: str, target: str, weight: int = 0):
        self.source = source
        self.target = target
        self.weight = weight
        super().__init__(f"Arc {source} -> {target} has non-positive weight {weight}")


class DuplicateArc(NetValidationError):
    def __init__(self, source: str, target: str):
        self.source = source
        self.target = target
        super().__init__(f"Arc {source} -> {target} is declared more than once")


class NegativeTokens(NetValidationError):
    def __init__(self, place: str, tokens: int):
        self.place = place
        self.tokens = tokens
        super().__init__(f"Place {place} has negative token count {tokens}")


# Lookups

class UnknownNode(PetriNetError):
    kind = "node"

    def __init__(self, node: str):
        self.node = node
        super().__init__(f"Unknown {self.kind}: {node}")


class UnknownPlace(UnknownNode):
    kind = "place"


class UnknownTransition(UnknownNode):
    kind = "transition"


class NotASubset(PetriNetError):
    def __init__(self, missing: Iterable[str]):
        self.missing = sorted(missing)
        super().__init__(f"Nodes not in the net: {', '.join(self.missing)}")


# Firing

class FiringError(PetriNetError):
    """A transition or sequence cannot fire"""


class NotEnabled(FiringError):
    def __init__(self, transition: str):
        self.transition = transition
        super().__init__(f"Transition {transition} is not enabled")


class NotEnabledAt(FiringError):
    def __init__(self, index: int, transition: str):
        self.index = index
        self.transition = transition
        super().__init__(f"Transition {transition} at step {index} is not enabled")


class InvalidSequence(FiringError):
    def __init__(self, index: int, transition: str):
        self.index = index
        self.transition = transition
        super().__init__(f"Sequence is not fireable: step {index} ({transition}) is disabled")


# Budgets

class BudgetExceeded(PetriNetError):
    """An exhaustive search exceeded its configured budget"""

    def __init__(self, limit: int, what: str = "search"):
        self.limit = limit
        super().__init__(f"{what} exceeded its budget of {limit}")


class ExplosionCap(BudgetExceeded):
    def __init__(self, limit: int):
        super().__init__(limit, "Firing-tree enumeration")


class BranchBudgetExceeded(BudgetExceeded):
    def __init__(self, limit: int, what: str = "Backward branching"):
        super().__init__(limit, what)


class TooLarge(PetriNetError):
    def __init__(self, size: int, ceiling: int):
        self.size = size
        self.ceiling = ceiling
        super().__init__(f"Net has {size} nodes, above the brute-force ceiling of {ceiling}")


# Properties

class PropertyError(PetriNetError):
    """A property identifier is misused"""


class UnknownProperty(PropertyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Unknown property: {name}")


class NotStructural(PropertyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Property {name} is not structural")


class NotBehavioural(PropertyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Property {name} is not behavioural")


# Formats

class FormatError(PetriNetError):
    """A net document cannot be read or written"""


class MalformedXml(FormatError):
    pass


class NotAPtNet(FormatError):
    pass


class EmptyNet(FormatError):
    def __init__(self, name: Optional[str] = None):
        super().__init__(f"Net {name or '<unnamed>'} has no places and no transitions")


class UnsupportedName(FormatError):
    def __init__(self, name: str, target: str):
        self.name = name
        self.target = target
        super().__init__(f"Identifier {name!r} collides with another identifier after "
                         f"transliteration for {target}")


# Runtime configuration

class ConfigurationError(PetriNetError):
    pass


class NoInputs(PetriNetError):
    pass
