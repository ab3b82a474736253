class RelhomError(Exception):
    """Base class for engine errors."""


class InputError(RelhomError):
    """Malformed input: bad schema, unresolvable name, wrong shape."""


class ComposabilityError(InputError):
    pass


class HypothesisError(RelhomError):
    """A premise of a lemma or axiom instance does not hold."""

    def __init__(self, clause: str, detail: str = ""):
        self.clause = clause
        self.detail = detail
        super().__init__(f"{clause}: {detail}" if detail else clause)


class BudgetError(RelhomError):
    pass


class LimitMissing(RelhomError):
    """The requested (co)limit does not exist in this category."""


class EngineInconsistency(RelhomError):
    """A construction failed although all of its hypotheses were verified."""


class PluginError(RelhomError):
    def __init__(self, plugin: str, cause: BaseException):
        self.plugin = plugin
        super().__init__(f"predicate plugin {plugin!r} failed: {cause}")
