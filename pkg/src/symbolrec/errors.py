"""Exception hierarchy shared across the package."""


class SymbolRecError(Exception):
    """Base class for all package errors."""

    code = "error"


class SchemaError(SymbolRecError):
    code = "invalid_schema"


class IncompleteAnswers(SymbolRecError):
    code = "incomplete_answers"


class UnknownOption(SymbolRecError):
    code = "unknown_option"


class UnknownQuestion(SymbolRecError):
    code = "unknown_question"


class ConflictingDuplicateUser(SymbolRecError):
    code = "conflicting_duplicate_user"


class EmptyHistory(SymbolRecError):
    code = "empty_history"


class EmptySymbol(SymbolRecError):
    code = "empty_symbol"


class UnknownId(SymbolRecError):
    code = "unknown_id"


class UnknownBaseSymbol(SymbolRecError):
    code = "unknown_base_symbol"


class CycleDetected(SymbolRecError):
    """Raised when lexicon definitions are circular.

    ``cycles`` holds every cycle found, each as a list of ids along the path.
    """

    code = "cycle_detected"

    def __init__(self, cycles):
        self.cycles = [list(c) for c in cycles]
        paths = "; ".join(" -> ".join(c) for c in self.cycles)
        super().__init__(f"circular definitions: {paths}")


class LexiconError(SymbolRecError):
    """Aggregate load-time failure; lists every unknown id and cycle at once."""

    code = "invalid_lexicon"

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class UnknownFocusCategory(SymbolRecError):
    code = "unknown_focus_category"


class MismatchedIdSets(SymbolRecError):
    code = "mismatched_id_sets"


class DegenerateConstantRanking(SymbolRecError):
    code = "degenerate_constant_ranking"


class NonSymmetricInput(SymbolRecError):
    code = "non_symmetric_input"


class DimensionUnsupported(SymbolRecError):
    code = "dimension_unsupported"


class LengthMismatch(SymbolRecError):
    code = "length_mismatch"


class InvalidDistribution(SymbolRecError):
    code = "invalid_distribution"


class FormatError(SymbolRecError):
    code = "format_error"
