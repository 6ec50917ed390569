"""Exception types. Each carries a short machine code used by the CLI."""


class PathlabError(Exception):
    code = "ERROR"


class GroundMismatch(PathlabError):
    code = "GROUND_MISMATCH"


class Uncoverable(PathlabError):
    code = "UNCOVERABLE"


class SizeLimit(PathlabError):
    code = "SIZE_LIMIT"


class ParamRange(PathlabError):
    code = "PARAM_RANGE"


class UnknownKind(PathlabError):
    code = "UNKNOWN_KIND"


class Unsupported(PathlabError):
    code = "UNSUPPORTED"


class SchemaError(PathlabError):
    code = "SCHEMA"


class RangeError(PathlabError):
    code = "RANGE"


class BadWeights(PathlabError):
    code = "BAD_WEIGHTS"


class NotACover(PathlabError):
    code = "NOT_A_COVER"
