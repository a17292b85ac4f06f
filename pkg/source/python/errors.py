class TimelinkError(Exception):
    """Root of every error raised by this package."""


class CorpusError(TimelinkError):
    """Problem with the TimeML input itself."""


class MalformedXml(CorpusError):
    pass


class DanglingReference(CorpusError):
    pass


class DuplicateId(CorpusError):
    pass


class UnknownRelation(CorpusError):
    pass


class CorpusIoError(CorpusError):
    pass


class DataError(TimelinkError):
    """Dataset unusable for training or evaluation."""


class EmptyData(DataError):
    pass


class TooFewInstances(DataError):
    pass


class DivisionByZero(TimelinkError, ZeroDivisionError):
    pass


class UsageError(TimelinkError):
    pass


class MalformedModel(TimelinkError):
    pass
