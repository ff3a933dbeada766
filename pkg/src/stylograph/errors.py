"""Exception hierarchy shared by every stage of the pipeline."""


class StylographError(Exception):
    """Base class for all errors raised by this package."""


# corpus
class MissingFile(StylographError):
    pass


class DuplicateDocId(StylographError):
    pass


class EmptyManifest(StylographError):
    pass


class InvalidEncoding(StylographError):
    pass


class EmptyDocument(StylographError):
    pass


class CurveTooShort(StylographError):
    pass


# embedding
class VocabularyEmpty(StylographError):
    pass


class ZeroVector(StylographError):
    pass


class LengthMismatch(StylographError):
    pass


class UnknownWord(StylographError):
    pass


# graph
class ModelStatsMismatch(StylographError):
    pass


# features
class VariantMismatch(StylographError):
    pass


class WordNotInVocabulary(StylographError):
    pass


class LabelsRequired(StylographError):
    pass


class SingleClass(StylographError):
    pass


# learning
class ClassTooSmall(StylographError):
    pass


class DimensionMismatch(StylographError):
    pass


class TooFewSamples(StylographError):
    pass


class EmptyWordSet(StylographError):
    pass


# pipeline
class ConfigInvalid(StylographError):
    pass
