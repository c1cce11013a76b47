"""Typed error hierarchy.

Every failure mode the toolkit can hit on user input maps to a subclass of
CogSpeechError, so callers (and the fuzz harness) can distinguish "bad input,
reported" from a genuine crash.
"""


class CogSpeechError(Exception):
    """Base class for all toolkit errors."""


# --- transcript parsing ---------------------------------------------------

class MalformedLine(CogSpeechError):
    pass


class BadHeadReference(CogSpeechError):
    pass


class UnknownUposTag(CogSpeechError):
    pass


class NonPositiveDuration(CogSpeechError):
    pass


# --- manifest parsing -----------------------------------------------------

class MissingColumn(CogSpeechError):
    pass


class DuplicateTaskRow(CogSpeechError):
    pass


class MmseOutOfRange(CogSpeechError):
    pass


class UnknownDiagnosisLabel(CogSpeechError):
    pass


class UnknownTaskLabel(CogSpeechError):
    pass


# --- feature assembly -----------------------------------------------------

class InvalidFeatureVector(CogSpeechError):
    pass


class AllTasksMissing(CogSpeechError):
    pass


class MissingTask(CogSpeechError):
    pass


# --- embeddings -----------------------------------------------------------

class DimensionMismatch(CogSpeechError):
    pass


class NonFiniteValue(CogSpeechError):
    pass


class EmptyMatrix(CogSpeechError):
    pass


class EmbeddingFormatError(CogSpeechError):
    pass


class MissingEmbeddingFile(CogSpeechError):
    pass


# --- datasets and learners -------------------------------------------------

class DatasetError(CogSpeechError):
    pass


class DegenerateDataset(CogSpeechError):
    pass


class SchemaMismatch(CogSpeechError):
    pass


class DivergedTraining(CogSpeechError):
    pass


# --- model persistence ------------------------------------------------------

class VersionMismatch(CogSpeechError):
    pass


class ChecksumFailure(CogSpeechError):
    pass


# --- ensembles ---------------------------------------------------------------

class MixedTaskMembers(CogSpeechError):
    pass


class UnknownConfigName(CogSpeechError):
    pass


# --- evaluation / selection ---------------------------------------------------

class LengthMismatch(CogSpeechError):
    pass


class EmptyInput(CogSpeechError):
    pass


class TooFewSamples(CogSpeechError):
    pass


# --- configuration -------------------------------------------------------------

class UnknownConfigKey(CogSpeechError):
    pass


class BadConfigValue(CogSpeechError):
    pass
