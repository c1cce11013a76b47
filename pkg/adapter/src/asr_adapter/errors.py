class AdapterError(Exception):
    """Base class for adapter failures."""


class UnreadableAudio(AdapterError):
    pass


class NoSpeechDetected(AdapterError):
    pass


class BackendFailure(AdapterError):
    pass


class UnknownBackend(AdapterError):
    pass
