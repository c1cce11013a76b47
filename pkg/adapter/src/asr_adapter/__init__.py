from .backends import (
    ASR_BACKENDS,
    EMBEDDING_DIM,
    ENCODER_BACKENDS,
    PARSER_BACKENDS,
    VAD_BACKENDS,
)
from .errors import AdapterError, BackendFailure, NoSpeechDetected, UnknownBackend, UnreadableAudio
from .jobs import AdapterJob, build_job, discover_inputs, preprocess_audio, run_job

__version__ = "0.1.0"
