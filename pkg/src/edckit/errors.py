"""Exception taxonomy shared across the toolkit.

The CLI maps these onto its exit codes: bad arguments or config values
exit 2, I/O failures exit 3, malformed or unsupported data exits 4.
"""


class EdckitError(Exception):
    """Base class for all toolkit-specific errors."""


class MalformedWavError(EdckitError):
    """The RIFF/WAVE container is structurally invalid."""


class UnsupportedWavError(EdckitError):
    """WAV encoding outside integer PCM 8/16/24/32 or IEEE float32."""


class ManifestError(EdckitError):
    """A dataset manifest violates the CSV contract."""


class FeatureFormatError(EdckitError):
    """A feature file violates the binary layout."""


class ShortClipError(EdckitError):
    """An audio clip is shorter than one analysis window."""
