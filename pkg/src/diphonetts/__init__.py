"""Diphone-concatenation text-to-speech engine and voice-building tools."""

__version__ = "0.1.0"
