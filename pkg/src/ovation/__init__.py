"""Applause prediction over public-speech transcripts."""

__version__ = "0.1.0"
