"""Word-level Kannada / English / Hindi script identification for scanned
pages, from horizontal and vertical projection profiles."""

__version__ = "0.1.0"
