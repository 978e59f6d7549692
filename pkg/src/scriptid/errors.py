"""Exception hierarchy shared by all modules."""


class ScriptIdError(Exception):
    """Base class for every error raised by this package."""


class ImageIOError(ScriptIdError):
    """Raised for any failure while reading or writing a raster file."""


class UnsupportedFormat(ImageIOError):
    pass


class CorruptImage(ImageIOError):
    pass


class InvalidParameter(ScriptIdError, ValueError):
    pass


class InvalidImage(ScriptIdError, ValueError):
    pass


class RegionOutOfBounds(ScriptIdError, ValueError):
    pass


class EmptyWord(ScriptIdError, ValueError):
    pass


class DegenerateWord(ScriptIdError, ValueError):
    """The word is too short (fewer than two ink rows) for peak features."""


class UnachievableSpec(ScriptIdError, ValueError):
    pass


class LayoutOverflow(ScriptIdError, ValueError):
    pass


class ManifestResolutionError(ScriptIdError):
    """Some manifest entries could not be matched to segmented words.

    The partial report built from the resolvable entries is attached as
    ``report``; ``unresolved`` lists human-readable descriptions.
    """

    def __init__(self, unresolved, report=None):
        self.unresolved = list(unresolved)
        self.report = report
        super().__init__(
            f"{len(self.unresolved)} manifest reference(s) could not be resolved: "
            + "; ".join(self.unresolved[:5])
            + (" ..." if len(self.unresolved) > 5 else "")
        )
