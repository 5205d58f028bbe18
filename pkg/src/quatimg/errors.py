"""Exception hierarchy shared by all quatimg modules.

The three branches map onto the CLI exit codes: UsageError -> 1,
DataError -> 2, NumericalError -> 3.
"""


class QuatImgError(Exception):
    pass


class UsageError(QuatImgError):
    """Invalid arguments or parameter combinations."""


class DataError(QuatImgError):
    """Malformed, inconsistent or unreadable input data."""


class NumericalError(QuatImgError):
    """A numerical procedure failed to produce a usable result."""


class ShapeError(DataError):
    """Operand dimensions are incompatible."""


class ImageFormatError(DataError):
    pass


class UnsupportedFormatError(ImageFormatError):
    pass


class MalformedHeaderError(ImageFormatError):
    pass


class TruncatedDataError(ImageFormatError):
    pass


class FileFormatError(DataError):
    """Base for model / container file problems."""


class BadMagicError(FileFormatError):
    pass


class UnsupportedVersionError(FileFormatError):
    pass


class ChecksumError(FileFormatError):
    pass


class PayloadError(FileFormatError):
    """Container payload fails to decode."""


class WrongModelError(FileFormatError):
    """Container was produced with a different pair model."""


class TrainingDivergedError(NumericalError):
    def __init__(self, epoch: int):
        super().__init__(f"training loss became non-finite at epoch {epoch}")
        self.epoch = epoch


class SvdConvergenceError(NumericalError):
    pass
