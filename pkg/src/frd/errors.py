"""Exception types raised by the library.

Every error derives from :class:`FRDError` so callers (and the CLI) can catch
data problems in one place. The class name doubles as the short diagnostic
tag printed by the command line tool.
"""

from __future__ import annotations


class FRDError(Exception):
    """Base class for all data/parameter errors."""


class EmptyInput(FRDError):
    pass


class FileError(FRDError):
    def __init__(self, path, message: str = "cannot read file"):
        self.path = str(path)
        super().__init__(f"{message}: {self.path}")


class ChannelError(FRDError):
    def __init__(self, path, mode: str):
        self.path = str(path)
        super().__init__(f"multi-channel image (mode {mode}) is not supported: {self.path}")


class KernelError(FRDError):
    pass


class InternalError(FRDError):
    pass


class SampleSizeError(FRDError):
    pass


class DimError(FRDError):
    pass


class NumericError(FRDError):
    pass


class CatalogError(FRDError):
    pass


class PairingError(FRDError):
    pass


class ParamError(FRDError):
    pass
