__version__ = "v0.1.0"

name = "torchuv"

from torchuv import (
    atlas,
    cli,
    codec,
    io,
    logging,
    losses,
    mesh,
    metrics,
    skeleton,
)
