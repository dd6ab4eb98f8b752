import os
import struct

import numpy as np

from ..exceptions import DataError

__all__ = ["write_uvt", "read_uvt", "UVT_MAGIC", "UVT_VERSION"]

# UVT tensor container: magic, u32 version, u32 rank, rank x u32 dims, u32 dtype code,
# then the row-major payload; every integer little-endian
UVT_MAGIC = b"UVTD"
UVT_VERSION = 1
_DTYPES = {0: np.dtype("<f4"), 1: np.dtype("u1")}


def _encode_dtype(array):
    if array.dtype == np.uint8 or array.dtype == np.bool_:
        return 1
    if np.issubdtype(array.dtype, np.number):
        return 0
    raise ValueError("unsupported tensor data type {}".format(array.dtype))


def write_uvt(path, array):
    r"""Writes one tensor to a UVT file.

    ``uint8`` and ``bool`` arrays are stored as ``uint8``; every other numeric array as
    little-endian ``float32``.

    Args:
        path (str): Destination; parent directories are created.
        array (array-like): Tensor of any rank.
    """
    array = np.asarray(array)
    code = _encode_dtype(array)
    payload = np.ascontiguousarray(array, dtype=_DTYPES[code])
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "wb") as fp:
        fp.write(UVT_MAGIC)
        fp.write(struct.pack("<II", UVT_VERSION, payload.ndim))
        fp.write(struct.pack("<{}I".format(payload.ndim), *payload.shape))
        fp.write(struct.pack("<I", code))
        fp.write(payload.tobytes(order="C"))


def read_uvt(path):
    r"""Reads the tensor stored in a UVT file.

    Returns:
        A ``float32`` or ``uint8`` array with the stored shape.

    Raises:
        DataError: Naming the file if the header or payload length is wrong.
    """
    with open(path, "rb") as fp:
        data = fp.read()
    if len(data) < 12 or data[:4] != UVT_MAGIC:
        raise DataError("{}: not a UVT file".format(path))
    version, rank = struct.unpack_from("<II", data, 4)
    if version != UVT_VERSION:
        raise DataError(
            "{}: unsupported UVT version {}".format(path, version)
        )
    offset = 12 + 4 * rank
    if len(data) < offset + 4:
        raise DataError("{}: truncated UVT header".format(path))
    dims = struct.unpack_from("<{}I".format(rank), data, 12)
    (code,) = struct.unpack_from("<I", data, offset)
    if code not in _DTYPES:
        raise DataError("{}: unknown UVT dtype code {}".format(path, code))
    dtype = _DTYPES[code]
    expected = int(np.prod(dims, dtype=np.int64)) * dtype.itemsize
    payload = data[offset + 4:]
    if len(payload) != expected:
        raise DataError(
            "{}: payload has {} bytes, dims {} need {}".format(
                path, len(payload), list(dims), expected
            )
        )
    array = np.frombuffer(payload, dtype=dtype).reshape(dims)
    return array.astype(dtype.newbyteorder("="))
