"""matrixio.py

Reading and writing matrices in the JSON interchange format:

    {"field": {"r": 4, "poly": "0x13"}, "rows": [["0x0", "0x2"], ...]}
    {"ring": {"m": 8}, "rows": [[[2], [3], ...], 0, ...], ...]}
"""

import json

from nmdslab.gf import FieldSpec, FieldError
from nmdslab.linalg import FieldMatrix, BlockMatrix, BinaryMatrix, MatrixError
from nmdslab.utils import hexstr


class MatrixFormatError(ValueError):
    pass


def _block_out(b):
    return 0 if b.is_zero() else b.positions()


def _block_in(v, m):
    if v == 0 or v == 1:
        return v
    return BinaryMatrix.from_positions(v, m)


def matrix_to_dict(M):
    if isinstance(M, FieldMatrix):
        return {
            "field": {"r": M.field.r, "poly": hexstr(M.field.modulus)},
            "rows": [[hexstr(v) for v in row] for row in M.to_rows()],
        }
    elif isinstance(M, BlockMatrix):
        return {
            "ring": {"m": M.m},
            "rows": [[_block_out(b) for b in row] for row in M.blocks],
        }
    elif isinstance(M, BinaryMatrix):
        return {
            "field": {"r": 1, "poly": "0x3"},
            "rows": [[hexstr(v) for v in row] for row in M.to_array().tolist()],
        }

    raise TypeError("Unsupported matrix type")


def matrix_from_dict(d):
    try:
        rows = d["rows"]
        if "field" in d:
            field = FieldSpec.get(int(d["field"]["r"]), int(str(d["field"]["poly"]), 0))
            return FieldMatrix([[int(str(v), 0) for v in row] for row in rows], field)
        elif "ring" in d:
            m = int(d["ring"]["m"])
            return BlockMatrix([[_block_in(v, m) for v in row] for row in rows], m)
    except (KeyError, TypeError, ValueError, FieldError, MatrixError) as e:
        raise MatrixFormatError("Invalid matrix description: {0}".format(e))

    raise MatrixFormatError("Matrix description needs a field or a ring")


def dumps(obj):
    """Canonical JSON: sorted keys, two-space indent"""
    return json.dumps(obj, sort_keys=True, indent=2)


def load_matrix(path):
    with open(path) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as e:
            raise MatrixFormatError("Invalid JSON in {0}: {1}".format(path, e))
    return matrix_from_dict(d)


def save_matrix(M, path):
    with open(path, "w") as f:
        f.write(dumps(matrix_to_dict(M)) + "\n")
