"""utils.py

Bit and serialization helpers shared by the matrix and report modules"""

from collections.abc import Iterable


def deepmap(func, obj):
    """Apply func to every leaf of a nested list, keeping the nesting.
    Strings count as leaves."""

    if isinstance(obj, str) or not isinstance(obj, Iterable):
        return func(obj)
    return [deepmap(func, x) for x in obj]


def popcount(x):
    return bin(x).count("1")


def hexstr(v):
    """Lowercase hex string used for every serialized field value"""
    return "0x{0:x}".format(int(v))
