import numbers
from collections.abc import Sequence
from collections.abc import Mapping


def isArray(x) -> bool:
    return isinstance(x, Sequence) and not isinstance(x, (str, bytes))


def isMap(x) -> bool:
    return isinstance(x, Mapping)


def isReal(x) -> bool:
    # bool is an Integral, but never a meaningful number in an experiment file
    return isinstance(x, numbers.Real) and not isinstance(x, bool)
