"""
Compensated summation.

Grid reductions run over up to ~1e6 cells; every sum that feeds a score goes
through fsum_array (correctly rounded, independent of order) and running
totals across files go through Accumulator.
"""
import math

import numpy as np


def fsum_array(values):
    """
    Correctly rounded sum of all entries of an array.

    :param values: array-like of floats
    :return: float
    """
    return math.fsum(np.asarray(values, dtype=np.float64).ravel().tolist())


def _two_sum(u, v):
    # error-free transformation: u + v == s + t exactly
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)


class Accumulator:
    """
    Running sum that carries its rounding error along, so that adding many
    partial sums in a fixed order keeps close to the exact total.
    """
    def __init__(self, value=0.0):
        self._s = float(value)
        self._t = 0.0

    def add(self, value):
        y, u = _two_sum(float(value), self._t)
        self._s, self._t = _two_sum(y, self._s)
        if self._s == 0.0:
            self._s = u
        else:
            self._t += u
        return self

    def __iadd__(self, value):
        return self.add(value)

    @property
    def total(self):
        return self._s + self._t

    def __float__(self):
        return self.total

    def __repr__(self):
        return "Accumulator({!r})".format(self.total)
