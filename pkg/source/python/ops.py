import numpy as np
from numpy import array


def central_difference_gradient(f, x :array, h=1e-5):
    """
    :param f: callable returning a scalar for an array shaped like x
    :param x: point to differentiate at (any shape)
    :return: array shaped like x, (f(x + h e_i) - f(x - h e_i)) / 2h per entry
    """
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    flat = grad.reshape(-1)
    for i in range(x.size):
        base = np.zeros(x.size)
        base[i] = h
        base = base.reshape(x.shape)
        flat[i] = (f(x + base) - f(x - base)) / (2 * h)
    return grad


def relative_error(a :array, b :array):
    """||a - b|| / max(||a||, ||b||), 0 when both vanish."""
    diff = np.linalg.norm(np.asarray(a) - np.asarray(b))
    scale = max(np.linalg.norm(a), np.linalg.norm(b))
    if scale == 0:
        return 0.0
    return float(diff / scale)


def one_hot(indices :array, width :int):
    y = np.zeros((len(indices), width))
    y[np.arange(len(indices)), indices] = 1.0
    return y
