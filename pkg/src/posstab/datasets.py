"""Small reference matrices with known solutions."""
import numpy as np


def destabilization_3x3():
    """Matrix with ``rho = 0.8960``, its closest unstable matrix and distance."""
    A = np.array([[0.4, 0.4, 0.1], [0.5, 0.3, 0.3], [0.1, 0.1, 0.5]])
    X = np.array([[0.4410, 0.4448, 0.1242],
                  [0.5345, 0.3377, 0.3203],
                  [0.1336, 0.1367, 0.5198]])
    return A, X, 0.1009


def positive_stabilization_3x3():
    """Matrix with ``rho = 1.0960`` whose closest stable matrix is strictly positive."""
    A = np.array([[0.6, 0.4, 0.1], [0.5, 0.5, 0.3], [0.1, 0.1, 0.7]])
    X = np.array([[0.5640, 0.3599, 0.0850],
                  [0.4716, 0.4684, 0.2881],
                  [0.0643, 0.0602, 0.6851]])
    return A, X, 0.0903


def reducible_pipeline_5x5():
    """Matrix with ``rho = 2.4031`` whose iteration passes a reducible iterate.

    Returns ``A``, the reference first reducible iterate, the reference final
    matrix, and the two reference distances.
    """
    A = np.array([[0.7, 0.2, 0.1, 0.5, 1.0],
                  [0.3, 0.6, 0.2, 0.8, 0.3],
                  [0.5, 0.7, 0.9, 1.0, 0.5],
                  [0.1, 0.1, 0.3, 0.8, 0.3],
                  [0.8, 0.2, 0.9, 0.3, 0.2]])
    X1 = np.array([[0.4349, 0.1406, 0.0652, 0.4912, 0.9345],
                   [0, 0.3751, 0.0682, 0.7668, 0.0518],
                   [0, 0.3383, 0.6881, 0.9466, 0.1009],
                   [0, 0, 0, 0.5917, 0],
                   [0.2989, 0.0878, 0.8343, 0.2834, 0.0762]])
    Xstar = np.array([[0.3796, 0.1797, 0, 0.5, 0.7343],
                      [0, 0.5791, 0.0069, 0.8, 0.0274],
                      [0.0580, 0.6719, 0.6403, 1.0, 0.1334],
                      [0, 0, 0, 0.8, 0],
                      [0.4204, 0.1759, 0.6770, 0.3, 0]])
    return A, X1, Xstar, 1.1894, 1.1037


def triangular_2x2():
    """``[[2, 2], [0, 0]]``, whose closest stable matrix is ``[[1, 2], [0, 0]]``."""
    return np.array([[2.0, 2.0], [0.0, 0.0]]), np.array([[1.0, 2.0], [0.0, 0.0]])


def non_metzler_5x5():
    """Non-Metzler unstable matrix with a reference stable Metzler approximation.

    Returns ``A``, the reference matrix, its distance squared, and the larger
    distance squared of an older approximation.
    """
    A = np.array([[0.6470, 0.1720, -0.7490, 0.7280, 0.7170],
                  [-0.3540, -0.0620, -0.9360, -0.7730, -0.7780],
                  [0.0460, 1.1990, -1.2690, 0.8370, 0.3160],
                  [-0.7930, 0.8020, 0.4980, -1.1280, 1.4070],
                  [-1.5510, 1.0530, 2.7890, -1.4250, 0.4010]])
    X_ref = np.array([[-0.0590, 0.1700, 0.0030, 0.6650, 0.6552],
                      [0, -0.1730, 0.0300, 0, 0],
                      [0, 1.1800, -1.3160, 0.0080, 0],
                      [0, 0.8010, 0.4950, -1.1780, 1.3570],
                      [0, 1.0400, 2.7560, 0, -0.1830]])
    return A, X_ref, 9.332, 9.485


def random_metzler_6x6():
    """Metzler matrix with spectral abscissa about 2.1425; reference distance squared 4.690."""
    A = np.array([[0.57, 0.49, 0.47, 0.73, 0.05, 0.02],
                  [0.14, -1.13, 0.96, 0.67, 0.32, 0.91],
                  [0.91, 0.45, -1.70, 0.98, 0.60, 0.11],
                  [0.80, 0.60, 0.04, 0.0, 0.52, 0.14],
                  [0.48, 0.54, 0.77, 0.36, -1.02, 0.46],
                  [0.43, 0.33, 0.92, 1.00, 0.76, 0.07]])
    return A, 4.690
