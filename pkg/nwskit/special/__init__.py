"""
Special functions: real-argument Jacobi elliptic functions as 2-jets and the
complete elliptic integral of the first kind.
"""

from .elliptic import (
    EllipticJet, jacobi_jet, jacobi_ds, jacobi_ds_jet, elliptic_K, distance_to_sn_zero,
)
