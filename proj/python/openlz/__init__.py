"""Transition probabilities and adiabatic expansion terms for slowly driven
two-level systems with energy-basis dephasing.

The heavy lifting lives in the compiled extension ``openlz._core``; this
package re-exports its public surface.
"""

from ._core import (
    coherent_lz,
    duhamel_split,
    first_order_a,
    first_order_a_hat,
    gap_energy,
    incoherent_integral,
    measured_p,
    predicted_p,
    second_order_b,
    sweep,
    tail_bound,
    verify,
)

__all__ = [
    "coherent_lz",
    "duhamel_split",
    "first_order_a",
    "first_order_a_hat",
    "gap_energy",
    "incoherent_integral",
    "measured_p",
    "predicted_p",
    "second_order_b",
    "sweep",
    "tail_bound",
    "verify",
]

__version__ = "0.1.0"
