"""stabnoise: decoding problems on random stabilizer codes.

Samplers and exact brute-force oracles for LPN, SympLPN, the classical
representation of stabilizer decoding, and worst-case syndrome decoding;
executable reductions between all of them with exact noise-parameter
bookkeeping; and a mixing-time laboratory for the t-local Clifford chain.
"""

from .gf2 import BitMat, BitVec
from .noise import BernParam, DepolParam
from .problems import (
    LpnInstance,
    LsnClassicalInstance,
    LsnQuantumInstance,
    QsdpInstance,
    SympLpnInstance,
    sample_lpn,
    sample_lsn_classical,
    sample_lsn_quantum,
    sample_qsdp,
    sample_symplpn,
)
from .stabsim import CliffordDesc, StabState
from .symplectic import IsotropicSet, PauliVec, SympMat

__all__ = [
    "BitMat",
    "BitVec",
    "BernParam",
    "CliffordDesc",
    "DepolParam",
    "IsotropicSet",
    "LpnInstance",
    "LsnClassicalInstance",
    "LsnQuantumInstance",
    "PauliVec",
    "QsdpInstance",
    "StabState",
    "SympLpnInstance",
    "SympMat",
    "sample_lpn",
    "sample_lsn_classical",
    "sample_lsn_quantum",
    "sample_qsdp",
    "sample_symplpn",
]

__version__ = "0.1.0"
