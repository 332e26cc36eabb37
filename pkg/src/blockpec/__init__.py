"""Keyless compression of block-cipher ciphertext by syndrome (Slepian-Wolf) coding.

Chaining modes make consecutive ciphertext blocks correlated with what the
key holder can compute, so a keyless compressor can send LDPC syndromes
and the key holder decodes them with belief propagation.
"""
from .bits import BitBlock
from .cipher import AES128, TOY, CipherKey, generate_key, make_cipher
from .ldpc.bp import BACKEND
from .ldpc.codec import BlockDiagonalCodec, DecodeResult, MLCodec, SyndromeCodec, build_codec
from .ldpc.degree import R05, R075, DegreeDistribution, design_rate
from .ldpc.matrix import ParityCheckMatrix
from .ldpc.peg import peg_construct
from .modes import ChainedCiphertext, decrypt, encrypt
from .pipeline import CompressedStream, PecResult, compress, decode
from .sources import BernoulliSource, FiniteDistribution, binary_entropy, guessing_entropy

__all__ = [
    "AES128", "BACKEND", "BernoulliSource", "BitBlock", "BlockDiagonalCodec",
    "ChainedCiphertext", "CipherKey", "CompressedStream", "DecodeResult",
    "DegreeDistribution", "FiniteDistribution", "MLCodec", "ParityCheckMatrix",
    "PecResult", "R05", "R075", "SyndromeCodec", "TOY", "binary_entropy",
    "build_codec", "compress", "decode", "decrypt", "design_rate", "encrypt",
    "generate_key", "guessing_entropy", "make_cipher", "peg_construct",
]
