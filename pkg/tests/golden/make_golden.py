"""Regenerate the golden PEC1 streams: ``python tests/golden/make_golden.py``."""
from pathlib import Path

from blockpec.bits import BitBlock
from blockpec.cipher import TOY, CipherKey
from blockpec.ldpc.codec import SyndromeCodec
from blockpec.ldpc.degree import R075
from blockpec.ldpc.peg import peg_construct
from blockpec.modes import cbc_encrypt, cfb_encrypt, ofb_encrypt
from blockpec.pipeline import compress_cbc, compress_cfb, compress_ofb
from blockpec.ldpc.codec import BlockDiagonalCodec

HERE = Path(__file__).parent
KEY = CipherKey(bytes.fromhex("00112233"), TOY, 16)
IV = BitBlock(0xA5C3, 16)
PLAIN = [BitBlock(v, 16) for v in (0x0000, 0x0100, 0x8001)]


def golden_codec():
    return SyndromeCodec(peg_construct(16, 12, R075, seed=0))


def streams():
    codec = golden_codec()
    return {
        "cbc": compress_cbc(cbc_encrypt(KEY, PLAIN, iv=IV), codec),
        "cfb": compress_cfb(cfb_encrypt(KEY, PLAIN, iv=IV), codec),
        "ofb": compress_ofb(ofb_encrypt(KEY, PLAIN, iv=IV), BlockDiagonalCodec(codec, 3)),
    }


if __name__ == "__main__":
    golden_codec().matrix.save_alist(HERE / "code16.alist")
    for mode, cs in streams().items():
        (HERE / f"{mode}.pec").write_bytes(cs.to_bytes())
