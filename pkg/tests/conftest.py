from fractions import Fraction

import numpy as np
import pytest

from blockpec.cipher import AES128, TOY, CipherKey, ToyFeistel
from blockpec.ldpc.codec import MLCodec, SyndromeCodec
from blockpec.ldpc.degree import R075
from blockpec.ldpc.peg import peg_construct


def pytest_addoption(parser):
    parser.addoption("--long", action="store_true", default=False,
                     help="run the 1e-4 FER table rows (hours)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--long"):
        return
    skip = pytest.mark.skip(reason="needs --long")
    for item in items:
        if "long" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy16():
    return ToyFeistel(CipherKey(bytes.fromhex("0123456789abcdef"), TOY, 16))


@pytest.fixture
def aes_key():
    return CipherKey(bytes.fromhex("2b7e151628aed2a6abf7158809cf4f3c"), AES128, 128)


@pytest.fixture(scope="session")
def ml16():
    """m=16, 14 checks: per-block ML failure at p=0.03 is about 1e-4."""
    return MLCodec(peg_construct(16, 14, R075, seed=0))


@pytest.fixture(scope="session")
def code16():
    """m=16, 12 checks (rate 3/4)."""
    return peg_construct(16, 12, R075, seed=0)


@pytest.fixture(scope="session")
def codec128():
    from blockpec.bench import table_codec
    return table_codec(128, Fraction(1, 2))


@pytest.fixture(scope="session")
def codec1024():
    from blockpec.bench import table_codec
    return table_codec(1024, Fraction(1, 2))
