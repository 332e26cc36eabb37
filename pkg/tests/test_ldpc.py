import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockpec.ldpc import bp as bp_mod
from blockpec.ldpc.codec import (BlockDiagonalCodec, CodecError, MLCodec, SyndromeCodec,
                                 build_codec, ml_decode_bruteforce)
from blockpec.ldpc.degree import (R05, R075, DegreeDistribution, design_rate, largest_remainder,
                                  regular, variable_degrees)
from blockpec.ldpc.matrix import MatrixError, ParityCheckMatrix
from blockpec.ldpc.peg import ConstructionError, peg_construct, peg_from_degrees

HAMMING = np.array([[1, 0, 1, 0, 1, 0, 1],
                    [0, 1, 1, 0, 0, 1, 1],
                    [0, 0, 0, 1, 1, 1, 1]])


# --- degree distributions ------------------------------------------------

def test_design_rate_values():
    # sum lambda_i/i = 0.3168, sum rho_j/j = 0.1584 by hand
    assert sum(f / d for d, f in R05.lam) == pytest.approx(0.3168, abs=1e-4)
    assert sum(f / d for d, f in R05.rho) == pytest.approx(0.1584, abs=1e-4)
    assert design_rate(R05) == pytest.approx(0.5, abs=1e-3)
    assert design_rate(regular(3, 6)) == pytest.approx(0.5, abs=1e-12)
    # the rate-0.75 pair has design code rate 0.273, not 0.25
    assert design_rate(R075) == pytest.approx(0.2735, abs=1e-3)


def test_distribution_validation():
    with pytest.raises(ValueError):
        DegreeDistribution(((2, 0.5),), ((6, 1.0),))
    with pytest.raises(ValueError):
        DegreeDistribution(((1, 1.0),), ((6, 1.0),))


def test_largest_remainder_sums_exactly():
    for total in (1, 7, 16, 128, 1000, 1024):
        counts = largest_remainder([0.16585, 0.0792, 0.07178], total)
        assert counts.sum() == total


def test_variable_degrees_follow_lambda():
    degs = variable_degrees(R05, 1024)
    assert degs.size == 1024 and np.all(np.diff(degs) >= 0)
    edges = degs.sum()
    frac = {d: (degs == d).sum() * d / edges for d, _ in R05.lam}
    for d, lam in R05.lam:
        assert frac[d] == pytest.approx(lam, abs=0.01)


# --- PEG -----------------------------------------------------------------

def test_peg_regular_column_weight():
    H = peg_from_degrees([2] * 8, 4, seed=0)
    assert np.all(H.var_degrees() == 2)
    dense = H.to_dense()
    assert dense.sum() == 16 and dense.max() == 1


def test_peg_girth_1024():
    H = peg_construct(1024, 512, R05, seed=0)
    assert H.girth() >= 6


def test_peg_deterministic():
    a = peg_construct(256, 128, R05, seed=7)
    b = peg_construct(256, 128, R05, seed=7)
    assert a.to_alist() == b.to_alist()


def test_peg_infeasible():
    with pytest.raises(ConstructionError):
        peg_from_degrees([1, 1], 3)
    with pytest.raises(ConstructionError):
        peg_construct(16, 16, R05)


def test_peg_check_degrees_concentrated():
    H = peg_construct(1024, 512, R05, seed=0)
    cd = H.check_degrees()
    assert cd.min() >= 6 and cd.max() <= 7


def _girth_bruteforce(H):
    """Girth as the shortest member of a minimum cycle basis of the Tanner graph."""
    dense = H.to_dense()
    r, n = dense.shape
    import networkx as nx
    G = nx.Graph()
    G.add_edges_from((("v", v), ("c", c)) for c in range(r) for v in range(n) if dense[c, v])
    return min((len(c) for c in nx.minimum_cycle_basis(G)), default=0)


@pytest.mark.parametrize("m,r", [(16, 8), (24, 12), (40, 20)])
def test_girth_matches_networkx(m, r):
    H = peg_construct(m, r, R05, seed=1)
    assert H.girth() == _girth_bruteforce(H)


# --- alist ---------------------------------------------------------------

def test_alist_roundtrip(tmp_path):
    H = peg_construct(64, 32, R05, seed=3)
    H.save_alist(tmp_path / "h.alist")
    H2 = ParityCheckMatrix.load_alist(tmp_path / "h.alist")
    assert H2 == H and H2.digest == H.digest


def test_alist_unpadded_variant():
    text = "3 2\n2 2\n1 2 1\n2 2\n1\n1 2\n2\n1 2\n2 3\n"
    H = ParityCheckMatrix.from_alist(text)
    assert H.to_dense().tolist() == [[1, 1, 0], [0, 1, 1]]


def test_alist_inconsistent():
    with pytest.raises(MatrixError):
        ParityCheckMatrix.from_alist("2 1\n1 2\n1 1\n2\n1\n1\n1 0\n")


# --- syndrome encoding ---------------------------------------------------

def test_syndrome_trivial():
    H = ParityCheckMatrix.from_dense([[1, 1]])
    assert H.syndrome([1, 0]).tolist() == [1]
    H = peg_construct(32, 16, R05)
    assert not H.syndrome(np.zeros(32, np.uint8)).any()


def test_syndrome_matches_dense_oracle(rng):
    for _ in range(5):
        dense = (rng.random((16, 32)) < 0.3).astype(np.uint8)
        dense[0, :] = 1  # every column nonempty
        H = ParityCheckMatrix.from_dense(dense)
        for _ in range(100):
            y = rng.integers(0, 2, 32, dtype=np.uint8)
            assert np.array_equal(H.syndrome(y), dense.astype(int) @ y % 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1))
def test_syndrome_linear(a, b):
    H = peg_construct(64, 32, R05, seed=0)
    ya = np.unpackbits(np.frombuffer(a.to_bytes(8, "big"), np.uint8))
    yb = np.unpackbits(np.frombuffer(b.to_bytes(8, "big"), np.uint8))
    assert np.array_equal(H.syndrome(ya ^ yb), H.syndrome(ya) ^ H.syndrome(yb))


def test_encode_width_mismatch():
    codec = SyndromeCodec(peg_construct(32, 16, R05))
    with pytest.raises(CodecError):
        codec.encode(np.zeros(31, np.uint8))


# --- BP decoding ---------------------------------------------------------

def test_bp_zero_noise_returns_side_info(rng):
    codec = SyndromeCodec(peg_construct(128, 64, R05))
    z = rng.integers(0, 2, 128, dtype=np.uint8)
    res = codec.decode(codec.encode(z), z, 1e-9)
    assert res.success and res.iterations == 0 and np.array_equal(res.bits, z)


def _ml_oracle(dense, s, z):
    """Nearest word to z among all 2^n with H y = s, ties to smallest MSB-first value."""
    n = dense.shape[1]
    best = None
    for word in itertools.product((0, 1), repeat=n):
        y = np.array(word)
        if np.array_equal(dense @ y % 2, s):
            d = int((y != z).sum())
            if best is None or d < best[0]:
                best = (d, y)
    return best[1]


def test_bp_hamming_single_discrepancy():
    H = ParityCheckMatrix.from_dense(HAMMING)
    codec = SyndromeCodec(H)
    heavy = int(np.flatnonzero(HAMMING.sum(axis=0) == 3)[0])
    for value in range(128):
        y = np.array([(value >> (6 - i)) & 1 for i in range(7)], dtype=np.uint8)
        s = H.syndrome(y)
        for pos in range(7):
            z = y.copy()
            z[pos] ^= 1
            assert np.array_equal(_ml_oracle(HAMMING, s, z), y)
            res = codec.decode(s, z, 0.05)
            assert res.success and np.array_equal(H.syndrome(res.bits), s)
            if pos != heavy:
                assert np.array_equal(res.bits, y)
            else:
                # all three checks vote against the weight-2 columns in the first
                # iteration; that word already satisfies the syndrome
                assert int((res.bits ^ y).sum()) == 3


def test_bp_success_satisfies_syndrome(codec128, rng):
    for _ in range(200):
        y = rng.integers(0, 2, 128, dtype=np.uint8)
        z = y ^ (rng.random(128) < 0.04).astype(np.uint8)
        res = codec128.decode(codec128.encode(y), z, 0.04)
        if res.success:
            assert np.array_equal(codec128.encode(res.bits), codec128.encode(y))


def test_bp_failure_reports_last_decision(codec128, rng):
    y = rng.integers(0, 2, 128, dtype=np.uint8)
    z = rng.integers(0, 2, 128, dtype=np.uint8)  # uncorrelated side information
    res = codec128.decode(codec128.encode(y), z, 0.05)
    assert not res.success and res.iterations == codec128.max_iterations
    assert res.bits.shape == (128,)


def test_bp_input_validation(codec128):
    with pytest.raises(ValueError):
        codec128.decode(np.zeros(64, np.uint8), np.zeros(128, np.uint8), 0.5)
    with pytest.raises(CodecError):
        codec128.decode(np.zeros(63, np.uint8), np.zeros(128, np.uint8), 0.1)


@pytest.mark.skipif("cython" not in bp_mod.BACKENDS, reason="compiled backend not built")
def test_backends_agree(codec1024, rng):
    H = codec1024.matrix
    for p in (0.03, 0.06, 0.08):
        for _ in range(60):
            y = rng.integers(0, 2, 1024, dtype=np.uint8)
            z = y ^ (rng.random(1024) < p).astype(np.uint8)
            s, llr = H.syndrome(y), bp_mod.channel_llr(z, p)
            bc, okc, itc = bp_mod.bp_decode_arrays(H, s, llr, 100, "cython")
            bpy, okp, itp = bp_mod.bp_decode_arrays(H, s, llr, 100, "python")
            assert okc == okp
            if okc:
                assert itc == itp and np.array_equal(bc, bpy)


# --- ML decoding ---------------------------------------------------------

def test_ml_trivial_cases(code16):
    zero = np.zeros(16, np.uint8)
    assert not ml_decode_bruteforce(code16, np.zeros(12, np.uint8), zero, 0.1).any()


def test_ml_returns_coset_member_equal_to_side(code16, rng):
    for _ in range(50):
        z = rng.integers(0, 2, 16, dtype=np.uint8)
        assert np.array_equal(ml_decode_bruteforce(code16, code16.syndrome(z), z, 0.1), z)


def test_ml_matches_independent_enumeration(rng):
    H = peg_construct(10, 6, R075, seed=2)
    dense = H.to_dense().astype(int)
    for _ in range(100):
        y = rng.integers(0, 2, 10, dtype=np.uint8)
        z = y ^ (rng.random(10) < 0.2).astype(np.uint8)
        s = H.syndrome(y)
        assert np.array_equal(ml_decode_bruteforce(H, s, z, 0.2), _ml_oracle(dense, s, z))


def test_ml_size_guard():
    H = peg_construct(25, 12, R05)
    with pytest.raises(CodecError):
        ml_decode_bruteforce(H, np.zeros(12, np.uint8), np.zeros(25, np.uint8), 0.1)
    with pytest.raises(CodecError):
        MLCodec(H)


def test_bp_agrees_with_ml_m16(code16):
    bp, ml = SyndromeCodec(code16), MLCodec(code16)
    rng = np.random.default_rng(0)
    agree = 0
    for _ in range(2000):
        y = rng.integers(0, 2, 16, dtype=np.uint8)
        z = y ^ (rng.random(16) < 0.05).astype(np.uint8)
        s = code16.syndrome(y)
        a, b = bp.decode(s, z, 0.05), ml.decode(s, z, 0.05)
        agree += a.success and np.array_equal(a.bits, b.bits)
    assert agree / 2000 >= 0.95


# --- codecs --------------------------------------------------------------

def test_codec_rate_and_descriptor(tmp_path):
    codec = build_codec(128, Fraction(3, 4), "r075", seed=5)
    assert codec.n_checks == 96 and codec.rate == Fraction(3, 4)
    codec.save(tmp_path / "c.alist")
    loaded = SyndromeCodec.load(tmp_path / "c.alist")
    assert loaded.digest == codec.digest
    assert loaded.meta == {"distribution": "r075", "seed": 5}


def test_codec_rate_bounds():
    with pytest.raises(CodecError):
        SyndromeCodec(ParityCheckMatrix.from_dense(np.eye(4)))


def test_block_diagonal_codec_factorises(ml16, rng):
    bd = BlockDiagonalCodec(ml16, 3)
    assert bd.m == 48 and bd.n_checks == 42 and bd.matrix.n_vars == 48
    y = rng.integers(0, 2, 48, dtype=np.uint8)
    assert np.array_equal(bd.encode(y), bd.matrix.syndrome(y))
    z = y.copy()
    z[[0, 20]] ^= 1
    res = bd.decode(bd.encode(y), z, 0.03)
    assert res.success and np.array_equal(res.bits, y)
