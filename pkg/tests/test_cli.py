import numpy as np
import pytest

from blockpec.cli import main


def _sparse_plaintext(path, n_bytes, p, seed):
    rng = np.random.default_rng(seed)
    bits = (rng.random(n_bytes * 8) < p).astype(np.uint8)
    path.write_bytes(np.packbits(bits).tobytes())
    return path.read_bytes()


@pytest.mark.parametrize("mode", ["cbc", "ofb", "cfb"])
def test_aes_roundtrip(tmp_path, mode):
    key, code = tmp_path / "k.hex", tmp_path / "c.alist"
    plain = _sparse_plaintext(tmp_path / "x.bin", 16 * 40, 0.01, 1)
    assert main(["keygen", "--out", str(key), "--seed", "1"]) == 0
    assert main(["construct-code", "--m", "128", "--out", str(code)]) == 0
    assert main(["encrypt", "--mode", mode, "--key", str(key), "--in", str(tmp_path / "x.bin"),
                 "--out", str(tmp_path / "ct.bin"), "--seed", "2"]) == 0
    assert main(["compress", "--mode", mode, "--codec", str(code), "--block-bits", "128",
                 "--in", str(tmp_path / "ct.bin"), "--out", str(tmp_path / "s.pec")]) == 0
    assert (tmp_path / "s.pec").stat().st_size < (tmp_path / "ct.bin").stat().st_size
    assert main(["decode", "--key", str(key), "--p", "0.01", "--codec", str(code),
                 "--in", str(tmp_path / "s.pec"), "--out", str(tmp_path / "y.bin")]) == 0
    assert (tmp_path / "y.bin").read_bytes() == plain


def test_toy_ml_and_plain_decrypt(tmp_path):
    key, code = tmp_path / "k.hex", tmp_path / "c.alist"
    plain = _sparse_plaintext(tmp_path / "x.bin", 2 * 10, 0.02, 3)
    main(["keygen", "--family", "toy", "--m", "16", "--out", str(key), "--seed", "4"])
    assert key.read_text().startswith("toy16:")
    main(["construct-code", "--m", "16", "--rate", "7/8", "--dist", "r075", "--out", str(code)])
    main(["encrypt", "--mode", "cbc", "--key", str(key), "--in", str(tmp_path / "x.bin"),
          "--out", str(tmp_path / "ct.bin"), "--iv", "a5c3"])
    main(["decrypt", "--mode", "cbc", "--key", str(key), "--in", str(tmp_path / "ct.bin"),
          "--out", str(tmp_path / "d.bin")])
    assert (tmp_path / "d.bin").read_bytes() == plain
    main(["compress", "--mode", "cbc", "--codec", str(code), "--in", str(tmp_path / "ct.bin"),
          "--out", str(tmp_path / "s.pec")])
    assert main(["decode", "--key", str(key), "--p", "0.02", "--codec", str(code), "--ml",
                 "--in", str(tmp_path / "s.pec"), "--out", str(tmp_path / "y.bin")]) == 0
    assert (tmp_path / "y.bin").read_bytes() == plain


def test_ofb_requires_block_bits(tmp_path):
    code = tmp_path / "c.alist"
    main(["construct-code", "--m", "128", "--out", str(code)])
    (tmp_path / "ct.bin").write_bytes(bytes(48))
    with pytest.raises(SystemExit):
        main(["compress", "--mode", "ofb", "--codec", str(code), "--in", str(tmp_path / "ct.bin"),
              "--out", str(tmp_path / "s.pec")])


def test_bench_and_lab_commands(tmp_path, capsys):
    main(["bench", "fer", "--m", "128", "--p", "0.0", "--trials", "200"])
    assert "failures=0 trials=200" in capsys.readouterr().out
    main(["ecb-lab", "collision", "--n", "50", "--t", "16", "--trials", "300"])
    assert "birthday=0.01852" in capsys.readouterr().out
    main(["ecb-lab", "strat1", "--n", "20", "--trials", "50", "--csv", str(tmp_path / "r.csv")])
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "trial,queries,recovered,correct" and len(lines) == 51
