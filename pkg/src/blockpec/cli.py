"""Command line entry point: ``blockpec <command> ...``."""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import ecb_lab, pipeline
from .bench import fer_estimate, format_table, max_p_search, reproduce_tables, table_codec
from .bits import BitBlock
from .cipher import AES128, TOY, generate_key, load_key, save_key
from .ldpc.codec import BlockDiagonalCodec, MLCodec, SyndromeCodec, build_codec
from .ldpc.degree import NOMINAL_RATE
from .modes import MODES, ChainedCiphertext, decrypt, encrypt, read_plaintext, write_blocks
from .sources import binary_entropy


def _rate(text: str) -> Fraction:
    return Fraction(text).limit_denominator(1 << 20)


def _rng(args):
    return None if args.seed is None else np.random.default_rng(args.seed)


def cmd_keygen(args):
    family = AES128 if args.family == "aes128" else TOY
    key = generate_key(family, 128 if family == AES128 else args.m, _rng(args))
    save_key(key, args.out)


def cmd_encrypt(args):
    key = load_key(args.key)
    plain = read_plaintext(args.input, key.m)
    iv = BitBlock.from_hex(args.iv, key.m) if args.iv else None
    ct = encrypt(args.mode, key, plain, iv=iv, rng=_rng(args))
    Path(args.out).write_bytes(ct.to_bytes())


def cmd_decrypt(args):
    key = load_key(args.key)
    ct = ChainedCiphertext.from_bytes(Path(args.input).read_bytes(), args.mode, key.m)
    write_blocks(args.out, decrypt(key, ct))


def _load_codec(path, ml: bool = False):
    codec = SyndromeCodec.load(path)
    return MLCodec(codec.matrix, meta=codec.meta) if ml else codec


def _ofb_codec(codec, n: int, m: int):
    """An OFB stream needs a codec over n*m bits; a per-block codec is repeated n times."""
    if codec.m == n * m:
        return codec
    if codec.m == m:
        return BlockDiagonalCodec(codec, n)
    raise SystemExit(f"OFB codec covers {codec.m} bits; the stream has {n} x {m}")


def cmd_compress(args):
    codec = _load_codec(args.codec)
    if args.mode == "ofb" and not args.block_bits:
        raise SystemExit("--block-bits is required for OFB")
    m = args.block_bits or codec.m
    ct = ChainedCiphertext.from_bytes(Path(args.input).read_bytes(), args.mode, m)
    if args.mode == "ofb":
        codec = _ofb_codec(codec, ct.n, m)
    Path(args.out).write_bytes(pipeline.compress(ct, codec).to_bytes())


def cmd_decode(args):
    key = load_key(args.key)
    cs = pipeline.CompressedStream.from_bytes(Path(args.input).read_bytes())
    codec = _load_codec(args.codec, args.ml)
    if cs.mode == "ofb":
        codec = _ofb_codec(codec, cs.n, cs.m)
    res = pipeline.decode(cs, key, codec, args.p)
    if not res.ok:
        print(f"decode failed at block {res.failed_block_index}", file=sys.stderr)
        return 1
    write_blocks(args.out, res.plaintext)
    return 0


def cmd_construct_code(args):
    rate = _rate(args.rate) if args.rate else NOMINAL_RATE[args.dist]
    codec = build_codec(args.m, rate, args.dist, args.seed)
    codec.save(args.out)
    print(f"{args.out}: {codec.n_checks}x{codec.m}, girth {codec.matrix.girth()}, "
          f"digest {codec.digest.hex()[:16]}")


def _bench_codec(args):
    if args.codec:
        return _load_codec(args.codec, getattr(args, "ml", False))
    return table_codec(args.m, _rate(args.rate), args.code_seed)


def cmd_bench(args):
    if args.what == "fer":
        est = fer_estimate(_bench_codec(args), args.p, args.trials, args.seed,
                           level=args.level, workers=args.workers)
        print(f"p={args.p} failures={est.failures} trials={est.trials} "
              f"fer={est.fer:.3e} upper95={est.upper:.3e}")
    elif args.what == "maxp":
        p = max_p_search(_bench_codec(args), args.target, args.trials, args.seed,
                         workers=args.workers)
        print(f"p*={p:.3f} H_b(p*)={binary_entropy(p):.4f}")
    else:
        rows = reproduce_tables(args.trials, args.seed, long=args.long,
                                workers=args.workers, code_seed=args.code_seed)
        sys.stdout.write(format_table(rows, args.format))


def cmd_ecb_lab(args):
    if args.what == "collision":
        est = ecb_lab.collision_probability(args.n, args.t, args.trials, args.seed, args.m)
        print(f"collision_rate={est:.5f} birthday={ecb_lab.birthday_bound(args.n, args.t):.5f}")
        return
    run = ecb_lab.strategy1_experiment if args.what == "strat1" else ecb_lab.strategy2_experiment
    records = run(args.n, args.t, args.m, args.trials, args.seed)
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    writer = csv.DictWriter(out, fieldnames=["trial", "queries", "recovered", "correct"])
    writer.writeheader()
    for r in records:
        writer.writerow(asdict(r))
    if args.csv:
        out.close()
    mean = np.mean([r.queries for r in records])
    print(f"# mean_queries={mean:.3f} correct={np.mean([r.correct for r in records]):.4f}",
          file=sys.stderr if not args.csv else sys.stdout)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blockpec", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="write a hex key file")
    p.add_argument("--family", choices=["aes128", "toy"], default="aes128")
    p.add_argument("--m", type=int, default=16, help="toy cipher width")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_keygen)

    for name, func in (("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        p = sub.add_parser(name, help=f"{name} whole blocks")
        p.add_argument("--mode", choices=MODES, required=True)
        p.add_argument("--key", required=True)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--out", required=True)
        if name == "encrypt":
            p.add_argument("--iv", help="hex IV (default: random)")
            p.add_argument("--seed", type=int)
        p.set_defaults(func=func)

    p = sub.add_parser("compress", help="keyless compression of a CBC/OFB/CFB ciphertext file")
    p.add_argument("--mode", choices=["cbc", "ofb", "cfb"], required=True)
    p.add_argument("--codec", required=True, help="alist file (descriptor .json optional)")
    p.add_argument("--block-bits", type=int, help="cipher block width (required for OFB)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("decode", help="joint decompression and decryption")
    p.add_argument("--key", required=True)
    p.add_argument("--p", type=float, required=True, help="source bit probability")
    p.add_argument("--codec", required=True)
    p.add_argument("--ml", action="store_true", help="brute-force ML decoding (m <= 24)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("construct-code", help="build a PEG code and write alist + descriptor")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rate", help="checks per variable, e.g. 0.5 or 3/4 (default: from --dist)")
    p.add_argument("--dist", choices=["r05", "r075"], default="r05")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_construct_code)

    p = sub.add_parser("bench", help="frame error rates and rate tables")
    p.add_argument("what", choices=["fer", "maxp", "tables"])
    p.add_argument("--codec")
    p.add_argument("--m", type=int, default=128)
    p.add_argument("--rate", default="1/2")
    p.add_argument("--code-seed", type=int, default=0)
    p.add_argument("--p", type=float, default=0.02)
    p.add_argument("--target", type=float, default=1e-3)
    p.add_argument("--trials", type=int, default=20_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--level", choices=["codec", "pipeline"], default="codec")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--long", action="store_true", help="include the 1e-4 rows")
    p.add_argument("--format", choices=["markdown", "csv"], default="markdown")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ecb-lab", help="exhaustive ECB strategies under truncation")
    p.add_argument("what", choices=["strat1", "strat2", "collision"])
    p.add_argument("--n", type=int, default=100, help="support size")
    p.add_argument("--t", type=int, default=24, help="kept ciphertext bits")
    p.add_argument("--m", type=int, default=24, help="toy block width")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="write per-trial records here")
    p.set_defaults(func=cmd_ecb_lab)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    return args.func(args) or 0


if __name__ == "__main__":
    sys.exit(main())
