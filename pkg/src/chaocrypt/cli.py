"""``chaocrypt`` command-line interface.

Exit codes: 0 success, 1 usage, 2 I/O, 3 file format, 4 domain/numeric.
Reports go to standard output as ``key=value`` lines or CSV.
"""
from __future__ import annotations

import argparse
import os
import statistics
import sys
import time

import numpy as np

from . import _backend, formats
from .cipher import DEFAULT_BLOCK_SIZE, MasterKey, decrypt, encrypt
from .errors import DomainError, FormatError, NumericError
from .metrics import analyze_image, differential_report
from .robustness import Crop, Speckle, robustness_report, to_csv

EXIT_USAGE = 1
EXIT_IO = 2
EXIT_FORMAT = 3
EXIT_DOMAIN = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _u64(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2**64), got {text}")
    return value


def _load_image(path) -> np.ndarray:
    """Read a PPM image or a CBPX envelope (ciphertext viewed as an image)."""
    with open(path, "rb") as f:
        head = f.read(4)
    if head == formats.ENVELOPE_MAGIC:
        return formats.read_envelope(path).pixels()
    return formats.read_ppm(path)


def cmd_keygen(args):
    rng = np.random.default_rng(args.seed)
    x, y, v, w = (0.01 + 0.98 * rng.random(4)).tolist()
    formats.write_key(MasterKey(x, y, v, w), args.out)


def cmd_encrypt(args):
    if args.block < 1:
        raise UsageError("--block must be a positive integer")
    key = formats.read_key(args.key)
    image = formats.read_ppm(args.input)
    formats.write_envelope(encrypt(image, key, args.block), args.out)


def cmd_decrypt(args):
    key = formats.read_key(args.key)
    env = formats.read_envelope(args.input)
    formats.write_ppm(decrypt(env, key), args.out)


def cmd_analyze(args):
    image = _load_image(args.input)
    against = formats.read_ppm(args.against) if args.against else None
    report = analyze_image(image, against)
    sys.stdout.write(report.to_text())
    if args.histogram_dir:
        for ch in report.channels:
            with open(os.path.join(args.histogram_dir, f"histogram_{ch.name}.csv"), "w") as f:
                f.write(report.histogram_csv(ch.name))


def cmd_diff(args):
    a = _load_image(args.a)
    b = _load_image(args.b)
    sys.stdout.write(differential_report(a, b).to_text())


def cmd_attack(args):
    if not args.speckle and not args.crop:
        raise UsageError("give at least one of --speckle or --crop")
    key = formats.read_key(args.key)
    image = formats.read_ppm(args.input)
    attacks = [Speckle(a, args.seed) for a in args.speckle or []]
    attacks += [Crop(p) for p in args.crop or []]
    sys.stdout.write(to_csv(robustness_report(image, key, args.block, attacks)))


def cmd_bench(args):
    if args.size < 1 or args.block < 1 or args.size % args.block:
        raise DomainError(f"block size {args.block} does not divide image size {args.size}")
    if args.iterations < 1:
        raise UsageError("--iterations must be at least 1")
    if args.backend:
        if args.backend not in _backend.available():
            raise UsageError(f"backend {args.backend!r} is not available in this build")
        _backend.use(args.backend)
    rng = np.random.default_rng(args.seed)
    image = rng.integers(0, 256, size=(args.size, args.size, 3), dtype=np.uint8)
    key = MasterKey(*(0.01 + 0.98 * rng.random(4)).tolist())

    runs = []
    for _ in range(args.iterations):
        phases = {}
        t0 = time.perf_counter()
        encrypt(image, key, args.block, timings=phases)
        phases["total"] = time.perf_counter() - t0
        runs.append(phases)

    out = [f"backend={_backend.name}", f"size={args.size}", f"block={args.block}",
           f"iterations={args.iterations}"]
    for phase in ("keystream", "permutation", "diffusion", "total"):
        samples = [r[phase] for r in runs]
        out.append(f"{phase}.mean={statistics.fmean(samples):.6f}")
        out.append(f"{phase}.min={min(samples):.6f}")
    for i, r in enumerate(runs):
        out.append(f"run.{i}.total={r['total']:.6f}")
    sys.stdout.write("\n".join(out) + "\n")


def build_parser():
    p = _Parser(prog="chaocrypt", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("keygen", help="generate a random master key")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=_u64, help="u64 seed for reproducible keys")
    s.set_defaults(func=cmd_keygen)

    s = sub.add_parser("encrypt", help="encrypt a PPM image into a CBPX envelope")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--key", required=True)
    s.add_argument("--block", type=int, default=DEFAULT_BLOCK_SIZE)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_encrypt)

    s = sub.add_parser("decrypt", help="decrypt a CBPX envelope into a PPM image")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--key", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_decrypt)

    s = sub.add_parser("analyze", help="entropy, chi-square, correlation (and PSNR)")
    s.add_argument("--in", dest="input", required=True, help="PPM image or CBPX envelope")
    s.add_argument("--against", help="reference PPM for MSE/PSNR")
    s.add_argument("--histogram-dir", help="write histogram_<channel>.csv files here")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("diff", help="NPCR/UACI between two ciphertexts")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)
    s.set_defaults(func=cmd_diff)

    s = sub.add_parser("attack", help="speckle / crop robustness table as CSV")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--key", required=True)
    s.add_argument("--block", type=int, default=DEFAULT_BLOCK_SIZE)
    s.add_argument("--speckle", type=float, nargs="+", metavar="ALPHA")
    s.add_argument("--crop", type=float, nargs="+", metavar="FRACTION")
    s.add_argument("--seed", type=_u64, default=0)
    s.set_defaults(func=cmd_attack)

    s = sub.add_parser("bench", help="time full encryption of a random image")
    s.add_argument("--size", type=int, default=512)
    s.add_argument("--block", type=int, default=DEFAULT_BLOCK_SIZE)
    s.add_argument("--iterations", type=int, default=5)
    s.add_argument("--seed", type=_u64, default=0)
    s.add_argument("--backend", choices=["compiled", "python"])
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is not None and not 0 <= args.seed < 2 ** 64:
        parser.error("--seed must be an unsigned 64-bit integer")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"chaocrypt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"chaocrypt: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FormatError as exc:
        print(f"chaocrypt: format error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (DomainError, NumericError) as exc:
        print(f"chaocrypt: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
