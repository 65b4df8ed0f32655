#!/usr/bin/env python3
# Copyright 2026 The qumem Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Converts the per-digit JSON files of the npm `mnist` package to IDX files.

Pixels in the package are stored as value/255 rounded to three decimals, so
round(v * 255) recovers the original byte for every entry.
"""

import argparse
import json
import pathlib
import random
import struct


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("digits_dir", type=pathlib.Path, help="package/src/digits")
    ap.add_argument("out_dir", type=pathlib.Path)
    ap.add_argument("--digits", type=int, nargs="+", default=[0, 3, 8])
    ap.add_argument("--seed", type=int, default=2049)
    ap.add_argument("--prefix", default="subset038")
    args = ap.parse_args()

    items = []
    for d in args.digits:
        # One flat array per digit, 784 values per image.
        flat = json.loads((args.digits_dir / f"{d}.json").read_text())["data"]
        if len(flat) % 784:
            raise SystemExit(f"digit {d}: {len(flat)} values is not a whole number of images")
        for start in range(0, len(flat), 784):
            vec = flat[start:start + 784]
            items.append((d, bytes(min(255, max(0, round(v * 255))) for v in vec)))
    random.Random(args.seed).shuffle(items)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    with open(args.out_dir / f"{args.prefix}-images-idx3-ubyte", "wb") as f:
        f.write(struct.pack(">IIII", 2051, len(items), 28, 28))
        for _, px in items:
            f.write(px)
    with open(args.out_dir / f"{args.prefix}-labels-idx1-ubyte", "wb") as f:
        f.write(struct.pack(">II", 2049, len(items)))
        f.write(bytes(d for d, _ in items))
    print(f"wrote {len(items)} images")


if __name__ == "__main__":
    main()
