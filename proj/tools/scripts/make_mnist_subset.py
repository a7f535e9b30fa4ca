#!/usr/bin/env python3
"""Convert the 5000-image MNIST sample bundled with mlxtend into gzipped IDX files.

The mlxtend wheel ships ``mnist_5k.csv.gz`` (500 images per digit, 784 pixel
columns followed by the label). This script writes the standard IDX pair
(``images-idx3-ubyte.gz`` / ``labels-idx1-ubyte.gz``) so the C++ loader can
consume it exactly like the official distribution.

    pip download mlxtend --no-deps -d /tmp/mlx
    python3 tools/scripts/make_mnist_subset.py /tmp/mlx/mlxtend-*.whl data/mnist5k
"""
import argparse
import gzip
import io
import pathlib
import struct
import zipfile

import numpy as np


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("wheel", type=pathlib.Path)
    parser.add_argument("out_dir", type=pathlib.Path)
    args = parser.parse_args()

    with zipfile.ZipFile(args.wheel) as whl:
        raw = gzip.decompress(whl.read("mlxtend/data/data/mnist_5k.csv.gz"))
    table = np.loadtxt(io.BytesIO(raw), delimiter=",").astype(np.uint8)
    images, labels = table[:, :-1], table[:, -1]
    count = images.shape[0]

    args.out_dir.mkdir(parents=True, exist_ok=True)
    # mtime=0 keeps the archives byte-reproducible.
    with open(args.out_dir / "images-idx3-ubyte.gz", "wb") as fh:
        with gzip.GzipFile(fileobj=fh, mode="wb", mtime=0) as gz:
            gz.write(struct.pack(">IIII", 0x803, count, 28, 28))
            gz.write(images.tobytes())
    with open(args.out_dir / "labels-idx1-ubyte.gz", "wb") as fh:
        with gzip.GzipFile(fileobj=fh, mode="wb", mtime=0) as gz:
            gz.write(struct.pack(">II", 0x801, count))
            gz.write(labels.tobytes())
    print(f"wrote {count} images to {args.out_dir}")


if __name__ == "__main__":
    main()
