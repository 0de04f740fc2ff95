"""Regenerate the PGM test fixtures under crates/qcbm/tests/fixtures.

Sources:
  * MNIST digits: the 5000-sample subset bundled with mlxtend (mnist_5k.csv.gz)
  * natural scenes: scikit-image's bundled sample images

Usage: python3 scripts/make_fixtures.py /path/to/mlxtend-*.whl
"""
import gzip
import io
import os
import sys
import zipfile

import numpy as np
from skimage import color, data, transform

OUT = os.path.join(os.path.dirname(__file__), "..", "crates", "qcbm", "tests", "fixtures")


def write_pgm(path, img):
    img = np.asarray(img, dtype=np.uint8)
    h, w = img.shape
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (w, h))
        f.write(img.tobytes())


def gray(img):
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3])
    return img.astype(float) / (img.max() if img.max() > 1 else 1.0)


def resize(img, shape):
    out = transform.resize(img, shape, anti_aliasing=True)
    return np.clip(np.round(out * 255), 0, 255)


def mnist(whl):
    with zipfile.ZipFile(whl) as z:
        raw = z.read("mlxtend/data/data/mnist_5k.csv.gz")
    rows = np.loadtxt(io.BytesIO(gzip.decompress(raw)), delimiter=",")
    pixels, labels = rows[:, :-1], rows[:, -1].astype(int)
    for digit in (0, 3, 7):
        idx = int(np.flatnonzero(labels == digit)[0])
        write_pgm(os.path.join(OUT, f"mnist_{digit}.pgm"), pixels[idx].reshape(28, 28))


def main():
    os.makedirs(OUT, exist_ok=True)
    if len(sys.argv) > 1:
        mnist(sys.argv[1])
    camera = gray(data.camera())
    write_pgm(os.path.join(OUT, "camera_64x64.pgm"), resize(camera, (64, 64)))
    write_pgm(os.path.join(OUT, "coffee_256x512.pgm"), resize(gray(data.coffee()), (256, 512)))
    write_pgm(os.path.join(OUT, "astronaut_64x128.pgm"), resize(gray(data.astronaut()), (64, 128)))
    ramp = np.array([[16, 32, 48, 64], [80, 96, 112, 128], [144, 160, 176, 192], [208, 224, 240, 255]])
    write_pgm(os.path.join(OUT, "ramp_4x4.pgm"), ramp)


if __name__ == "__main__":
    main()
