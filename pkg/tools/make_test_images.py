"""Regenerate the bundled 128x128 grayscale test images in src/cred/data/.

Sources are the CC0 / public-domain images shipped with scikit-image.
Only this script needs scikit-image; the package itself reads the PGMs.
"""

import pathlib

import numpy as np
from skimage import color, data, transform

from cred.imagecore import save_pgm

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "cred" / "data"
SIZE = 128


def square(img):
    h, w = img.shape
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    return img[top:top + s, left:left + s]


def main():
    sources = {
        "camera": data.camera(),
        "coins": data.coins(),
        "brick": data.brick(),
        "grass": data.grass(),
        "text": data.text(),
    }
    for name, img in sources.items():
        if img.ndim == 3:
            img = color.rgb2gray(img) * 255.0
        img = square(np.asarray(img, dtype=np.float64))
        small = transform.resize(img, (SIZE, SIZE), anti_aliasing=True, preserve_range=True)
        save_pgm(small, OUT / f"{name}.pgm")
        print(f"wrote {name}.pgm")


if __name__ == "__main__":
    main()
