import numpy as np


def random_binary(rng, shape, density=0.4):
    return (rng.random(shape) < density).astype(np.uint8)


def write_pgm(path, pixels, maxval=255, plain=False):
    pixels = np.asarray(pixels)
    h, w = pixels.shape
    if plain:
        body = "\n".join(" ".join(str(int(v)) for v in row) for row in pixels)
        path.write_bytes(f"P2\n{w} {h}\n{maxval}\n{body}\n".encode("ascii"))
    else:
        path.write_bytes(f"P5\n{w} {h}\n{maxval}\n".encode("ascii") + pixels.astype(np.uint8).tobytes())
    return path
