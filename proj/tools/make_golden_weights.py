"""Writes the repo's golden PPPW1 denoiser and its reference output.

The forward pass here is an independent torch implementation (pixel_unshuffle,
constant noise map, conv stack, pixel_shuffle); the C++ loader must reproduce
its output. Run once; the outputs are checked in under tests/data/.
"""
import struct
import sys
from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F

ACT = {"relu": 0, "tanh": 1, "linear": 2}


def build_layers(rng, depth=8, width=48):
    chans = [9] + [width] * (depth - 1) + [8]
    layers = []
    for k in range(depth):
        cin, cout = chans[k], chans[k + 1]
        scale = np.sqrt(2.0 / (cin * 9))
        w = (rng.standard_normal((cout, cin, 3, 3)) * scale).astype(np.float32)
        b = (rng.standard_normal(cout) * 0.05).astype(np.float32)
        act = "tanh" if k == depth - 1 else "relu"
        layers.append((cin, cout, act, w, b))
    return layers


def write_pppw1(path, layers):
    with open(path, "wb") as f:
        f.write(b"PPPW1")
        f.write(struct.pack("<I", len(layers)))
        for cin, cout, act, w, b in layers:
            f.write(struct.pack("<IIIB", cin, cout, 3, ACT[act]))
            f.write(w.astype("<f4").tobytes())
            f.write(b.astype("<f4").tobytes())


def forward(layers, z, sigma):
    # z: (Nd, Nt, 2) channels-last -> NCHW
    x = torch.from_numpy(z).permute(2, 0, 1).unsqueeze(0).double()
    x = F.pixel_unshuffle(x, 2)
    noise = torch.full((1, 1, x.shape[2], x.shape[3]), sigma, dtype=torch.float64)
    x = torch.cat([x, noise], dim=1)
    for _, _, act, w, b in layers:
        x = F.conv2d(x, torch.from_numpy(w).double(), torch.from_numpy(b).double(), padding=1)
        if act == "relu":
            x = torch.relu(x)
        elif act == "tanh":
            x = torch.tanh(x)
    x = F.pixel_shuffle(x, 2)
    return x.squeeze(0).permute(1, 2, 0).numpy()


def main(out_dir):
    out_dir = Path(out_dir)
    rng = np.random.default_rng(20240601)
    layers = build_layers(rng)
    write_pppw1(out_dir / "golden_denoiser.pppw1", layers)
    nd, nt, sigma = 32, 32, 0.1
    z = rng.uniform(-1.0, 1.0, size=(nd, nt, 2))
    out = forward(layers, z, sigma)
    with open(out_dir / "golden_denoiser_io.txt", "w") as f:
        f.write(f"{nd} {nt} {sigma!r}\n")
        f.write(" ".join(repr(float(v)) for v in z.reshape(-1)) + "\n")
        f.write(" ".join(repr(float(v)) for v in out.reshape(-1)) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
