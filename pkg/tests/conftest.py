import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np
import pytest
from PIL import Image

from warpad import DetectorConfig, EmbedderConfig, ImageTensor, WaveletSpec
from warpad.embedder import TestEmbedder


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy_embedder_cfg():
    return EmbedderConfig(backend="test", input_size=8, batch_size=4)


@pytest.fixture
def toy_cfg(toy_embedder_cfg):
    return DetectorConfig(
        alpha=0.1,
        d_rescale=16,
        d_patch=8,
        wavelet=WaveletSpec("haar", 2),
        embedder=toy_embedder_cfg,
    )


@pytest.fixture
def toy_embedder(toy_embedder_cfg):
    return TestEmbedder(toy_embedder_cfg)


def save_png(path, data):
    """data: (C, H, W) float in [0,1]."""
    arr = np.clip(np.round(np.asarray(data) * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(arr.transpose(1, 2, 0)).save(path, format="PNG")
    return str(path)


@pytest.fixture
def png_factory(tmp_path):
    counter = {"n": 0}

    def make(data, name=None):
        counter["n"] += 1
        fname = name or f"img_{counter['n']:03d}.png"
        return save_png(tmp_path / fname, data)

    return make


def smooth_image(rng, size=24):
    """Low-frequency content: a random linear gradient; scores near 1."""
    yy, xx = np.mgrid[0:size, 0:size] / size
    a, b, c = rng.random(3)
    plane = (a * xx + b * yy + c) / (a + b + c + 1e-9)
    return np.stack([plane, plane * 0.9 + 0.05, plane * 0.8 + 0.1])


def noisy_image(rng, size=24):
    """High-frequency content: white noise; perturbation shifts embeddings."""
    return rng.random((3, size, size))


@pytest.fixture
def manifest_factory(tmp_path):
    """Write a synthetic manifest: smooth 'real' images vs noisy 'fake' ones."""

    def make(n_real=4, n_fake=4, generators=("genA",), size=24, seed=7, name="synthetic"):
        rng = np.random.default_rng(seed)
        root = tmp_path / name
        root.mkdir(exist_ok=True)
        real_paths = []
        for i in range(n_real):
            p = root / f"real_{i}.png"
            save_png(p, smooth_image(rng, size))
            real_paths.append(p.name)
        fake_entries = []
        for g, gen in enumerate(generators):
            for i in range(n_fake):
                p = root / f"{gen}_{i}.png"
                save_png(p, noisy_image(rng, size))
                fake_entries.append({"path": p.name, "generator": gen})
        manifest_path = root / "manifest.json"
        manifest_path.write_text(
            json.dumps(
                {"name": name, "real": real_paths, "fake": fake_entries, "metadata": {}}
            )
        )
        return str(manifest_path)

    return make


class _EmbedHandler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def do_POST(self):
        if self.path != "/embed":
            self._send(404, {"error": "unknown route"})
            return
        if self.server.fail_with:
            self._send(self.server.fail_with, {"error": "synthetic failure"})
            return
        length = int(self.headers.get("Content-Length", 0))
        payload = json.loads(self.rfile.read(length))
        import base64

        shape = payload["shape"]
        arr = np.frombuffer(base64.b64decode(payload["data_b64"]), dtype="<f4").reshape(shape)
        vectors = self.server.embedder._embed_chunk(arr.astype(np.float64))
        out = np.ascontiguousarray(vectors, dtype="<f4")
        self._send(
            200,
            {
                "dims": int(out.shape[1]),
                "data_b64": base64.b64encode(out.tobytes()).decode("ascii"),
            },
        )

    def _send(self, status, obj):
        body = json.dumps(obj).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


@pytest.fixture
def embed_server(toy_embedder_cfg):
    """Local HTTP service implementing the embed protocol over the test backend."""
    server = ThreadingHTTPServer(("127.0.0.1", 0), _EmbedHandler)
    server.embedder = TestEmbedder(toy_embedder_cfg)
    server.fail_with = None
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server, f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    thread.join(timeout=5)


@pytest.fixture
def constant_image():
    return ImageTensor(np.full((3, 24, 24), 0.5))
