"""Convert a backbone into the serialized embedding graph + manifest pair.

Graph contract (shared with the consumer): input ``pixels`` [N,3,S,S] float32,
already mean/std-normalized, dynamic batch axis; output ``embedding`` [N,D]
float32. ONNX is emitted when the onnx package is available; TorchScript
(`.pt`) otherwise or on request.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass

import torch

from .backbones import info, load_backbone
from .errors import ExportError, StructuralFailure

FORMATS = ("auto", "onnx", "torchscript")
_ONNX_OPSET = 17


@dataclass(frozen=True)
class ExportManifest:
    backbone_id: str
    input_size: int
    embedding_dims: int
    normalization: tuple
    file_digest: str
    format: str

    def to_dict(self) -> dict:
        raw = asdict(self)
        raw["normalization"] = [list(self.normalization[0]), list(self.normalization[1])]
        return raw

    @classmethod
    def from_dict(cls, raw: dict) -> "ExportManifest":
        mean, std = raw["normalization"]
        return cls(
            backbone_id=raw["backbone_id"],
            input_size=int(raw["input_size"]),
            embedding_dims=int(raw["embedding_dims"]),
            normalization=(tuple(mean), tuple(std)),
            file_digest=raw["file_digest"],
            format=raw.get("format", "torchscript"),
        )


def manifest_path(out_path: str) -> str:
    return str(out_path) + ".manifest.json"


def file_digest(path) -> str:
    """Content hash of the exported graph, stable across re-exports.

    TorchScript archives embed the output file's stem as the zip root
    directory, so those are hashed entry-by-entry with the root stripped;
    flat files (ONNX protobufs) hash as raw bytes.
    """
    import zipfile

    sha = hashlib.sha256()
    if zipfile.is_zipfile(path):
        try:
            with zipfile.ZipFile(path) as archive:
                entries = []
                for name in archive.namelist():
                    stripped = name.split("/", 1)[1] if "/" in name else name
                    entries.append((stripped, archive.read(name)))
            for stripped, payload in sorted(entries):
                sha.update(stripped.encode())
                sha.update(b"\x00")
                sha.update(payload)
            return sha.hexdigest()
        except (zipfile.BadZipFile, OSError):
            sha = hashlib.sha256()  # damaged archive: hash the raw bytes
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            sha.update(chunk)
    return sha.hexdigest()


def _resolve_format(out_path: str, fmt: str) -> str:
    if fmt not in FORMATS:
        raise ExportError(f"unknown format {fmt!r}; supported: {', '.join(FORMATS)}")
    if fmt != "auto":
        return fmt
    return "onnx" if str(out_path).endswith(".onnx") else "torchscript"


def export_backbone(
    backbone_id: str, input_size: int, out_path, fmt: str = "auto"
) -> ExportManifest:
    """Write the embedding graph and its manifest; returns the manifest."""
    meta = info(backbone_id)
    resolved = _resolve_format(out_path, fmt)
    model = load_backbone(backbone_id, input_size)

    example = torch.zeros(2, 3, input_size, input_size, dtype=torch.float32)
    with torch.no_grad():
        probe = model(example)
    if probe.ndim != 2 or probe.shape != (2, meta.embedding_dims):
        raise StructuralFailure(
            f"{backbone_id} produced shape {tuple(probe.shape)}, "
            f"expected (2, {meta.embedding_dims})"
        )

    out_path = str(out_path)
    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
    if resolved == "onnx":
        _export_onnx(model, example, out_path)
    else:
        _export_torchscript(model, out_path)

    manifest = ExportManifest(
        backbone_id=backbone_id,
        input_size=input_size,
        embedding_dims=meta.embedding_dims,
        normalization=meta.normalization,
        file_digest=file_digest(out_path),
        format=resolved,
    )
    with open(manifest_path(out_path), "w") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
    return manifest


def _export_onnx(model, example, out_path):
    try:
        import onnx  # noqa: F401  (torch.onnx.export requires it at runtime)
    except ImportError:
        raise ExportError(
            "ONNX export needs the onnx package; install it or export with "
            "--format torchscript"
        ) from None
    torch.onnx.export(
        model,
        (example,),
        out_path,
        input_names=["pixels"],
        output_names=["embedding"],
        dynamic_axes={"pixels": {0: "batch"}, "embedding": {0: "batch"}},
        opset_version=_ONNX_OPSET,
        do_constant_folding=True,
        dynamo=False,
    )


def _export_torchscript(model, out_path):
    torch.jit.save(torch.jit.script(model), out_path)


def load_manifest(out_path) -> ExportManifest:
    path = manifest_path(out_path)
    try:
        with open(path) as fh:
            return ExportManifest.from_dict(json.load(fh))
    except FileNotFoundError:
        raise StructuralFailure(f"manifest not found next to the model: {path}") from None
    except (json.JSONDecodeError, KeyError) as exc:
        raise StructuralFailure(f"manifest {path} is unreadable: {exc}") from None
