
import json
import os

import pytest

from warpad_export import (
    DEBUG_BACKBONE,
    ExportError,
    export_backbone,
    file_digest,
    info,
    load_manifest,
    manifest_path,
    supported_ids,
)

_has_onnx = True
try:
    import onnx  # noqa: F401
except ImportError:
    _has_onnx = False


class TestRegistry:
    def test_default_large_backbone_dims(self):
        assert info("dinov2_vitl14").embedding_dims == 1024

    def test_family_dims(self):
        assert info("dinov2_vits14").embedding_dims == 384
        assert info("dinov2_vitb14").embedding_dims == 768
        assert info("dinov2_vitg14").embedding_dims == 1536
        assert info("dinov2_vitl14_reg").embedding_dims == 1024

    def test_unknown_id_lists_supported(self):
        with pytest.raises(ExportError) as err:
            info("clip_vit_b32")
        message = str(err.value)
        for backbone_id in supported_ids():
            assert backbone_id in message

    def test_normalization_is_published_constants(self):
        mean, std = info("dinov2_vitl14").normalization
        assert mean == (0.485, 0.456, 0.406)
        assert std == (0.229, 0.224, 0.225)

    def test_input_size_multiple_enforced(self, tmp_path):
        with pytest.raises(ExportError):
            export_backbone(DEBUG_BACKBONE, 13, tmp_path / "x.pt")


class TestDebugExport:
    def test_manifest_fields(self, tmp_path):
        out = tmp_path / "tiny.pt"
        manifest = export_backbone(DEBUG_BACKBONE, 32, out)
        assert manifest.backbone_id == DEBUG_BACKBONE
        assert manifest.input_size == 32
        assert manifest.embedding_dims == 64
        assert manifest.format == "torchscript"
        assert out.exists()

    def test_digest_recomputable_from_file(self, tmp_path):
        out = tmp_path / "tiny.pt"
        manifest = export_backbone(DEBUG_BACKBONE, 32, out)
        assert manifest.file_digest == file_digest(out)
        # tampering changes the digest
        data = bytearray(out.read_bytes())
        data[len(data) // 2] ^= 0xFF
        out.write_bytes(bytes(data))
        assert manifest.file_digest != file_digest(out)

    def test_reexport_identical_digest(self, tmp_path):
        first = export_backbone(DEBUG_BACKBONE, 32, tmp_path / "a.pt")
        second = export_backbone(DEBUG_BACKBONE, 32, tmp_path / "b.pt")
        assert first.file_digest == second.file_digest

    def test_manifest_sidecar_roundtrip(self, tmp_path):
        out = tmp_path / "tiny.pt"
        manifest = export_backbone(DEBUG_BACKBONE, 16, out)
        assert os.path.exists(manifest_path(out))
        loaded = load_manifest(out)
        assert loaded == manifest
        raw = json.loads(open(manifest_path(out)).read())
        assert set(raw) == {
            "backbone_id", "input_size", "embedding_dims", "normalization",
            "file_digest", "format",
        }

    def test_bad_format_rejected(self, tmp_path):
        with pytest.raises(ExportError):
            export_backbone(DEBUG_BACKBONE, 16, tmp_path / "x.pt", fmt="coreml")

    @pytest.mark.skipif(not _has_onnx, reason="onnx package not installed")
    def test_onnx_export(self, tmp_path):
        out = tmp_path / "tiny.onnx"
        manifest = export_backbone(DEBUG_BACKBONE, 16, out)
        assert manifest.format == "onnx"
        assert out.exists()

    @pytest.mark.skipif(_has_onnx, reason="only meaningful without onnx")
    def test_onnx_unavailable_message(self, tmp_path):
        with pytest.raises(ExportError) as err:
            export_backbone(DEBUG_BACKBONE, 16, tmp_path / "tiny.onnx", fmt="onnx")
        assert "torchscript" in str(err.value)


@pytest.mark.skipif(
    not os.environ.get("WARPAD_EXPORT_NETWORK"),
    reason="set WARPAD_EXPORT_NETWORK=1 to exercise torch.hub downloads",
)
class TestHubExport:
    def test_dinov2_small(self, tmp_path):
        manifest = export_backbone("dinov2_vits14", 224, tmp_path / "dinov2_vits14.pt")
        assert manifest.embedding_dims == 384
