import json

from warpad_export.cli import main
from warpad_export.export import manifest_path


def test_export_then_verify(tmp_path, capsys):
    out = tmp_path / "tiny.pt"
    code = main(["export", "--backbone", "debug_vit_tiny", "--size", "16", "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 0
    manifest = json.loads(captured.out)
    assert manifest["embedding_dims"] == 64
    assert out.exists() and (tmp_path / "tiny.pt.manifest.json").exists()

    code = main(["verify", "--file", str(out), "--n", "8", "--seed", "1"])
    captured = capsys.readouterr()
    assert code == 0
    report = json.loads(captured.out)
    assert report["pass"] is True


def test_unknown_backbone_exit_code(tmp_path, capsys):
    code = main(["export", "--backbone", "nonexistent", "--size", "16",
                 "--out", str(tmp_path / "x.pt")])
    assert code == 1
    assert "dinov2_vitl14" in capsys.readouterr().err


def test_truncated_file_exit_code(tmp_path, capsys):
    out = tmp_path / "tiny.pt"
    assert main(["export", "--backbone", "debug_vit_tiny", "--size", "16", "--out", str(out)]) == 0
    capsys.readouterr()
    out.write_bytes(out.read_bytes()[:100])
    code = main(["verify", "--file", str(out), "--n", "2", "--seed", "0"])
    assert code == 2
    assert "structural" in capsys.readouterr().err.lower()


def test_manifest_path_helper(tmp_path):
    assert manifest_path(tmp_path / "m.onnx").endswith("m.onnx.manifest.json")
