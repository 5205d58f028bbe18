import numpy as np
import pytest

from quatimg import cli, imgio
from quatimg.autoencoder import load_model, save_model


@pytest.fixture()
def mini_corpus(tmp_path):
    d = tmp_path / "corpus"
    d.mkdir()
    rng = np.random.default_rng(0)
    for k in range(6):
        base = rng.integers(40, 200, (32, 1, 3))
        img = np.clip(base + rng.integers(-20, 20, (32, 32, 3)), 0,
                      255).astype(np.uint8)
        imgio.save_image(img, d / f"im{k}.png")
    return d


@pytest.fixture()
def model_file(tmp_path, trained_model):
    p = tmp_path / "pairs.model"
    p.write_bytes(save_model(trained_model))
    return p


@pytest.fixture()
def image_file(tmp_path, small_image):
    p = tmp_path / "input.png"
    imgio.save_image(small_image, p)
    return p


def test_train_writes_artifacts(mini_corpus, tmp_path, capsys):
    cfg = tmp_path / "train.cfg"
    cfg.write_text("max_epochs = 60\n# comment\nlearning_rate = 0.05\n")
    out = tmp_path / "m.model"
    rc = cli.main(["train", str(mini_corpus), "--out", str(out),
                   "--config", str(cfg), "--seed", "1"])
    assert rc == 0
    assert out.exists()
    assert out.with_suffix(".manifest.txt").exists()
    log = out.with_suffix(".loss.csv").read_text().splitlines()
    assert log[0] == "epoch,loss"
    assert len(log) > 10
    load_model(out.read_bytes())
    assert "held-out" in capsys.readouterr().out


def test_train_bad_config_key(mini_corpus, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("momentum = 0.9\n")
    rc = cli.main(["train", str(mini_corpus), "--out",
                   str(tmp_path / "m.model"), "--config", str(cfg)])
    assert rc == 1


def test_compress_decompress_roundtrip(image_file, model_file, tmp_path,
                                       small_image, capsys):
    container = tmp_path / "img.qsvc"
    rc = cli.main(["compress", str(image_file), "--out", str(container),
                   "--mode", "full", "-n", "32", "-t", "8",
                   "--model", str(model_file), "--evaluate"])
    assert rc == 0
    assert "psnr" in capsys.readouterr().out

    out_img = tmp_path / "recon.png"
    rc = cli.main(["decompress", str(container), "--model", str(model_file),
                   "--out", str(out_img)])
    assert rc == 0
    recon = imgio.load_image(out_img)
    assert recon.shape == small_image.shape


def test_pure_mode_needs_no_model(image_file, tmp_path, capsys):
    container = tmp_path / "img.qsvc"
    rc = cli.main(["compress", str(image_file), "--out", str(container),
                   "--mode", "pure", "-n", "32", "-t", "32"])
    assert rc == 0
    rc = cli.main(["decompress", str(container),
                   "--out", str(tmp_path / "r.ppm")])
    assert rc == 0
    capsys.readouterr()


def test_rank_above_block_size_is_usage_error(image_file, tmp_path, capsys):
    rc = cli.main(["compress", str(image_file), "--out",
                   str(tmp_path / "x.qsvc"), "--mode", "pure",
                   "-n", "32", "-t", "40"])
    capsys.readouterr()
    assert rc == 1


def test_full_mode_without_model_is_usage_error(image_file, tmp_path, capsys):
    rc = cli.main(["compress", str(image_file), "--out",
                   str(tmp_path / "x.qsvc"), "--mode", "full",
                   "-n", "32", "-t", "4"])
    capsys.readouterr()
    assert rc == 1


def test_missing_image_is_data_error(tmp_path, capsys):
    rc = cli.main(["compress", str(tmp_path / "ghost.png"), "--out",
                   str(tmp_path / "x.qsvc"), "--mode", "pure",
                   "-n", "32", "-t", "4"])
    capsys.readouterr()
    assert rc == 2


def test_eval_command(image_file, tmp_path, small_image, capsys):
    noisy = np.clip(small_image.astype(int)
                    + np.random.default_rng(1).integers(-5, 6,
                                                        small_image.shape),
                    0, 255).astype(np.uint8)
    other = tmp_path / "noisy.png"
    imgio.save_image(noisy, other)
    rc = cli.main(["eval", str(image_file), str(other)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "ssim" in out


def test_sweep_writes_csv(image_file, model_file, tmp_path, capsys):
    corpus = tmp_path / "sweepcorpus"
    corpus.mkdir()
    (corpus / "one.png").write_bytes(image_file.read_bytes())
    csv_path = tmp_path / "sweep.csv"
    rc = cli.main(["sweep", "--corpus", str(corpus), "--csv", str(csv_path),
                   "--model", str(model_file), "--modes", "full,pure",
                   "--block-sizes", "32", "--t-values", "2,4"])
    capsys.readouterr()
    assert rc == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("image_id,mode,n,t,")
    # 2 modes x 2 t values, plus one __mean__ summary per cell
    data = [ln for ln in lines[1:] if ln]
    assert len(data) == 4 + 4
    assert sum("__mean__" in ln for ln in data) == 4


def test_split_corpus_command(mini_corpus, tmp_path, capsys):
    out = tmp_path / "manifest.txt"
    rc = cli.main(["split-corpus", str(mini_corpus), "--seed", "5",
                   "--out", str(out)])
    capsys.readouterr()
    assert rc == 0
    m = imgio.load_manifest(out)
    assert len(m.entries) == 6
    assert len(m.paths("train")) == 4
